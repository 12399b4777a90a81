"""Named tableaux and transforms used throughout the package.

Two-site tableaux are written with site 1 as the left site ``n`` and site 2
as ``n+1``.  Table-style names (``U1`` .. ``U4``) are the basic Cliffords of
the locality-preserving staircases that carry the XXZ chain to ``H1`` ..
``H4``.
"""

from __future__ import annotations

from .chain import Composite, OnSite, Staircase, Transform
from .clifford import CliffordTableau


def _t(**images: str) -> CliffordTableau:
    return CliffordTableau.from_sites(images).validate()


TABLEAUX: dict[str, CliffordTableau] = {
    "identity": CliffordTableau.identity(2),
    "swap": _t(X1="+X@2", Z1="+Z@2", X2="+X@1", Z2="+Z@1"),
    # Kramers-Wannier staircase
    "KW": _t(X1="+X@1", X2="+Z@2", Z1="+ZZ@1", Z2="+XX@1"),
    # the same followed by an X<->Z swap on the left site
    "KW2": _t(X1="+Z@1", X2="+ZX@1", Z1="+XZ@1", Z2="+Z@2"),
    "cluster": _t(X1="+XZ@1", X2="+ZX@1", Z1="+Z@1", Z2="+Z@2"),
    # worked conjugation example: X1X2 -> -Y1Y2
    "example": _t(X1="+XX@1", X2="+ZZ@1", Z1="+Z@1", Z2="+X@2"),
    # carries H_XXZ - h sum Z to the cluster-type model with field Z Y Z
    "Ufield": _t(X1="+XZ@1", X2="+Z@2", Z1="+Z@1", Z2="+ZY@1"),
    "U1": _t(X1="+XZ@1", X2="+ZY@1", Z1="+Z@1", Z2="+Z@2"),
    "U2": _t(X1="+YZZ@1", X2="+ZY@1", X3="+ZIY@1", Z3="+Z@3"),
    "U3": _t(X1="+XZZ@1", X2="+ZXZ@1", X3="+ZZX@1", Z3="+Z@3"),
    "U4": _t(X1="+XXX@1", X2="+ZYX@1", X3="+ZXY@1", Z2="+X@2", Z3="+X@3"),
    "NL2": _t(X1="-ZX@1", X2="+XZ@1", Z1="+ZY@1", Z2="+YZ@1"),
    "NL3": _t(X1="+XZ@1", X2="+ZX@1", Z1="+XY@1", Z2="+YX@1"),
    "NL4": _t(X1="-YX@1", X2="+XY@1", Z1="+YZ@1", Z2="+ZY@1"),
    # commuting two-site Clifford with X -> Y X Y, Z -> Y Z Y
    "Ustar": _t(X1="+XY@1", X2="+YX@1", Z1="+ZY@1", Z2="+YZ@1"),
    # one-site maps
    "I1": CliffordTableau.identity(1),
    "H": _t(X1="+Z@1", Z1="+X@1"),
    "S": _t(X1="+Y@1", Z1="+Z@1"),
    "SX": _t(X1="+X@1", Z1="-Y@1"),
}

# site-2 images shared by each string type when the signs of the site-1
# images are varied
NL_SITE2 = {
    "NL2": ("+XZ@1", "+YZ@1"),
    "NL3": ("+ZX@1", "+YX@1"),
    "NL4": ("+XY@1", "+ZY@1"),
}
NL_SITE1 = {"NL2": ("ZX", "ZY"), "NL3": ("XZ", "XY"), "NL4": ("YX", "YZ")}


def nl_variant(kind: str, s_x: int, s_z: int) -> CliffordTableau:
    """String-type example with site-1 image signs ``(s_x, s_z)``."""
    px, pz = NL_SITE1[kind]
    x2, z2 = NL_SITE2[kind]
    sx = "+" if s_x > 0 else "-"
    sz = "+" if s_z > 0 else "-"
    return _t(X1=f"{sx}{px}@1", Z1=f"{sz}{pz}@1", X2=x2, Z2=z2)


def transform(name: str) -> Transform:
    """Named transform.

    ``"A*B"`` composes with ``B`` acting first and ``"inv(A)"`` (or
    ``"inverse(A)"``) is the inverse
    of a locality-preserving transform.
    """
    name = name.strip()
    if "*" in name:
        parts = _split_top(name)
        if len(parts) > 1:
            out = transform(parts[-1])
            for p in reversed(parts[:-1]):
                out = Composite(transform(p), out)
            return out
    for prefix in ("inv(", "inverse("):
        if name.startswith(prefix) and name.endswith(")"):
            from .classifier import inverse_transform

            return inverse_transform(transform(name[len(prefix) : -1]))
    if name not in TABLEAUX:
        raise KeyError(name)
    t = TABLEAUX[name]
    if t.k == 1:
        return OnSite(t, name)
    return Staircase(t, name)


def _split_top(spec: str) -> list[str]:
    """Split on ``*`` outside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    return parts
