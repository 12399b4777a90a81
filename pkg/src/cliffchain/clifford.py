"""Clifford tableaux on ``k`` sites.

A tableau lists the images of ``X_i`` and ``Z_i`` (sites ``1..k``) under
conjugation ``P -> U P U^dagger``.  Global phase of ``U`` is quotiented away,
so a valid tableau is exactly one element of the Clifford group ``C_k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .pauli import PauliString, all_strings, pauli


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """First failed symplectic condition of a tableau."""

    kind: str  # "non-hermitian", "out-of-window", "commutation"
    i: int
    j: int = 0
    labels: tuple[str, str] = ("", "")

    def __str__(self) -> str:
        if self.kind == "commutation":
            a, b = self.labels
            return f"commutation fails for {a}{self.i} / {b}{self.j}"
        return f"{self.kind} image for site {self.i} ({self.labels[0]})"


def _as_pauli(p) -> PauliString:
    return p if isinstance(p, PauliString) else PauliString.parse(p)


@dataclass(frozen=True)
class CliffordTableau:
    """Images ``imgX[i-1]``, ``imgZ[i-1]`` of ``X_i``, ``Z_i`` on sites ``1..k``."""

    imgX: tuple[PauliString, ...]
    imgZ: tuple[PauliString, ...]

    def __post_init__(self):
        object.__setattr__(self, "imgX", tuple(_as_pauli(p) for p in self.imgX))
        object.__setattr__(self, "imgZ", tuple(_as_pauli(p) for p in self.imgZ))
        if len(self.imgX) != len(self.imgZ) or not self.imgX:
            raise TableauError("imgX and imgZ must be non-empty and of equal length")

    @property
    def k(self) -> int:
        return len(self.imgX)

    @classmethod
    def identity(cls, k: int) -> "CliffordTableau":
        return cls(
            tuple(pauli("X", i) for i in range(1, k + 1)),
            tuple(pauli("Z", i) for i in range(1, k + 1)),
        )

    @classmethod
    def from_sites(cls, images: dict[str, str]) -> "CliffordTableau":
        """Build from a mapping like ``{"X1": "+XZ@1", "Z1": "+Z@1", ...}``.

        Generators that are not listed map to themselves.
        """
        k = max(int(key[1:]) for key in images)
        xs = [images.get(f"X{i}", f"+X@{i}") for i in range(1, k + 1)]
        zs = [images.get(f"Z{i}", f"+Z@{i}") for i in range(1, k + 1)]
        return cls(tuple(xs), tuple(zs))

    # validation -------------------------------------------------------------

    def violations(self) -> Violation | None:
        gens = [("X", i + 1, p) for i, p in enumerate(self.imgX)]
        gens += [("Z", i + 1, p) for i, p in enumerate(self.imgZ)]
        for lab, i, p in gens:
            if not p.is_hermitian:
                return Violation("non-hermitian", i, labels=(lab, ""))
            if p.is_identity or p.lo < 1 or p.hi > self.k:
                return Violation("out-of-window", i, labels=(lab, ""))
        order = [(lab, i, p) for i in range(1, self.k + 1) for lab, j, p in gens if j == i]
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                la, ia, pa = order[a]
                lb, ib, pb = order[b]
                should_commute = not (ia == ib and la != lb)
                if pa.commutes(pb) != should_commute:
                    return Violation("commutation", ia, ib, (la, lb))
        return None

    def validate(self) -> "CliffordTableau":
        v = self.violations()
        if v is not None:
            raise TableauError(str(v))
        return self

    @property
    def is_valid(self) -> bool:
        return self.violations() is None

    # conjugation ------------------------------------------------------------

    @cached_property
    def table(self) -> dict[tuple[int, int], PauliString]:
        """Image of every phase-0 string on sites ``1..k``, keyed by ``(x, z)``."""
        out = {}
        for x in range(1 << self.k):
            for z in range(1 << self.k):
                img = PauliString()
                phase = 0
                for j in range(self.k):
                    bx, bz = (x >> j) & 1, (z >> j) & 1
                    if bx:
                        img = img * self.imgX[j]
                    if bz:
                        img = img * self.imgZ[j]
                    phase += bx & bz  # Y = i X Z
                out[(x, z)] = img.with_phase(img.phase + phase)
        return out

    def conjugate(self, p: PauliString) -> PauliString:
        """``U p U^dagger`` for ``p`` supported on sites ``1..k``."""
        if p.is_identity:
            return p
        if p.lo < 1 or p.hi > self.k:
            raise TableauError(f"{p} is outside the window 1..{self.k}")
        shift = p.lo - 1
        img = self.table[(p.x << shift, p.z << shift)]
        return img.with_phase(img.phase + p.phase)

    # group structure --------------------------------------------------------

    def compose(self, inner: "CliffordTableau") -> "CliffordTableau":
        return compose(self, inner)

    def inverse(self) -> "CliffordTableau":
        return inverse(self)

    def to_json(self) -> dict:
        return {"k": self.k, "imgX": [str(p) for p in self.imgX], "imgZ": [str(p) for p in self.imgZ]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "CliffordTableau":
        try:
            k, xs, zs = data["k"], data["imgX"], data["imgZ"]
        except (KeyError, TypeError) as exc:
            raise TableauError(f"tableau JSON needs keys k, imgX, imgZ ({exc})") from None
        if len(xs) != k or len(zs) != k:
            raise TableauError(f"expected {k} images for imgX and imgZ")
        return cls(tuple(xs), tuple(zs))

    @classmethod
    def loads(cls, text: str) -> "CliffordTableau":
        return cls.from_json(json.loads(text))

    def key(self) -> tuple[str, ...]:
        """Ordering key: images in the order X1, Z1, X2, Z2, ..."""
        return tuple(str(p) for pair in zip(self.imgX, self.imgZ) for p in pair)

    def __str__(self) -> str:
        parts = [f"X{i+1}->{self.imgX[i]}, Z{i+1}->{self.imgZ[i]}" for i in range(self.k)]
        return "; ".join(parts)


def compose(outer: CliffordTableau, inner: CliffordTableau) -> CliffordTableau:
    """Tableau of "apply ``inner``, then ``outer``"."""
    if outer.k != inner.k:
        raise TableauError(f"cannot compose k={outer.k} with k={inner.k}")
    return CliffordTableau(
        tuple(outer.conjugate(p) for p in inner.imgX),
        tuple(outer.conjugate(p) for p in inner.imgZ),
    )


def inverse(t: CliffordTableau) -> CliffordTableau:
    """Inverse tableau, found by preimage lookup over all ``4**k`` strings."""
    pre = {}
    for (x, z), img in t.table.items():
        pre[(img.lo, img.x, img.z)] = (PauliString(1, x, z), img.phase)
    xs, zs = [], []
    for target_list, letter in ((xs, "X"), (zs, "Z")):
        for i in range(1, t.k + 1):
            g = pauli(letter, i)
            p, phase = pre[(g.lo, g.x, g.z)]
            target_list.append(p.with_phase(-phase))
    return CliffordTableau(tuple(xs), tuple(zs))


def conjugate(t: CliffordTableau, p: PauliString) -> PauliString:
    return t.conjugate(p)


def validate(t: CliffordTableau) -> Violation | None:
    """``None`` when ``t`` is a valid tableau, otherwise the first violation."""
    return t.violations()


def _signed(strings: Sequence[PauliString]) -> list[PauliString]:
    out = [p.with_phase(s) for p in strings for s in (0, 2)]
    return sorted(out, key=str)


def enumerate_tableaux(k: int) -> Iterator[CliffordTableau]:
    """Every element of ``C_k`` for ``k`` in {1, 2}, in lexicographic order.

    Order is over ``(imgX1, imgZ1, imgX2, imgZ2)`` compared as text.
    """
    if k not in (1, 2):
        raise TableauError("enumeration is supported for k = 1 or 2 only")
    candidates = _signed(all_strings(1, k))

    def extend(chosen: list[PauliString]) -> Iterator[list[PauliString]]:
        if len(chosen) == 2 * k:
            yield chosen
            return
        idx = len(chosen)
        for c in candidates:
            ok = True
            for j, prev in enumerate(chosen):
                # anticommute only with the partner on the same site
                want = not (j // 2 == idx // 2)
                if prev.commutes(c) != want:
                    ok = False
                    break
            # commuting with an anticommuting pair already forces independence
            if ok:
                yield from extend(chosen + [c])

    for imgs in extend([]):
        yield CliffordTableau(tuple(imgs[0::2]), tuple(imgs[1::2]))


def group_order(k: int) -> int:
    """``|C_k| = 2**(k*k + 2k) * prod_{j=1..k} (4**j - 1)``."""
    out = 2 ** (k * k + 2 * k)
    for j in range(1, k + 1):
        out *= 4**j - 1
    return out


def single_site_cliffords() -> list[CliffordTableau]:
    return list(enumerate_tableaux(1))


def embed(t: CliffordTableau, k: int, at: int = 1) -> CliffordTableau:
    """Place ``t`` on sites ``at..at+t.k-1`` of a ``k``-site tableau."""
    xs = [pauli("X", i) for i in range(1, k + 1)]
    zs = [pauli("Z", i) for i in range(1, k + 1)]
    for i in range(t.k):
        xs[at - 1 + i] = t.imgX[i].translate(at - 1)
        zs[at - 1 + i] = t.imgZ[i].translate(at - 1)
    return CliffordTableau(tuple(xs), tuple(zs))


def letter_map(t: CliffordTableau) -> dict[str, PauliString]:
    """Images of X, Y, Z for a one-site tableau (all on site 1)."""
    if t.k != 1:
        raise TableauError("letter_map needs a one-site tableau")
    return {ch: t.conjugate(pauli(ch, 1)) for ch in "XYZ"}


def apply_onsite(basis: CliffordTableau, p: PauliString) -> PauliString:
    """Apply a one-site Clifford on every site of ``p``."""
    out = PauliString.identity(p.phase)
    images = letter_map(basis)
    for site, ch in p.sites().items():
        out = out * images[ch].translate(site - 1)
    return out
