"""Translation-invariant Hamiltonians ``H = sum_n sum_a c_a P^a(n)``.

A model is a list of terms ``(c_a, P^a)``; the coupling ``c_a`` is a real
linear combination of named parameters (``Delta``, ``h``, ...).  The overall
``-sum`` that most chains are written with is folded into the couplings, so
``H_XXZ`` has couplings ``-1, -1, -Delta``.

Each term is stored at the anchor where its image naturally lands
(``Z[n-1] Y[n] Y[n+1] Z[n+2]`` is ``+ZYYZ@-1``).  Since ``n`` is summed over,
equality of models ignores anchors; ``same_anchors`` is the strict variant.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .chain import NonLocalImageError, Transform
from .pauli import PauliParseError, PauliString, pauli

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib


class NonLocalTerm(ValueError):
    """A term whose image under a transform is a non-local string."""

    def __init__(self, term: "Term", transform: str, detail: str = ""):
        self.term = term
        self.transform = transform
        super().__init__(f"term {term.op} does not stay local under {transform}{': ' + detail if detail else ''}")


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# couplings

_NUM = r"[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?(?:/[0-9]+)?"
_COUPLING_RE = re.compile(rf"^\s*([+-]?)\s*({_NUM})?\s*\*?\s*([A-Za-z_][A-Za-z0-9_\-]*)?\s*$")


def _num(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class Coupling:
    """Real linear combination of symbols; ``""`` is the constant part."""

    parts: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, value: "Coupling | str | float | int | Fraction | Mapping") -> "Coupling":
        if isinstance(value, Coupling):
            return value
        if isinstance(value, Mapping):
            return cls._normal(value.items())
        if isinstance(value, str):
            return cls.parse(value)
        return cls._normal([("", _num(value))])

    @classmethod
    def parse(cls, text: str) -> "Coupling":
        total: dict[str, Fraction] = {}
        pieces = re.findall(r"[+-]?[^+-]+", text.replace(" ", "").replace("e-", "e~").replace("e+", "e^"))
        if not pieces or "".join(pieces) != text.replace(" ", "").replace("e-", "e~").replace("e+", "e^"):
            raise ModelError(f"cannot parse coupling {text!r}")
        for piece in pieces:
            piece = piece.replace("e~", "e-").replace("e^", "e+")
            m = _COUPLING_RE.match(piece)
            if not m or (m.group(2) is None and m.group(3) is None):
                raise ModelError(f"cannot parse coupling {text!r}")
            sign, num, sym = m.groups()
            value = _num(num) if num else Fraction(1)
            if sign == "-":
                value = -value
            total[sym or ""] = total.get(sym or "", Fraction(0)) + value
        return cls._normal(total.items())

    @classmethod
    def _normal(cls, items: Iterable[tuple[str, Fraction]]) -> "Coupling":
        acc: dict[str, Fraction] = {}
        for k, v in items:
            acc[k] = acc.get(k, Fraction(0)) + _num(v)
        return cls(tuple(sorted((k, v) for k, v in acc.items() if v != 0)))

    @property
    def is_zero(self) -> bool:
        return not self.parts

    @property
    def symbols(self) -> set[str]:
        return {k for k, _ in self.parts if k}

    def __add__(self, other: "Coupling") -> "Coupling":
        return Coupling._normal(list(self.parts) + list(Coupling.of(other).parts))

    def __mul__(self, factor) -> "Coupling":
        f = _num(factor)
        return Coupling._normal((k, v * f) for k, v in self.parts)

    __rmul__ = __mul__

    def __neg__(self) -> "Coupling":
        return self * -1

    def evaluate(self, params: Mapping[str, float] | None = None) -> float:
        params = params or {}
        out = 0.0
        for k, v in self.parts:
            if not k:
                out += float(v)
            elif k in params:
                out += float(v) * params[k]
            else:
                raise ModelError(f"no value given for coupling parameter {k!r}")
        return out

    def __str__(self) -> str:
        if not self.parts:
            return "0"
        out = []
        for k, v in self.parts:
            mag = abs(v)
            if k and mag == 1:
                body = k
            elif k:
                body = f"{_fmt(mag)}*{k}"
            else:
                body = _fmt(mag)
            out.append(("-" if v < 0 else "+") + body)
        text = "".join(out)
        return text[1:] if text.startswith("+") else text

    def to_json(self):
        if len(self.parts) == 1 and self.parts[0][0] == "":
            v = self.parts[0][1]
            return int(v) if v.denominator == 1 else float(v)
        return str(self)


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else str(float(v))


# ---------------------------------------------------------------------------
# terms and models


@dataclass(frozen=True)
class Term:
    """``coupling * op(n)`` summed over ``n``; ``sublattice=(r, p)`` restricts to
    ``n = r (mod p)``."""

    coupling: Coupling
    op: PauliString
    sublattice: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "coupling", Coupling.of(self.coupling))
        op = self.op if isinstance(self.op, PauliString) else PauliString.parse(self.op)
        if op.phase % 4:
            # fold a Hermitian sign into the coupling
            if not op.is_hermitian:
                raise ModelError(f"term {op} is not Hermitian")
            object.__setattr__(self, "coupling", -self.coupling)
            op = op.unsigned()
        object.__setattr__(self, "op", op)

    def key(self) -> tuple:
        return (str(self.op), self.sublattice or (0, 1))

    def __str__(self) -> str:
        sub = f" [n={self.sublattice[0]} mod {self.sublattice[1]}]" if self.sublattice else ""
        c = str(self.coupling)
        if len(self.coupling.parts) > 1:
            c = f"({c})"
        elif not c.startswith("-"):
            c = "+" + c
        return f"{c} {site_text(self.op)}{sub}"

    def to_json(self) -> dict:
        out = {"J": self.coupling.to_json(), "P": str(self.op)}
        if self.sublattice:
            out["sublattice"] = list(self.sublattice)
        return out


def site_text(p: PauliString) -> str:
    """``Z[n-1] Y[n] Y[n+1] Z[n+2]`` style text for a term anchored at ``n``."""
    if p.is_identity:
        return "I"
    parts = []
    for site, ch in sorted(p.sites().items()):
        idx = "n" if site == 0 else f"n{site:+d}"
        parts.append(f"{ch}[{idx}]")
    return " ".join(parts)


@dataclass
class TIHamiltonian:
    terms: list[Term] = field(default_factory=list)
    name: str = "H"

    def __post_init__(self):
        self.terms = canonical_terms(self.terms)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], name: str = "H") -> "TIHamiltonian":
        return cls([Term(Coupling.of(c), p if isinstance(p, PauliString) else PauliString.parse(p)) for c, p in pairs], name)

    @property
    def symbols(self) -> set[str]:
        out: set[str] = set()
        for t in self.terms:
            out |= t.coupling.symbols
        return out

    @property
    def max_width(self) -> int:
        return max((t.op.width for t in self.terms), default=0)

    def key(self) -> tuple:
        """Order- and anchor-free identity of the translation-invariant sum."""
        return tuple(sorted((str(t.op.translate(-t.op.lo)), t.sublattice or (0, 1), t.coupling.parts) for t in self.terms))

    def __eq__(self, other) -> bool:
        return isinstance(other, TIHamiltonian) and self.key() == other.key()

    def same_anchors(self, other: "TIHamiltonian") -> bool:
        """Equality that also compares where each term is anchored."""
        def norm(h):
            return sorted((t.key(), t.coupling.parts) for t in h.terms)
        return norm(self) == norm(other)

    def substitute(self, **params: float) -> "TIHamiltonian":
        out = []
        for t in self.terms:
            parts = []
            for k, v in t.coupling.parts:
                if k in params:
                    parts.append(("", v * _num(params[k])))
                else:
                    parts.append((k, v))
            out.append(Term(Coupling._normal(parts), t.op, t.sublattice))
        return TIHamiltonian(out, self.name)

    def to_json(self) -> dict:
        return {"name": self.name, "terms": [t.to_json() for t in self.terms]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def __str__(self) -> str:
        lines = [f"{self.name} = sum_n ("]
        lines += [f"    {t}" for t in self.terms]
        lines.append(")")
        return "\n".join(lines)


def canonical_terms(terms: Iterable[Term]) -> list[Term]:
    """Merge duplicates (same operator and sublattice, any anchor) and drop zeros.

    Translates of one operator are the same translation-invariant term; the
    anchor of the first occurrence is kept.
    """
    merged: dict[tuple, Term] = {}
    for t in terms:
        k = (str(t.op.translate(-t.op.lo)), t.sublattice)
        if k in merged:
            prev = merged[k]
            merged[k] = Term(prev.coupling + t.coupling, prev.op, prev.sublattice)
        else:
            merged[k] = t
    return [t for t in merged.values() if not t.coupling.is_zero]


# ---------------------------------------------------------------------------
# transforming


def transform(H: TIHamiltonian, T: Transform, name: str | None = None) -> TIHamiltonian:
    """Image of ``H`` under the bulk transform ``T``.

    A term whose image is a non-local string raises :class:`NonLocalTerm`.
    Oscillating signs split the term over sublattices.
    """
    out = []
    for term in H.terms:
        try:
            img = T.image(term.op)
        except NonLocalImageError as exc:
            raise NonLocalTerm(term, T.name, str(exc)) from None
        if not img.is_local:
            raise NonLocalTerm(term, T.name, f"image is a {img.tag} string")
        rule = img.sign_rule
        op = img.op.unsigned()
        if rule.is_constant:
            out.append(Term(term.coupling * rule(0), op, term.sublattice))
        else:
            for r in range(rule.period):
                out.append(Term(term.coupling * rule(r), op, (r, rule.period)))
    return TIHamiltonian(out, name or f"{T.name}({H.name})")


def free_fermion_term_map(term: PauliString | str, T: Transform | None = None) -> PauliString:
    """Image of one generalised-cluster term; defaults to the U4 staircase."""
    from .catalog import transform as named

    p = term if isinstance(term, PauliString) else PauliString.parse(term)
    t = T if T is not None else named("U4")
    return t.local_image(p)


def order_parameter_image(seed: PauliString | str, T: Transform | None = None) -> PauliString:
    """Image of a local operator under ``T`` (default: U4 after U2)."""
    from .catalog import transform as named

    p = seed if isinstance(seed, PauliString) else PauliString.parse(seed)
    t = T if T is not None else named("U4*U2")
    return t.local_image(p)


# ---------------------------------------------------------------------------
# graphs, free fermions, symmetries


def term_instances(H: TIHamiltonian, first: int, last: int) -> list[tuple[tuple[int, int], PauliString]]:
    """``((term index, n), P^a(n))`` for every translate with anchor ``n`` in the window."""
    out = []
    for a, t in enumerate(H.terms):
        for n in range(first, last + 1):
            if t.sublattice and n % t.sublattice[1] != t.sublattice[0]:
                continue
            out.append(((a, n), t.op.translate(n)))
    return out


def frustration_graph(H: TIHamiltonian, first: int, last: int):
    """Anticommutation graph of all term translates anchored in ``first..last``."""
    import networkx as nx

    g = nx.Graph()
    inst = term_instances(H, first, last)
    for label, op in inst:
        g.add_node(label, op=str(op))
    for i, (la, pa) in enumerate(inst):
        for lb, pb in inst[i + 1 :]:
            if not pa.commutes(pb):
                g.add_edge(la, lb)
    return g


def graphs_match(H: TIHamiltonian, H2: TIHamiltonian, first: int, last: int) -> bool:
    """Whether the term correspondence ``(a, n) -> (a, n)`` is a graph isomorphism."""
    g1 = frustration_graph(H, first, last)
    g2 = frustration_graph(H2, first, last)
    if set(g1.nodes) != set(g2.nodes):
        return False
    e1 = {frozenset(e) for e in g1.edges}
    e2 = {frozenset(e) for e in g2.edges}
    return e1 == e2


@dataclass
class NotFree:
    term: Term
    reason: str

    def __bool__(self) -> bool:
        return False


def jordan_wigner_recognize(H: TIHamiltonian) -> dict[int, Coupling] | NotFree:
    """Hopping amplitudes ``t_a`` of a generalised cluster model.

    Terms must be ``Z``, ``X Z..Z X`` or ``Y Z..Z Y``; with the model written
    as ``1/2 sum (t_0 Z - t_a X Z..Z X - t_-a Y Z..Z Y)`` the couplings give
    ``t_0 = 2c`` and ``t_a = -2c``.
    """
    out: dict[int, Coupling] = {}
    for t in H.terms:
        letters = t.op.letters
        if letters == "Z":
            alpha, scale = 0, 2
        elif len(letters) >= 2 and set(letters[1:-1]) <= {"Z"} and letters[0] == letters[-1] and letters[0] in "XY":
            alpha = (len(letters) - 1) * (1 if letters[0] == "X" else -1)
            scale = -2
        else:
            return NotFree(t, f"{letters} is not of the form Z, XZ..ZX or YZ..ZY")
        if t.sublattice:
            return NotFree(t, "term is not translation invariant")
        out[alpha] = out.get(alpha, Coupling()) + t.coupling * scale
    return dict(sorted(out.items()))


def symmetry_string(pattern: str, L: int, first: int = 0) -> PauliString:
    """``prod_n pattern[n mod len]`` over sites ``first..first+L-1``."""
    sites = {first + j: pattern[(first + j) % len(pattern)] for j in range(L)}
    return PauliString.from_sites({s: c for s, c in sites.items() if c != "I"})


def symmetry_commutes(H: TIHamiltonian, pattern: str, L: int) -> bool:
    """Whether every term fully inside ``0..L-1`` commutes with the symmetry string."""
    if L < 2 * H.max_width:
        raise ModelError(f"chain length {L} is shorter than twice the widest term")
    sym = symmetry_string(pattern, L)
    for _, op in term_instances(H, -H.max_width - 1, L):
        if op.is_identity or op.lo < 0 or op.hi > L - 1:
            continue
        if not op.commutes(sym):
            return False
    return True


# ---------------------------------------------------------------------------
# built-in models


def _H(name: str, *pairs: tuple) -> TIHamiltonian:
    return TIHamiltonian.from_pairs(pairs, name)


def xxz() -> TIHamiltonian:
    return _H("H_XXZ", (-1, "+XX@0"), (-1, "+YY@0"), ("-Delta", "+ZZ@0"))


def xxz_field() -> TIHamiltonian:
    return _H("H_XXZ-h", (-1, "+XX@0"), (-1, "+YY@0"), ("-Delta", "+ZZ@0"), ("-h", "+Z@0"))


def xyz() -> TIHamiltonian:
    return _H("H_XYZ", ("-J1", "+YY@0"), ("-J2", "+XX@0"), ("-J3", "+ZZ@0"))


def ising() -> TIHamiltonian:
    return _H("H_Ising", ("1/2*h", "+Z@0"), ("-1/2", "+XX@0"))


def h0() -> TIHamiltonian:
    return _H(
        "H0",
        (-1, "+ZYXYYXYZ@-3"),
        (-1, "+ZYYIIYYZ@-3"),
        ("-Delta", "+ZYYZ@-1"),
    )


def h1() -> TIHamiltonian:
    return _H("H1", (-1, "+ZXXZ@-1"), (-1, "+ZYYZ@-1"), ("-Delta", "+ZZ@0"))


def h2() -> TIHamiltonian:
    return _H("H2", (-1, "+ZIXXIZ@-2"), (-1, "+ZIYYIZ@-2"), ("-Delta", "+ZZ@0"))


def h3() -> TIHamiltonian:
    return _H("H3", (-1, "+ZZXXZZ@-2"), (-1, "+ZZYYZZ@-2"), ("-Delta", "+ZZ@0"))


def h4() -> TIHamiltonian:
    return _H("H4", (-1, "+ZXIIXZ@-2"), (-1, "+ZYYYYZ@-2"), ("-Delta", "+ZYYZ@-1"))


def hp() -> TIHamiltonian:
    """Cluster-type image of the XXZ chain in a field."""
    return _H("H~'", ("-Delta", "+ZXXZ@-1"), (-1, "+ZYYZ@-1"), (-1, "+ZZ@0"), ("-h", "+ZYZ@-1"))


def hpp() -> TIHamiltonian:
    """Kramers-Wannier image of the XXZ chain in a field."""
    return _H("H''", (-1, "+Z@0"), ("-Delta", "+XIX@0"), (1, "+XZX@-1"), ("-h", "+XX@0"))


def hppp() -> TIHamiltonian:
    return _H("H'''", (-1, "+Z@0"), (1, "+XIX@0"), ("-Delta", "+XZX@-1"))


def hfree(range_: int = 3) -> TIHamiltonian:
    """Generalised cluster model with hoppings ``t_-r .. t_r``."""
    pairs = [("1/2*t0", "+Z@0")]
    for a in range(1, range_ + 1):
        pairs.append((f"-1/2*t{a}", "+X" + "Z" * (a - 1) + "X@0"))
        pairs.append((f"-1/2*tm{a}", "+Y" + "Z" * (a - 1) + "Y@0"))
    return _H("H_free", *pairs)


MODELS = {
    "xxz": xxz,
    "xxz-h": xxz_field,
    "xyz": xyz,
    "ising": ising,
    "h0": h0,
    "h1": h1,
    "h2": h2,
    "h3": h3,
    "h4": h4,
    "hp": hp,
    "hpp": hpp,
    "hppp": hppp,
    "hfree": hfree,
}


def model(name: str) -> TIHamiltonian:
    if name not in MODELS:
        raise KeyError(name)
    return MODELS[name]()


# ---------------------------------------------------------------------------
# files


def _terms_from_data(data, source: str) -> TIHamiltonian:
    if not isinstance(data, dict) or "terms" not in data:
        raise ModelError(f"{source}: expected a table with a 'terms' list")
    terms = []
    for i, entry in enumerate(data["terms"]):
        try:
            J, P = entry["J"], entry["P"]
        except (KeyError, TypeError):
            raise ModelError(f"{source}: term {i} needs keys 'J' and 'P'") from None
        try:
            op = PauliString.parse(P)
        except PauliParseError as exc:
            raise ModelError(f"{source}: term {i}: {exc}") from None
        sub = entry.get("sublattice")
        terms.append(Term(Coupling.of(J), op, tuple(sub) if sub else None))
    return TIHamiltonian(terms, data.get("name", Path(source).stem))


def loads(text: str, fmt: str = "json", source: str = "<string>") -> TIHamiltonian:
    """Parse a model file; errors carry the line and column."""
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    elif fmt == "toml":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ModelError(f"{source}: {exc}") from None
    else:
        raise ModelError(f"unknown model format {fmt!r}")
    return _terms_from_data(data, source)


def load(path: str | Path) -> TIHamiltonian:
    path = Path(path)
    fmt = "toml" if path.suffix == ".toml" else "json"
    return loads(path.read_text(), fmt, str(path))
