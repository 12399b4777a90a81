"""Phased Pauli strings on a one-dimensional integer lattice.

A string is stored as a window start ``lo`` plus two bitmasks ``x`` and ``z``
(bit ``j`` refers to site ``lo + j``) and a global phase exponent ``phase``
meaning ``i**phase``.  Per site, the bit pair ``(x, z)`` stands for the
Hermitian letter ``i**(x*z) X**x Z**z``, so ``(1, 1)`` is ``Y`` itself and a
string with ``phase == 0`` is exactly the tensor product of its letters.

Text format: ``[+|-|+i|-i]LETTERS@lo``, for example ``-ZYYZ@-1``.  The scalar
identity serialises as ``+I@0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

LETTERS = "IXZY"  # index = x + 2*z
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "-": 2, "-i": 3, "i": 1}
_TEXT_RE = re.compile(r"^\s*([+-]?i?)([IXYZ]+)@(-?\d+)\s*$")


class PauliParseError(ValueError):
    pass


def _trailing_zeros(v: int) -> int:
    return (v & -v).bit_length() - 1


@dataclass(frozen=True)
class PauliString:
    lo: int = 0
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        x, z, lo = self.x, self.z, self.lo
        support = x | z
        if support == 0:
            lo = 0
        else:
            t = _trailing_zeros(support)
            if t:
                x >>= t
                z >>= t
                lo += t
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -----------------------------------------------------------

    @classmethod
    def identity(cls, phase: int = 0) -> "PauliString":
        return cls(0, 0, 0, phase)

    @classmethod
    def from_letters(cls, letters: str, lo: int = 0, phase: int = 0) -> "PauliString":
        x = z = 0
        for j, ch in enumerate(letters):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise PauliParseError(f"unknown Pauli letter {ch!r}") from None
            x |= bx << j
            z |= bz << j
        return cls(lo, x, z, phase)

    @classmethod
    def from_sites(cls, sites: Mapping[int, str], phase: int = 0) -> "PauliString":
        if not sites:
            return cls.identity(phase)
        lo = min(sites)
        letters = ["I"] * (max(sites) - lo + 1)
        for site, ch in sites.items():
            letters[site - lo] = ch
        return cls.from_letters("".join(letters), lo, phase)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        m = _TEXT_RE.match(text)
        if not m:
            raise PauliParseError(f"cannot parse Pauli string {text!r}")
        prefix, letters, lo = m.groups()
        return cls.from_letters(letters, int(lo), _PREFIX_PHASE[prefix])

    # inspection -------------------------------------------------------------

    @property
    def is_identity(self) -> bool:
        return (self.x | self.z) == 0

    @property
    def width(self) -> int:
        return (self.x | self.z).bit_length()

    @property
    def hi(self) -> int:
        """Last non-identity site (``lo - 1`` for the scalar identity)."""
        return self.lo + self.width - 1

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 - self.phase

    @property
    def letters(self) -> str:
        return "".join(self.letter(self.lo + j) for j in range(self.width))

    def letter(self, site: int) -> str:
        j = site - self.lo
        if j < 0:
            return "I"
        return LETTERS[((self.x >> j) & 1) | (((self.z >> j) & 1) << 1)]

    def sites(self) -> dict[int, str]:
        return {self.lo + j: ch for j, ch in enumerate(self.letters) if ch != "I"}

    def unsigned(self) -> "PauliString":
        return PauliString(self.lo, self.x, self.z, 0)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.lo, self.x, self.z, phase)

    def __str__(self) -> str:
        if self.is_identity:
            return f"{_PHASE_PREFIX[self.phase]}I@0"
        return f"{_PHASE_PREFIX[self.phase]}{self.letters}@{self.lo}"

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def sort_key(self) -> str:
        return str(self)

    # algebra ----------------------------------------------------------------

    def _aligned(self, other: "PauliString") -> tuple[int, int, int, int, int]:
        if self.is_identity:
            lo = other.lo
        elif other.is_identity:
            lo = self.lo
        else:
            lo = min(self.lo, other.lo)
        a = self.lo - lo if self.x | self.z else 0
        b = other.lo - lo if other.x | other.z else 0
        return lo, self.x << a, self.z << a, other.x << b, other.z << b

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.lo, self.x, self.z, self.phase + 2)

    def commutes(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def translate(self, j: int) -> "PauliString":
        return translate(self, j)

    def restrict(self, first: int, last: int) -> "PauliString":
        """Letters on sites ``first..last`` only, with phase 0."""
        if last < first:
            return PauliString()
        mask = (1 << (last - first + 1)) - 1
        shift = first - self.lo
        if shift >= 0:
            x, z = (self.x >> shift) & mask, (self.z >> shift) & mask
        else:
            x, z = (self.x << -shift) & mask, (self.z << -shift) & mask
        return PauliString(first, x, z, 0)

    def remove(self, first: int, last: int) -> "PauliString":
        """This string with sites ``first..last`` set to identity; phase kept."""
        if last < first:
            return self
        shift = first - self.lo
        mask = (1 << (last - first + 1)) - 1
        mask = mask << shift if shift >= 0 else mask >> -shift
        return PauliString(self.lo, self.x & ~mask, self.z & ~mask, self.phase)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a * b`` including the phase."""
    lo, x1, z1, x2, z2 = a._aligned(b)
    x3, z3 = x1 ^ x2, z1 ^ z2
    phase = (
        a.phase
        + b.phase
        + (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        + 2 * (z1 & x2).bit_count()
        - (x3 & z3).bit_count()
    )
    return PauliString(lo, x3, z3, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    _, x1, z1, x2, z2 = a._aligned(b)
    return ((x1 & z2) ^ (z1 & x2)).bit_count() % 2 == 0


def translate(p: PauliString, j: int) -> PauliString:
    if p.is_identity:
        return p
    return PauliString(p.lo + j, p.x, p.z, p.phase)


def product(strings: Iterable[PauliString]) -> PauliString:
    out = PauliString()
    for s in strings:
        out = out * s
    return out


def pauli(letters: str, lo: int = 0, phase: int = 0) -> PauliString:
    """Shorthand: ``pauli("ZYZ", -1)`` is Z[-1] Y[0] Z[1]."""
    return PauliString.from_letters(letters, lo, phase)


def parse(text: str) -> PauliString:
    return PauliString.parse(text)


def letter_product(a: str, b: str) -> tuple[int, str]:
    """Single-site product ``a*b`` as ``(phase exponent, letter)``."""
    p = pauli(a) * pauli(b)
    return p.phase, p.letter(0)


def all_strings(first: int, last: int, include_identity: bool = False) -> list[PauliString]:
    """Every unsigned Pauli string supported on ``first..last``."""
    n = last - first + 1
    out = []
    for x in range(1 << n):
        for z in range(1 << n):
            if x | z or include_identity:
                out.append(PauliString(first, x, z, 0))
    return out
