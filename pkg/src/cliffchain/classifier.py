"""Classification of translation-invariant Clifford maps.

Two independent routes classify the two-site staircases: a sweep of the
actual images (:func:`classify`) and a case analysis on the site-1 images of
the basic Clifford (:func:`classify_by_cases`).  The census runs both over
all of ``C_2``.  :func:`enumerate_5site` brute-forces image pairs on five
sites from commutation constraints alone; :func:`realize_staircase` then
finds a staircase for each survivor.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable

from .catalog import TABLEAUX
from .chain import Composite, NonLocalImageError, OnSite, Staircase, Transform, apply_factor, tail_tag
from .clifford import (
    CliffordTableau,
    apply_onsite,
    compose,
    embed,
    enumerate_tableaux,
    letter_map,
    single_site_cliffords,
)
from .pauli import PauliString, all_strings, pauli

CLASSES_C2 = ("L1", "L2", "L3", "NL1", "NL2", "NL3", "NL4")
FAMILIES = ("L1", "L2", "L3", "L4", "L5", "L6")
WINDOW = (-2, 2)


class RealizationError(RuntimeError):
    pass


class UnsupportedTransform(ValueError):
    pass


@dataclass
class TIClass:
    tag: str
    params: dict = field(default_factory=dict)
    images: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"class": self.tag, "params": self.params, "images": self.images}


def _letter_product(a: str, b: str) -> str:
    return (pauli(a) * pauli(b)).letter(0) if a != "I" or b != "I" else "I"


# ---------------------------------------------------------------------------
# two-site classification


def classify(U: CliffordTableau) -> TIClass:
    """Class of the staircase of a two-site tableau, read off its images."""
    if U.k != 2:
        raise UnsupportedTransform("classify expects a two-site tableau")
    S = Staircase(U)
    imgs = {c: S.image(pauli(c)) for c in "XYZ"}
    shown = {c: str(img) for c, img in imgs.items()}
    if all(img.is_local for img in imgs.values()):
        ops = {c: img.op for c, img in imgs.items()}
        if all(op.weight == 1 for op in ops.values()):
            sites = {op.lo for op in ops.values()}
            params = {"P": ops["X"].letters, "Q": ops["Z"].letters,
                      "sX": ops["X"].sign, "sZ": ops["Z"].sign}
            if sites == {0}:
                return TIClass("L1", params, shown)
            if sites == {-1}:
                return TIClass("L2", dict(params, shift=-1), shown)
        x, z = ops["X"], ops["Z"]
        if "L3" in family_of(x, z):
            s = next(op.letter(0) for op in ops.values() if op.weight == 1)
            params = {"P": x.letter(0), "Q": z.letter(0), "S": s, "sX": x.sign, "sZ": z.sign}
            return TIClass("L3", params, shown)
        return TIClass("L?", {}, shown)
    tags = {img.tag for img in imgs.values() if not img.is_local}
    if len(tags) != 1:
        return TIClass("NL?", {"tags": sorted(tags)}, shown)
    tag = tags.pop()
    params: dict = {}
    for c in "XZ":
        img = imgs[c]
        if img.is_local:
            continue
        params[f"S_{c}"] = img.string_letter
        params[f"T_{c}"] = "".join(img.frontier)
        params[f"sign_{c}"] = str(img.sign_rule())
    return TIClass(tag, params, shown)


def _split_site1(p: PauliString) -> tuple[str, str]:
    return p.letter(1), p.letter(2)


def _site2_letters(img_x1: PauliString, img_z1: PauliString) -> list[str]:
    """Site-2 letters of the images of ``X_2``, ``Y_2``, ``Z_2``.

    Those images are exactly the non-trivial two-site strings commuting with
    both site-1 images, so they follow from the site-1 images alone.
    """
    out = []
    for p in all_strings(1, 2):
        if p.commutes(img_x1) and p.commutes(img_z1):
            out.append(p.letter(2))
    return out


def _tail_from(beta: str, L: dict, R: dict) -> tuple[str, ...]:
    """Letters left behind as a frontier letter ``beta`` is carried rightwards."""
    seen: list[str] = []
    while beta not in seen:
        seen.append(beta)
        beta = R[beta]
        if beta == "I":
            return ()
    start = seen.index(beta)
    return tuple(L[b] for b in seen[start:])


def classify_by_cases(U: CliffordTableau) -> str:
    """Class from the left/right letters of the site-1 images alone.

    ``L^a`` and ``R^a`` are the letters of the image of ``a`` on sites 1 and 2.
    The route never sweeps a chain, so it is an independent check on
    :func:`classify`.
    """
    lx, rx = _split_site1(U.imgX[0])
    lz, rz = _split_site1(U.imgZ[0])
    ly, ry = _letter_product(lx, lz), _letter_product(rx, rz)
    L = {"X": lx, "Y": ly, "Z": lz}
    R = {"X": rx, "Y": ry, "Z": rz}
    if rx == "I" and rz == "I":
        return "L1"
    if rx != rz and rx != "I" and rz != "I":
        if lx == "I" and lz == "I":
            return "L2"
        # R permutes the letters; a frontier letter cycles and leaves a
        # periodic tail behind.  Seeds are the site-2 letters of the images
        # of the site-2 Paulis.
        tags = {tail_tag(_tail_from(b, L, R)) for b in _site2_letters(U.imgX[0], U.imgZ[0]) if b != "I"}
        return tags.pop() if len(tags) == 1 else "NL?"
    # one of R^X, R^Y, R^Z is the identity, the other two agree
    gamma = next(a for a in "XYZ" if R[a] == "I")
    r = next(R[a] for a in "XYZ" if a != gamma)
    return "L3" if r == gamma else "NL1"


@dataclass
class Census:
    counts: dict[str, int]
    representatives: dict[str, list[CliffordTableau]]
    disagreements: list[tuple[CliffordTableau, str, str]]
    total: int

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "representatives": {
                k: [t.to_json() for t in v] for k, v in sorted(self.representatives.items())
            },
            "disagreements": len(self.disagreements),
        }


def _classify_chunk(tableaux: list[CliffordTableau]) -> list[tuple[TIClass, str]]:
    return [(classify(t), classify_by_cases(t)) for t in tableaux]


def census_c2(n_reps: int = 3, records: list | None = None, threads: int = 1) -> Census:
    """Classify every element of ``C_2`` by both routes.

    ``threads > 1`` spreads the work over processes; results are merged in
    enumeration order, so the output does not depend on the thread count.
    """
    tableaux = list(enumerate_tableaux(2))
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        size = -(-len(tableaux) // (4 * threads))
        chunks = [tableaux[i : i + size] for i in range(0, len(tableaux), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [r for part in pool.map(_classify_chunk, chunks) for r in part]
    else:
        results = _classify_chunk(tableaux)
    counts: Counter = Counter()
    reps: dict[str, list] = {}
    bad = []
    for t, (cls, alt) in zip(tableaux, results):
        if cls.tag != alt:
            bad.append((t, cls.tag, alt))
        counts[cls.tag] += 1
        reps.setdefault(cls.tag, [])
        if len(reps[cls.tag]) < n_reps:
            reps[cls.tag].append(t)
        if records is not None:
            records.append({"tableau": t.to_json(), **cls.to_json()})
    return Census(dict(counts), reps, bad, len(tableaux))


def census_lines(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


# ---------------------------------------------------------------------------
# five-site enumeration


@dataclass(frozen=True)
class TIImagePair:
    imgX: PauliString
    imgZ: PauliString
    family: str = ""
    shift: int = 0

    @property
    def imgY(self) -> PauliString:
        # Y = i X Z
        return (self.imgX * self.imgZ).with_phase((self.imgX * self.imgZ).phase + 1)

    def key(self) -> tuple[str, str]:
        return (str(self.imgX), str(self.imgZ))

    def __str__(self) -> str:
        s = f"X->{self.imgX}, Z->{self.imgZ} [{self.family}]"
        return s + (f" shift {self.shift}" if self.shift else "")


def _pattern(p: PauliString, lo: int = WINDOW[0], hi: int = WINDOW[1]) -> str:
    return "".join(p.letter(s) for s in range(lo, hi + 1))


def _commutes_with_translates(a: PauliString, b: PauliString, span: int) -> bool:
    return all(a.commutes(b.translate(m)) for m in range(-span, span + 1) if m != 0)


def _center2(p: PauliString) -> int:
    """Twice the reflection centre of the support."""
    return p.lo + p.hi


def _is_symmetric(p: PauliString) -> bool:
    letters = p.letters
    return letters == letters[::-1]


def family_of(x: PauliString, z: PauliString) -> list[str]:
    """Families whose letter patterns match the unsigned X, Y, Z images."""
    y = x * z
    pats = sorted(_pattern(p) for p in (x, y, z))
    found = []
    singles = [p for p in pats if sum(ch != "I" for ch in p) == 1]
    if all(p[2] != "I" and sum(ch != "I" for ch in p) == 1 for p in pats):
        found.append("L1")

    def pair_check(shape: str) -> bool:
        # shape describes the two non-single patterns around a single A at 0
        if len(singles) != 1 or singles[0][2] == "I":
            return False
        a = singles[0][2]
        rest = [p for p in pats if p != singles[0]]
        if len(rest) != 2:
            return False
        cs = []
        for p in rest:
            for pos, ch in enumerate(shape):
                if ch == "A" and p[pos] != a:
                    return False
                if ch == "." and p[pos] != "I":
                    return False
            cs.append(p[2])
        c1, c2 = cs
        return c1 != c2 and a not in (c1, c2) and "I" not in (c1, c2)

    if pair_check(".ACA."):
        found.append("L3")
    if pair_check("AACAA"):
        found.append("L4")
    if pair_check("A.C.A"):
        found.append("L5")
    # L6: {A B A B A, A C C C A, . A B A .} with C ~ A B
    if not singles:
        three = [p for p in pats if p[0] == "I" and p[4] == "I"]
        five = [p for p in pats if p[0] != "I"]
        if len(three) == 1 and len(five) == 2:
            a, b = three[0][1], three[0][2]
            if three[0] == f"I{a}{b}{a}I" and a != b and "I" not in (a, b):
                c = _letter_product(a, b)
                if sorted(five) == sorted([f"{a}{b}{a}{b}{a}", f"{a}{c}{c}{c}{a}"]):
                    found.append("L6")
    return found


@lru_cache(maxsize=None)
def _unsigned_survivors() -> tuple[tuple[PauliString, PauliString], ...]:
    lo, hi = WINDOW
    span = hi - lo
    singles = [p for p in all_strings(lo, hi) if _commutes_with_translates(p, p, span)]
    out = []
    for x in singles:
        for z in singles:
            if x.commutes(z):
                continue
            if _commutes_with_translates(x, z, span):
                out.append((x, z))
    return tuple(out)


def enumerate_5site(include_shifted: bool = False) -> list[TIImagePair]:
    """Signed image pairs on ``[-2, 2]`` that pass every commutation constraint.

    Survivors are normalised to reflection centre 0.  Single-site pairs at
    site -1 (the left shift) are appended with ``shift=-1`` and family L2.
    With ``include_shifted`` every other translate inside the window is
    returned as well, tagged with its shift.
    """
    out = []
    for x, z in _unsigned_survivors():
        c2x, c2z = _center2(x), _center2(z)
        if c2x != c2z or c2x % 2:
            center = None
        else:
            center = c2x // 2
        fams = family_of(x.translate(-center), z.translate(-center)) if center is not None else []
        fam = fams[0] if len(fams) == 1 else ("?" if not fams else "+".join(fams))
        if center == 0:
            pass
        elif center == -1 and fam == "L1":
            fam = "L2"
        elif not include_shifted and center is not None:
            continue
        for sx, sz in iproduct((0, 2), repeat=2):
            out.append(TIImagePair(x.with_phase(sx), z.with_phase(sz), fam, center or 0))
    out.sort(key=lambda p: (p.shift != 0, p.key()))
    return out


def survivor_findings(pairs: Iterable[TIImagePair]) -> list[TIImagePair]:
    """Survivors that are not symmetric or match no single family."""
    bad = []
    for p in pairs:
        if p.family not in FAMILIES:
            bad.append(p)
        elif not (_is_symmetric(p.imgX) and _is_symmetric(p.imgZ)):
            bad.append(p)
    return bad


# ---------------------------------------------------------------------------
# staircase realisation


TEMPLATES = {
    "L1": "identity",
    "L2": "swap",
    "L3": "U1",
    "L4": "U2",
    "L5": "U3",
    "L6": "U4",
}


@dataclass(frozen=True)
class Realization:
    basis: CliffordTableau  # on-site change applied first
    U: CliffordTableau  # basic Clifford of the staircase
    template: str
    post: CliffordTableau  # on-site change folded into U's site-1 images

    def transform(self) -> Staircase:
        return Staircase(self.U, f"{self.template}'", pre=self.basis)


def fold_post(post: CliffordTableau, T: CliffordTableau) -> CliffordTableau:
    """Basic Clifford ``T`` followed by ``post`` on its first site."""
    return compose(embed(post, T.k, 1), T)


@lru_cache(maxsize=None)
def _realization_index() -> dict[tuple[str, str], tuple[str, int, int]]:
    c1 = single_site_cliffords()
    index: dict[tuple[str, str], tuple[str, int, int]] = {}
    for fam, name in TEMPLATES.items():
        S = Staircase(TABLEAUX[name])
        base = {c: S.image(pauli(c)).op for c in "XYZ"}
        for ib, B in enumerate(c1):
            bx, bz = B.imgX[0], B.imgZ[0]
            pre = {}
            for lab, b in (("X", bx), ("Z", bz)):
                pre[lab] = base[b.letter(1)].with_phase(base[b.letter(1)].phase + b.phase)
            for iv, V in enumerate(c1):
                key = (str(apply_onsite(V, pre["X"])), str(apply_onsite(V, pre["Z"])))
                index.setdefault(key, (name, ib, iv))
    return index


def realize_staircase(pair: TIImagePair) -> Realization:
    """On-site basis change plus basic Clifford reproducing ``pair`` exactly."""
    hit = _realization_index().get(pair.key())
    if hit is None:
        raise RealizationError(f"no staircase found for {pair}")
    name, ib, iv = hit
    c1 = single_site_cliffords()
    r = Realization(c1[ib], fold_post(c1[iv], TABLEAUX[name]), name, c1[iv])
    T = r.transform()
    got = (T.image(pauli("X")), T.image(pauli("Z")))
    if not all(g.is_local for g in got) or (str(got[0].op), str(got[1].op)) != pair.key():
        raise RealizationError(f"round trip failed for {pair}")
    return r


# ---------------------------------------------------------------------------
# circuit witnesses


@dataclass(frozen=True)
class Layer:
    """``gate`` on windows starting at ``offset + stride * j`` for every ``j``."""

    gate: CliffordTableau
    offset: int = 0
    stride: int = 1
    label: str = ""


@dataclass
class Circuit:
    layers: list[Layer]
    name: str = ""

    @property
    def depth(self) -> int:
        return len(self.layers)

    def conjugate(self, p: PauliString, margin: int = 12) -> PauliString:
        """Bulk conjugation: the first layer acts first."""
        op = p
        for layer in self.layers:
            k = layer.gate.k
            lo, hi = op.lo - k - margin, op.hi + margin
            start = lo - ((lo - layer.offset) % layer.stride)
            for m in range(start, hi + 1, layer.stride):
                op = apply_factor(layer.gate, op, m)
        return op

    def describe(self) -> list[dict]:
        return [
            {"gate": l.label or f"k={l.gate.k}", "offset": l.offset, "stride": l.stride,
             "tableau": l.gate.to_json()}
            for l in self.layers
        ]


def merge_onsite(layers: list[Layer]) -> list[Layer]:
    """Fuse consecutive single-site layers."""
    out: list[Layer] = []
    for layer in layers:
        if out and layer.gate.k == 1 and out[-1].gate.k == 1:
            prev = out[-1]
            out[-1] = Layer(compose(layer.gate, prev.gate), 0, 1, f"{layer.label}.{prev.label}")
        else:
            out.append(layer)
    return [l for l in out if not (l.gate.k == 1 and l.gate == CliffordTableau.identity(1))]


def bulk_images(T: Transform | Circuit) -> tuple[PauliString, PauliString]:
    if isinstance(T, Circuit):
        return T.conjugate(pauli("X")), T.conjugate(pauli("Z"))
    return T.local_image(pauli("X")), T.local_image(pauli("Z"))


def factors_commute(U: CliffordTableau, shift: int) -> bool:
    """Whether copies of ``U`` at ``m`` and ``m + shift`` commute (up to phase)."""
    span = U.k + shift
    for p in all_strings(1, span):
        a = apply_factor(U, apply_factor(U, p, 1), 1 + shift)
        b = apply_factor(U, apply_factor(U, p, 1 + shift), 1)
        if a != b:
            return False
    return True


def _basis_search(target: tuple[PauliString, PauliString], core: Circuit) -> tuple[CliffordTableau, CliffordTableau]:
    c1 = single_site_cliffords()
    imgs = {c: core.conjugate(pauli(c)) for c in "XYZ"}
    for B in c1:
        pre = []
        for b in (B.imgX[0], B.imgZ[0]):
            base = imgs[b.letter(1)]
            pre.append(base.with_phase(base.phase + b.phase))
        for V in c1:
            if apply_onsite(V, pre[0]) == target[0] and apply_onsite(V, pre[1]) == target[1]:
                return B, V
    raise RealizationError("no on-site basis changes match the target")


def decorating_circuit(target: tuple[PauliString, PauliString], name: str = "L3") -> Circuit:
    """Depth-four circuit for a three-site decorating map: basis, two layers of
    the commuting two-site gate, basis."""
    star = TABLEAUX["Ustar"]
    core = Circuit([Layer(star, 0, 2, "Ustar"), Layer(star, 1, 2, "Ustar")])
    B, V = _basis_search(target, core)
    return Circuit([Layer(B, 0, 1, "B")] + core.layers + [Layer(V, 0, 1, "V")], name)


# decorating maps whose composition gives the U4 staircase
V1_IMAGES = (pauli("ZYZ", -1), pauli("ZXZ", -1, phase=2))  # X, Z (Y -> Z X Z)
V2_IMAGES = (pauli("ZXZ", -1), pauli("ZYZ", -1))


def circuit_depth_witness(name_or_tableau) -> Circuit:
    """Layered circuit with the same bulk action as a locality-preserving staircase."""
    t = TABLEAUX[name_or_tableau] if isinstance(name_or_tableau, str) else name_or_tableau
    name = name_or_tableau if isinstance(name_or_tableau, str) else "U"
    S = Staircase(t)
    if t.k == 2 and classify(t).tag != "L3":
        raise UnsupportedTransform("two-site witnesses are built for decorating (L3) staircases")
    try:
        target = bulk_images(S)
    except NonLocalImageError:
        raise UnsupportedTransform(f"{name} does not preserve locality") from None
    if t.k == 2:
        return decorating_circuit(target, name)
    if t.k == 3 and all(factors_commute(t, s) for s in (1, 2)):
        layers = [Layer(t, r, 3, name) for r in range(3)]
        return Circuit(layers, name)
    if t.k == 3:
        v1 = decorating_circuit(V1_IMAGES, "V1")
        v2 = decorating_circuit(V2_IMAGES, "V2")
        core = Circuit(v1.layers + v2.layers)
        B, V = _basis_search(target, core)
        layers = merge_onsite([Layer(B, 0, 1, "B")] + core.layers + [Layer(V, 0, 1, "V")])
        return Circuit(layers, name)
    raise UnsupportedTransform(f"no witness construction for k={t.k}")


@dataclass
class DecoratingSplit:
    """Outcome of writing the U4 staircase as two decorating maps."""

    literal: tuple[PauliString, PauliString]  # V1 then V2, no basis changes
    target: tuple[PauliString, PauliString]
    witness: Circuit
    inner_fixed: bool  # only the outermost basis layers were changed

    @property
    def literal_match(self) -> bool:
        return self.literal == self.target

    @property
    def adjusted_match(self) -> bool:
        return bulk_images(self.witness) == self.target


def u4_decorating_split() -> DecoratingSplit:
    """Compare the U4 staircase with ``V2 V1`` (``V1`` acts first).

    The literal composition and a version whose first and last on-site layers
    are re-chosen are both reported.
    """
    target = bulk_images(Staircase(TABLEAUX["U4"]))
    v1 = decorating_circuit(V1_IMAGES, "V1")
    v2 = decorating_circuit(V2_IMAGES, "V2")
    core = Circuit(v1.layers + v2.layers)
    literal = bulk_images(core)
    witness = circuit_depth_witness("U4")
    inner = Circuit(v1.layers[1:] + v2.layers[:-1])
    middle = Circuit(witness.layers[1:-1])
    inner_fixed = [l.gate for l in middle.layers] == [l.gate for l in merge_onsite(inner.layers)]
    return DecoratingSplit(literal, target, witness, inner_fixed)


# ---------------------------------------------------------------------------
# inverses


def inverse_images(T: Transform, radius: int = 4) -> tuple[PauliString, PauliString]:
    """Local strings mapped to ``X[0]`` and ``Z[0]`` by ``T``.

    Found by linear algebra over the images of the single-site Paulis on
    ``[-radius, radius]``: the preimage of a target is the product of the
    generators whose images multiply to it.
    """
    gens = []
    for site in range(-radius, radius + 1):
        for c in "XZ":
            g = pauli(c, site)
            gens.append((g, T.local_image(g)))
    out = []
    for target in (pauli("X"), pauli("Z")):
        found = _solve_preimage(gens, target)
        if found is None:
            raise RealizationError(f"{T.name}: no preimage of {target} within radius {radius}")
        out.append(found)
    return out[0], out[1]


def _solve_preimage(gens, target: PauliString) -> PauliString | None:
    """Gaussian elimination over GF(2) on the symplectic vectors of the images."""
    lo = min(img.lo for _, img in gens)
    rows = []
    for i, (_, img) in enumerate(gens):
        s = img.lo - lo
        rows.append(((img.x << s) | ((img.z << s) << 64), 1 << i))
    s = target.lo - lo
    want = (target.x << s) | ((target.z << s) << 64)
    basis: list[tuple[int, int]] = []
    for vec, tag in rows:
        for bv, bt in basis:
            if vec ^ bv < vec:
                vec, tag = vec ^ bv, tag ^ bt
        if vec:
            basis.append((vec, tag))
            basis.sort(reverse=True)
    combo = 0
    for bv, bt in basis:
        if want ^ bv < want:
            want, combo = want ^ bv, combo ^ bt
    if want:
        return None
    pre = PauliString()
    img = PauliString()
    for i, (g, gi) in enumerate(gens):
        if combo >> i & 1:
            pre = pre * g
            img = img * gi
    # fix the phase so that the image is exactly the target
    return pre.with_phase(pre.phase + target.phase - img.phase)


def inverse_transform(T: Transform) -> Transform:
    """Transform undoing a locality-preserving one.

    Compositions are inverted factor by factor; a single staircase is
    inverted by realizing the preimages of ``X[0]`` and ``Z[0]``.
    """
    if isinstance(T, Composite):
        return Composite(inverse_transform(T.inner), inverse_transform(T.outer), f"inv({T.name})")
    if isinstance(T, OnSite):
        return OnSite(T.basis.inverse(), f"inv({T.name})")
    try:
        x, z = inverse_images(T)
    except NonLocalImageError:
        raise UnsupportedTransform(f"{T.name} does not preserve locality") from None
    if x.width > 5 or z.width > 5:
        raise RealizationError(f"inverse of {T.name} has images wider than five sites")
    try:
        S = realize_staircase(TIImagePair(x, z)).transform()
    except RealizationError:
        # e.g. the inverse of the left shift moves sites rightwards, which no
        # left-to-right staircase does
        raise UnsupportedTransform(f"inverse of {T.name} is not a staircase (X -> {x}, Z -> {z})") from None
    S.name = f"inv({T.name})"
    return S
