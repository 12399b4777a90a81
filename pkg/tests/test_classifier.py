import json
import random
from collections import Counter
from pathlib import Path

import pytest

import cliffchain
from cliffchain.catalog import TABLEAUX, nl_variant, transform
from cliffchain.chain import Staircase
from cliffchain.classifier import (
    CLASSES_C2,
    RealizationError,
    TIImagePair,
    UnsupportedTransform,
    bulk_images,
    circuit_depth_witness,
    classify,
    classify_by_cases,
    enumerate_5site,
    factors_commute,
    family_of,
    inverse_transform,
    realize_staircase,
    survivor_findings,
    u4_decorating_split,
)
from cliffchain.clifford import CliffordTableau, enumerate_tableaux
from cliffchain.pauli import PauliString, all_strings, parse, pauli

GOLDEN = Path(cliffchain.__file__).parent / "data" / "census_c2.json"
C2 = list(enumerate_tableaux(2))


class TestClassify:
    def test_cluster(self):
        c = classify(TABLEAUX["cluster"])
        assert c.tag == "L3"
        assert (c.params["P"], c.params["Q"], c.params["S"]) == ("X", "Z", "Z")
        assert c.images["X"] == "+ZXZ@-1"

    def test_kw(self):
        assert classify(TABLEAUX["KW"]).tag == "NL1"

    def test_non_oscillating_nl2(self):
        c = classify(TABLEAUX["NL2"])
        assert c.tag == "NL2"
        assert c.params["sign_X"] == "+/1" and c.params["sign_Z"] == "+/1"

    def test_nl4_oscillation_and_boundary(self):
        c = classify(TABLEAUX["NL4"])
        assert c.tag == "NL4"
        assert c.params["T_X"] == "Y"
        assert c.params["sign_X"] in ("+-/2", "-+/2")

    def test_identity_and_swap(self):
        assert classify(CliffordTableau.identity(2)).params == {"P": "X", "Q": "Z", "sX": 1, "sZ": 1}
        assert classify(TABLEAUX["swap"]).params["shift"] == -1

    @pytest.mark.parametrize("name", ["identity", "swap", "cluster", "KW", "KW2", "NL2", "NL3", "NL4", "Ufield", "Ustar", "example"])
    def test_routes_agree(self, name):
        assert classify(TABLEAUX[name]).tag == classify_by_cases(TABLEAUX[name])

    def test_locality_dichotomy(self):
        rng = random.Random(0)
        for t in rng.sample(C2, 400):
            T = Staircase(t)
            local = all(T.image(pauli(c)).is_local for c in "XYZ")
            assert classify(t).tag.startswith("L") == local

    def test_reflection_symmetry_of_local_images(self):
        rng = random.Random(1)
        for t in rng.sample(C2, 400):
            c = classify(t)
            if not c.tag.startswith("L"):
                continue
            shift = c.params.get("shift", 0)
            for text in c.images.values():
                p = parse(text).translate(-shift)
                assert p.lo + p.hi == 0, (t, text)
                assert p.letters == p.letters[::-1]


class TestCensus:
    def test_partition(self, census):
        assert census.total == 11520
        assert sum(census.counts.values()) == 11520
        assert set(census.counts) == set(CLASSES_C2)
        assert not census.disagreements

    def test_golden(self, census):
        golden = json.loads(GOLDEN.read_text())
        assert golden["total"] == census.total
        assert golden["counts"] == dict(sorted(census.counts.items()))

    def test_representatives_are_members(self, census):
        for tag, reps in census.representatives.items():
            assert reps
            assert all(classify(t).tag == tag for t in reps)

    def test_records(self):
        from cliffchain.classifier import census_lines

        recs = [{"tableau": TABLEAUX["KW"].to_json(), **classify(TABLEAUX["KW"]).to_json()}]
        line = json.loads(census_lines(recs).splitlines()[0])
        assert set(line) == {"tableau", "class", "params", "images"}
        assert line["class"] == "NL1"


class TestFiveSite:
    def test_partition(self, survivors):
        counts = Counter(p.family for p in survivors)
        assert set(counts) == {"L1", "L2", "L3", "L4", "L5", "L6"}
        assert not survivor_findings(survivors)
        assert all(p.shift == -1 for p in survivors if p.family == "L2")
        assert all(p.shift == 0 for p in survivors if p.family != "L2")

    def test_constraints(self, survivors):
        for p in survivors:
            x, z = p.imgX, p.imgZ
            assert not x.commutes(z)
            for m in range(1, 5):
                assert x.commutes(x.translate(m)) and z.commutes(z.translate(m))
                assert x.commutes(z.translate(m)) and x.commutes(z.translate(-m))

    def test_reflection_symmetric(self, survivors):
        for p in survivors:
            for q in (p.imgX, p.imgZ):
                q = q.translate(-p.shift)
                assert q.lo + q.hi == 0 and q.letters == q.letters[::-1]

    def test_l6_example_present(self, survivors):
        keys = {(p.imgX.unsigned(), p.imgZ.unsigned()): p.family for p in survivors}
        assert keys[(parse("+XZZZX@-2"), parse("+XYXYX@-2"))] == "L6"

    def test_l5_family(self, survivors):
        # A = i C C' with C = X, C' = Z gives A = Y
        keys = {(p.imgX.unsigned(), p.imgZ.unsigned()): p.family for p in survivors}
        assert keys[(parse("+YIXIY@-2"), parse("+YIZIY@-2"))] == "L5"

    def test_even_width_x_images_absent(self, survivors):
        assert all(p.imgX.width in (1, 3, 5) for p in survivors if p.family != "L2")
        assert not any(p.imgX.unsigned() == parse("+XX@-1") for p in survivors)

    def test_family_parameters(self, survivors):
        for p in survivors:
            if p.family == "L6":
                mid = [q for q in (p.imgX, p.imgY, p.imgZ) if q.width == 3][0]
                a, b = mid.letter(-1), mid.letter(0)
                assert a != b
            if p.family == "L4":
                single = [q for q in (p.imgX, p.imgY, p.imgZ) if q.weight == 1][0]
                a = single.letter(0)
                others = [q for q in (p.imgX, p.imgY, p.imgZ) if q.weight > 1]
                c, c2 = (q.letter(0) for q in others)
                assert {a, c, c2} == {"X", "Y", "Z"}

    def test_shifted_copies(self):
        assert len(enumerate_5site(include_shifted=True)) > len(enumerate_5site())

    def test_family_of(self):
        assert family_of(parse("+ZYZ@-1"), pauli("Z")) == ["L3"]
        assert family_of(pauli("X"), pauli("Z")) == ["L1"]


class TestRealization:
    def test_every_survivor_round_trips(self, survivors):
        for p in survivors:
            r = realize_staircase(p)
            T = r.transform()
            assert r.U.k <= 3
            assert T.image(pauli("X", p.shift * 0)).op == p.imgX
            assert T.image(pauli("Z")).op == p.imgZ

    def test_table_rows(self):
        r = realize_staircase(TIImagePair(parse("+ZYZ@-1"), pauli("Z")))
        assert r.template == "U1"
        r = realize_staircase(TIImagePair(parse("-ZZYZZ@-2"), pauli("Z")))
        assert r.template == "U2"

    def test_identity(self):
        r = realize_staircase(TIImagePair(pauli("X"), pauli("Z")))
        assert r.template == "identity"
        assert r.transform().image(pauli("Y")).op == pauli("Y")

    def test_invalid_pair(self):
        with pytest.raises(RealizationError):
            realize_staircase(TIImagePair(pauli("X"), pauli("X")))


class TestCircuits:
    @pytest.mark.parametrize("name, depth", [("cluster", 4), ("U1", 4), ("Ufield", 4), ("U2", 3), ("U3", 3)])
    def test_depths(self, name, depth):
        c = circuit_depth_witness(name)
        assert c.depth == depth
        assert bulk_images(c) == bulk_images(transform(name))

    def test_u4_depth_at_most_eight(self):
        c = circuit_depth_witness("U4")
        assert c.depth <= 8
        assert bulk_images(c) == bulk_images(transform("U4"))

    def test_ustar_layers_commute(self):
        U = TABLEAUX["Ustar"]
        assert factors_commute(U, 1)
        assert not factors_commute(TABLEAUX["KW"], 1)
        # exhaustive over all Paulis on three sites
        from cliffchain.chain import apply_factor

        for p in all_strings(0, 2):
            assert apply_factor(U, apply_factor(U, p, 1), 0) == apply_factor(U, apply_factor(U, p, 0), 1)

    def test_u2_u3_commute_at_stride_one(self):
        assert factors_commute(TABLEAUX["U2"], 1) or factors_commute(TABLEAUX["U2"], 2)
        assert not factors_commute(TABLEAUX["U4"], 1)

    def test_non_local_rejected(self):
        with pytest.raises(UnsupportedTransform):
            circuit_depth_witness("KW")

    def test_decorating_split(self):
        d = u4_decorating_split()
        assert d.adjusted_match
        assert d.target == (parse("-ZYYYZ@-2"), parse("-ZXZ@-1"))


class TestInverse:
    @pytest.mark.parametrize("name", ["U1", "U2", "U3", "U4", "cluster", "Ufield", "Ustar", "U4*U2"])
    def test_round_trip_images(self, name):
        T = transform(name)
        inv = inverse_transform(T)
        for p in [pauli("X"), pauli("Z"), parse("+XX@0"), parse("+YZY@-1")]:
            assert inv.image(T.image(p).op).op == p
            assert T.image(inv.image(p).op).op == p

    def test_non_local_rejected(self):
        with pytest.raises(UnsupportedTransform):
            inverse_transform(transform("KW"))

    def test_right_shift_is_not_a_staircase(self):
        with pytest.raises(UnsupportedTransform, match="not a staircase"):
            inverse_transform(transform("swap"))
