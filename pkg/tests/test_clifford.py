import itertools
import random

import numpy as np
import pytest

from cliffchain.catalog import TABLEAUX
from cliffchain.clifford import (
    CliffordTableau,
    TableauError,
    compose,
    embed,
    enumerate_tableaux,
    group_order,
    inverse,
    validate,
)
from cliffchain.pauli import PauliString, all_strings, parse, pauli

from oracle import dense_of

KW = TABLEAUX["KW"]
C2 = list(enumerate_tableaux(2))


def _random_tableaux(n, seed=7):
    rng = random.Random(seed)
    return rng.sample(C2, n)


class TestValidate:
    def test_kw_tableau_valid(self):
        t = CliffordTableau.from_sites({"X1": "+X@1", "X2": "+Z@2", "Z1": "+ZZ@1", "Z2": "+XX@1"})
        assert validate(t) is None

    def test_identity_valid(self):
        assert validate(CliffordTableau.identity(3)) is None

    def test_out_of_window_rejected(self):
        t = CliffordTableau.from_sites({"X1": "+XXZ@0"})
        v = validate(t)
        assert v is not None and v.kind == "out-of-window"

    def test_commutation_violation_names_pair(self):
        t = CliffordTableau.from_sites({"X1": "+X@1", "Z1": "+Z@1", "X2": "+Z@1", "Z2": "+Z@2"})
        v = validate(t)
        assert v.kind == "commutation"
        assert {v.i, v.j} == {1, 2}

    def test_non_hermitian_rejected(self):
        t = CliffordTableau(("+iX@1",), ("+Z@1",))
        assert validate(t).kind == "non-hermitian"

    def test_validate_raises(self):
        with pytest.raises(TableauError):
            CliffordTableau(("+X@1",), ("+X@1",)).validate()


class TestConjugate:
    def test_worked_example(self):
        assert TABLEAUX["example"].conjugate(parse("+XX@1")) == parse("-YY@1")

    @pytest.mark.parametrize("phase", range(4))
    def test_identity_fixed(self, phase):
        for t in _random_tableaux(5):
            assert t.conjugate(PauliString.identity(phase)) == PauliString.identity(phase)

    def test_out_of_window(self):
        with pytest.raises(TableauError):
            KW.conjugate(pauli("X", 3))

    @pytest.mark.parametrize("t", _random_tableaux(25), ids=str)
    def test_homomorphism_against_dense(self, t):
        # dense(image(p)) must equal the ordered product of generator images
        gens = {("X", i): t.imgX[i - 1] for i in (1, 2)} | {("Z", i): t.imgZ[i - 1] for i in (1, 2)}
        for p in all_strings(1, 2):
            mat = np.eye(4, dtype=complex)
            for i in (1, 2):
                ch = p.letter(i)
                if ch == "X":
                    mat = mat @ dense_of(gens[("X", i)], 1, 2)
                elif ch == "Z":
                    mat = mat @ dense_of(gens[("Z", i)], 1, 2)
                elif ch == "Y":  # Y = i X Z
                    mat = mat @ (1j * dense_of(gens[("X", i)], 1, 2) @ dense_of(gens[("Z", i)], 1, 2))
            assert np.allclose(dense_of(t.conjugate(p), 1, 2), mat), p

    @pytest.mark.parametrize("t", _random_tableaux(20, seed=3), ids=str)
    def test_preserves_commutation_and_hermiticity(self, t):
        strings = all_strings(1, 2)
        imgs = {p: t.conjugate(p) for p in strings}
        for p in strings:
            assert imgs[p].is_hermitian
        for p, q in itertools.combinations(strings, 2):
            assert p.commutes(q) == imgs[p].commutes(imgs[q])


class TestGroup:
    @pytest.mark.parametrize("t", _random_tableaux(10, seed=11), ids=str)
    def test_compose_identity(self, t):
        assert compose(t, CliffordTableau.identity(2)) == t
        assert compose(CliffordTableau.identity(2), t) == t

    @pytest.mark.parametrize("t", _random_tableaux(15, seed=5), ids=str)
    def test_inverse(self, t):
        assert compose(t, inverse(t)) == CliffordTableau.identity(2)
        assert compose(inverse(t), t) == CliffordTableau.identity(2)

    def test_group_action(self):
        pairs = list(zip(_random_tableaux(12, seed=1), _random_tableaux(12, seed=2)))
        for a, b in pairs:
            ab = compose(a, b)
            for p in all_strings(1, 2):
                assert ab.conjugate(p) == a.conjugate(b.conjugate(p))

    def test_compose_mismatched_k(self):
        with pytest.raises(TableauError):
            compose(TABLEAUX["U1"], TABLEAUX["U2"])

    def test_kw_not_an_involution(self):
        assert compose(KW, KW) != CliffordTableau.identity(2)
        assert compose(KW, inverse(KW)) == CliffordTableau.identity(2)

    def test_embed(self):
        h = TABLEAUX["H"]
        e = embed(h, 3, 2)
        assert e.conjugate(pauli("X", 2)) == pauli("Z", 2)
        assert e.conjugate(pauli("X", 1)) == pauli("X", 1)


class TestEnumerate:
    def test_orders(self):
        assert sum(1 for _ in enumerate_tableaux(1)) == 24
        assert len(C2) == 11520

    @pytest.mark.parametrize("k", [1, 2])
    def test_formula(self, k):
        assert group_order(k) == {1: 24, 2: 11520}[k]

    def test_all_valid_and_distinct(self):
        assert all(t.is_valid for t in C2)
        assert len({t.key() for t in C2}) == len(C2)

    def test_lexicographic(self):
        keys = [t.key() for t in C2]
        assert keys == sorted(keys)

    def test_k3_unsupported(self):
        with pytest.raises(TableauError):
            next(enumerate_tableaux(3))

    def test_json_round_trip(self):
        for t in _random_tableaux(10):
            assert CliffordTableau.loads(t.dumps()) == t
