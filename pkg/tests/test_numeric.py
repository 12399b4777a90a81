import random
import warnings

import numpy as np
import pytest

from cliffchain.catalog import TABLEAUX, transform
from cliffchain.clifford import enumerate_tableaux
from cliffchain.hamiltonian import model
from cliffchain.numeric import (
    DenseSizeError,
    delta_from_eta,
    dense_hamiltonian,
    dense_staircase,
    dense_transform,
    image_residual,
    mpo_contract,
    periodic_decorating_circuit,
    reordered_commuting_layers,
    spectrum_check,
    synthesize_unitary,
    transfer_matrix,
    transfer_matrix_commutation,
    twirl_unitary,
    xxz_rmatrix,
    ybe_residual,
)
from cliffchain.pauli import all_strings, parse, pauli

from oracle import dense, dense_of

SAMPLE = random.Random(4).sample(list(enumerate_tableaux(2)), 40)


def ring_hamiltonian(terms, L):
    """Oracle: sum of ``c * P`` over all ring translates, built by Kronecker products."""
    H = np.zeros((2**L, 2**L), dtype=complex)
    for c, letters in terms:
        for n in range(L):
            site = ["I"] * L
            for j, ch in enumerate(letters):
                site[(n + j) % L] = ch
            H += c * dense("".join(site))
    return H


class TestSynthesis:
    @pytest.mark.parametrize("t", SAMPLE, ids=str)
    def test_conjugation(self, t):
        W = synthesize_unitary(t)
        for p in all_strings(1, 2):
            assert np.allclose(W @ dense_of(p, 1, 2) @ W.conj().T, dense_of(t.conjugate(p), 1, 2))

    @pytest.mark.parametrize("t", SAMPLE[:15], ids=str)
    def test_matches_twirl(self, t):
        assert np.allclose(synthesize_unitary(t), twirl_unitary(t), atol=1e-9)

    @pytest.mark.parametrize("name", ["U2", "U3", "U4"])
    def test_three_site(self, name):
        t = TABLEAUX[name]
        W = synthesize_unitary(t)
        for p in all_strings(1, 3)[:20]:
            assert np.allclose(W @ dense_of(p, 1, 3) @ W.conj().T, dense_of(t.conjugate(p), 1, 3))


class TestMPO:
    @pytest.mark.parametrize("name", ["identity", "cluster", "KW", "NL2", "NL3", "NL4", "U1", "Ustar"])
    def test_contract_equals_staircase(self, name):
        t = TABLEAUX[name]
        assert np.max(np.abs(mpo_contract(t, 6) - dense_staircase(t, 6))) < 1e-12

    def test_too_short(self):
        with pytest.raises(DenseSizeError):
            mpo_contract(TABLEAUX["KW"], 1)

    def test_size_cap(self):
        with pytest.raises(DenseSizeError):
            dense_staircase(TABLEAUX["KW"], 13)


class TestStaircaseNumerics:
    @pytest.mark.parametrize("name", ["U1", "KW", "NL3", "U4*U2", "NL2*SX"])
    def test_image_residual(self, name):
        T = transform(name)
        for letter in "XZ":
            assert image_residual(T, pauli(letter, 3), 8) < 1e-12

    def test_ustar_reordering(self):
        t = TABLEAUX["Ustar"]
        assert np.max(np.abs(reordered_commuting_layers(t, 6) - dense_staircase(t, 6))) < 1e-12

    def test_spectrum_u1(self):
        r = spectrum_check(model("xxz"), transform("U1"), 8, {"Delta": 0.5})
        assert r.spectral < 1e-10 and r.operator < 1e-10

    def test_spectrum_cap(self):
        with pytest.raises(DenseSizeError):
            spectrum_check(model("xxz"), transform("U1"), 11, {"Delta": 0.5})

    def test_dense_hamiltonian_against_oracle(self):
        L = 6
        got = dense_hamiltonian(model("xxz"), L, {"Delta": 0.3})
        want = sum(
            c * dense_of(parse(f"+{p}@{n}"), 0, L - 1)
            for n in range(L - 1)
            for c, p in ((-1, "XX"), (-1, "YY"), (-0.3, "ZZ"))
        )
        assert np.allclose(got, want)

    def test_composite_dense(self):
        L = 6
        U = dense_transform(transform("U4*U2"), L)
        assert np.allclose(U, dense_transform(transform("U4"), L) @ dense_transform(transform("U2"), L))


class TestIntegrable:
    @pytest.mark.parametrize("lam, mu, eta", [(0.31, 0.17, 0.23), (0.52, -0.41, 0.37), (1.13, 0.29, 0.61)])
    def test_ybe(self, lam, mu, eta):
        assert ybe_residual(lam, mu, eta) < 1e-12

    def test_rmatrix_at_zero_is_swap(self):
        eta = 0.4
        R = xxz_rmatrix(0.0, eta)
        assert np.allclose(R / np.sin(2 * eta), dense("XX") / 2 + dense("YY") / 2 + dense("ZZ") / 2 + np.eye(4) / 2)

    def test_degenerate_warns(self):
        with pytest.warns(RuntimeWarning):
            xxz_rmatrix(0.3, 0.0)

    def test_transfer_matrices_commute(self):
        assert transfer_matrix_commutation(0.37, 6, 0.21, 0.58) < 1e-10

    def test_transfer_matrix_commutes_with_ring_hamiltonian(self):
        L, eta = 6, 0.37
        H = ring_hamiltonian([(1, "XX"), (1, "YY"), (delta_from_eta(eta), "ZZ")], L)
        t = transfer_matrix(0.44, eta, L)
        assert np.max(np.abs(t @ H - H @ t)) < 1e-10

    def test_ring_circuit_maps_xxz_to_h1(self):
        L = 6
        U = periodic_decorating_circuit(L)
        H = ring_hamiltonian([(-1, "XX"), (-1, "YY"), (-0.5, "ZZ")], L)
        H1 = ring_hamiltonian([(-1, "ZXXZ"), (-1, "ZYYZ"), (-0.5, "IZZ")], L)
        assert np.allclose(U @ H @ U.conj().T, H1)

    def test_conjugated_transfer_matrices_commute(self):
        U = periodic_decorating_circuit(6)
        assert transfer_matrix_commutation(0.37, 6, 0.21, 0.58, conjugate_by=U) < 1e-10

    def test_odd_ring_rejected(self):
        with pytest.raises(ValueError):
            periodic_decorating_circuit(5)
