"""Dense-matrix oracle for small chains.

Sites of an ``L``-site chain are ``first .. first+L-1``; in Kronecker products
the first site is the most significant factor.  Sizes are capped at
``MAX_SITES`` so a single operator stays below 16.8M complex entries.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .chain import Composite, OnSite, Staircase, Transform
from .clifford import CliffordTableau
from .hamiltonian import TIHamiltonian, term_instances
from .pauli import PauliString, all_strings

MAX_SITES = 12

_I2 = np.eye(2, dtype=complex)
_MATS = {
    "I": _I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DenseSizeError(ValueError):
    pass


class SynthesisError(RuntimeError):
    pass


def _check_size(L: int) -> None:
    if L > MAX_SITES:
        raise DenseSizeError(f"dense operators are limited to {MAX_SITES} sites, got {L}")


def pauli_matrix(p: PauliString, L: int, first: int = 0) -> np.ndarray:
    """Dense matrix of ``p`` on sites ``first .. first+L-1``."""
    _check_size(L)
    if not p.is_identity and (p.lo < first or p.hi > first + L - 1):
        raise ValueError(f"{p} does not fit on sites {first}..{first + L - 1}")
    mats = [_MATS[p.letter(first + j)] for j in range(L)]
    return (1j**p.phase) * reduce(np.kron, mats)


def kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats)


def embed_gate(W: np.ndarray, start: int, L: int) -> np.ndarray:
    """``W`` acting on sites ``start .. start+k-1`` (0-based) of an ``L``-site chain."""
    k = int(round(np.log2(W.shape[0])))
    left = np.eye(2**start, dtype=complex)
    right = np.eye(2 ** (L - start - k), dtype=complex)
    return np.kron(np.kron(left, W), right)


def embed_gate_periodic(W: np.ndarray, start: int, L: int) -> np.ndarray:
    """Two-site gate on ``(start, start+1 mod L)``; wraps around the ring."""
    if start + 1 < L:
        return embed_gate(W, start, L)
    # conjugate by a cyclic shift that brings sites L-1, 0 to positions 0, 1
    perm = np.arange(L)
    perm = np.roll(perm, 1)  # new position j holds old site perm[j]
    P = site_permutation(list(perm), L)
    return P.T @ embed_gate(W, 0, L) @ P


def site_permutation(order: list[int], L: int) -> np.ndarray:
    """Permutation matrix sending old site ``order[j]`` to new position ``j``."""
    dim = 2**L
    P = np.zeros((dim, dim))
    for idx in range(dim):
        bits = [(idx >> (L - 1 - s)) & 1 for s in range(L)]
        new = [bits[order[j]] for j in range(L)]
        P[int("".join(map(str, new)), 2), idx] = 1
    return P


# ---------------------------------------------------------------------------
# tableau synthesis


def synthesize_unitary(t: CliffordTableau) -> np.ndarray:
    """Unitary ``W`` with ``W P W^dagger = conjugate(t, P)``.

    ``W|0..0>`` is the joint +1 eigenvector of the images of the ``Z_i``; the
    column for ``|b>`` is that vector hit by the images of ``X_i^{b_i}``.  The
    global phase makes the first nonzero entry of column 0 real positive.
    """
    k = t.k
    if k > 3:
        raise SynthesisError("synthesis is limited to k <= 3")
    dim = 2**k
    zs = [pauli_matrix(p, k, 1) for p in t.imgZ]
    xs = [pauli_matrix(p, k, 1) for p in t.imgX]
    proj = np.eye(dim, dtype=complex)
    for z in zs:
        proj = proj @ (np.eye(dim) + z) / 2
    col = np.argmax(np.linalg.norm(proj, axis=0))
    psi0 = proj[:, col]
    norm = np.linalg.norm(psi0)
    if norm < 1e-9:
        raise SynthesisError("images of Z do not share a +1 eigenvector")
    psi0 = psi0 / norm
    first = psi0[np.flatnonzero(np.abs(psi0) > 1e-12)[0]]
    psi0 = psi0 * (abs(first) / first)
    W = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        v = psi0
        for i in range(k):
            if (b >> (k - 1 - i)) & 1:
                v = xs[i] @ v
        W[:, b] = v
    if not np.allclose(W.conj().T @ W, np.eye(dim), atol=1e-12):
        raise SynthesisError("synthesized matrix is not unitary")
    return W


def twirl_unitary(t: CliffordTableau) -> np.ndarray:
    """Independent construction: ``W ~ sum_P conj(P) P`` over the Pauli group.

    Averages ``C(P) M P`` for a random ``M``; the result is proportional to
    ``W`` whenever it is nonzero.  Used as a cross-check only.
    """
    k = t.k
    dim = 2**k
    rng = np.random.default_rng(7)
    M = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    acc = np.zeros((dim, dim), dtype=complex)
    for p in [PauliString()] + all_strings(1, k):
        q = t.conjugate(p.translate(0)) if not p.is_identity else p
        acc += pauli_matrix(q, k, 1) @ M @ pauli_matrix(p, k, 1).conj().T
    u, _, vh = np.linalg.svd(acc)
    W = u @ vh
    col = W[:, 0]
    first = col[np.flatnonzero(np.abs(col) > 1e-9)[0]]
    return W * (abs(first) / first)


# ---------------------------------------------------------------------------
# staircases


def dense_staircase(t: CliffordTableau, L: int, pre: CliffordTableau | None = None) -> np.ndarray:
    """``U_chain`` on an open chain of ``L`` sites; the left-most factor acts first."""
    _check_size(L)
    k = t.k
    if L < k:
        raise DenseSizeError(f"chain of {L} sites is shorter than the gate ({k})")
    W = synthesize_unitary(t)
    out = np.eye(2**L, dtype=complex)
    if pre is not None:
        out = dense_onsite(pre, L)
    for m in range(L - k + 1):
        out = embed_gate(W, m, L) @ out
    return out


def dense_onsite(basis: CliffordTableau, L: int) -> np.ndarray:
    return kron_all([synthesize_unitary(basis)] * L)


def dense_transform(T: Transform, L: int) -> np.ndarray:
    """Dense unitary of a named staircase, on-site map or composition."""
    if isinstance(T, Staircase):
        return dense_staircase(T.U, L, T.pre)
    if isinstance(T, OnSite):
        return dense_onsite(T.basis, L)
    if isinstance(T, Composite):
        return dense_transform(T.outer, L) @ dense_transform(T.inner, L)
    raise TypeError(f"no dense form for {T!r}")


def conjugate_dense(U: np.ndarray, A: np.ndarray) -> np.ndarray:
    return U @ A @ U.conj().T


def mpo_tensor(t: CliffordTableau) -> np.ndarray:
    """Bulk MPO tensor ``V[b1, b2, b3, b4, i, j]`` with bond ``(b1 b2) -> (b3 b4)``.

    The left bond carries the half-processed state of this site and sends
    this site's input leftwards; the right bond does the same for the next
    site, so the bond dimension is 4.
    """
    if t.k != 2:
        raise ValueError("the MPO form is built for two-site tableaux")
    U = synthesize_unitary(t).reshape(2, 2, 2, 2)  # out_n, out_n+1, in_n, in_n+1
    V = np.einsum("iakd,bj->kbadij", U, np.eye(2))
    return V


def mpo_contract(t: CliffordTableau, L: int) -> np.ndarray:
    """Contract the open-boundary MPO of the staircase to a dense operator."""
    _check_size(L)
    V = mpo_tensor(t)
    chi = 4
    Vb = V.reshape(2, 2, 2, 2, 2, 2)
    # left boundary: intermediate state equals this site's input
    left = np.eye(2).reshape(chi)
    # right end: output is the intermediate state, input is sent left
    right = np.einsum("ia,bj->abij", np.eye(2), np.eye(2))  # [b1, b2, i, j]
    if L < 2:
        raise DenseSizeError("the MPO needs at least two sites")
    # acc[bond, out..., in...] as matrices
    acc = np.einsum("x,xyij->yij", left, Vb.reshape(chi, chi, 2, 2))
    acc = acc.reshape(chi, 2, 2)
    for _ in range(L - 2):
        acc = np.einsum("xOI,xyij->yOiIj", acc, Vb.reshape(chi, chi, 2, 2))
        d = acc.shape[1] * 2
        acc = acc.reshape(chi, d, d)
    acc = np.einsum("xOI,xij->OiIj", acc, right.reshape(chi, 2, 2))
    d = acc.shape[0] * 2
    return acc.reshape(d, d)


# ---------------------------------------------------------------------------
# integrable structure


def xxz_rmatrix(lam: float, eta: float) -> np.ndarray:
    """Six-vertex R-matrix with weights ``a = sin(lam+2 eta)``, ``b = sin(lam)``,
    ``c = sin(2 eta)``; ``R(0)`` is ``c`` times the swap."""
    a, b, c = np.sin(lam + 2 * eta), np.sin(lam), np.sin(2 * eta)
    if min(abs(np.sin(2 * eta)), abs(a)) < 1e-8:
        warnings.warn("R-matrix parameters are close to a degenerate point", RuntimeWarning)
    return np.array([[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]], dtype=complex)


def _on(R: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Two-site operator ``R`` acting on factors ``i, j`` of ``n`` qubits."""
    R4 = R.reshape(2, 2, 2, 2)
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - s)) & 1 for s in range(n)]
        for oi, oj in itertools.product(range(2), repeat=2):
            amp = R4[oi, oj, bits[i], bits[j]]
            if amp == 0:
                continue
            nb = list(bits)
            nb[i], nb[j] = oi, oj
            out[int("".join(map(str, nb)), 2), col] += amp
    return out


def ybe_residual(lam: float, mu: float, eta: float) -> float:
    """``max|R12(lam-mu) R13(lam) R23(mu) - R23(mu) R13(lam) R12(lam-mu)|``."""
    R12 = _on(xxz_rmatrix(lam - mu, eta), 0, 1, 3)
    R13 = _on(xxz_rmatrix(lam, eta), 0, 2, 3)
    R23 = _on(xxz_rmatrix(mu, eta), 1, 2, 3)
    return float(np.max(np.abs(R12 @ R13 @ R23 - R23 @ R13 @ R12)))


def delta_from_eta(eta: float) -> float:
    """Anisotropy with ``2 eta = arccos(Delta)``."""
    return float(np.cos(2 * eta))


def transfer_matrix(lam: float, eta: float, L: int) -> np.ndarray:
    """``tr_a R_aL(lam) ... R_a1(lam)`` on ``L`` sites (auxiliary space is factor 0)."""
    _check_size(L + 1)
    n = L + 1
    mono = np.eye(2**n, dtype=complex)
    R = xxz_rmatrix(lam, eta)
    for site in range(1, L + 1):
        mono = _on(R, 0, site, n) @ mono
    mono = mono.reshape(2, 2**L, 2, 2**L)
    return np.einsum("aiaj->ij", mono)


def periodic_decorating_circuit(L: int) -> np.ndarray:
    """Ring version of the U1 staircase via its depth-four circuit."""
    from .classifier import circuit_depth_witness

    if L % 2:
        raise ValueError("the brick-wall circuit needs an even ring")
    circ = circuit_depth_witness("U1")
    out = np.eye(2**L, dtype=complex)
    for layer in circ.layers:
        W = synthesize_unitary(layer.gate)
        if layer.gate.k == 1:
            out = kron_all([W] * L) @ out
            continue
        for m in range(layer.offset, L, layer.stride):
            out = embed_gate_periodic(W, m % L, L) @ out
    return out


def transfer_matrix_commutation(eta: float, L: int, lam: float, mu: float, conjugate_by: np.ndarray | None = None) -> float:
    """``max|[t(lam), t(mu)]|``, optionally after conjugating both by a unitary."""
    if L == 0:
        return 0.0
    A = transfer_matrix(lam, eta, L)
    B = transfer_matrix(mu, eta, L)
    if conjugate_by is not None:
        A = conjugate_dense(conjugate_by, A)
        B = conjugate_dense(conjugate_by, B)
    return float(np.max(np.abs(A @ B - B @ A)))


# ---------------------------------------------------------------------------
# Hamiltonians


def dense_hamiltonian(H: TIHamiltonian, L: int, params: dict | None = None) -> np.ndarray:
    """Open-chain matrix of the term translates that fit on sites ``0..L-1``."""
    _check_size(L)
    dim = 2**L
    out = np.zeros((dim, dim), dtype=complex)
    for (a, _), op in term_instances(H, -H.max_width - 1, L):
        if op.is_identity or op.lo < 0 or op.hi > L - 1:
            continue
        out += H.terms[a].coupling.evaluate(params) * pauli_matrix(op, L)
    return out


def finite_image_hamiltonian(H: TIHamiltonian, T: Transform, L: int, params: dict | None = None) -> np.ndarray:
    """Terms of ``H`` on the open chain, each mapped by the exact finite transform."""
    _check_size(L)
    dim = 2**L
    out = np.zeros((dim, dim), dtype=complex)
    for (a, _), op in term_instances(H, -H.max_width - 1, L):
        if op.is_identity or op.lo < 0 or op.hi > L - 1:
            continue
        img = T.finite(op, 0, L - 1)
        out += H.terms[a].coupling.evaluate(params) * pauli_matrix(img, L)
    return out


@dataclass
class SpectrumReport:
    spectral: float  # sorted eigenvalues, symbolic vs original
    operator: float  # symbolic image vs dense conjugation, entrywise


def spectrum_check(H: TIHamiltonian, T: Transform, L: int, params: dict | None = None) -> SpectrumReport:
    """Compare the symbolically transformed open-chain model with dense conjugation."""
    if L > 10:
        raise DenseSizeError("spectrum checks are limited to L <= 10")
    Hd = dense_hamiltonian(H, L, params)
    Hs = finite_image_hamiltonian(H, T, L, params)
    U = dense_transform(T, L)
    Hc = conjugate_dense(U, Hd)
    e1 = np.linalg.eigvalsh(Hs)
    e2 = np.linalg.eigvalsh(Hd)
    return SpectrumReport(float(np.max(np.abs(e1 - e2))) if len(e1) else 0.0, float(np.max(np.abs(Hs - Hc))))


def reordered_commuting_layers(t: CliffordTableau, L: int) -> np.ndarray:
    """Staircase of a commuting two-site gate written as even then odd bonds."""
    W = synthesize_unitary(t)
    out = np.eye(2**L, dtype=complex)
    for parity in (0, 1):
        for m in range(parity, L - 1, 2):
            out = embed_gate(W, m, L) @ out
    return out


def image_residual(T: Transform, p: PauliString, L: int, n_first: int = 0) -> float:
    """Dense conjugation of ``p`` versus the exact finite symbolic image."""
    U = dense_transform(T, L)
    sym = T.finite(p, n_first, n_first + L - 1)
    dense = conjugate_dense(U, pauli_matrix(p, L, n_first))
    return float(np.max(np.abs(dense - pauli_matrix(sym, L, n_first))))
