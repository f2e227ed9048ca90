"""Generalized Cholesky factorization on signed minor cones.

For a fixed matrix B in the cone with pattern ``eps``, the map
Phi_B : L -> L B L* is a bijection from the Cholesky space (lower
triangular, positive diagonal) onto the same cone. ``compose`` evaluates
Phi_B, ``factor`` inverts it by forward recursion; the trailing-minor
(TPM) duals are obtained through the reversal map, and ``resign`` moves a
matrix between cones without leaving factored coordinates.
"""

import numpy as np
from scipy.linalg import solve_triangular

from .core import (
    DEFAULT_TOL,
    LPM,
    TPM,
    ConePoint,
    as_pattern,
    canonical_diagonal,
    reverse_matrix,
    symmetrize,
)
from .errors import ConeKindMismatch, NegativeRadicand, PatternMismatch

__all__ = [
    "is_lower_triangular",
    "compose",
    "factor",
    "compose_tpm",
    "factor_tpm",
    "resign",
]


def is_lower_triangular(L, tol=0.0):
    """True when L is square lower triangular with strictly positive diagonal."""
    L = np.asarray(L)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        return False
    upper_ok = np.all(np.abs(L[np.triu_indices(L.shape[0], k=1)]) <= tol)
    diag = np.diagonal(L)
    return bool(upper_ok and np.all(diag.real > 0) and np.all(diag.imag == 0))


def _check_lower(L):
    L = np.asarray(L)
    if not is_lower_triangular(L):
        raise ValueError("expected lower triangular with positive diagonal")
    return L


def _check_same_cone(A, B, cone):
    if A.cone != cone or B.cone != cone:
        raise ConeKindMismatch(f"expected two {cone} points, got {A.cone} and {B.cone}")
    if A.pattern != B.pattern:
        raise PatternMismatch(f"patterns differ: {A.pattern} vs {B.pattern}")


def _ldl_pivots(A):
    """Unit-lower LDL* elimination: A = L diag(d) L* with real pivots d.

    Pivot d[k] is the ratio of consecutive leading principal minors, so the
    k-th minor is d[0]*...*d[k-1].
    """
    A = np.asarray(A)
    n = A.shape[0]
    U = A.astype(complex if np.iscomplexobj(A) else float, copy=True)
    L = np.eye(n, dtype=U.dtype)
    d = np.empty(n)
    for k in range(n):
        d[k] = U[k, k].real
        if k + 1 < n:
            col = U[k + 1:, k] / U[k, k]
            L[k + 1:, k] = col
            U[k + 1:, k + 1:] -= np.outer(col, U[k, k + 1:])
    return L, d


def compose(L, B):
    """Phi_B(L) = L B L*, a point of the same LPM cone as B.

    The k-th leading minor of the result is |det L_[k]|^2 times that of B,
    so the sign pattern is inherited from B.
    """
    L = _check_lower(L)
    if B.cone != LPM:
        raise ConeKindMismatch(f"compose needs an LPM basis, got {B.cone}")
    M = symmetrize(L @ B.matrix @ L.conj().T)
    return ConePoint(matrix=M, cone=LPM, pattern=B.pattern,
                     tolerance_used=B.tolerance_used)


def factor(A, B, tol=DEFAULT_TOL):
    """The unique lower triangular L with positive diagonal and L B L* = A.

    A and B must lie in the same LPM cone. Runs the forward recursion in
    O(n^3): diagonal entries come from ratios of elimination pivots of A and
    B, and each new row solves two triangular systems against the running
    factor of the result and the precomputed LDL* factor of B.
    """
    _check_same_cone(A, B, LPM)
    Am, Bm = A.matrix, B.matrix
    n = Am.shape[0]
    dtype = complex if np.iscomplexobj(Am) or np.iscomplexobj(Bm) else float
    LB, dB = _ldl_pivots(Bm)
    _, dA = _ldl_pivots(Am)
    L = np.zeros((n, n), dtype=dtype)
    for j in range(n):
        radicand = dA[j] / dB[j]
        if not radicand > tol * tol:
            raise NegativeRadicand(j + 1, float(radicand))
        q = np.sqrt(radicand)
        if j > 0:
            b = Am[:j, j]
            u = Bm[:j, j]
            y = solve_triangular(L[:j, :j], b, lower=True)
            # Solve B_[j] x = y - q*u through its unit-LDL* factors.
            z = solve_triangular(LB[:j, :j], y - q * u, lower=True,
                                 unit_diagonal=True)
            x = solve_triangular(LB[:j, :j].conj().T, z / dB[:j], lower=False,
                                 unit_diagonal=True)
            L[j, :j] = x.conj()
        L[j, j] = q
    return L.real if dtype is float else L


def compose_tpm(L, C):
    """The trailing-minor analogue of compose: L* C L in the TPM cone of C."""
    L = _check_lower(L)
    if C.cone != TPM:
        raise ConeKindMismatch(f"compose_tpm needs a TPM basis, got {C.cone}")
    M = symmetrize(L.conj().T @ C.matrix @ L)
    return ConePoint(matrix=M, cone=TPM, pattern=C.pattern,
                     tolerance_used=C.tolerance_used)


def factor_tpm(A, C, tol=DEFAULT_TOL):
    """Invert compose_tpm by reversal: factor the reversed pair, reverse back."""
    _check_same_cone(A, C, TPM)
    A_rev = ConePoint(matrix=symmetrize(reverse_matrix(A.matrix)), cone=LPM,
                      pattern=A.pattern, tolerance_used=A.tolerance_used)
    C_rev = ConePoint(matrix=symmetrize(reverse_matrix(C.matrix)), cone=LPM,
                      pattern=C.pattern, tolerance_used=C.tolerance_used)
    return reverse_matrix(factor(A_rev, C_rev, tol=tol))


def _diag_signs(eps):
    """(e0*e1, e1*e2, ...) with e0 = 1 — the diagonal of the canonical matrix."""
    eps = as_pattern(eps)
    return np.array([(1 if i == 0 else eps[i - 1]) * eps[i]
                     for i in range(len(eps))], dtype=float)


def resign(A, delta, tol=DEFAULT_TOL):
    """Move A from its LPM cone to the cone with pattern delta.

    Writes A = L D_eps L* and returns L D_delta L*, but runs entirely in one
    forward recursion over the Gram coefficients alpha_j^(k) = l_jk *
    conj(l_kk) * (e_{k-1} e_k), never forming L itself.
    """
    if A.cone != LPM:
        raise ConeKindMismatch(f"resign needs an LPM point, got {A.cone}")
    delta = as_pattern(delta)
    eps = A.pattern
    if len(delta) != len(eps):
        raise PatternMismatch(f"pattern length {len(delta)} != dimension {len(eps)}")
    if delta == eps:
        return A
    Am = A.matrix
    n = Am.shape[0]
    dtype = complex if np.iscomplexobj(Am) else float
    s_eps = _diag_signs(eps)
    s_delta = _diag_signs(delta)
    alpha = np.zeros((n, n), dtype=dtype)
    lsq = np.empty(n)
    out = np.zeros((n, n), dtype=dtype)
    for k in range(n):
        col = Am[k:, k].astype(dtype, copy=True)
        for i in range(k):
            col -= alpha[k:, i] * np.conj(alpha[k, i]) * (s_eps[i] / lsq[i])
        alpha[k:, k] = col
        radicand = s_eps[k] * col[0].real
        if not radicand > tol * tol:
            raise NegativeRadicand(k + 1, float(radicand))
        lsq[k] = radicand
        # Eagerly accumulate rank-one pieces of the re-signed matrix.
        piece = np.outer(alpha[k:, k], np.conj(alpha[k:, k])) * (s_delta[k] / lsq[k])
        out[k:, k:] += piece
    return ConePoint(matrix=symmetrize(out), cone=LPM, pattern=delta,
                     tolerance_used=A.tolerance_used)


def canonical_point(eps, cone=LPM):
    """The canonical diagonal D_eps (LPM) or its reversal counterpart (TPM)."""
    eps = as_pattern(eps)
    D = canonical_diagonal(eps)
    if cone == LPM:
        return ConePoint(matrix=D, cone=LPM, pattern=eps)
    return ConePoint(matrix=symmetrize(reverse_matrix(D)), cone=TPM, pattern=eps)
