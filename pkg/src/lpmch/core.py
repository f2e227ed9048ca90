"""Sign patterns, minor-sign cone classification, reversal, and inertia.

A sign pattern is a tuple over {+1, -1}. A symmetric (or Hermitian) matrix
belongs to the LPM cone of pattern ``eps`` when its k-th leading principal
minor has sign ``eps[k-1]`` for every k; the TPM cone is the analogue with
trailing principal minors.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import MinorNearZero, SingularMatrix

DEFAULT_TOL = 1e-10

LPM = "lpm"
TPM = "tpm"


def as_pattern(signs):
    """Normalize to a tuple over {+1, -1}, validating every entry."""
    eps = tuple(int(s) for s in signs)
    if len(eps) == 0 or any(s not in (1, -1) for s in eps):
        raise ValueError(f"not a sign pattern: {signs!r}")
    return eps


def pattern_from_string(s):
    """Parse a '+-' string, e.g. '+-+' -> (1, -1, 1)."""
    table = {"+": 1, "-": -1}
    try:
        return tuple(table[c] for c in s)
    except KeyError:
        raise ValueError(f"pattern string must be over '+-': {s!r}") from None


def pattern_to_string(eps):
    return "".join("+" if s > 0 else "-" for s in eps)


def all_patterns(n):
    return [as_pattern(p) for p in product((1, -1), repeat=n)]


@dataclass(frozen=True, eq=False)
class ConePoint:
    """A symmetric matrix together with its cone kind and sign pattern."""

    matrix: np.ndarray
    cone: str
    pattern: tuple
    tolerance_used: float = DEFAULT_TOL

    @property
    def dim(self):
        return self.matrix.shape[0]


def symmetrize(A):
    """Return the self-adjoint part (A + A*) / 2 as a new array."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    H = (A + A.conj().T) / 2
    if np.iscomplexobj(H) and np.allclose(H.imag, 0):
        H = H.real
    return H


def scale(A):
    """Largest entry modulus, the scale used in minor tolerances."""
    return float(np.max(np.abs(A))) if np.asarray(A).size else 0.0


def leading_minors(A):
    """All n leading principal minors, by one pass of unpivoted elimination.

    If some pivot vanishes exactly the remaining minors are reported as NaN;
    callers apply their own tolerance per minor. Hermitian input gives real
    minors; a non-negligible imaginary part raises ValueError.
    """
    A = np.asarray(A)
    n = A.shape[0]
    U = A.astype(complex if np.iscomplexobj(A) else float, copy=True)
    minors = np.full(n, np.nan)
    det = 1.0 + 0.0j
    for k in range(n):
        pivot = U[k, k]
        det *= complex(pivot)
        if abs(det.imag) > 1e-8 * max(1.0, abs(det)):
            raise ValueError("leading minor has a non-negligible imaginary part; "
                             "input is not Hermitian")
        minors[k] = det.real
        if k + 1 < n:
            if pivot == 0:
                break
            U[k + 1:, k + 1:] -= np.outer(U[k + 1:, k] / pivot, U[k, k + 1:])
    return minors


def canonical_diagonal(eps):
    """The unit-modulus diagonal matrix diag(e1, e1*e2, ..., e_{n-1}*e_n)."""
    eps = as_pattern(eps)
    d = np.empty(len(eps))
    prev = 1
    for j, e in enumerate(eps):
        d[j] = prev * e
        prev = e
    return np.diag(d)


def reverse_matrix(A):
    """The reversal (P A P)* with P the anti-diagonal permutation."""
    A = np.asarray(A)
    return A.conj().T[::-1, ::-1]


def reverse_pattern(eps):
    """(e_n e_{n-1}, ..., e_n e_1, e_n); identity for n = 1."""
    eps = as_pattern(eps)
    n = len(eps)
    if n == 1:
        return eps
    last = eps[-1]
    return tuple(last * eps[n - 1 - j] for j in range(1, n)) + (last,)


def classify(A, cone=LPM, tol=DEFAULT_TOL):
    """Classify a symmetric matrix into its LPM or TPM cone.

    Raises MinorNearZero(k) when the k-th minor fails the scale-aware
    tolerance |minor| > tol * max(1, scale(A))**k.
    """
    A = symmetrize(A)
    work = reverse_matrix(A) if cone == TPM else A
    minors = leading_minors(work)
    s = max(1.0, scale(A))
    signs = []
    for k, m in enumerate(minors, start=1):
        if not np.isfinite(m) or abs(m) <= tol * s**k:
            raise MinorNearZero(k, None if not np.isfinite(m) else float(m))
        signs.append(1 if m > 0 else -1)
    return ConePoint(matrix=A, cone=cone, pattern=tuple(signs), tolerance_used=tol)


def invert_cone_point(point):
    """Matrix inverse, which swaps LPM <-> TPM and reverses the pattern."""
    try:
        inv = np.linalg.inv(point.matrix)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    return ConePoint(
        matrix=symmetrize(inv),
        cone=TPM if point.cone == LPM else LPM,
        pattern=reverse_pattern(point.pattern),
        tolerance_used=point.tolerance_used,
    )


def lpm_perturbation(A, tol=DEFAULT_TOL):
    """Perturbation radius t_A and the pattern of A + t*Id for 0 < t < t_A.

    t_A is the smallest nonzero eigenvalue modulus over all leading principal
    submatrices; for the zero matrix the convention is t = 1 with the all-plus
    pattern.
    """
    A = symmetrize(np.asarray(A, dtype=float))
    n = A.shape[0]
    if not A.any():
        return 1.0, as_pattern([1] * n)
    zero_cut = 1e-12 * max(1.0, scale(A))
    t_A = np.inf
    for k in range(1, n + 1):
        eigs = np.linalg.eigvalsh(A[:k, :k])
        nonzero = np.abs(eigs)[np.abs(eigs) > zero_cut]
        if nonzero.size:
            t_A = min(t_A, float(nonzero.min()))
    point = classify(A + (t_A / 2) * np.eye(n), LPM, tol)
    return t_A, point.pattern


def negative_inertia(eps):
    """Number of sign changes in the sequence 1, e1, ..., e_n."""
    eps = as_pattern(eps)
    prev = 1
    changes = 0
    for e in eps:
        if e != prev:
            changes += 1
        prev = e
    return changes


def cones_with_inertia(n, k):
    """All patterns of length n whose cones carry exactly k negative eigenvalues."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return [eps for eps in all_patterns(n) if negative_inertia(eps) == k]
