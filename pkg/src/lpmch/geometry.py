"""Log-Cholesky geometry and abelian group structure.

The Cholesky space of lower triangular matrices with positive diagonal is
a flat Riemannian manifold and an abelian group under ``group_op``; the
``eta`` map is a linear-coordinates chart that turns the group into a
vector space and the distance into the Euclidean norm. Everything
transfers to each signed minor cone through the factorization maps, making
each cone an isometric copy of the Cholesky space. Real scalars only.
"""

import numpy as np
from scipy.linalg import solve_triangular

from .core import LPM, TPM, ConePoint, as_pattern, canonical_diagonal, symmetrize
from .cholesky import canonical_point, compose, compose_tpm, factor, factor_tpm
from .errors import ConeKindMismatch, PatternMismatch

__all__ = [
    "group_op", "group_inv", "scalar_mul", "eta", "eta_inv",
    "distance", "metric_tensor", "geodesic", "geodesic_between",
    "differential", "differential_inv",
    "lpm_distance", "lpm_geodesic", "star_op", "star_inv",
    "log_cholesky_mean", "klein_apply", "KLEIN_MAPS",
]


def _strict(L):
    return np.tril(L, -1)


def _diag(L):
    return np.diagonal(L).copy()


def _assemble(strict, diag):
    return strict + np.diag(diag)


def group_op(L, K):
    """L (.) K: add strict-lower parts, multiply diagonals. Abelian, identity Id."""
    return _assemble(_strict(L) + _strict(K), _diag(L) * _diag(K))


def group_inv(L):
    """Group inverse: negate the strict-lower part, invert the diagonal."""
    return _assemble(-_strict(L), 1.0 / _diag(L))


def scalar_mul(alpha, L):
    """alpha . L: scale the strict-lower part, raise the diagonal to alpha."""
    return _assemble(alpha * _strict(L), _diag(L) ** float(alpha))


def eta(L):
    """Linear coordinates (log-diagonal block; strict-lower block, row-major)."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    return np.concatenate([np.log(np.diagonal(L)), L[np.tril_indices(n, -1)]])


def _dim_from_eta(m):
    n = int((np.sqrt(8 * m + 1) - 1) / 2)
    if n * (n + 1) != 2 * m:
        raise ValueError(f"vector length {m} is not triangular")
    return n


def eta_inv(v):
    v = np.asarray(v, dtype=float)
    n = _dim_from_eta(v.size)
    L = np.zeros((n, n))
    L[np.diag_indices(n)] = np.exp(v[:n])
    L[np.tril_indices(n, -1)] = v[n:]
    return L


def distance(L, K):
    """Geodesic distance: Euclidean norm of the eta-coordinate difference."""
    return float(np.linalg.norm(eta(L) - eta(K)))


def metric_tensor(L, X, Y):
    """g_L(X, Y) = sum of strict-lower products + diagonal products / l_jj^2."""
    low = float(np.sum(_strict(X) * _strict(Y)))
    return low + float(np.sum(_diag(X) * _diag(Y) / _diag(L) ** 2))


def geodesic(L, X, t):
    """Geodesic from L with initial velocity X, at time t.

    Strict-lower parts move linearly; the diagonal moves exponentially, so
    the result never leaves the space.
    """
    dL, dX = _diag(L), _diag(X)
    return _assemble(_strict(L) + t * _strict(X), dL * np.exp(t * dX / dL))


def geodesic_between(L, K, t):
    """Unit-time geodesic from L to K, evaluated at t (t=0 -> L, t=1 -> K)."""
    dL, dK = _diag(L), _diag(K)
    X = _assemble(_strict(K) - _strict(L), (np.log(dK) - np.log(dL)) * dL)
    return geodesic(L, X, t)


def differential(L, X, eps):
    """Pushforward of the tangent X under L -> L D_eps L^T."""
    D = canonical_diagonal(eps)
    W = L @ D @ X.T + X @ D @ L.T
    return symmetrize(W)


def _half_lower(A):
    return np.tril(A, -1) + np.diag(_diag(A) / 2)


def differential_inv(L, W, eps):
    """Pullback of a symmetric perturbation W to a lower triangular tangent."""
    D = canonical_diagonal(eps)
    Z = solve_triangular(L, solve_triangular(L, W, lower=True).T, lower=True).T
    return L @ _half_lower(Z) @ D


def _check_compatible(A, B):
    if A.cone != B.cone:
        raise ConeKindMismatch(f"cone kinds differ: {A.cone} vs {B.cone}")
    if A.pattern != B.pattern:
        raise PatternMismatch(f"patterns differ: {A.pattern} vs {B.pattern}")


def cone_factor(A):
    """Factor of A against the canonical basis of its cone."""
    base = canonical_point(A.pattern, A.cone)
    if A.cone == LPM:
        return factor(A, base)
    return factor_tpm(A, base)


def cone_compose(L, pattern, cone=LPM):
    """Compose L against the canonical basis of the requested cone."""
    base = canonical_point(pattern, cone)
    return compose(L, base) if cone == LPM else compose_tpm(L, base)


def lpm_distance(A, B):
    """Distance between two cone points: the factor distance, by isometry."""
    _check_compatible(A, B)
    return distance(cone_factor(A), cone_factor(B))


def lpm_geodesic(A, B, t):
    """Geodesic between cone points, transferred through the factorization."""
    _check_compatible(A, B)
    G = geodesic_between(cone_factor(A), cone_factor(B), t)
    return cone_compose(G, A.pattern, A.cone)


def star_op(A, B):
    """Per-cone abelian operation; the identity element is the canonical basis."""
    _check_compatible(A, B)
    L = group_op(cone_factor(A), cone_factor(B))
    return cone_compose(L, A.pattern, A.cone)


def star_inv(A):
    return cone_compose(group_inv(cone_factor(A)), A.pattern, A.cone)


def log_cholesky_mean(points):
    """Barycentre of cone points: the eta-coordinate average of their factors.

    The manifold is flat, so the Frechet mean is the coordinate average; for
    two points this is the pairwise formula with arithmetic-mean strict-lower
    entries and geometric-mean diagonals.
    """
    points = list(points)
    if not points:
        raise ValueError("mean of an empty collection")
    first = points[0]
    for other in points[1:]:
        _check_compatible(first, other)
    coords = np.mean([eta(cone_factor(A)) for A in points], axis=0)
    return cone_compose(eta_inv(coords), first.pattern, first.cone)


def _klein_rev(L):
    return L.T[::-1, ::-1]


KLEIN_MAPS = {
    "id": lambda L: np.asarray(L, dtype=float),
    "inv": group_inv,
    "rev": _klein_rev,
    "rev_inv": lambda L: _klein_rev(group_inv(L)),
}


def klein_apply(sigma, L):
    """One of the four commuting isometric automorphisms of the group."""
    try:
        return KLEIN_MAPS[sigma](np.asarray(L, dtype=float))
    except KeyError:
        raise ValueError(f"unknown automorphism {sigma!r}; "
                         f"choose from {sorted(KLEIN_MAPS)}") from None
