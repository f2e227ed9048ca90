import numpy as np

from lpmch import all_patterns, cone_compose


def random_lower(rng, n, complex_scalars=False):
    """Random lower triangular matrix with diagonal in [0.5, 2]."""
    L = np.tril(rng.standard_normal((n, n)), -1)
    if complex_scalars:
        L = L + 1j * np.tril(rng.standard_normal((n, n)), -1)
    return L + np.diag(rng.uniform(0.5, 2.0, n))


def random_cone_point(rng, eps, cone="lpm", complex_scalars=False):
    """Random point of the cone with pattern eps, built through composition."""
    L = random_lower(rng, len(eps), complex_scalars)
    return cone_compose(L, eps, cone)


def patterns_up_to(n):
    for m in range(1, n + 1):
        yield from all_patterns(m)
