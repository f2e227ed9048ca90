"""Sign-regular principal minors: membership test and example families.

A symmetric matrix is SSRPM when, for every size k, all of its k x k
principal minors (not just the leading ones) are nonzero and share one
sign. The test is exponential in n and capped accordingly.
"""

from itertools import combinations

import numpy as np

from .core import DEFAULT_TOL, scale, symmetrize
from .errors import ConstraintViolation, DegenerateParameters, DimensionCap

__all__ = ["is_ssrpm", "toeplitz_example", "almost_n_example", "DEFAULT_CAP"]

DEFAULT_CAP = 14


def is_ssrpm(A, tol=DEFAULT_TOL, cap=DEFAULT_CAP):
    """The common sign pattern of all principal minors, or None.

    Returns the pattern (sign of every k x k principal minor, k = 1..n) when
    one exists and every minor clears the scale-aware tolerance; None as soon
    as some size is mixed-sign or some minor is zero up to tolerance.
    """
    A = symmetrize(np.asarray(A, dtype=float))
    n = A.shape[0]
    if n > cap:
        raise DimensionCap(f"n={n} exceeds the SSRPM cap {cap}")
    s = max(1.0, scale(A))
    pattern = []
    for k in range(1, n + 1):
        cutoff = tol * s**k
        sign_k = 0
        for subset in combinations(range(n), k):
            idx = np.asarray(subset)
            minor = float(np.linalg.det(A[np.ix_(idx, idx)]))
            if abs(minor) <= cutoff:
                return None
            sign = 1 if minor > 0 else -1
            if sign_k == 0:
                sign_k = sign
            elif sign != sign_k:
                return None
        pattern.append(sign_k)
    return tuple(pattern)


def toeplitz_example(a, b, n):
    """The matrix b*J + (a-b)*Id and its predicted principal-minor pattern.

    Every k x k principal minor equals (a + (k-1)b) * (a-b)**(k-1), so the
    pattern is read off the closed form. Degenerate parameters (a = b, or
    a + (k-1)b = 0 for some k) are rejected.
    """
    if a == b:
        raise DegenerateParameters("a == b makes all 2x2 minors vanish")
    pattern = []
    for k in range(1, n + 1):
        minor = (a + (k - 1) * b) * (a - b) ** (k - 1)
        if minor == 0:
            raise DegenerateParameters(f"a + (k-1)b = 0 at k={k}")
        pattern.append(1 if minor > 0 else -1)
    M = b * np.ones((n, n)) + (a - b) * np.eye(n)
    return M, tuple(pattern)


def almost_n_example(a, b, c, n):
    """An almost-N matrix: all proper principal minors negative, det positive.

    Built as the Toeplitz example with the last diagonal entry replaced by c;
    the parameters must satisfy 0 > a > b and
    (n-2)b^2/(a+(n-3)b) < c < (n-1)b^2/(a+(n-2)b) < 0.
    """
    if n < 3:
        raise ConstraintViolation(f"need n >= 3, got {n}")
    if not a < 0:
        raise ConstraintViolation(f"need a < 0, got a={a}")
    if not b < a:
        raise ConstraintViolation(f"need b < a, got a={a}, b={b}")
    lower = (n - 2) * b**2 / (a + (n - 3) * b)
    upper = (n - 1) * b**2 / (a + (n - 2) * b)
    if not upper < 0:
        raise ConstraintViolation(f"need (n-1)b^2/(a+(n-2)b) < 0, got {upper}")
    if not lower < c:
        raise ConstraintViolation(f"need c > (n-2)b^2/(a+(n-3)b) = {lower}, got c={c}")
    if not c < upper:
        raise ConstraintViolation(f"need c < (n-1)b^2/(a+(n-2)b) = {upper}, got c={c}")
    M, _ = toeplitz_example(a, b, n)
    M[n - 1, n - 1] = c
    return M
