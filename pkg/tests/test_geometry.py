import numpy as np
import pytest

from conftest import random_cone_point, random_lower
from lpmch import (
    all_patterns,
    canonical_point,
    classify,
    compose,
    differential,
    differential_inv,
    distance,
    eta,
    eta_inv,
    geodesic,
    geodesic_between,
    group_inv,
    group_op,
    klein_apply,
    log_cholesky_mean,
    lpm_distance,
    lpm_geodesic,
    metric_tensor,
    scalar_mul,
    star_inv,
    star_op,
)
from lpmch.errors import PatternMismatch
from lpmch.geometry import KLEIN_MAPS, cone_factor

L_WITNESS = np.array([[1.0, 0.0], [2.0, 2.0]])


def test_group_op():
    rng = np.random.default_rng(0)
    L = random_lower(rng, 4)
    assert np.allclose(group_op(L, np.eye(4)), L)
    assert np.allclose(group_op(L_WITNESS, L_WITNESS), [[1, 0], [4, 4]])
    for _ in range(20):
        K, J = random_lower(rng, 4), random_lower(rng, 4)
        assert np.allclose(group_op(K, J), group_op(J, K))


def test_group_inv():
    assert np.allclose(group_inv(np.eye(3)), np.eye(3))
    inv = group_inv(L_WITNESS)
    assert np.allclose(inv, [[1, 0], [-2, 0.5]])
    assert np.allclose(group_op(L_WITNESS, inv), np.eye(2))
    assert np.allclose(np.linalg.inv(inv), [[1, 0], [4, 2]])


def test_matrix_inverse_is_not_a_group_map():
    # Regression: the two ways of "inverting" genuinely differ.
    a = np.linalg.inv(group_inv(L_WITNESS))
    b = group_inv(np.linalg.inv(L_WITNESS))
    assert not np.allclose(a, b)


def test_scalar_mul():
    rng = np.random.default_rng(1)
    L = random_lower(rng, 3)
    assert np.allclose(scalar_mul(1.0, L), L)
    assert np.allclose(scalar_mul(0.0, L), np.eye(3))
    assert np.allclose(scalar_mul(0.5, np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    # vector-space axioms through eta
    assert np.allclose(eta(scalar_mul(2.5, L)), 2.5 * eta(L))


def test_eta():
    assert np.array_equal(eta(np.eye(3)), np.zeros(6))
    assert np.allclose(eta(L_WITNESS), [0.0, np.log(2.0), 2.0])
    rng = np.random.default_rng(2)
    for _ in range(20):
        L = random_lower(rng, 5)
        K = random_lower(rng, 5)
        assert np.allclose(eta_inv(eta(L)), L)
        assert np.allclose(eta(group_op(L, K)), eta(L) + eta(K))
        assert np.allclose(eta(group_inv(L)), -eta(L))


def test_distance_paper_values():
    assert distance(L_WITNESS, np.eye(2)) == pytest.approx(
        np.sqrt(4 + np.log(2.0) ** 2), abs=1e-12)
    assert distance(np.array([[1.0, 0.0], [-1.0, 0.5]]), np.eye(2)) == pytest.approx(
        np.sqrt(1 + np.log(2.0) ** 2), abs=1e-12)
    assert distance(L_WITNESS, L_WITNESS) == 0.0


def test_distance_is_a_bi_invariant_metric():
    rng = np.random.default_rng(3)
    for _ in range(20):
        L, K, J = (random_lower(rng, 4) for _ in range(3))
        assert distance(L, K) == pytest.approx(distance(K, L), abs=1e-12)
        assert distance(L, K) <= distance(L, J) + distance(J, K) + 1e-12
        assert distance(group_op(J, L), group_op(J, K)) == pytest.approx(
            distance(L, K), abs=1e-12)


def test_metric_tensor():
    rng = np.random.default_rng(4)
    X = np.tril(rng.standard_normal((3, 3)))
    Y = np.tril(rng.standard_normal((3, 3)))
    assert metric_tensor(np.eye(3), X, Y) == pytest.approx(np.sum(X * Y))
    for _ in range(20):
        L = random_lower(rng, 3)
        Z = np.tril(rng.standard_normal((3, 3)))
        assert metric_tensor(L, Z, Z) > 0


def test_metric_matches_geodesic_speed():
    rng = np.random.default_rng(5)
    L = random_lower(rng, 3)
    X = np.tril(rng.standard_normal((3, 3)))
    t = 1e-4
    speed = distance(L, geodesic(L, X, t)) / t
    assert speed == pytest.approx(np.sqrt(metric_tensor(L, X, X)), rel=1e-5)


def test_geodesic():
    rng = np.random.default_rng(6)
    L = random_lower(rng, 4)
    X = np.tril(rng.standard_normal((4, 4)))
    assert np.allclose(geodesic(L, X, 0.0), L)
    assert np.allclose(geodesic(np.eye(2), np.eye(2), 1.0), np.e * np.eye(2))
    base = distance(L, geodesic(L, X, 1.0))
    for t in (0.25, 0.5, 2.0):
        assert distance(L, geodesic(L, X, t)) == pytest.approx(abs(t) * base,
                                                               abs=1e-10)


def test_geodesic_one_parameter_subgroup():
    rng = np.random.default_rng(7)
    X = np.tril(rng.standard_normal((4, 4)))
    for s, t in [(0.3, 0.9), (-1.0, 2.0)]:
        lhs = geodesic(np.eye(4), X, s + t)
        rhs = group_op(geodesic(np.eye(4), X, s), geodesic(np.eye(4), X, t))
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_geodesic_between():
    rng = np.random.default_rng(8)
    L, K = random_lower(rng, 4), random_lower(rng, 4)
    assert np.allclose(geodesic_between(L, K, 0.0), L, atol=1e-12)
    assert np.allclose(geodesic_between(L, K, 1.0), K, atol=1e-12)
    assert np.allclose(geodesic_between(L, L, 0.5), L, atol=1e-12)
    mid = geodesic_between(np.eye(2), np.diag([4.0, 4.0]), 0.5)
    assert np.allclose(mid, np.diag([2.0, 2.0]), atol=1e-12)


def test_differential():
    rng = np.random.default_rng(9)
    X = np.tril(rng.standard_normal((3, 3)))
    assert np.allclose(differential(np.eye(3), X, (1, 1, 1)), X + X.T)
    for eps in all_patterns(3):
        for _ in range(10):
            L = random_lower(rng, 3)
            Z = np.tril(rng.standard_normal((3, 3)))
            W = differential(L, Z, eps)
            assert np.allclose(differential_inv(L, W, eps), Z, atol=1e-10)


def test_differential_finite_difference():
    rng = np.random.default_rng(10)
    eps = (1, -1, 1)
    D = canonical_point(eps)
    L = random_lower(rng, 3)
    X = np.tril(rng.standard_normal((3, 3)))
    h = 1e-6
    fd = (compose(L + h * X, D).matrix - compose(L, D).matrix) / h
    assert np.abs(fd - differential(L, X, eps)).max() < 1e-4


def test_star_structure():
    rng = np.random.default_rng(11)
    for eps in all_patterns(3):
        D = canonical_point(eps)
        A = random_cone_point(rng, eps)
        B = random_cone_point(rng, eps)
        assert np.allclose(star_op(D, A).matrix, A.matrix, atol=1e-10)
        assert np.allclose(star_op(A, star_inv(A)).matrix, D.matrix, atol=1e-10)
        assert np.allclose(star_op(A, B).matrix, star_op(B, A).matrix, atol=1e-10)


def test_lpm_distance_isometry():
    rng = np.random.default_rng(12)
    for eps in all_patterns(3):
        D = canonical_point(eps)
        L, K = random_lower(rng, 3), random_lower(rng, 3)
        assert lpm_distance(compose(L, D), compose(K, D)) == pytest.approx(
            distance(L, K), abs=1e-10)


def test_lpm_geometry_transfers_group_laws():
    # Every Cholesky-space identity holds verbatim on each cone.
    rng = np.random.default_rng(13)
    for n in range(1, 5):
        for eps in all_patterns(n):
            A, B, C = (random_cone_point(rng, eps) for _ in range(3))
            assert lpm_distance(star_op(C, A), star_op(C, B)) == pytest.approx(
                lpm_distance(A, B), abs=1e-10)
            assert np.allclose(lpm_geodesic(A, B, 1.0).matrix, B.matrix,
                               atol=1e-10)
            assert np.allclose(lpm_geodesic(A, B, 0.0).matrix, A.matrix,
                               atol=1e-10)


def test_tpm_geometry():
    rng = np.random.default_rng(14)
    eps = (1, -1)
    A = random_cone_point(rng, eps, cone="tpm")
    B = random_cone_point(rng, eps, cone="tpm")
    C = canonical_point(eps, cone="tpm")
    assert np.allclose(star_op(C, A).matrix, A.matrix, atol=1e-10)
    assert lpm_distance(A, B) > 0
    assert classify(lpm_geodesic(A, B, 0.5).matrix, cone="tpm").pattern == eps


def test_pattern_mismatch():
    rng = np.random.default_rng(15)
    A = random_cone_point(rng, (1, 1))
    B = random_cone_point(rng, (1, -1))
    with pytest.raises(PatternMismatch):
        star_op(A, B)
    with pytest.raises(PatternMismatch):
        lpm_distance(A, B)


def test_log_cholesky_mean():
    rng = np.random.default_rng(16)
    eps = (1, -1, 1)
    D = canonical_point(eps)
    A = random_cone_point(rng, eps)
    B = random_cone_point(rng, eps)
    assert np.allclose(log_cholesky_mean([A]).matrix, A.matrix, atol=1e-12)

    # Two-point closed form on the factors.
    L, K = cone_factor(A), cone_factor(B)
    pair = cone_factor(log_cholesky_mean([A, B]))
    expected = np.tril(L + K, -1) / 2 + np.diag(
        np.sqrt(np.diagonal(L) * np.diagonal(K)))
    assert np.allclose(pair, expected, atol=1e-10)

    assert np.allclose(log_cholesky_mean([A, star_inv(A)]).matrix, D.matrix,
                       atol=1e-10)


def test_klein_maps():
    rng = np.random.default_rng(17)
    assert np.allclose(klein_apply("rev", L_WITNESS), [[2, 0], [2, 1]])
    for _ in range(10):
        L, K = random_lower(rng, 4), random_lower(rng, 4)
        for sigma in KLEIN_MAPS:
            out = klein_apply(sigma, klein_apply(sigma, L))
            assert np.allclose(out, L, atol=1e-12)
            assert distance(klein_apply(sigma, L), klein_apply(sigma, K)) == \
                pytest.approx(distance(L, K), abs=1e-12)
    with pytest.raises(ValueError):
        klein_apply("nope", np.eye(2))
