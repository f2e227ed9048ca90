"""Monte-Carlo verification of stochastic inequalities for cone-valued walks.

A walk is a list of step distributions; partial sums are taken in the
per-cone group (fixed pattern, factor coordinates add) or in the global
group (patterns multiply as well). Both sides of each inequality are
estimated on the same simulated paths, and a report compares them with a
three-standard-error allowance.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import LPM, ConePoint, as_pattern
from .geometry import cone_factor, eta
from .errors import GroupMismatch, SpecInvalid
from .sampling import DistributionSpec, _factor_samples, clone_patterns, \
    cholesky_normal_etas, wishart_factors
from .biggroup import BigGroupElement

__all__ = ["Report", "WalkStats", "simulate_walk", "verify_from_stats",
           "verify_inequality", "INEQUALITIES", "PRESETS", "preset_config"]

INEQUALITIES = ("mogulskii_min", "mogulskii_max", "ottaviani_skorohod",
                "levy_ottaviani", "hoffmann_jorgensen")


@dataclass
class Report:
    """Estimates of both sides of one inequality, with a pass flag."""

    inequality: str
    n_paths: int
    lhs: float
    rhs: float
    lhs_se: float
    rhs_se: float
    passed: bool
    applicable: bool = True
    details: dict = field(default_factory=dict)


@dataclass
class WalkStats:
    """Per-path distance summaries of a simulated walk.

    d_z1[i, k]: distance from the reference point to the k-th partial sum;
    d_to_end[i, k]: distance from the k-th partial sum to the last one;
    d_inc[i, k]: distance from the identity to the k-th increment.
    """

    n_paths: int
    n_steps: int
    d_z1: np.ndarray
    d_to_end: np.ndarray
    d_inc: np.ndarray


def _eta_increments(rng, spec, paths):
    """Coordinate increments and their patterns for one walk step."""
    spec.validate()
    n = spec.dim
    if spec.kind == "inertial_clone":
        patterns = np.array(clone_patterns(spec), dtype=int)
        idx = rng.generator.integers(len(patterns), size=paths)
        factors = _factor_samples(rng, spec.base, paths)
        return _eta_batch(factors), patterns[idx]
    if spec.kind == "cholesky_normal":
        v = cholesky_normal_etas(rng, spec, size=paths)
        pattern = as_pattern(spec.m0.pattern)
    elif spec.kind == "wishart":
        v = _eta_batch(wishart_factors(rng, spec, size=paths))
        pattern = as_pattern(spec.pattern)
    else:
        raise SpecInvalid(f"walk steps cannot have kind {spec.kind!r}")
    return v, np.tile(np.array(pattern, dtype=int), (paths, 1))


def _eta_batch(Ls):
    n = Ls.shape[-1]
    idx = np.arange(n)
    rows, cols = np.tril_indices(n, -1)
    return np.concatenate([np.log(Ls[:, idx, idx]), Ls[:, rows, cols]], axis=1)


def _combine(d_eta, mismatch, p):
    if math.isinf(p):
        return np.maximum(d_eta, mismatch)
    return (d_eta**p + mismatch.astype(float) ** p) ** (1.0 / p)


def _reference(z1, n):
    if z1 is None:
        m = n * (n + 1) // 2
        return np.zeros(m), np.ones(n, dtype=int)
    if isinstance(z1, BigGroupElement):
        return eta(z1.factor), np.array(z1.pattern, dtype=int)
    if isinstance(z1, ConePoint):
        return eta(cone_factor(z1)), np.array(z1.pattern, dtype=int)
    v, pattern = z1
    return np.asarray(v, dtype=float), np.array(as_pattern(pattern), dtype=int)


def simulate_walk(rng, walk, paths, group="star", p=2, z1=None):
    """Simulate partial sums of the walk and collect the distance arrays.

    group='star' works inside one cone (all steps must share the pattern and
    the pattern of z1); group='box' works in the global group, where the
    metric adds a unit penalty for a pattern mismatch via the l^p norm.
    """
    walk = list(walk)
    if not walk:
        raise SpecInvalid("walk must have at least one step")
    n = walk[0].dim
    etas = []
    pats = []
    for spec in walk:
        if spec.dim != n:
            raise GroupMismatch("walk steps have mixed dimensions")
        v, pat = _eta_increments(rng, spec, paths)
        etas.append(v)
        pats.append(pat)
    etas = np.stack(etas, axis=1)          # (paths, steps, m)
    pats = np.stack(pats, axis=1)          # (paths, steps, n)
    z_eta, z_pat = _reference(z1, n)

    if group == "star":
        if not np.all(pats == pats[:, :1, :]):
            raise GroupMismatch("per-cone walks need one common pattern")
        if z1 is not None and not np.all(pats[0, 0] == z_pat):
            raise GroupMismatch("reference point lies in a different cone")
    elif group != "box":
        raise ValueError(f"group must be 'star' or 'box', got {group!r}")

    S_eta = np.cumsum(etas, axis=1)
    S_pat = np.cumprod(pats, axis=1)
    d_eta_z1 = np.linalg.norm(S_eta - z_eta, axis=2)
    d_eta_end = np.linalg.norm(S_eta[:, -1:, :] - S_eta, axis=2)
    d_eta_inc = np.linalg.norm(etas, axis=2)
    if group == "box":
        mis_z1 = np.any(S_pat != z_pat, axis=2)
        mis_end = np.any(S_pat != S_pat[:, -1:, :], axis=2)
        mis_inc = np.any(pats != 1, axis=2)
        d_z1 = _combine(d_eta_z1, mis_z1, p)
        d_end = _combine(d_eta_end, mis_end, p)
        d_inc = _combine(d_eta_inc, mis_inc, p)
    else:
        d_z1, d_end, d_inc = d_eta_z1, d_eta_end, d_eta_inc
    return WalkStats(n_paths=paths, n_steps=len(walk),
                     d_z1=d_z1, d_to_end=d_end, d_inc=d_inc)


def _prob(indicator):
    p = float(np.mean(indicator))
    return p, math.sqrt(p * (1.0 - p) / indicator.shape[0])


def _product(terms):
    """(value, se) of a product of (value, se) estimates, by the delta method."""
    values = [v for v, _ in terms]
    value = float(np.prod(values))
    var = 0.0
    for i, (_, se) in enumerate(terms):
        rest = float(np.prod(values[:i] + values[i + 1:]))
        var += (rest * se) ** 2
    return value, math.sqrt(var)


def _min_prob(indicators):
    """min_k P(event_k): value and the SE of the minimizing estimate."""
    probs = [_prob(ind) for ind in indicators]
    return min(probs, key=lambda t: t[0])


def _max_prob(indicators):
    probs = [_prob(ind) for ind in indicators]
    return max(probs, key=lambda t: t[0])


def verify_from_stats(stats, which, params):
    """Evaluate one inequality on precomputed walk statistics."""
    n = stats.n_steps
    d_z1, d_end, d_inc = stats.d_z1, stats.d_to_end, stats.d_inc
    details = dict(params)

    if which in ("mogulskii_min", "mogulskii_max"):
        a, b = float(params["a"]), float(params["b"])
        m = int(params.get("m", 1))
        if not 1 <= m <= n:
            raise SpecInvalid(f"need 1 <= m <= n, got m={m}")
        window = slice(m - 1, n)
        if which == "mogulskii_min":
            first = _prob(np.min(d_z1[:, window], axis=1) <= a)
            rhs = _prob(d_z1[:, -1] <= a + b)
        else:
            first = _prob(np.max(d_z1[:, window], axis=1) >= a)
            rhs = _prob(d_z1[:, -1] >= a - b)
        second = _min_prob([d_end[:, k] <= b for k in range(m - 1, n)])
        lhs = _product([first, second])
    elif which == "ottaviani_skorohod":
        alpha, beta = float(params["alpha"]), float(params["beta"])
        first = _prob(np.max(d_z1, axis=1) >= alpha + beta)
        second = _min_prob([d_end[:, k] <= beta for k in range(n)])
        lhs = _product([first, second])
        rhs = _prob(d_z1[:, -1] >= alpha)
    elif which == "levy_ottaviani":
        a_list = [float(a) for a in params["a_list"]]
        l = len(a_list)
        if l < 2:
            raise SpecInvalid("levy_ottaviani needs at least two thresholds")
        U = np.max(d_z1, axis=1)
        lhs = _prob(U > sum(a_list))
        terms = [_max_prob([d_z1[:, k] > a_list[i] for k in range(n)])
                 for i in range(1, l)]
        if l % 2 == 1:
            terms.append(_max_prob([d_z1[:, k] > a_list[0] for k in range(n)]))
        else:
            terms.append(_max_prob([d_end[:, k] > a_list[0] for k in range(n)]))
        rhs = (sum(v for v, _ in terms),
               math.sqrt(sum(se**2 for _, se in terms)))
    elif which == "hoffmann_jorgensen":
        counts = [int(c) for c in params["counts"]]
        thresholds = [float(t) for t in params["thresholds"]]
        s = float(params["s"])
        if len(counts) != len(thresholds) or not counts:
            raise SpecInvalid("counts and thresholds must align and be nonempty")
        if any(c < 1 for c in counts):
            return Report(inequality=which, n_paths=stats.n_paths, lhs=math.nan,
                          rhs=math.nan, lhs_se=math.nan, rhs_se=math.nan,
                          passed=False, applicable=False,
                          details={**details, "reason": "every count must be >= 1"})
        if sum(counts) > n + 1:
            return Report(inequality=which, n_paths=stats.n_paths, lhs=math.nan,
                          rhs=math.nan, lhs_se=math.nan, rhs_se=math.nan,
                          passed=False, applicable=False,
                          details={**details, "reason": "sum of counts exceeds n+1"})
        U = np.max(d_z1, axis=1)
        M = np.max(d_inc, axis=1)
        le = [_prob(U <= t) for t in thresholds]
        gt = [(1.0 - v, se) for v, se in le]
        in_zero = [le[i][0] ** (counts[i] - (1 if i == 0 else 0))
                   <= 1.0 / math.factorial(counts[i])
                   for i in range(len(counts))]
        bound = ((2 * counts[0] - 1) * thresholds[0]
                 + 2 * sum(c * t for c, t in zip(counts[1:], thresholds[1:]))
                 + (sum(counts) - 1) * s)
        lhs = _prob(U > bound)
        head = _prob(M > s)
        factors = []
        if not in_zero[0]:
            factors.append(le[0])
        for i, (c, flag) in enumerate(zip(counts, in_zero)):
            v, se = gt[i]
            if flag:
                factors.append((v**c, c * v ** max(c - 1, 0) * se))
            else:
                ratio = v / le[i][0]
                dratio = se / le[i][0] ** 2  # d(v/(1-v))/dv = 1/(1-v)^2
                factors.append((ratio**c / math.factorial(c),
                                c * ratio ** max(c - 1, 0) * dratio
                                / math.factorial(c)))
        tail = _product(factors) if factors else (1.0, 0.0)
        rhs = (head[0] + tail[0], math.sqrt(head[1] ** 2 + tail[1] ** 2))
        details["index_set"] = [i + 1 for i, f in enumerate(in_zero) if f]
        details["lhs_threshold"] = bound
    else:
        raise SpecInvalid(f"unknown inequality {which!r}; choose from {INEQUALITIES}")

    lhs_v, lhs_se = lhs
    rhs_v, rhs_se = rhs
    slack = 3.0 * math.sqrt(lhs_se**2 + rhs_se**2)
    return Report(inequality=which, n_paths=stats.n_paths, lhs=lhs_v, rhs=rhs_v,
                  lhs_se=lhs_se, rhs_se=rhs_se,
                  passed=bool(lhs_v <= rhs_v + slack), details=details)


def verify_inequality(rng, which, walk, params):
    """Simulate the walk and check one inequality; see verify_from_stats.

    params may carry 'paths' (default 10000), 'group' ('star' or 'box'),
    'p' (for the global metric), 'z1' (reference point), and the constants of
    the chosen inequality.
    """
    stats = simulate_walk(rng, walk, paths=int(params.get("paths", 10_000)),
                          group=params.get("group", "star"),
                          p=params.get("p", 2), z1=params.get("z1"))
    return verify_from_stats(stats, which, params)


def _pd_point(n):
    return ConePoint(matrix=np.eye(n), cone=LPM, pattern=as_pattern([1] * n))


def _lognormal_step(sigma2):
    return DistributionSpec(kind="cholesky_normal", m0=_pd_point(1),
                            sigma_tilde=np.array([[sigma2]]))


def _preset_pd(steps=10):
    walk = [_lognormal_step(1.0) for _ in range(steps)]
    return walk, {"group": "star"}


def _preset_box(steps=10):
    base = DistributionSpec(kind="wishart", pattern=(1, 1), cone=LPM,
                            sigma=0.25 * np.eye(2), dof=4)
    step = DistributionSpec(kind="inertial_clone", base=base, all_cones=True)
    return [step for _ in range(steps)], {"group": "box", "p": 2}


def _preset_deterministic(steps=10):
    step = DistributionSpec(kind="cholesky_normal", m0=_pd_point(1),
                            sigma_tilde=np.zeros((1, 1)))
    return [step for _ in range(steps)], {"group": "star"}


PRESETS = {
    "pd_walk": _preset_pd,
    "mixed_box_walk": _preset_box,
    "deterministic_walk": _preset_deterministic,
}

_PRESET_PARAMS = {
    "mogulskii_min": {"a": 1.0, "b": 1.0, "m": 1},
    "mogulskii_max": {"a": 2.0, "b": 1.0, "m": 1},
    "ottaviani_skorohod": {"alpha": 1.0, "beta": 1.0},
    "levy_ottaviani": {"a_list": [1.0, 1.0]},
    "hoffmann_jorgensen": {"counts": [2, 1], "thresholds": [1.0, 2.0], "s": 1.0},
}


def preset_config(name, which):
    """(walk, params) for one named preset and one inequality."""
    if name not in PRESETS:
        raise SpecInvalid(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    walk, base = PRESETS[name]()
    params = dict(base)
    params.update(_PRESET_PARAMS[which])
    return walk, params
