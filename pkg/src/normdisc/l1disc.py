"""L1 norm discretization: chaining budgets, falsifiers, certificates.

Unlike the L2 case there is no eigenvalue shortcut: whether a point set
discretizes the L1 norm of every polynomial in a space has to be argued
(chaining over an entropy curve) and attacked (optimization over the
space hunting for a polynomial that breaks the claimed two-sided ratio).
This module provides both directions:

* :func:`chaining_budget` / :func:`min_m_chaining` turn an entropy curve
  into a failure-probability budget for m iid uniform points and invert it,
* :func:`certify_l1` is the falsifier: deterministic adversarial candidates
  plus batched random-restart coordinate descent on the empirical-to-true
  ratio, reporting the worst ratios found as an :class:`L1Certificate`,
* :func:`discrepancy` and :func:`nikolskii_check` are the small measurement
  tools shared by tests and scripts.

All torus L_q norms here are taken with respect to an explicit oversampled
quadrature; certificates record ratios relative to that reference rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .entropy import EntropyCurve, conditional_entropy_curve, entropy_curve_trig
from .spaces import (
    TWO_PI,
    FrequencySet,
    PointSet,
    Quadrature,
    TrigPolynomial,
    build_hyperbolic_cross,
    norm_values_lp,
    poly_norm,
)

LOG_HUGE = 700.0  # exp beyond this overflows a double


# ---------------------------------------------------------------------------
# discrepancy of a point set on a single polynomial


def discrepancy(f: TrigPolynomial, pointset: PointSet, q: float, quad: Quadrature | None = None) -> float:
    """(weighted mean of |f|^q over the points) minus ||f||_q^q."""
    if quad is None:
        quad = Quadrature.tensor_torus(f.support.max_abs)
    w = pointset.effective_weights()
    emp = float(w @ np.abs(f.evaluate(pointset.points)) ** q)
    return emp - poly_norm(f, q, quad) ** q


@dataclass
class DiscrepancyFunctional:
    """Reusable discrepancy evaluator with a fixed point set and exponent."""

    pointset: PointSet
    q: float
    quadrature: Quadrature

    def __call__(self, f: TrigPolynomial) -> float:
        return discrepancy(f, self.pointset, self.q, self.quadrature)


# ---------------------------------------------------------------------------
# chaining failure-probability budgets


@dataclass(frozen=True)
class ChainingParams:
    """Inputs of the L1 chaining budget over a class of unit-norm elements.

    ``size`` is the space dimension (|Q| for a trigonometric space), ``n``
    the cross level, ``dim`` the torus dimension.  ``eta`` is the target
    two-sided accuracy of the discretization, restricted to (0, 1/4]: the
    chaining radii are calibrated to eta/4.  With ``curve="trig"`` the
    entropy curve is the level-n cross curve with constant ``c4`` and the
    per-level accuracy is eta/(4 n dim); with ``curve="conditional"`` an
    assumed curve B * min(N/k, 2^(-k/N)) is used and the accuracy is split
    evenly over the J active levels.  ``sup_bound`` (default: size) bounds
    the sup norm of class members and feeds the first, Bernstein-type term.
    """

    size: int
    n: int
    dim: int = 1
    eta: float = 0.25
    c4: float = 1.0
    curve: str = "trig"
    big_b: float = 1.0
    bernstein_c: float = 8.0
    pair_c: float = 16.0
    sup_bound: float | None = None

    def __post_init__(self):
        if not (0.0 < self.eta <= 0.25):
            raise ValueError("eta must lie in (0, 1/4]")
        if self.curve not in ("trig", "conditional"):
            raise ValueError("curve must be 'trig' or 'conditional'")
        if self.size < 1 or self.n < 1 or self.dim < 1:
            raise ValueError("size, n and dim must be positive")

    def entropy_curve(self) -> EntropyCurve:
        if self.curve == "trig":
            return entropy_curve_trig(self.size, self.n, self.c4)
        return conditional_entropy_curve(self.size, self.big_b)

    @property
    def m_bern(self) -> float:
        return float(self.size if self.sup_bound is None else self.sup_bound)


@dataclass
class ChainingBudget:
    """Failure-probability budget of one (params, m) pair, term by term."""

    m: int
    J: int
    eta_level: float
    first_log: float  # natural-log of the Bernstein term
    level_logs: list[tuple[int, float, float]]  # (j, delta_{j-1}, log term)
    log_total: float
    in_theorem_window: bool
    two_J_bound: float
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return math.inf if self.log_total > LOG_HUGE else math.exp(self.log_total)


def _find_terminal_level(curve: EntropyCurve, eta: float) -> int:
    target = math.log2(eta / 4.0)
    for j in range(1, 64):
        if curve.log2_bound(2.0**j) <= target:
            return j
    raise RuntimeError("entropy curve does not reach eta/4")


def chaining_budget(params: ChainingParams, m: int) -> ChainingBudget:
    """Failure probability that m iid uniform points miss eta-accuracy.

    The budget walks the entropy curve dyadically: delta_j = bound(2^j),
    stopping at the first J with delta_J <= eta/4.  One Bernstein term
    covers the coarsest net; each level 2..J contributes a union bound over
    at most 2^(2^j) pairs with increments controlled by delta_{j-1}:

        8 exp(-m eta_lvl^2 / (8 M))
          + sum_j 2 * 2^(2^j) exp(-m eta_lvl^2 / (16 delta_{j-1})).

    Everything is evaluated in log space; the count 2^(2^j) overflows a
    double long before the budget itself is meaningful.
    """
    if m < 1:
        raise ValueError("m must be positive")
    curve = params.entropy_curve()
    J = _find_terminal_level(curve, params.eta)
    if params.curve == "trig":
        eta_level = params.eta / (4.0 * params.n * params.dim)
    else:
        eta_level = params.eta / (4.0 * J)
    first_log = math.log(2.0 * 4.0) - m * eta_level**2 / (params.bernstein_c * params.m_bern)
    level_logs = []
    for j in range(2, J + 1):
        delta_prev = curve.bound(2.0 ** (j - 1))
        t = math.log(2.0) * (1.0 + 2.0**j) - m * eta_level**2 / (params.pair_c * delta_prev)
        level_logs.append((j, delta_prev, t))
    logs = [first_log] + [t for _, _, t in level_logs]
    peak = max(logs)
    log_total = peak + math.log(sum(math.exp(t - peak) for t in logs))
    in_window = (J <= 2 * params.n * params.dim) if params.curve == "trig" else True
    two_j = 4.0 * params.size * max(1.0, math.log2(4.0 * params.c4 * params.n**1.5 / params.eta))
    return ChainingBudget(
        m=m,
        J=J,
        eta_level=eta_level,
        first_log=first_log,
        level_logs=level_logs,
        log_total=log_total,
        in_theorem_window=in_window,
        two_J_bound=two_j,
        meta={"curve": params.curve, "m_bern": params.m_bern},
    )


def min_m_chaining(params: ChainingParams, target: float = 1.0) -> int:
    """Smallest m whose chaining budget drops strictly below ``target``."""
    if target <= 0:
        raise ValueError("target must be positive")
    log_target = math.log(target)

    def ok(m: int) -> bool:
        return chaining_budget(params, m).log_total < log_target

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > 2**60:
            raise RuntimeError("budget does not reach the target")
    lo = hi // 2  # ok(lo) is False (or lo == 0)
    lo = max(lo, 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid >= 1 and ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# random point sets and the falsifier


def random_l1_pointset(dim: int, m: int, seed: int = 0) -> PointSet:
    rng = np.random.default_rng(seed)
    return PointSet(rng.uniform(0.0, TWO_PI, size=(m, dim)))


@dataclass(frozen=True)
class FalsifierEffort:
    restarts: int = 200
    iters: int = 500
    subsample_cap: int = 512
    translate_cap: int = 128
    hole_count: int = 8
    step_init: float = 0.5
    oversample: int = 16

    @classmethod
    def quick(cls) -> "FalsifierEffort":
        return cls(restarts=40, iters=150, oversample=8)


@dataclass
class L1Certificate:
    """Worst empirical-to-true L1 ratios a falsification attack could find.

    ``r_min``/``r_max`` bound the attack's best violations from below and
    above; ``passed`` compares them against the target ratio window.  A
    certificate is only as strong as the attack: it proves the presence of
    violations, never their absence.
    """

    r_min: float
    r_max: float
    argmin_coeffs: np.ndarray
    argmax_coeffs: np.ndarray
    n_candidates: int
    targets: tuple[float, float]
    passed: bool
    effort: FalsifierEffort
    seed: int
    meta: dict = field(default_factory=dict)


def _ratio_batch(C: np.ndarray, point_values: np.ndarray, quad_values: np.ndarray, quad_w: np.ndarray, point_w: np.ndarray) -> np.ndarray:
    """Empirical/true L1 ratio for a batch of coefficient rows."""
    emp = np.abs(C @ point_values) @ point_w
    tru = np.abs(C @ quad_values) @ quad_w
    return emp / np.maximum(tru, 1e-300)


def _deep_holes(points: np.ndarray, dim: int, count: int, resolution: int = 4096) -> np.ndarray:
    """Torus points far (in l-infinity) from every input point."""
    if dim == 1:
        grid = TWO_PI * np.arange(resolution) / resolution
        d = np.abs(grid[:, None] - points[:, 0][None, :])
        d = np.minimum(d, TWO_PI - d)
        score = d.min(axis=1)
    else:
        per_axis = max(8, int(round(resolution ** (1.0 / dim))))
        axes = [TWO_PI * np.arange(per_axis) / per_axis] * dim
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
        d = np.abs(mesh[:, None, :] - points[None, :, :])
        d = np.minimum(d, TWO_PI - d).max(axis=2)
        score = d.min(axis=1)
        grid = mesh
    order = np.argsort(score)[::-1][:count]
    if dim == 1:
        return grid[order].reshape(-1, 1)
    return grid[order]


def _deterministic_candidates(Q: FrequencySet, pointset: PointSet, effort: FalsifierEffort) -> np.ndarray:
    """Coefficient rows of structured attack polynomials."""
    rows = []
    nq = len(Q)
    # single exponentials: |f| constant, ratio exactly one
    eye = np.eye(nq, dtype=complex)
    rows.append(eye)
    # kernel translates centered at sampling points: mass concentrates there
    pts = pointset.points[: effort.translate_cap]
    rows.append(np.exp(-1j * (pts @ Q.array.T)))
    # kernel translates centered at deep holes: mass hides from the points
    holes = _deep_holes(pointset.points, Q.dim, effort.hole_count)
    rows.append(np.exp(-1j * (holes @ Q.array.T)))
    # vanishing pairs: e_{k_a} - phase * e_{k_b} is zero at the first point
    if pointset.m >= 1 and nq >= 2:
        xi = pointset.points[0]
        pair_rows = []
        for a in range(min(nq, 8)):
            for b in range(a + 1, min(nq, 8)):
                ka, kb = Q.array[a], Q.array[b]
                phase = np.exp(1j * float((ka - kb) @ xi))
                row = np.zeros(nq, dtype=complex)
                row[a] = 1.0
                row[b] = -phase
                pair_rows.append(row)
        if pair_rows:
            rows.append(np.array(pair_rows))
    return np.concatenate(rows, axis=0)


def _optimize_ratio(C0: np.ndarray, point_values: np.ndarray, quad_values: np.ndarray, quad_w: np.ndarray, point_w: np.ndarray, effort: FalsifierEffort, sign: float, rng: np.random.Generator, min_l1: float) -> np.ndarray:
    """Batched coordinate descent on the ratio; sign=+1 minimizes, -1 maximizes.

    Works on the real and imaginary parts of one coefficient at a time with
    a shrinking step, renormalizing rows to the coefficient sphere after
    every sweep (the objective is scale invariant).  Rows whose true norm
    collapses below ``min_l1`` are re-randomized: the ratio is undefined in
    the limit and its subgradients are useless there.
    """
    C = C0.copy()
    nq = C.shape[1]
    step = effort.step_init
    obj = sign * _ratio_batch(C, point_values, quad_values, quad_w, point_w)
    for it in range(effort.iters):
        coord = it % nq
        delta = step if (it // nq) % 2 == 0 else step * 1j
        for direction in (delta, -delta):
            C_try = C.copy()
            C_try[:, coord] += direction
            C_try /= np.maximum(np.linalg.norm(C_try, axis=1)[:, None], 1e-300)
            tru = np.abs(C_try @ quad_values) @ quad_w
            bad = tru < min_l1
            cand = sign * _ratio_batch(C_try, point_values, quad_values, quad_w, point_w)
            cand[bad] = np.inf
            better = cand < obj
            C[better] = C_try[better]
            obj[better] = cand[better]
        if coord == nq - 1:
            step *= 0.9
            if step < 1e-4:
                step = effort.step_init * 0.1
                fresh = rng.standard_normal(C.shape) + 1j * rng.standard_normal(C.shape)
                worst = np.argsort(obj)[-max(1, len(obj) // 10) :]
                C[worst] = fresh[worst] / np.linalg.norm(fresh[worst], axis=1)[:, None]
                obj[worst] = sign * _ratio_batch(C[worst], point_values, quad_values, quad_w, point_w)
    return C


def certify_l1(pointset: PointSet, Q: FrequencySet, targets: tuple[float, float] = (0.5, 1.5), effort: FalsifierEffort | None = None, seed: int = 0) -> L1Certificate:
    """Attack the two-sided L1 discretization claim of a point set.

    Reports the smallest and largest ratio (weighted empirical L1 mean over
    the points) / (true L1 norm) found over the space of polynomials on Q,
    using structured candidates and batched random-restart descent.  Ratios
    of all candidates are evaluated exactly (relative to the reference
    quadrature) on the full point set; the optimizer itself may run on a
    subsample for speed.
    """
    if effort is None:
        effort = FalsifierEffort()
    rng = np.random.default_rng(seed)
    quad = Quadrature.tensor_torus(Q.max_abs, oversample=effort.oversample)
    # value tables: columns are evaluation points, rows will be coefficients
    quad_values = np.exp(1j * (Q.array @ quad.nodes.T))  # (|Q|, n_quad)
    point_values_full = np.exp(1j * (Q.array @ pointset.points.T))
    w_full = pointset.effective_weights()

    det = _deterministic_candidates(Q, pointset, effort)
    det /= np.maximum(np.linalg.norm(det, axis=1)[:, None], 1e-300)

    if pointset.m > effort.subsample_cap:
        sub = rng.choice(pointset.m, size=effort.subsample_cap, replace=False)
        point_values = point_values_full[:, sub]
        w_sub = w_full[sub]
        w_sub = w_sub / w_sub.sum()
    else:
        point_values = point_values_full
        w_sub = w_full

    min_l1 = 1.0 / math.sqrt(len(Q))  # unit coefficient sphere keeps ||f||_1 above this
    half = max(1, effort.restarts // 2)
    C_rand = rng.standard_normal((2 * half, len(Q))) + 1j * rng.standard_normal((2 * half, len(Q)))
    C_rand /= np.linalg.norm(C_rand, axis=1)[:, None]
    C_min = _optimize_ratio(C_rand[:half], point_values, quad_values, quad.weights, w_sub, effort, +1.0, rng, min_l1)
    C_max = _optimize_ratio(C_rand[half:], point_values, quad_values, quad.weights, w_sub, effort, -1.0, rng, min_l1)

    all_C = np.concatenate([det, C_min, C_max], axis=0)
    ratios = _ratio_batch(all_C, point_values_full, quad_values, quad.weights, w_full)
    # rows that collapsed to zero true norm are meaningless
    tru = np.abs(all_C @ quad_values) @ quad.weights
    ratios[tru < 1e-12] = 1.0
    i_min = int(np.argmin(ratios))
    i_max = int(np.argmax(ratios))
    r_min, r_max = float(ratios[i_min]), float(ratios[i_max])
    return L1Certificate(
        r_min=r_min,
        r_max=r_max,
        argmin_coeffs=all_C[i_min],
        argmax_coeffs=all_C[i_max],
        n_candidates=all_C.shape[0],
        targets=targets,
        passed=(r_min >= targets[0]) and (r_max <= targets[1]),
        effort=effort,
        seed=seed,
        meta={"m": pointset.m, "space": len(Q), "subsampled": pointset.m > effort.subsample_cap},
    )


# ---------------------------------------------------------------------------
# sanity inequalities


def nikolskii_check(Q: FrequencySet, sample_size: int = 100, seed: int = 0, p_list=(1.0, 2.0), oversample: int = 8) -> dict:
    """Verify ||f||_inf <= |Q| ||f||_p on random polynomials.

    For p >= 2 the sharper constant sqrt(|Q|) is checked instead.  The sup
    norm is evaluated as a refined grid maximum, i.e. a lower bound of the
    true sup norm, so a reported violation is a real one.
    """
    rng = np.random.default_rng(seed)
    quad = Quadrature.tensor_torus(Q.max_abs, oversample=oversample)
    out = {p: {"max_ratio": 0.0, "violations": 0} for p in p_list}
    for _ in range(sample_size):
        c = rng.standard_normal(len(Q)) + 1j * rng.standard_normal(len(Q))
        f = TrigPolynomial(Q, c)
        sup = poly_norm(f, math.inf, quad)
        for p in p_list:
            const = len(Q) if p < 2 else math.sqrt(len(Q))
            np_norm = norm_values_lp(f.evaluate(quad.nodes), quad.weights, p)
            ratio = sup / (const * np_norm)
            rec = out[p]
            rec["max_ratio"] = max(rec["max_ratio"], ratio)
            if ratio > 1.0 + 1e-9:
                rec["violations"] += 1
    return out
