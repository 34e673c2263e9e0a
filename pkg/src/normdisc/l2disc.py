"""L2 norm discretization: certificates, random sets, greedy and barrier methods.

For a point set (xi_1..xi_m, weights lam) and a system u_1..u_N, the matrix

    M = sum_nu lam_nu u(xi_nu) u(xi_nu)^T

controls the discretization quality of every f = <c, u> in the span:

    lam_min(M) ||f||_2^2 <= sum_nu lam_nu f(xi_nu)^2 <= lam_max(M) ||f||_2^2.

:class:`SpectralCertificate` records those extremal eigenvalues, which makes
every claim this module produces checkable by direct eigenvalue computation.
Constructions:

* :func:`random_l2_pointset`   iid uniform points, best certificate of a few
  draws; :func:`concentration_budget` gives the matching failure-probability
  budget and :func:`min_m_concentration` inverts it,
* :func:`frobenius_rga_pointset` greedy point selection with the guaranteed
  Frobenius bound ``||(1/m) sum G(xi_k) - I||_F <= 2 N t^2 / sqrt(m)``,
* :func:`bss_weighted_sparsify` barrier-potential weighted sparsification
  with support ceil(d N) and condition-number ratio at most
  ``(d + 1 + 2 sqrt(d)) / (d + 1 - 2 sqrt(d))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spaces import MissingConstant, OrthonormalSystem, PointSet

LOG2 = math.log(2.0)
SUBGAUSS_C = 2.0 / LOG2  # constant in the exponent of the deviation bound


@dataclass
class SpectralCertificate:
    """Extremal eigenvalues of the discretization matrix of a point set."""

    lam_min: float
    lam_max: float
    n_points: int
    frobenius_residual: float
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def eps(self) -> float:
        """Smallest eps with 1-eps <= M <= 1+eps (in the spectral order)."""
        return max(1.0 - self.lam_min, self.lam_max - 1.0)

    @property
    def ratio(self) -> float:
        return self.lam_max / self.lam_min if self.lam_min > 0 else math.inf


EIGH_CUTOFF = 512


def extremal_eigenvalues(M: np.ndarray, tol: float = 1e-10, max_iter: int = 100_000) -> tuple[float, float, str]:
    """(lam_min, lam_max) of a symmetric PSD matrix.

    Full decomposition up to dimension 512; beyond that, power iteration for
    lam_max and again on ``lam_max I - M`` for lam_min.
    """
    n = M.shape[0]
    if n <= EIGH_CUTOFF:
        vals = np.linalg.eigvalsh(M)
        return float(vals[0]), float(vals[-1]), "eigh"

    def power(A):
        v = np.ones(n) + 1e-3 * np.arange(n) / n
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(max_iter):
            w = A @ v
            nw = np.linalg.norm(w)
            if nw == 0.0:
                return 0.0
            v = w / nw
            new = float(v @ (A @ v))
            if abs(new - lam) <= tol * max(1.0, abs(new)):
                return new
            lam = new
        return lam

    lam_max = power(M)
    lam_min = lam_max - power(lam_max * np.eye(n) - M)
    return float(lam_min), float(lam_max), "power"


def discretization_matrix(system: OrthonormalSystem, pointset: PointSet) -> np.ndarray:
    U = system.evaluate(pointset.points)
    w = pointset.effective_weights()
    return (U * w[:, None]).T @ U


def l2_certificate(system: OrthonormalSystem, pointset: PointSet) -> SpectralCertificate:
    M = discretization_matrix(system, pointset)
    lo, hi, method = extremal_eigenvalues(M)
    frob = float(np.linalg.norm(M - np.eye(system.size)))
    return SpectralCertificate(
        lam_min=lo,
        lam_max=hi,
        n_points=pointset.m,
        frobenius_residual=frob,
        method=method,
    )


# ---------------------------------------------------------------------------
# random points with concentration budgets


def concentration_budget(N: int, t: float, eta: float, m: int, c: float = SUBGAUSS_C) -> float:
    """Failure-probability budget N * exp(-m eta^2 / (c N t^2)).

    Valid for systems with christoffel function bounded by N t^2; when the
    budget is below one, m iid uniform points give spectral deviation at
    most eta with positive probability.
    """
    if not (0 < eta):
        raise ValueError("eta must be positive")
    return N * math.exp(-m * eta**2 / (c * N * t**2))


def min_m_concentration(N: int, t: float, eta: float, target: float = 1.0, c: float = SUBGAUSS_C) -> int:
    """Smallest m whose budget is strictly below ``target``."""
    if not (0 < target):
        raise ValueError("target must be positive")
    m = math.floor(c * N * t**2 * math.log(N / target) / eta**2) + 1
    m = max(m, 1)
    while concentration_budget(N, t, eta, m, c) >= target:  # guard rounding
        m += 1
    return m


def random_l2_pointset(system: OrthonormalSystem, m: int, seed: int = 0, retries: int = 1) -> tuple[PointSet, SpectralCertificate]:
    """Best of ``retries`` iid uniform draws, judged by certificate eps."""
    rng = np.random.default_rng(seed)
    best: tuple[PointSet, SpectralCertificate] | None = None
    for _ in range(max(1, retries)):
        if hasattr(system.domain, "points"):
            idx = rng.integers(0, system.domain.size, size=m)
            pts = system.domain.points[idx]
        else:
            pts = rng.uniform(0.0, 2.0 * math.pi, size=(m, system.dim))
        ps = PointSet(pts)
        cert = l2_certificate(system, ps)
        if best is None or cert.eps < best[1].eps:
            best = (ps, cert)
    return best


# ---------------------------------------------------------------------------
# greedy point selection through the rank-one matrix dictionary


@dataclass
class FrobeniusRun:
    pointset: PointSet
    selected: list[int]
    residuals: np.ndarray  # ||I - (1/j) sum G(xi_k)||_F after each step
    bounds: np.ndarray  # 2 N t^2 / sqrt(j)
    certificate: SpectralCertificate
    meta: dict = field(default_factory=dict)

    def bound_violations(self, slack: float = 1e-10) -> int:
        return int((self.residuals > self.bounds + slack).sum())


def frobenius_rga_pointset(system: OrthonormalSystem, m: int, candidates: np.ndarray | None = None) -> FrobeniusRun:
    """Relaxed greedy on rank-one atoms G(x) = u(x) u(x)^T targeting I.

    Candidates default to the system quadrature nodes, over which
    I = sum_nu omega_nu G(x_nu) exactly; the target is therefore a convex
    combination of atoms and the relaxed greedy guarantee applies verbatim:

        ||I - (1/j) sum_{k<=j} G(xi_k)||_F <= 2 N t^2 / sqrt(j).

    Selection maximizes w(x) - S(x)/(j-1) with S(x) = sum_k D_N(xi_k, x)^2,
    which is the Frobenius inner product of the residual with G(x) up to
    positive scaling; S is updated incrementally from kernel columns.
    """
    if system.constants.t is None:
        raise MissingConstant("greedy point selection needs the christoffel cap t")
    if candidates is None:
        candidates = system.quadrature.nodes
    candidates = np.asarray(candidates, dtype=float)
    U = system.evaluate(candidates)
    w = (U * U).sum(axis=1)
    n = system.size
    t = system.constants.t

    S = np.zeros(len(w))  # S[x] = sum over selected k of D_N(xi_k, x)^2
    selected: list[int] = []
    residuals = []
    tr_B = 0.0
    frob2_B = 0.0  # ||sum_k G(xi_k)||_F^2
    for j in range(1, m + 1):
        score = w if j == 1 else w - S / (j - 1)
        pick = int(np.argmax(score))
        kern = U @ U[pick]  # D_N(xi_j, x) over all candidates
        frob2_B += 2.0 * S[pick] + w[pick] ** 2
        tr_B += w[pick]
        S += kern**2
        selected.append(pick)
        # ||I - B/j||_F^2 = N - 2 tr(B)/j + ||B||_F^2 / j^2
        res2 = n - 2.0 * tr_B / j + frob2_B / j**2
        residuals.append(math.sqrt(max(res2, 0.0)))
    bounds = 2.0 * n * t**2 / np.sqrt(np.arange(1, m + 1))
    ps = PointSet(candidates[selected])
    cert = l2_certificate(system, ps)
    return FrobeniusRun(
        pointset=ps,
        selected=selected,
        residuals=np.array(residuals),
        bounds=bounds,
        certificate=cert,
        meta={"n_candidates": len(w)},
    )


# ---------------------------------------------------------------------------
# barrier-potential weighted sparsification


@dataclass
class BssResult:
    pointset: PointSet  # weights normalized so the lower constant is one
    support: int
    lam_min: float
    lam_max: float
    ratio: float
    ratio_bound: float
    steps: int
    fast_path: bool
    meta: dict = field(default_factory=dict)


def bss_ratio_bound(d: float) -> float:
    rd = math.sqrt(d)
    return (d + 1 + 2 * rd) / (d + 1 - 2 * rd)


def _barrier_quadratic_forms(A: np.ndarray, V: np.ndarray, upper: float, lower: float):
    """Quadratic forms v^T (uI-A)^{-p} v and v^T (A-lI)^{-p} v, p = 1, 2."""
    lam, W = np.linalg.eigh(A)
    VW = V @ W  # (M, N)
    du = upper - lam
    dl = lam - lower
    q1u = (VW**2) @ (1.0 / du)
    q2u = (VW**2) @ (1.0 / du**2)
    q1l = (VW**2) @ (1.0 / dl)
    q2l = (VW**2) @ (1.0 / dl**2)
    phi_u = float((1.0 / du).sum())
    phi_l = float((1.0 / dl).sum())
    return q1u, q2u, q1l, q2l, phi_u, phi_l, float(lam[0]), float(lam[-1])


def bss_weighted_sparsify(system: OrthonormalSystem, d_param: float, candidates: np.ndarray | None = None, check_invariants: bool = True) -> BssResult:
    """Deterministic weighted point selection with spectral-ratio guarantee.

    Works on candidate vectors v_j = u(x_j)/sqrt(M) that resolve the
    identity (sum_j v_j v_j^T = I; automatic for equal-weight exact
    quadratures).  Runs ceil(d N) barrier steps keeping all eigenvalues of
    the running matrix between moving barriers l and u; each step adds one
    reweighted rank-one candidate chosen so both barrier potentials stay
    controlled.  Output weights are normalized so the lower discretization
    constant is exactly one, the upper at most
    ``(d + 1 + 2 sqrt(d)) / (d + 1 - 2 sqrt(d))`` (9 at d = 4), and the
    support at most ceil(d N).

    When the candidate set is already no larger than ceil(d N), the full
    set (which realizes the identity exactly) is returned unchanged.
    """
    if d_param <= 1:
        raise ValueError("the oversampling parameter d must exceed one")
    if candidates is None:
        candidates = system.quadrature.nodes
        weights = system.quadrature.weights
        if not np.allclose(weights, weights[0]):
            raise ValueError("candidate quadrature must have equal weights")
    candidates = np.asarray(candidates, dtype=float)
    M_cand = candidates.shape[0]
    n = system.size
    if M_cand < n:
        raise ValueError("need at least N candidate points")
    V = system.evaluate(candidates) / math.sqrt(M_cand)
    G = V.T @ V
    if np.abs(G - np.eye(n)).max() > 1e-8:
        raise ValueError("candidates do not resolve the identity")

    steps = math.ceil(d_param * n)
    bound = bss_ratio_bound(d_param)
    if M_cand <= steps:
        # the full candidate set is small enough already: ratio one
        ps = PointSet(candidates, np.full(M_cand, 1.0 / M_cand))
        return BssResult(
            pointset=ps,
            support=M_cand,
            lam_min=1.0,
            lam_max=1.0,
            ratio=1.0,
            ratio_bound=bound,
            steps=0,
            fast_path=True,
        )

    rd = math.sqrt(d_param)
    delta_l = 1.0
    delta_u = (rd + 1.0) / (rd - 1.0)
    eps_l = 1.0 / rd
    eps_u = (rd - 1.0) / (d_param + rd)
    lower = -n * rd
    upper = n * (d_param + rd) / (rd - 1.0)

    A = np.zeros((n, n))
    acc_weights: dict[int, float] = {}
    # initial potentials: exactly eps_u and eps_l by the choice of l0, u0
    phi_u_prev = eps_u
    phi_l_prev = eps_l
    for step in range(steps):
        upper_next = upper + delta_u
        lower_next = lower + delta_l
        q1u, q2u, q1l, q2l, phi_u, phi_l, lmin, lmax = _barrier_quadratic_forms(A, V, upper_next, lower_next)
        if check_invariants and not (lmin > lower_next and lmax < upper_next):
            raise RuntimeError("barrier invariant violated: eigenvalue escaped the window")
        lamA = np.linalg.eigvalsh(A)
        phi_u_cur = float((1.0 / (upper - lamA)).sum())
        phi_l_cur = float((1.0 / (lamA - lower)).sum())
        denom_u = phi_u_cur - phi_u  # potential drop from shifting the upper barrier
        denom_l = phi_l - phi_l_cur  # potential rise from shifting the lower barrier
        if denom_u <= 0 or denom_l <= 0:
            raise RuntimeError("degenerate barrier shift")
        Uv = q2u / denom_u + q1u
        Lv = q2l / denom_l - q1l
        gap = Lv - Uv
        j = int(np.argmax(gap))
        if check_invariants and gap[j] < -1e-7:
            raise RuntimeError(f"step {step}: no feasible candidate (best gap {gap[j]:.3e})")
        w_j = 2.0 / (Uv[j] + Lv[j])
        A = A + w_j * np.outer(V[j], V[j])
        acc_weights[j] = acc_weights.get(j, 0.0) + w_j
        upper, lower = upper_next, lower_next
        lamA = np.linalg.eigvalsh(A)
        phi_u_new = float((1.0 / (upper - lamA)).sum())
        phi_l_new = float((1.0 / (lamA - lower)).sum())
        if check_invariants and (phi_u_new > phi_u_prev + 1e-7 or phi_l_new > phi_l_prev + 1e-7):
            raise RuntimeError("barrier potentials increased")
        phi_u_prev, phi_l_prev = phi_u_new, phi_l_new

    lamA = np.linalg.eigvalsh(A)
    lam_min, lam_max = float(lamA[0]), float(lamA[-1])
    if check_invariants:
        if not (lower < lam_min and lam_max < upper):
            raise RuntimeError("final eigenvalues escaped the barrier window")
        if lam_max / lam_min > bound + 1e-7:
            raise RuntimeError("final ratio exceeds the guarantee")
    idx = sorted(acc_weights)
    # discretization weights: sum_j lam_j f(x_j)^2 >= ||f||^2 with constant one
    lam_w = np.array([acc_weights[j] for j in idx]) / (M_cand * lam_min)
    ps = PointSet(candidates[idx], lam_w)
    return BssResult(
        pointset=ps,
        support=len(idx),
        lam_min=lam_min,
        lam_max=lam_max,
        ratio=lam_max / lam_min,
        ratio_bound=bound,
        steps=steps,
        fast_path=False,
        meta={"barriers": (lower, upper)},
    )


# ---------------------------------------------------------------------------
# exact second-moment identities used as oracles in tests


def rank_one_spectrum(system: OrthonormalSystem, x) -> np.ndarray:
    """Eigenvalues of G(x) = u(x) u(x)^T: christoffel value and zeros."""
    u = system.evaluate(x).reshape(-1)
    return np.linalg.eigvalsh(np.outer(u, u))


def quadrature_second_moment(system: OrthonormalSystem) -> np.ndarray:
    """E_quad[(G(x) - I)^2]; equals (N - 1) I under condition D."""
    U = system.quad_values
    w = system.quadrature.weights
    n = system.size
    acc = np.zeros((n, n))
    for row, om in zip(U, w):
        G = np.outer(row, row)
        D = G - np.eye(n)
        acc += om * (D @ D)
    return acc
