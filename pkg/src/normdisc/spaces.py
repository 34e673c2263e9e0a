"""Frequency sets, trigonometric polynomials, orthonormal systems and norms.

Everything downstream (dictionaries, greedy solvers, discretization
certificates) is built from the small set of types defined here:

* :class:`FrequencySet`     finite sets of integer frequency vectors in Z^d,
* :class:`TrigPolynomial`   complex trigonometric polynomials on the torus,
* :class:`OrthonormalSystem` real orthonormal function systems on the torus
  or on a finite point domain,
* :class:`PointSet`         sampling knots with optional nonnegative weights,
* :class:`Quadrature`       product trapezoidal rules used as the reference
  measure for every norm computed by the package.

Conventions.  All coordinates are radians in ``[0, 2*pi)`` and the reference
measure is the *normalized* Lebesgue measure on the torus (or the uniform
measure on a finite domain), so ``norm_lp(constant c) == |c|`` for every p.
All containers are treated as immutable after construction, which makes them
safe to share across worker processes.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize, minimize_scalar

TWO_PI = 2.0 * math.pi

Vec = tuple[int, ...]


class MissingConstant(ValueError):
    """A system constant required by the requested operation is undeclared."""


def as_points(x, dim: int) -> np.ndarray:
    """Coerce ``x`` to an (m, dim) float array of torus points."""
    a = np.asarray(x, dtype=float)
    if a.ndim == 0:
        if dim != 1:
            raise ValueError("scalar point only valid in dimension 1")
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(-1, 1) if dim == 1 else a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != dim:
        raise ValueError(f"points have shape {np.shape(x)}, expected (m, {dim})")
    return a


# ---------------------------------------------------------------------------
# frequency sets


@dataclass(frozen=True)
class FrequencySet:
    """A finite, duplicate-free set of integer frequency vectors in Z^d.

    ``freqs`` is stored sorted so equal sets compare equal and every derived
    array is reproducible.
    """

    dim: int
    freqs: tuple[Vec, ...]

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("dim must be a positive integer")
        canon = []
        seen = set()
        for k in self.freqs:
            k = tuple(int(v) for v in k)
            if len(k) != self.dim:
                raise ValueError(f"frequency {k} does not have dimension {self.dim}")
            if k in seen:
                raise ValueError(f"duplicate frequency {k}")
            seen.add(k)
            canon.append(k)
        object.__setattr__(self, "freqs", tuple(sorted(canon)))

    def __len__(self) -> int:
        return len(self.freqs)

    def __contains__(self, k) -> bool:
        return tuple(int(v) for v in k) in self.index

    def __iter__(self):
        return iter(self.freqs)

    @cached_property
    def array(self) -> np.ndarray:
        if not self.freqs:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.asarray(self.freqs, dtype=np.int64)

    @cached_property
    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.freqs)}

    @cached_property
    def symmetric(self) -> bool:
        """True iff k in Q implies -k in Q."""
        s = set(self.freqs)
        return all(tuple(-v for v in k) in s for k in self.freqs)

    @cached_property
    def neg_index(self) -> np.ndarray:
        """neg_index[i] = position of -freqs[i], or -1 when absent."""
        out = np.full(len(self.freqs), -1, dtype=np.int64)
        for i, k in enumerate(self.freqs):
            out[i] = self.index.get(tuple(-v for v in k), -1)
        return out

    @cached_property
    def max_abs(self) -> np.ndarray:
        """Componentwise max of |k_j| over the set (zeros for an empty set)."""
        if not self.freqs:
            return np.zeros(self.dim, dtype=np.int64)
        return np.abs(self.array).max(axis=0)

    @cached_property
    def max_l1(self) -> int:
        if not self.freqs:
            return 0
        return int(np.abs(self.array).sum(axis=1).max())

    def subset_of_box(self, n_vec) -> bool:
        n_vec = np.asarray(n_vec, dtype=np.int64).reshape(-1)
        if n_vec.size != self.dim:
            raise ValueError("box size has wrong dimension")
        return bool((self.max_abs <= n_vec).all())

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "freqs": [list(k) for k in self.freqs]})

    @classmethod
    def from_json(cls, text: str) -> "FrequencySet":
        obj = json.loads(text)
        return cls(int(obj["dim"]), tuple(tuple(int(v) for v in k) for k in obj["freqs"]))


def freqset(vectors, dim: int | None = None) -> FrequencySet:
    vectors = [tuple(int(v) for v in k) for k in vectors]
    if dim is None:
        if not vectors:
            raise ValueError("cannot infer dimension from an empty list")
        dim = len(vectors[0])
    return FrequencySet(dim, tuple(vectors))


def build_box(n_vec, dim: int | None = None) -> FrequencySet:
    """All k in Z^d with |k_j| <= N_j for every axis j."""
    n_vec = tuple(int(v) for v in np.atleast_1d(np.asarray(n_vec, dtype=np.int64)))
    if dim is not None and dim != len(n_vec):
        raise ValueError(f"dim={dim} does not match len(N)={len(n_vec)}")
    if any(v < 0 for v in n_vec):
        raise ValueError("box sizes must be nonnegative")
    freqs = tuple(itertools.product(*[range(-v, v + 1) for v in n_vec]))
    return FrequencySet(len(n_vec), freqs)


def _dyadic_axis(s: int) -> list[int]:
    # |k| in [floor(2^(s-1)), 2^s)
    if s < 0:
        raise ValueError("dyadic indices must be nonnegative")
    hi = 1 << s
    lo = (1 << (s - 1)) if s >= 1 else 0
    if lo == 0:
        return list(range(-(hi - 1), hi))
    return list(range(-(hi - 1), -(lo - 1))) + list(range(lo, hi))


def build_dyadic_block(s, dim: int | None = None) -> FrequencySet:
    """Dyadic block: all k with floor(2^(s_j - 1)) <= |k_j| < 2^(s_j) per axis."""
    s = tuple(int(v) for v in np.atleast_1d(np.asarray(s, dtype=np.int64)))
    if dim is not None and dim != len(s):
        raise ValueError(f"dim={dim} does not match len(s)={len(s)}")
    freqs = tuple(itertools.product(*[_dyadic_axis(v) for v in s]))
    return FrequencySet(len(s), freqs)


def build_hyperbolic_cross(n: int, dim: int) -> FrequencySet:
    """Union of dyadic blocks over all s in Z^d_+ with ||s||_1 <= n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if dim < 1:
        raise ValueError("dim must be positive")
    acc: set[Vec] = set()
    for s in itertools.product(range(n + 1), repeat=dim):
        if sum(s) <= n:
            acc.update(itertools.product(*[_dyadic_axis(v) for v in s]))
    return FrequencySet(dim, tuple(acc))


# ---------------------------------------------------------------------------
# points, grids, quadrature


@dataclass
class PointSet:
    """Sampling knots on the torus with optional nonnegative weights.

    Points are canonicalized to ``[0, 2*pi)``.  ``weights is None`` means the
    equal-weight rule ``1/m``.
    """

    points: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise ValueError("points must be an (m, d) array")
        self.points = np.mod(pts, TWO_PI)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
            if w.shape[0] != self.points.shape[0]:
                raise ValueError("weights length does not match point count")
            if (w < 0).any():
                raise ValueError("weights must be nonnegative")
            self.weights = w

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def effective_weights(self) -> np.ndarray:
        if self.weights is not None:
            return self.weights
        return np.full(self.m, 1.0 / self.m)

    def to_json(self) -> str:
        return json.dumps(
            {
                "points": [list(map(float, p)) for p in self.points],
                "weights": None if self.weights is None else [float(w) for w in self.weights],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        obj = json.loads(text)
        w = obj.get("weights")
        return cls(np.asarray(obj["points"], dtype=float), None if w is None else np.asarray(w, dtype=float))


def theta(n_vec) -> int:
    """Size of the exact grid for the box Pi(N): prod_j (2 N_j + 1)."""
    n_vec = np.atleast_1d(np.asarray(n_vec, dtype=np.int64))
    return int(np.prod(2 * n_vec + 1))


def grid_P(n_vec) -> PointSet:
    """The exact interpolation grid x^n = (2*pi*n_j / (2*N_j + 1)) for Pi(N)."""
    n_vec = tuple(int(v) for v in np.atleast_1d(np.asarray(n_vec, dtype=np.int64)))
    if any(v < 0 for v in n_vec):
        raise ValueError("box sizes must be nonnegative")
    axes = [TWO_PI * np.arange(2 * v + 1) / (2 * v + 1) for v in n_vec]
    pts = np.array(list(itertools.product(*axes)), dtype=float)
    return PointSet(pts)


@dataclass
class Quadrature:
    """A positive cubature rule with weights summing to one.

    The tensor rule is an oversampled product trapezoidal grid; on the torus
    it integrates every product ``u_i * u_j`` of basis elements exactly as
    long as the per-axis size exceeds twice the maximal frequency.
    """

    nodes: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes.ndim == 1:
            self.nodes = self.nodes.reshape(-1, 1)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.weights.shape[0] != self.nodes.shape[0]:
            raise ValueError("weights length does not match node count")

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    def integrate(self, values: np.ndarray):
        return self.weights @ values

    @classmethod
    def tensor_torus(cls, max_freqs, oversample: int = 4) -> "Quadrature":
        max_freqs = np.atleast_1d(np.asarray(max_freqs, dtype=np.int64))
        if oversample < 1:
            raise ValueError("oversample must be >= 1")
        sizes = [max(1, int(oversample) * (2 * int(f) + 1)) for f in max_freqs]
        axes = [TWO_PI * np.arange(s) / s for s in sizes]
        nodes = np.array(list(itertools.product(*axes)), dtype=float)
        m = nodes.shape[0]
        return cls(nodes, np.full(m, 1.0 / m), meta={"sizes": sizes, "oversample": oversample})

    @classmethod
    def discrete_uniform(cls, points) -> "Quadrature":
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        m = points.shape[0]
        return cls(points, np.full(m, 1.0 / m), meta={"discrete": True})

    def axis_spacing(self) -> np.ndarray:
        sizes = self.meta.get("sizes")
        if sizes is None:
            return np.full(self.dim, TWO_PI / max(2, round(self.size ** (1.0 / self.dim))))
        return np.array([TWO_PI / s for s in sizes])


# ---------------------------------------------------------------------------
# trigonometric polynomials


@dataclass
class TrigPolynomial:
    """f(x) = sum_{k in Q} c_k exp(i <k, x>) with coefficients aligned to Q."""

    support: FrequencySet
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != len(self.support):
            raise ValueError("coefficient count does not match support size")
        self.coeffs = c

    def evaluate(self, x):
        pts = as_points(x, self.support.dim)
        vals = np.exp(1j * (pts @ self.support.array.T)) @ self.coeffs
        if np.ndim(x) == 0 or (np.ndim(x) == 1 and self.support.dim > 1):
            return vals[0]
        return vals

    def coeff(self, k) -> complex:
        i = self.support.index.get(tuple(int(v) for v in k))
        return complex(self.coeffs[i]) if i is not None else 0.0j

    def l2_norm(self) -> float:
        # Parseval under the normalized measure
        return float(np.linalg.norm(self.coeffs))

    def is_real(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.abs(self.coeffs).max(initial=0.0)))
        neg = self.support.neg_index
        for i in range(len(self.support)):
            j = neg[i]
            if j < 0:
                if abs(self.coeffs[i]) > tol * scale:
                    return False
            elif abs(self.coeffs[i] - np.conj(self.coeffs[j])) > tol * scale:
                return False
        return True

    def _check_same_support(self, other: "TrigPolynomial"):
        if self.support.freqs != other.support.freqs:
            raise ValueError("supports differ")

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        self._check_same_support(other)
        return TrigPolynomial(self.support, self.coeffs + other.coeffs)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        self._check_same_support(other)
        return TrigPolynomial(self.support, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "TrigPolynomial":
        return TrigPolynomial(self.support, self.coeffs * scalar)

    __rmul__ = __mul__


def dirichlet_kernel(Q: FrequencySet, x):
    """D_Q(x) = sum_{k in Q} exp(i <k, x>); D_Q(0) = |Q|."""
    pts = as_points(x, Q.dim)
    vals = np.exp(1j * (pts @ Q.array.T)).sum(axis=1)
    if np.ndim(x) == 0 or (np.ndim(x) == 1 and Q.dim > 1):
        return vals[0]
    return vals


def normalized_dirichlet(Q: FrequencySet, x):
    """w_Q = |Q|^(-1/2) D_Q, the L2-normalized Dirichlet kernel."""
    return dirichlet_kernel(Q, x) / math.sqrt(len(Q))


def dirichlet_poly(Q: FrequencySet) -> TrigPolynomial:
    return TrigPolynomial(Q, np.ones(len(Q), dtype=complex))


def normalized_dirichlet_poly(Q: FrequencySet) -> TrigPolynomial:
    return TrigPolynomial(Q, np.full(len(Q), 1.0 / math.sqrt(len(Q)), dtype=complex))


def translate_poly(f: TrigPolynomial, y) -> TrigPolynomial:
    """The shift f(. - y), i.e. coefficients c_k * exp(-i <k, y>)."""
    y = as_points(y, f.support.dim)[0]
    phase = np.exp(-1j * (f.support.array @ y))
    return TrigPolynomial(f.support, f.coeffs * phase)


def random_trig_poly(Q: FrequencySet, rng: np.random.Generator, real: bool = False) -> TrigPolynomial:
    """Standard complex Gaussian coefficients; conjugate-symmetrized if real."""
    c = rng.standard_normal(len(Q)) + 1j * rng.standard_normal(len(Q))
    if real:
        if not Q.symmetric:
            raise ValueError("real polynomials need a symmetric support")
        neg = Q.neg_index
        c = 0.5 * (c + np.conj(c[neg]))
    return TrigPolynomial(Q, c)


def reconstruct_on_grid(f: TrigPolynomial, n_vec) -> TrigPolynomial:
    """Exact reconstruction from samples on grid_P(N) for supp(f) within Pi(N).

    Uses f(x) = theta(N)^{-1} sum_n f(x^n) D_Q(x - x^n), which in coefficient
    form reads c_k = theta(N)^{-1} sum_n f(x^n) exp(-i <k, x^n>).
    """
    if not f.support.subset_of_box(n_vec):
        raise ValueError("support is not contained in the box of the grid")
    pts = grid_P(n_vec).points
    vals = f.evaluate(pts)
    E = np.exp(-1j * (pts @ f.support.array.T))
    coeffs = (vals @ E) / theta(n_vec)
    return TrigPolynomial(f.support, coeffs)


# ---------------------------------------------------------------------------
# norms


def norm_values_lp(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    """(sum_i w_i |v_i|^p)^(1/p) for finite p >= 1."""
    if not (p >= 1.0) or math.isinf(p):
        raise ValueError(f"p must satisfy 1 <= p < inf, got {p}")
    a = np.abs(np.asarray(values))
    return float((weights @ a**p) ** (1.0 / p))


def _refine_abs_max(fn, x0: np.ndarray, spacing: np.ndarray, tol: float) -> float:
    """Local maximization of |fn| around x0; returns the refined value."""
    d = x0.shape[0]
    if d == 1:
        lo, hi = x0[0] - spacing[0], x0[0] + spacing[0]
        res = minimize_scalar(
            lambda t: -abs(fn(np.array([[t]]))[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": tol},
        )
        return float(-res.fun)
    res = minimize(
        lambda v: -abs(fn(v.reshape(1, -1))[0]),
        x0,
        method="Nelder-Mead",
        options={"xatol": tol, "fatol": tol, "maxiter": 200 * d},
    )
    return float(-res.fun)


def sup_norm_on_grid(fn, quad: Quadrature, refine: bool = True, tol: float = 1e-8, top_k: int = 3) -> float:
    """Grid maximum of |fn| over quadrature nodes, refined by local search.

    This is a certified lower bound for the true sup-norm; with the default
    oversampled grids the refined value is accurate to ``tol`` for the
    bandlimited functions used throughout.
    """
    vals = np.abs(fn(quad.nodes))
    best = float(vals.max())
    if not refine or quad.meta.get("discrete"):
        return best
    spacing = quad.axis_spacing()
    order = np.argsort(vals)[::-1][:top_k]
    for i in order:
        best = max(best, _refine_abs_max(fn, quad.nodes[i], spacing, tol))
    return best


def poly_norm(f: TrigPolynomial, p: float, quad: Quadrature | None = None, refine: bool = True) -> float:
    """L_p norm of a trigonometric polynomial under the normalized measure.

    ``p = math.inf`` uses the grid maximum plus local refinement and is
    documented as a lower bound of the true sup-norm.
    """
    if quad is None:
        quad = Quadrature.tensor_torus(f.support.max_abs)
    if math.isinf(p):
        return sup_norm_on_grid(f.evaluate, quad, refine=refine)
    return norm_values_lp(f.evaluate(quad.nodes), quad.weights, p)


# ---------------------------------------------------------------------------
# orthonormal systems


@dataclass(frozen=True)
class TorusDomain:
    dim: int


@dataclass(frozen=True)
class DiscreteDomain:
    """A finite point domain carrying the uniform probability measure."""

    points: np.ndarray

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class SystemConstants:
    """Declared analytic constants of a system (None when unknown).

    k1, alpha, beta: modulus bound |u_i(x) - u_i(y)| <= k1 N^beta ||x-y||^alpha.
    k2: uniform bound ||u_i||_inf^2 <= k2.
    k3, k4: Nikolskii-type bound ||f||_inf <= k3 N^(k4/p) ||f||_p for p >= 2.
    t: christoffel cap w(x) <= N t^2.
    """

    k1: float | None = None
    k2: float | None = None
    k3: float | None = None
    k4: float | None = None
    alpha: float | None = None
    beta: float | None = None
    t: float | None = None


@dataclass(frozen=True)
class TrigBasis:
    """Real orthonormal trigonometric basis 1, sqrt2 cos<k,.>, sqrt2 sin<k,.>.

    One representative per pair {k, -k}; the representative has a positive
    leading nonzero coordinate.  Column order: constant first (when present),
    then cos/sin interleaved per representative in sorted order.
    """

    has_const: bool
    reps: tuple[Vec, ...]

    @cached_property
    def rep_array(self) -> np.ndarray:
        if not self.reps:
            return np.zeros((0, 1), dtype=np.int64)
        return np.asarray(self.reps, dtype=np.int64)

    @property
    def n_funcs(self) -> int:
        return int(self.has_const) + 2 * len(self.reps)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        m = points.shape[0]
        out = np.empty((m, self.n_funcs))
        col = 0
        if self.has_const:
            out[:, 0] = 1.0
            col = 1
        if self.reps:
            phase = points @ self.rep_array.T
            out[:, col::2] = math.sqrt(2.0) * np.cos(phase)
            out[:, col + 1 :: 2] = math.sqrt(2.0) * np.sin(phase)
        return out


@dataclass(frozen=True)
class TabulatedBasis:
    """A system given by its value table on a finite domain."""

    points: np.ndarray
    values: np.ndarray

    @cached_property
    def _lookup(self) -> dict:
        return {tuple(np.round(p, 12)): i for i, p in enumerate(self.points)}

    @property
    def n_funcs(self) -> int:
        return self.values.shape[1]

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        rows = []
        for p in points:
            i = self._lookup.get(tuple(np.round(p, 12)))
            if i is None:
                raise ValueError("tabulated system evaluated off its domain")
            rows.append(i)
        return self.values[rows]


@dataclass
class OrthonormalSystem:
    """A real orthonormal system u_1..u_N with its reference quadrature.

    Orthonormality is verified at construction: the quadrature Gram matrix
    must equal the identity to 1e-8.  When ``condition_d`` is set the
    christoffel function w(x) = sum_i u_i(x)^2 must be identically N; when
    ``condition_e`` is set it must satisfy w(x) <= N t^2.
    """

    name: str
    basis: TrigBasis | TabulatedBasis
    domain: TorusDomain | DiscreteDomain
    quadrature: Quadrature
    size: int
    constants: SystemConstants = field(default_factory=SystemConstants)
    condition_d: bool = False
    condition_e: bool = False
    freqs: FrequencySet | None = None
    validate: bool = True

    def __post_init__(self):
        if self.size != self.basis.n_funcs:
            raise ValueError("declared size does not match the basis")
        if self.validate:
            g = self.gram()
            if np.abs(g - np.eye(self.size)).max() > 1e-8:
                raise ValueError(f"{self.name}: quadrature Gram is not the identity")
            w = self.christoffel(self.quadrature.nodes)
            if self.condition_d and np.abs(w - self.size).max() > 1e-8:
                raise ValueError(f"{self.name}: christoffel function is not constant N")
            if self.condition_e:
                if self.constants.t is None:
                    raise MissingConstant("condition E requires the constant t")
                if w.max() > self.size * self.constants.t**2 + 1e-8:
                    raise ValueError(f"{self.name}: christoffel function exceeds N t^2")

    @property
    def dim(self) -> int:
        return self.domain.dim

    def evaluate(self, points) -> np.ndarray:
        return self.basis.evaluate(as_points(points, self.dim))

    @cached_property
    def quad_values(self) -> np.ndarray:
        return self.evaluate(self.quadrature.nodes)

    def christoffel(self, points) -> np.ndarray:
        u = self.evaluate(points)
        return (u * u).sum(axis=1)

    def kernel(self, x, y) -> np.ndarray:
        """D_N(x, y) = sum_i u_i(x) u_i(y) as an (mx, my) array."""
        return self.evaluate(x) @ self.evaluate(y).T

    def gram(self) -> np.ndarray:
        u = self.quad_values
        return (u * self.quadrature.weights[:, None]).T @ u

    def span_values(self, coeffs: np.ndarray, points) -> np.ndarray:
        return self.evaluate(points) @ np.asarray(coeffs, dtype=float)

    def span_norm(self, coeffs: np.ndarray, p: float, refine: bool = True) -> float:
        coeffs = np.asarray(coeffs, dtype=float)
        if math.isinf(p):
            return sup_norm_on_grid(lambda pts: self.basis.evaluate(pts) @ coeffs, self.quadrature, refine=refine)
        return norm_values_lp(self.quad_values @ coeffs, self.quadrature.weights, p)

    def random_coeffs(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.size)


def _pair_representatives(Q: FrequencySet) -> tuple[Vec, ...]:
    reps = set()
    zero = (0,) * Q.dim
    for k in Q.freqs:
        if k == zero:
            continue
        reps.add(max(k, tuple(-v for v in k)))
    return tuple(sorted(reps))


def _trig_constants(Q: FrequencySet, n: int) -> SystemConstants:
    has_osc = Q.max_l1 > 0
    k1 = math.sqrt(2.0) * Q.dim * Q.max_l1 / n if has_osc else 0.0
    return SystemConstants(
        k1=k1,
        k2=2.0 if has_osc else 1.0,
        k3=2.0,
        k4=1.0,
        alpha=1.0,
        beta=1.0,
        t=1.0,
    )


def real_trig_system(Q: FrequencySet, oversample: int = 4, name: str | None = None) -> OrthonormalSystem:
    """The real orthonormal trigonometric system spanning T(Q) on the torus.

    Requires a symmetric Q.  The system satisfies condition D exactly:
    w(x) = |Q| for all x.
    """
    if not Q.symmetric:
        raise ValueError("real trigonometric system needs a symmetric frequency set")
    if len(Q) == 0:
        raise ValueError("frequency set is empty")
    reps = _pair_representatives(Q)
    basis = TrigBasis(has_const=(0,) * Q.dim in Q.index, reps=reps)
    n = len(Q)
    if basis.n_funcs != n:
        raise ValueError("frequency set is not closed under negation")
    quad = Quadrature.tensor_torus(Q.max_abs, oversample=oversample)
    return OrthonormalSystem(
        name=name or f"trig[{Q.dim}d,N={n}]",
        basis=basis,
        domain=TorusDomain(Q.dim),
        quadrature=quad,
        size=n,
        constants=_trig_constants(Q, n),
        condition_d=True,
        condition_e=True,
        freqs=Q,
    )


def real_trig_system_on_grid(Q: FrequencySet, points_per_axis: int, name: str | None = None) -> OrthonormalSystem:
    """The same trigonometric system restricted to a uniform grid domain.

    The grid must resolve all pairwise frequency differences, i.e.
    ``points_per_axis > 2 * max_j |k_j|``; otherwise the Gram check fails.
    """
    if not Q.symmetric:
        raise ValueError("real trigonometric system needs a symmetric frequency set")
    if points_per_axis <= 2 * int(Q.max_abs.max(initial=0)):
        raise ValueError("grid too coarse for orthonormality of the system")
    reps = _pair_representatives(Q)
    basis = TrigBasis(has_const=(0,) * Q.dim in Q.index, reps=reps)
    axes = [TWO_PI * np.arange(points_per_axis) / points_per_axis] * Q.dim
    pts = np.array(list(itertools.product(*axes)), dtype=float)
    quad = Quadrature.discrete_uniform(pts)
    return OrthonormalSystem(
        name=name or f"trig-grid[{Q.dim}d,N={len(Q)},M={pts.shape[0]}]",
        basis=basis,
        domain=DiscreteDomain(pts),
        quadrature=quad,
        size=len(Q),
        constants=_trig_constants(Q, len(Q)),
        condition_d=True,
        condition_e=True,
        freqs=Q,
    )


def tabulated_system(values: np.ndarray, points: np.ndarray | None = None, name: str = "tabulated") -> OrthonormalSystem:
    """Wrap an (M, N) value table as a system on a discrete uniform domain.

    The columns must be orthonormal under the uniform measure on the rows:
    (1/M) V^T V = I.  Constants are filled in empirically: k2 from the max
    squared entry and t from the christoffel maximum.
    """
    values = np.asarray(values, dtype=float)
    m, n = values.shape
    if points is None:
        points = TWO_PI * np.arange(m).reshape(-1, 1) / m
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    basis = TabulatedBasis(points=points, values=values)
    quad = Quadrature.discrete_uniform(points)
    w = (values * values).sum(axis=1)
    const = SystemConstants(
        k2=float((values**2).max()),
        t=float(math.sqrt(max(w.max() / n, 1e-300))),
    )
    return OrthonormalSystem(
        name=name,
        basis=basis,
        domain=DiscreteDomain(points),
        quadrature=quad,
        size=n,
        constants=const,
        condition_d=bool(np.abs(w - n).max() <= 1e-8),
        condition_e=True,
        freqs=None,
    )
