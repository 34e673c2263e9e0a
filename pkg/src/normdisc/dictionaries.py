"""Dictionaries of atoms used by the greedy solvers.

Atoms live in coefficient coordinates with respect to a fixed ambient
orthonormal basis, so L2 inner products of functions reduce to Euclidean
inner products of columns:

* complex exponential coordinates (basis ``exp(i<k,x>)``, k in Q) for
  dictionaries built directly from a frequency set,
* real coordinates (basis ``u_1 .. u_N``) for dictionaries built from an
  :class:`~normdisc.spaces.OrthonormalSystem`.

The main families:

* :func:`exponential_dict`        the ambient basis itself,
* :func:`shifted_kernel_dict`     normalized Dirichlet-kernel translates
  (complex coordinates),
* :func:`kernel_shift_dict`       the same translates in real coordinates,
  scaled to unit norm via 1/sqrt(N),
* :func:`scaled_kernel_dict`      kernel translates scaled by 1/sqrt(K2 N),
  so that <h, atom> = h(y)/sqrt(K2 N),
* :func:`scaled_basis_dict`       signed basis elements ±u_i/sqrt(K2),
* :func:`union_dict`, :func:`symmetrize` combinators.

All atoms have L2 norm at most one; selection helpers break ties toward the
lowest atom index so runs are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .spaces import (
    TWO_PI,
    FrequencySet,
    MissingConstant,
    OrthonormalSystem,
    grid_P,
)


@dataclass
class Dictionary:
    """A finite dictionary stored as an (ambient_dim, n_atoms) column matrix."""

    kind: str
    field: str  # "real" | "complex"
    atoms: np.ndarray
    labels: tuple = ()
    shifts: np.ndarray | None = None  # (n_atoms, d) shift points when applicable
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.atoms.ndim != 2:
            raise ValueError("atoms must be a 2d array (ambient_dim, n_atoms)")
        norms = np.linalg.norm(self.atoms, axis=0)
        if norms.size and norms.max() > 1.0 + 1e-9:
            raise ValueError(f"{self.kind}: atom norms exceed one (max {norms.max():.6g})")

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.atoms.shape[0]

    def inner_products(self, v: np.ndarray) -> np.ndarray:
        """<v, atom_j> for every atom (conjugate-linear in the atom)."""
        return np.conj(self.atoms).T @ v

    def atom(self, j: int) -> np.ndarray:
        return self.atoms[:, j]


@dataclass(frozen=True)
class SelectResult:
    index: int
    inner: complex
    score: float


def argmax_inner_product(dictionary: Dictionary, residual: np.ndarray, weakness: float = 1.0, mode: str = "abs") -> SelectResult:
    """Pick an atom by inner-product score.

    ``mode="abs"`` scores by |<r, g>| (orthogonal-greedy style); ``"real"``
    scores by Re <r, g> (relaxed-greedy style over a signed dictionary).
    ``weakness < 1`` returns the lowest-indexed atom whose score reaches
    ``weakness * max_score``, which is the laziest choice a weak greedy step
    is allowed to make; ``weakness = 1`` returns the argmax, ties toward the
    lowest index.
    """
    if not (0.0 < weakness <= 1.0):
        raise ValueError("weakness must lie in (0, 1]")
    ips = dictionary.inner_products(residual)
    scores = np.abs(ips) if mode == "abs" else ips.real.astype(float)
    best = int(np.argmax(scores))
    if weakness < 1.0 and scores[best] > 0:
        thresh = weakness * scores[best]
        best = int(np.nonzero(scores >= thresh - 1e-15 * abs(thresh))[0][0])
    return SelectResult(best, complex(ips[best]), float(scores[best]))


# ---------------------------------------------------------------------------
# nets of shift points


@dataclass(frozen=True)
class DeltaNet:
    """A product grid on the torus with per-axis spacing at most delta."""

    delta: float
    points: np.ndarray

    @classmethod
    def build(cls, dim: int, delta: float) -> "DeltaNet":
        if delta <= 0:
            raise ValueError("delta must be positive")
        count = max(1, math.ceil(TWO_PI / delta))
        axis = TWO_PI * np.arange(count) / count
        pts = np.array(list(itertools.product(*([axis] * dim))), dtype=float)
        return cls(delta=TWO_PI / count, points=pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]


def choose_delta0(system: OrthonormalSystem) -> float:
    """Net resolution at which every u_i varies by at most N^(-1/2).

    From |u_i(x) - u_i(y)| <= k1 N^beta ||x-y||^alpha, spacing
    delta0 = (k1^(-1) N^(-1/2-beta))^(1/alpha) gives per-function variation
    N^(-1/2), hence kernel-atom variation O(1) across a net cell.  Systems
    with k1 = 0 (constants only) need a single point: returns 2*pi.
    """
    c = system.constants
    if c.k1 is None or c.alpha is None or c.beta is None:
        raise MissingConstant("net resolution needs k1, alpha, beta")
    if c.k1 == 0.0:
        return TWO_PI
    d0 = (1.0 / c.k1 * system.size ** (-0.5 - c.beta)) ** (1.0 / c.alpha)
    return min(d0, TWO_PI)


# ---------------------------------------------------------------------------
# dictionary builders


def exponential_dict(Q: FrequencySet) -> Dictionary:
    """The complex exponentials exp(i<k,x>), k in Q, i.e. the identity matrix."""
    n = len(Q)
    return Dictionary(
        kind="exponentials",
        field="complex",
        atoms=np.eye(n, dtype=complex),
        labels=Q.freqs,
    )


def shifted_kernel_dict(Q: FrequencySet, points: np.ndarray | None = None, n_vec=None) -> Dictionary:
    """Translates of the normalized Dirichlet kernel in complex coordinates.

    Column for shift y has entries |Q|^(-1/2) exp(-i<k,y>), so that
    <f, atom_y> = |Q|^(-1/2) f(y) for every f supported on Q.  With no
    points given, shifts default to the exact grid of the smallest box
    containing Q.
    """
    if points is None:
        points = grid_P(Q.max_abs if n_vec is None else n_vec).points
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    phases = np.exp(-1j * (Q.array @ points.T))  # (|Q|, m)
    atoms = phases / math.sqrt(len(Q))
    return Dictionary(
        kind="kernel-translates",
        field="complex",
        atoms=atoms,
        labels=tuple(range(points.shape[0])),
        shifts=points,
    )


def _system_shift_atoms(system: OrthonormalSystem, points: np.ndarray, scale: float) -> np.ndarray:
    u = system.evaluate(points)  # (m, N)
    return u.T * scale


def kernel_shift_dict(system: OrthonormalSystem, points: np.ndarray) -> Dictionary:
    """Kernel translates u(y)/sqrt(N) in real coordinates.

    Under condition D (christoffel identically N) every atom has unit norm,
    and <f, atom_y> = f(y)/sqrt(N).
    """
    n = system.size
    atoms = _system_shift_atoms(system, np.asarray(points, dtype=float), 1.0 / math.sqrt(n))
    return Dictionary(
        kind="kernel-shifts",
        field="real",
        atoms=atoms,
        labels=tuple(range(atoms.shape[1])),
        shifts=np.asarray(points, dtype=float).reshape(atoms.shape[1], -1),
    )


def scaled_kernel_dict(system: OrthonormalSystem, points: np.ndarray | None = None, net: DeltaNet | None = None) -> Dictionary:
    """Kernel atoms g_y = u(y)/sqrt(K2 N) so that <h, g_y> = h(y)/sqrt(K2 N).

    Atom norms are sqrt(w(y)/(K2 N)) <= t/sqrt(K2) under condition E, which
    is at most one whenever t^2 <= K2.  Default shifts come from the
    system's delta0 net.
    """
    if system.constants.k2 is None:
        raise MissingConstant("scaled kernel atoms need k2")
    if points is None:
        if net is None:
            net = DeltaNet.build(system.dim, choose_delta0(system))
        points = net.points
    points = np.asarray(points, dtype=float)
    n = system.size
    atoms = _system_shift_atoms(system, points, 1.0 / math.sqrt(system.constants.k2 * n))
    return Dictionary(
        kind="scaled-kernel-shifts",
        field="real",
        atoms=atoms,
        labels=tuple(range(atoms.shape[1])),
        shifts=points.reshape(atoms.shape[1], -1),
        meta={"scale": 1.0 / math.sqrt(system.constants.k2 * n)},
    )


def scaled_basis_dict(system: OrthonormalSystem, signed: bool = True) -> Dictionary:
    """Signed scaled basis elements ±u_i / sqrt(K2), interleaved +,-.

    The scaling keeps sup-norms at most one: ||u_i/sqrt(K2)||_inf <= 1.
    """
    if system.constants.k2 is None:
        raise MissingConstant("scaled basis atoms need k2")
    n = system.size
    scale = 1.0 / math.sqrt(system.constants.k2)
    eye = np.eye(n) * scale
    if not signed:
        return Dictionary(kind="scaled-basis", field="real", atoms=eye, labels=tuple(range(n)), meta={"scale": scale})
    atoms = np.empty((n, 2 * n))
    atoms[:, 0::2] = eye
    atoms[:, 1::2] = -eye
    labels = tuple(x for i in range(n) for x in (i, ~i))  # ~i marks the negated copy
    return Dictionary(kind="scaled-basis-signed", field="real", atoms=atoms, labels=labels, meta={"scale": scale})


def union_dict(*dicts: Dictionary, kind: str | None = None) -> Dictionary:
    if not dicts:
        raise ValueError("need at least one dictionary")
    dims = {d.ambient_dim for d in dicts}
    if len(dims) != 1:
        raise ValueError("dictionaries live in different ambient spaces")
    fld = "complex" if any(d.field == "complex" for d in dicts) else "real"
    atoms = np.concatenate([d.atoms.astype(complex if fld == "complex" else float) for d in dicts], axis=1)
    labels = tuple((d.kind, lab) for d in dicts for lab in (d.labels or range(d.n_atoms)))
    return Dictionary(kind=kind or "+".join(d.kind for d in dicts), field=fld, atoms=atoms, labels=labels)


def symmetrize(d: Dictionary) -> Dictionary:
    """Append the negated copy of every atom (for signed relaxed greedy)."""
    atoms = np.concatenate([d.atoms, -d.atoms], axis=1)
    labels = tuple(d.labels) + tuple(("neg", lab) for lab in d.labels)
    shifts = None if d.shifts is None else np.concatenate([d.shifts, d.shifts], axis=0)
    return Dictionary(kind=d.kind + "-signed", field=d.field, atoms=atoms, labels=labels, shifts=shifts, meta=dict(d.meta))


# ---------------------------------------------------------------------------
# rank-one matrix dictionary (used by the Frobenius relaxed greedy solver)


@dataclass
class MatrixShiftDictionary:
    """Candidate rank-one atoms G(x)/(N t^2), G(x) = u(x) u(x)^T.

    Stored implicitly through the value table ``values[j] = u(x_j)``; the
    identity <G(x), G(y)>_F = D_N(x, y)^2 keeps all score updates in terms
    of kernel evaluations.
    """

    system: OrthonormalSystem
    points: np.ndarray
    values: np.ndarray  # (m_candidates, N)
    t: float

    @classmethod
    def from_candidates(cls, system: OrthonormalSystem, points: np.ndarray | None = None) -> "MatrixShiftDictionary":
        if system.constants.t is None:
            raise MissingConstant("matrix atoms need the christoffel cap t")
        if points is None:
            points = system.quadrature.nodes
        points = np.asarray(points, dtype=float)
        return cls(system=system, points=points, values=system.evaluate(points), t=system.constants.t)

    @property
    def frob_scale(self) -> float:
        # atoms are G(x)/frob_scale
        return self.system.size * self.t**2

    @property
    def n_atoms(self) -> int:
        return self.points.shape[0]

    def christoffel(self) -> np.ndarray:
        return (self.values * self.values).sum(axis=1)

    def kernel_with(self, idx: int) -> np.ndarray:
        """D_N(x_idx, x_j) for all candidates j."""
        return self.values @ self.values[idx]
