"""One-kick unitaries of single and coupled kicked tops.

A single top advances by ``U = exp(-i k/(2j) J_z^2) exp(-i p J_y)`` (rotation first,
then the kick).  Two tops are coupled at each kick instant by the diagonal phase
``exp(-i (epsilon / j_c) m1 m2)``, where ``j_c`` is the spin normalising the coupling.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import schur

from .entanglement import as_amplitude_matrix, purity
from .errors import ConvergenceError, DimensionError, ParameterError, ResourceError
from .spin import build_spin_operators, rotation_about_y

DEFAULT_MAX_DIM = 4096
DEGENERACY_TOL = 1e-10


class CouplingScale(str, Enum):
    """Which spin normalises epsilon in the coupling when j1 != j2."""

    FIRST = "j1"
    SECOND = "j2"
    ARITHMETIC = "mean"
    GEOMETRIC = "geometric"

    def value_for(self, j1, j2):
        if self is CouplingScale.FIRST:
            return j1
        if self is CouplingScale.SECOND:
            return j2
        if self is CouplingScale.ARITHMETIC:
            return 0.5 * (j1 + j2)
        return float(np.sqrt(j1 * j2))


@dataclass(frozen=True)
class TopParams:
    j: float
    k: float
    p: float = np.pi / 2

    def __post_init__(self):
        if self.k < 0:
            raise ParameterError("kick strength k must be >= 0")
        build_spin_operators(self.j)

    @property
    def dim(self):
        return int(round(2 * self.j)) + 1


@dataclass(frozen=True)
class CoupledParams:
    top1: TopParams
    top2: TopParams
    epsilon: float
    j_scale: CouplingScale = CouplingScale.GEOMETRIC

    def __post_init__(self):
        if self.epsilon < 0:
            raise ParameterError("coupling epsilon must be >= 0")
        object.__setattr__(self, "j_scale", CouplingScale(self.j_scale))

    @classmethod
    def make(cls, j1, j2, k, epsilon, p=np.pi / 2, j_scale=CouplingScale.GEOMETRIC):
        return cls(TopParams(j1, k, p), TopParams(j2, k, p), epsilon, j_scale)

    @property
    def dims(self):
        return self.top1.dim, self.top2.dim

    @property
    def coupling_j(self):
        return self.j_scale.value_for(self.top1.j, self.top2.j)

    def metadata(self):
        return {"j1": self.top1.j, "j2": self.top2.j, "k1": self.top1.k, "k2": self.top2.k,
                "p": self.top1.p, "epsilon": self.epsilon, "j_scale": self.j_scale.value,
                "coupling_j": self.coupling_j}


def kick_phases(params):
    """Diagonal of exp(-i k/(2j) J_z^2) in basis order."""
    m = build_spin_operators(params.j).m
    if params.j == 0:
        return np.ones(1, complex)
    return np.exp(-1j * params.k / (2 * params.j) * m ** 2)


def build_single_top_unitary(params):
    ops = build_spin_operators(params.j)
    return kick_phases(params)[:, None] * rotation_about_y(ops, params.p)


@dataclass(frozen=True)
class Spectrum:
    """Eigenphases ``phases[i]`` in (-pi, pi] and orthonormal eigenvectors ``vectors[:, i]``."""

    phases: np.ndarray
    vectors: np.ndarray
    dims: tuple
    min_gap: float
    degeneracy_tol: float = DEGENERACY_TOL
    residual: float = 0.0

    @property
    def degenerate(self):
        return self.min_gap < self.degeneracy_tol

    @property
    def eigenvalues(self):
        return np.exp(1j * self.phases)

    def amplitude_matrices(self):
        """Eigenvectors as a stack of ``(d1, d2)`` amplitude matrices."""
        return self.vectors.T.reshape((-1,) + tuple(self.dims))

    def coefficients(self, psi):
        """<e_i|psi> for flat states (last axis of length d1*d2)."""
        return np.asarray(psi) @ self.vectors.conj()

    def evolve(self, psi, n):
        """Apply U^n through the eigenbasis: sum_i exp(i n phi_i) <e_i|psi> e_i."""
        c = self.coefficients(psi) * np.exp(1j * n * self.phases)
        return c @ self.vectors.T


def _circular_min_gap(phases):
    if phases.size < 2:
        return np.inf
    s = np.sort(phases)
    gaps = np.diff(np.concatenate([s, [s[0] + 2 * np.pi]]))
    return float(gaps.min())


def pivot_indices(z, rel_tol=1e-8):
    """Per column, the first row whose magnitude is within ``rel_tol`` of the maximum."""
    mag = np.abs(z)
    return np.argmax(mag >= mag.max(axis=0) * (1.0 - rel_tol), axis=0)


def diagonalize_unitary(u, dims, degeneracy_tol=DEGENERACY_TOL, residual_tol=1e-8):
    """Eigen-decompose a unitary through its complex Schur form.

    For a normal matrix the Schur factor is diagonal, and the Schur vectors are
    orthonormal even where eigenvalues nearly coincide, unlike general ``eig``.
    """
    t, z = schur(u, output="complex")
    lam = np.diag(t).copy()
    phases = np.angle(lam)
    phases[phases <= -np.pi] += 2 * np.pi
    # fix each vector's phase: largest-magnitude amplitude real positive; ties
    # (common under the tops' symmetries) go to the first index
    idx = pivot_indices(z)
    pivot = z[idx, np.arange(z.shape[1])]
    z = z * (np.abs(pivot) / pivot)
    order = np.argsort(phases, kind="stable")
    phases, z = phases[order], z[:, order]
    residual = float(np.max(np.linalg.norm(u @ z - z * np.exp(1j * phases), axis=0)))
    if residual > residual_tol:
        raise ConvergenceError(f"eigen-residual {residual:.3e} exceeds {residual_tol:.1e}")
    return Spectrum(phases, z, tuple(dims), _circular_min_gap(phases), degeneracy_tol, residual)


@dataclass(frozen=True)
class FloquetOperator:
    """Coupled one-kick unitary held in factored form ``P (U1 x U2)``."""

    params: CoupledParams
    u1: np.ndarray
    u2: np.ndarray
    coupling: np.ndarray
    max_dim: int = DEFAULT_MAX_DIM
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dims(self):
        return self.u1.shape[0], self.u2.shape[0]

    @property
    def dim(self):
        return self.u1.shape[0] * self.u2.shape[0]

    def step(self, c):
        """One kick on amplitude matrices ``c`` of shape ``(..., d1, d2)``."""
        d1, d2 = self.dims
        lead = c.shape[:-2]
        # two large GEMMs over the whole batch instead of many small ones
        c = (c.reshape(-1, d2) @ self.u2.T).reshape(lead + (d1, d2))
        c = np.moveaxis(c, -2, 0).reshape(d1, -1)
        c = np.moveaxis((self.u1 @ c).reshape((d1,) + lead + (d2,)), 0, -2)
        return c * self.coupling

    def evolve(self, state, kicks):
        """Apply ``kicks`` steps to a flat state or amplitude matrix (shape preserved)."""
        state = np.asarray(state)
        flat = state.shape[-1] == self.dim and state.shape[-2:] != self.dims
        c = as_amplitude_matrix(state, self.dims).astype(complex)
        if kicks < 0:
            raise ParameterError("number of kicks must be >= 0")
        for _ in range(int(kicks)):
            c = self.step(c)
        return c.reshape(state.shape) if flat else c

    def entropy_trace(self, c, kicks, every=1):
        """Evolve amplitude matrices and return linear entropies at n = 0, every, 2*every, ...

        Output shape is ``(kicks // every + 1,) + batch_shape``.
        """
        c = np.asarray(c, complex)
        out = [1.0 - purity(c)]
        for n in range(1, int(kicks) + 1):
            c = self.step(c)
            if n % every == 0:
                out.append(1.0 - purity(c))
        return np.clip(np.array(out), 0.0, 1.0), c

    def full_matrix(self):
        if self.dim > self.max_dim:
            raise ResourceError(f"product dimension {self.dim} exceeds cap {self.max_dim}")
        if "full" not in self._cache:
            self._cache["full"] = self.coupling.reshape(-1)[:, None] * np.kron(self.u1, self.u2)
        return self._cache["full"]

    def diagonalize(self, degeneracy_tol=DEGENERACY_TOL):
        key = ("spectrum", degeneracy_tol)
        if key not in self._cache:
            self._cache[key] = diagonalize_unitary(self.full_matrix(), self.dims, degeneracy_tol)
        return self._cache[key]


def build_coupled_step(params, max_dim=DEFAULT_MAX_DIM):
    u1 = build_single_top_unitary(params.top1)
    u2 = build_single_top_unitary(params.top2)
    m1 = build_spin_operators(params.top1.j).m
    m2 = build_spin_operators(params.top2.j).m
    jc = params.coupling_j
    scale = params.epsilon / jc if jc > 0 else 0.0
    coupling = np.exp(-1j * scale * np.outer(m1, m2))
    if u1.shape[0] * u2.shape[0] > max_dim:
        raise ResourceError(f"product dimension {u1.shape[0] * u2.shape[0]} exceeds cap {max_dim}")
    return FloquetOperator(params, u1, u2, coupling, max_dim)


def heisenberg_jz_series(params, n_max):
    """J_z(n) = U^dagger^n J_z U^n for n = 0..n_max of an uncoupled top, stacked."""
    if n_max < 0:
        raise ParameterError("n must be >= 0")
    u = build_single_top_unitary(params)
    jz = build_spin_operators(params.j).jz
    out = np.empty((n_max + 1,) + jz.shape, complex)
    out[0] = jz
    for n in range(1, n_max + 1):
        a = u.conj().T @ out[n - 1] @ u
        out[n] = 0.5 * (a + a.conj().T)
    return out


def heisenberg_jz(params, n):
    return heisenberg_jz_series(params, n)[n]


def check_dims(state, dims):
    d1, d2 = dims
    if np.asarray(state).size % (d1 * d2):
        raise DimensionError(f"state size incompatible with dims {dims}")
