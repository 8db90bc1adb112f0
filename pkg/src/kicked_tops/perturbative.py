"""Time correlations of the uncoupled tops and the weak-coupling entropy growth they predict."""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .floquet import TopParams, heisenberg_jz_series

DEFAULT_HORIZON = 15


@lru_cache(maxsize=32)
def _scaled_jz_series(params, horizon):
    series = heisenberg_jz_series(params, horizon) / params.j
    series.setflags(write=False)
    return series


def scaled_jz_series(params, horizon):
    """z(n) = J_z(n) / j for n = 0..horizon, cached per (params, horizon)."""
    if params.j == 0:
        raise ParameterError("correlations need j > 0")
    return _scaled_jz_series(params, int(horizon))


def correlation_matrix(params, psi, horizon=DEFAULT_HORIZON, symmetrize=True):
    """C(n, m) for n, m = 0..horizon in the single-top state ``psi``.

    With ``v_n = z(n) psi`` the two-time moment is ``<z(n) z(m)> = <v_n|v_m>``.
    The symmetrized estimator keeps its real part (the anticommutator average),
    which is what enters the entropy growth; ``symmetrize=False`` returns the
    raw complex covariance.
    """
    z = scaled_jz_series(params, horizon)
    v = z @ psi
    mean = (psi.conj() @ v.T).real
    second = v.conj() @ v.T
    if symmetrize:
        second = second.real
    return second - np.outer(mean, mean)


def correlation(params, psi, n, m, symmetrize=True):
    return correlation_matrix(params, psi, max(n, m), symmetrize)[n, m]


@dataclass(frozen=True)
class CorrelationTable:
    """Correlations on the grid n, m = 0..horizon (row/column 0 is the initial time)."""

    horizon: int
    c1: np.ndarray
    c2: np.ndarray
    d: np.ndarray
    mode: str
    samples: int = 1

    def rows(self):
        """(n, m, C1, C2, D) for 1 <= n, m <= horizon."""
        t = self.horizon
        return [(n, m, self.c1[n, m], self.c2[n, m], self.d[n, m])
                for n in range(1, t + 1) for m in range(1, t + 1)]


def correlation_table(params, states, horizon=DEFAULT_HORIZON, mode="sud",
                      order="average_of_products"):
    """Ensemble-averaged C1, C2 and D for a list of ProductStates.

    ``order="average_of_products"`` averages ``C1 * C2`` state by state;
    ``"product_of_averages"`` multiplies the averaged C's (diagnostic).
    """
    if order not in ("average_of_products", "product_of_averages"):
        raise ParameterError(f"unknown averaging order {order!r}")
    c1 = np.zeros((horizon + 1, horizon + 1))
    c2 = np.zeros_like(c1)
    d = np.zeros_like(c1)
    states = list(states)
    for st in states:
        a = correlation_matrix(params.top1, st.first, horizon)
        b = correlation_matrix(params.top2, st.second, horizon)
        c1 += a
        c2 += b
        d += a * b
    n = len(states)
    c1, c2, d = c1 / n, c2 / n, d / n
    if order == "product_of_averages":
        d = c1 * c2
    return CorrelationTable(horizon, c1, c2, d, mode, n)


def coupling_prefactor(params):
    """2 eps^2 (j1 j2 / j_c)^2, which is 2 eps^2 j1 j2 for the geometric-mean j_c."""
    j1, j2 = params.top1.j, params.top2.j
    return 2.0 * params.epsilon ** 2 * (j1 * j2 / params.coupling_j) ** 2


def perturbative_entropy(params, table, t):
    """Predicted linear entropy after ``t`` kicks: prefactor * sum_{n,m=1}^{t} D(n, m)."""
    if t > table.horizon:
        raise ParameterError(f"t={t} beyond table horizon {table.horizon}")
    if t <= 0:
        return 0.0
    return float(coupling_prefactor(params) * table.d[1:t + 1, 1:t + 1].sum())


def perturbative_curve(params, table):
    """Prediction for t = 0..horizon."""
    return np.array([perturbative_entropy(params, table, t) for t in range(table.horizon + 1)])


def strong_chaos_rate(params):
    """Growth rate per kick when only D(n, n) = 1/9 survives."""
    return coupling_prefactor(params) / 9.0
