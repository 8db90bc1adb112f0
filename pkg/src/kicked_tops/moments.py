"""Ensemble moments of single-spin J_z expectations, analytic and Monte Carlo.

Four moments are covered, each averaged over either spin-coherent states with
isotropic directions (SU2) or Haar-random states (SUD):

    SU2_Jz2    = E <J_z^2>        = j(j+1)/3
    SU2_Jz_sq  = E <J_z>^2        = j^2/3
    SUd_Jz2    = E <J_z^2>        = j(j+1)/3
    SUd_Jz_sq  = E <J_z>^2        = j/6
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import ConvergenceError, ParameterError
from .spin import build_spin_operators, coherent_state, spin_dimension
from .states import random_direction, sample_haar_state

MOMENT_KINDS = ("SU2_Jz2", "SU2_Jz_sq", "SUd_Jz2", "SUd_Jz_sq")


def analytic_moment(kind, j):
    spin_dimension(j)
    if kind in ("SU2_Jz2", "SUd_Jz2"):
        return j * (j + 1) / 3.0
    if kind == "SU2_Jz_sq":
        return j * j / 3.0
    if kind == "SUd_Jz_sq":
        return j / 6.0
    raise ParameterError(f"unknown moment kind {kind!r}")


@dataclass(frozen=True)
class MomentResult:
    kind: str
    j: float
    analytic: float
    monte_carlo_mean: float
    monte_carlo_stderr: float
    samples: int

    def passed(self, n_sigma=3.0):
        err = abs(self.monte_carlo_mean - self.analytic)
        if self.monte_carlo_stderr == 0.0:
            return err < 1e-12
        return err <= n_sigma * self.monte_carlo_stderr

    def row(self, n_sigma=3.0):
        return (self.kind, self.j, self.analytic, self.monte_carlo_mean,
                self.monte_carlo_stderr, self.samples, self.passed(n_sigma))


def sample_states(ensemble, j, samples, rng):
    """``samples`` single-spin states from the SU2 (coherent) or SUD (Haar) ensemble."""
    d = spin_dimension(j)
    out = np.empty((samples, d), complex)
    if ensemble.upper().startswith("SU2"):
        for n in range(samples):
            out[n] = coherent_state(j, *random_direction(rng))
    else:
        z = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
        out[:] = z / np.linalg.norm(z, axis=1, keepdims=True)
    return out


def _expectations(states, op):
    return np.einsum("na,ab,nb->n", states.conj(), op, states)


def monte_carlo_moment(kind, j, samples, rng, axis="z", states=None):
    """Monte Carlo estimate of one of the four moments (``axis`` swaps J_z for J_x/J_y)."""
    if kind not in MOMENT_KINDS:
        raise ParameterError(f"unknown moment kind {kind!r}")
    ops = build_spin_operators(j)
    op = {"x": ops.jx, "y": ops.jy, "z": ops.jz}[axis]
    if states is None:
        states = sample_states(kind[:3], j, samples, rng)
    if kind.endswith("_Jz2"):
        vals = _expectations(states, op @ op).real
    else:
        vals = _expectations(states, op).real ** 2
    n = vals.size
    stderr = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
    return MomentResult(kind, float(j), analytic_moment(kind, j), float(vals.mean()), stderr, n)


def marginal_p1(x, j):
    """Density of the real part of one amplitude of a Haar-random state in dimension 2j+1."""
    log_norm = gammaln(2 * j + 1) - gammaln(2 * j + 0.5) - 0.5 * np.log(np.pi)
    return np.exp(log_norm) * (1.0 - x * x) ** (2 * j - 0.5)


def marginal_p2(x, y, j):
    """Joint density of real and imaginary part of one amplitude.

    Normalised over the unit disk by 2j / pi; the factorial (2j)! only agrees with
    that for j <= 1.
    """
    return (2 * j / np.pi) * np.maximum(1.0 - x * x - y * y, 0.0) ** (2 * j - 1)


@dataclass(frozen=True)
class MarginalMoments:
    j: float
    x4_analytic: float
    x2y2_analytic: float
    x4_quadrature: float
    x2y2_quadrature: float
    p1_norm: float
    p2_norm: float

    def max_relative_error(self):
        return max(abs(self.x4_quadrature / self.x4_analytic - 1),
                   abs(self.x2y2_quadrature / self.x2y2_analytic - 1))


def _quad(f, a, b, **kw):
    val, err = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=200, **kw)
    if not np.isfinite(val) or err > 1e-9 * max(abs(val), 1e-300) + 1e-13:
        raise ConvergenceError(f"quadrature error estimate {err:.2e} for value {val:.3e}")
    return val


def _disk_quad(f):
    # iterated 1-D quadrature over the unit disk
    def inner(x):
        h = np.sqrt(max(1.0 - x * x, 0.0))
        return _quad(lambda y: f(x, y), -h, h)
    return _quad(inner, -1.0, 1.0)


def marginal_integrals(j):
    """Fourth-order single-amplitude moments, closed form next to quadrature."""
    if j < 0.5:
        raise ParameterError("marginal integrals need j >= 1/2")
    spin_dimension(j)
    denom = 8.0 * (j + 1) * (2 * j + 1)
    return MarginalMoments(
        float(j), 3.0 / denom, 1.0 / denom,
        _quad(lambda x: x ** 4 * marginal_p1(x, j), -1.0, 1.0),
        _disk_quad(lambda x, y: x * x * y * y * marginal_p2(x, y, j)),
        _quad(lambda x: marginal_p1(x, j), -1.0, 1.0),
        _disk_quad(lambda x, y: marginal_p2(x, y, j)),
    )


@dataclass(frozen=True)
class CrossTermReport:
    ensemble: str
    j: float
    samples: int
    means: dict
    stderrs: dict

    def passed(self, n_sigma=3.0):
        for key, m in self.means.items():
            se = self.stderrs[key]
            if se == 0.0 or not np.isfinite(se):
                if abs(m) > 1e-12:
                    return False
            elif abs(m) > n_sigma * se:
                return False
        return True


def cross_term_vanishing_check(j, samples, rng, ensemble="SU2"):
    """Ensemble means of <J_z J_x> (real and imaginary parts) and <J_z><J_x>."""
    ops = build_spin_operators(j)
    states = sample_states(ensemble, j, samples, rng)
    zx = _expectations(states, ops.jz @ ops.jx)
    prod = _expectations(states, ops.jz).real * _expectations(states, ops.jx).real
    series = {"JzJx_re": zx.real, "JzJx_im": zx.imag, "Jz_Jx": prod}
    means = {k: float(v.mean()) for k, v in series.items()}
    stderrs = {k: float(v.std(ddof=1) / np.sqrt(v.size)) if v.size > 1 else 0.0
               for k, v in series.items()}
    return CrossTermReport(ensemble, float(j), int(samples), means, stderrs)


def equal_time_variance(kind, j):
    """Ensemble mean of Var(J_z / j): (E<J_z^2> - E<J_z>^2) / j^2."""
    base = "SU2" if kind.upper().startswith("SU2") else "SUd"
    return (analytic_moment(f"{base}_Jz2", j) - analytic_moment(f"{base}_Jz_sq", j)) / j ** 2


def predicted_rate_ratio(j1, j2):
    """SUd / SU2 ratio of initial growth rates near k = 0 implied by the moments.

    Each top contributes the ratio of its equal-time variances, j + 1/2, so the
    product is (j1 + 1/2)(j2 + 1/2), approximately j1 j2.
    """
    return (equal_time_variance("SUd", j1) * equal_time_variance("SUd", j2)
            / (equal_time_variance("SU2", j1) * equal_time_variance("SU2", j2)))
