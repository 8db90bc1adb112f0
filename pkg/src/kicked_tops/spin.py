"""Angular-momentum matrices, y-rotations and spin-coherent states for a single spin.

All matrices are expressed in the J_z eigenbasis ordered m = j, j-1, ..., -j,
so that |j, j> is the first basis vector.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import ParameterError


def spin_dimension(j):
    """Return ``2j + 1`` for a valid spin, raising ``ParameterError`` otherwise."""
    try:
        two_j = 2.0 * float(j)
    except (TypeError, ValueError):
        raise ParameterError(f"spin j={j!r} is not a number") from None
    if not np.isfinite(two_j) or two_j < 0 or two_j != round(two_j):
        raise ParameterError(f"spin j={j!r} must be a non-negative half-integer")
    return int(round(two_j)) + 1


@dataclass(frozen=True)
class SpinOperators:
    """Dense spin matrices for one spin ``j`` (hbar = 1)."""

    j: float
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def dim(self):
        return self.jz.shape[0]

    @property
    def m(self):
        """Magnetic quantum numbers in basis order, j down to -j."""
        return np.real(np.diag(self.jz))

    @property
    def jminus(self):
        return self.jx - 1j * self.jy

    @property
    def jplus(self):
        return self.jx + 1j * self.jy


@lru_cache(maxsize=64)
def _spin_operators(j):
    d = spin_dimension(j)
    m = j - np.arange(d)
    # <m+1|J+|m> sits on the superdiagonal in descending order
    raising = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1)
    jx = 0.5 * (raising + raising.T).astype(complex)
    jy = -0.5j * (raising - raising.T)
    jz = np.diag(m).astype(complex)
    for a in (jx, jy, jz):
        a.setflags(write=False)
    return SpinOperators(float(j), jx, jy, jz)


def build_spin_operators(j):
    """Build J_x, J_y, J_z for spin ``j``.

    Parameters
    ----------
    j : float
        Spin magnitude; ``2j`` must be a non-negative integer.

    Returns
    -------
    SpinOperators
        Read-only matrices, cached per ``j``.
    """
    spin_dimension(j)
    return _spin_operators(float(j))


def rotation_about_y(ops, angle):
    """Return ``exp(-i * angle * J_y)`` via the Hermitian eigendecomposition of J_y."""
    w, v = np.linalg.eigh(ops.jy)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def coherent_state(j, theta, phi):
    """Spin-coherent state pointing along the polar angles ``(theta, phi)``.

    Expands ``(1 + |g|^2)^(-j) exp(g J_-) |j, j>`` with ``g = exp(i phi) tan(theta / 2)``
    in closed form,

        a_n = sqrt(binom(2j, n)) cos(theta/2)^(2j-n) (sin(theta/2) e^{i phi})^n,

    where ``n = j - m`` counts lowering steps.  The amplitude on |j, j> is real and
    non-negative, and theta = pi gives |j, -j> without evaluating tan(pi/2).
    """
    d = spin_dimension(j)
    if not 0.0 <= theta <= np.pi:
        raise ParameterError(f"theta={theta} outside [0, pi]")
    n = np.arange(d)
    two_j = d - 1
    log_binom = 0.5 * (gammaln(two_j + 1) - gammaln(n + 1) - gammaln(two_j - n + 1))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mag = log_binom + (two_j - n) * np.log(c) + n * np.log(s)
    amps = np.exp(log_mag) * np.exp(1j * n * phi)
    # 0 ** 0 edge cases: exactly-polar states
    if s == 0.0:
        amps = np.zeros(d, complex)
        amps[0] = 1.0
    elif c < 1e-300:
        amps = np.zeros(d, complex)
        amps[-1] = np.exp(1j * two_j * phi)
    return amps / np.linalg.norm(amps)


def bloch_vector(ops, psi):
    """Return <J>/j for a normalised state ``psi``."""
    vec = np.array([np.vdot(psi, a @ psi).real for a in (ops.jx, ops.jy, ops.jz)])
    return vec / ops.j if ops.j > 0 else vec
