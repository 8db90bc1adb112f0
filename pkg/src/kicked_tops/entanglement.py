"""Partial traces and pure-state entanglement measures.

States of the composite system are handled as amplitude matrices ``C`` of shape
``(d1, d2)`` (or stacks ``(..., d1, d2)``), with ``|psi> = sum C[a, b] |a> |b>``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

EIGENVALUE_FLOOR = 1e-14


@dataclass(frozen=True)
class ReducedDensity:
    rho: np.ndarray
    source_dims: tuple

    @property
    def purity(self):
        return float(np.real(np.vdot(self.rho, self.rho)))


def as_amplitude_matrix(state, dims):
    """Reshape a flat state (or stack of states) into amplitude matrices."""
    d1, d2 = dims
    state = np.asarray(state)
    if state.shape[-2:] == (d1, d2):
        return state
    if state.shape[-1] != d1 * d2:
        raise DimensionError(f"state of length {state.shape[-1]} does not match dims {dims}")
    return state.reshape(state.shape[:-1] + (d1, d2))


def partial_trace_second(state, dims):
    """rho_1 = Tr_2 |psi><psi| = C C^dagger."""
    c = as_amplitude_matrix(state, dims)
    return ReducedDensity(c @ c.conj().swapaxes(-1, -2), tuple(dims))


def partial_trace_first(state, dims):
    """rho_2 = Tr_1 |psi><psi| = C^T C^*."""
    c = as_amplitude_matrix(state, dims)
    return ReducedDensity(c.swapaxes(-1, -2) @ c.conj(), tuple(dims))


def purity(c):
    """Tr(rho_1^2) for amplitude matrices ``c`` of shape ``(..., d1, d2)``.

    Contracts over the smaller factor so the Gram matrix is ``min(d1, d2)`` square.
    """
    if c.shape[-2] <= c.shape[-1]:
        g = c @ c.conj().swapaxes(-1, -2)
    else:
        g = c.conj().swapaxes(-1, -2) @ c
    return np.sum(g.real ** 2 + g.imag ** 2, axis=(-2, -1))


def linear_entropy_of_state(c):
    """1 - Tr(rho_1^2) straight from amplitude matrices (no density matrix kept)."""
    return np.clip(1.0 - purity(c), 0.0, 1.0)


def linear_entropy(rho):
    """S_L = 1 - Tr(rho^2), clipped to [0, 1] against round-off."""
    r = rho.rho if isinstance(rho, ReducedDensity) else np.asarray(rho)
    p = np.sum(np.abs(r) ** 2, axis=(-2, -1))
    return np.clip(1.0 - p, 0.0, 1.0)


def von_neumann_entropy(rho):
    """-Tr(rho log2 rho), in bits; eigenvalues below 1e-14 count as zero."""
    r = rho.rho if isinstance(rho, ReducedDensity) else np.asarray(rho)
    lam = np.linalg.eigvalsh(r)
    lam = lam[lam > EIGENVALUE_FLOOR]
    return float(-np.sum(lam * np.log2(lam)))


def max_linear_entropy(d1, d2):
    return 1.0 - 1.0 / min(d1, d2)


def statistical_limit(d1, d2):
    """Mean linear entropy of a Haar-random state of the d1*d2 system."""
    return 1.0 - (d1 + d2) / (d1 * d2 + 1)
