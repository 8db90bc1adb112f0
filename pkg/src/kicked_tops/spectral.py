"""Eigenvector entanglement, long-time entanglement and the bound linking them.

Notation: ``e_i`` are Floquet eigenvectors with amplitude matrices ``C_i`` (d1 x d2),
``rho_i = C_i C_i^+`` and ``sigma_i = C_i^+ C_i`` their two reductions, and
``p_i = |<e_i|psi>|^2`` the eigenbasis populations of an initial state.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .entanglement import as_amplitude_matrix, purity
from .errors import DegenerateSpectrumError, DimensionError, ParameterError, ResourceError

PAIRWISE_MAX_DIM = 256


class DegeneracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EigenEntanglementReport:
    phases: np.ndarray
    entropies: np.ndarray
    min_gap: float
    degenerate: bool

    @property
    def mean(self):
        return float(np.mean(self.entropies))

    @property
    def trusted(self):
        return not self.degenerate

    def rows(self):
        return [(i, float(p), float(s)) for i, (p, s) in enumerate(zip(self.phases, self.entropies))]


def reduced_stacks(spectrum):
    """Return ``(rho, sigma, purities)`` for every eigenvector, stacked along axis 0."""
    c = spectrum.amplitude_matrices()
    rho = c @ c.conj().swapaxes(-1, -2)
    sigma = c.conj().swapaxes(-1, -2) @ c
    return rho, sigma, purity(c)


def eigenvector_entanglement(spectrum, strict=False):
    """Linear entropy of every eigenvector and their mean.

    A degenerate spectrum makes the eigenvectors basis-dependent; the report is
    still produced but marked untrusted (``strict=True`` raises instead).
    """
    if spectrum.degenerate:
        msg = (f"minimal eigenphase gap {spectrum.min_gap:.2e} is below "
               f"{spectrum.degeneracy_tol:.0e}; eigenvector entanglement is basis dependent")
        if strict:
            raise DegenerateSpectrumError(msg)
        warnings.warn(msg, DegeneracyWarning, stacklevel=2)
    s = np.clip(1.0 - purity(spectrum.amplitude_matrices()), 0.0, 1.0)
    return EigenEntanglementReport(spectrum.phases.copy(), s, spectrum.min_gap, spectrum.degenerate)


def asymptotic_lower_bound(report):
    """2 * mean eigenvector entropy - 1; refused for degenerate spectra."""
    if report.degenerate:
        raise DegenerateSpectrumError("lower bound needs a nondegenerate spectrum")
    return 2.0 * report.mean - 1.0


def _populations(spectrum, psi):
    psi = np.asarray(psi)
    d = spectrum.vectors.shape[0]
    if psi.shape[-2:] == tuple(spectrum.dims):
        psi = psi.reshape(psi.shape[:-2] + (d,))
    if psi.shape[-1] != d:
        raise DimensionError(f"state length {psi.shape[-1]} does not match {d}")
    return np.abs(spectrum.coefficients(psi)) ** 2


def asymptotic_entropy(spectrum, psi, max_dim=4096, stacks=None):
    """Infinite-time average of the linear entropy of ``U^n psi``.

    Keeps the dephasing-surviving terms (i=j, k=l and i=l, k=j) of the purity.
    Those two families collapse onto the averaged reductions,

        S = 1 - ||sum_i p_i rho_i||^2 - ||sum_i p_i sigma_i||^2 + sum_i p_i^2 Tr(rho_i^2),

    because ``Tr(Tr_2|e_i><e_j| Tr_2|e_j><e_i|) = Tr(sigma_i sigma_j)``.  Cost is
    O(D d1 d2 (d1 + d2)) for D = d1 d2 instead of a sum over all (i, j) pairs.
    ``psi`` may be a stack of states; the result then has the stack shape.
    """
    if spectrum.vectors.shape[0] > max_dim:
        raise ResourceError(f"dimension {spectrum.vectors.shape[0]} exceeds cap {max_dim}; "
                            "use window_average instead")
    if spectrum.degenerate:
        warnings.warn("asymptotic formula assumes a nondegenerate spectrum", DegeneracyWarning,
                      stacklevel=2)
    rho, sigma, pur = stacks if stacks is not None else reduced_stacks(spectrum)
    p = _populations(spectrum, psi)
    r = np.tensordot(p, rho, axes=(-1, 0))
    s = np.tensordot(p, sigma, axes=(-1, 0))
    fro = lambda a: np.sum(a.real ** 2 + a.imag ** 2, axis=(-2, -1))
    return 1.0 - fro(r) - fro(s) + (p ** 2) @ pur


def asymptotic_entropy_pairwise(spectrum, psi, max_dim=PAIRWISE_MAX_DIM):
    """Same quantity evaluated term by term over all eigenvector pairs (small systems only)."""
    d = spectrum.vectors.shape[0]
    if d > max_dim:
        raise ResourceError(f"pairwise evaluation limited to dimension {max_dim}")
    c = spectrum.amplitude_matrices()
    p = _populations(spectrum, psi)
    rho = c @ c.conj().swapaxes(-1, -2)
    # cross[i, j] = Tr_2 |e_i><e_j| = C_i C_j^+
    cross = np.einsum("iab,jcb->ijac", c, c.conj())
    total = 1.0
    for i in range(d):
        for j in range(d):
            w = p[i] * p[j]
            total -= w * np.trace(rho[i] @ rho[j]).real
            if i != j:
                total -= w * np.trace(cross[i, j] @ cross[j, i]).real
    return float(total)


def _frequency_labels(omega, tol):
    """Cluster circular frequencies in (-pi, pi] whose separation is below ``tol``."""
    order = np.argsort(omega)
    srt = omega[order]
    labels_sorted = np.concatenate([[0], np.cumsum(np.diff(srt) > tol)])
    if srt.size > 1 and srt[0] + 2 * np.pi - srt[-1] <= tol:
        labels_sorted[labels_sorted == labels_sorted[-1]] = 0
    labels = np.empty_like(labels_sorted)
    labels[order] = labels_sorted
    return labels


def resonant_asymptotic_entropy(spectrum, psi, tol=1e-8, max_dim=PAIRWISE_MAX_DIM):
    """Exact infinite-time average of the linear entropy, resonances included.

    Writing the reduced state as ``rho(n) = sum_w exp(-i n w) M_w`` with ``M_w``
    collecting every pair (i, j) whose phase difference equals ``w`` (mod 2 pi,
    within ``tol``), the averaged purity is ``sum_w ||M_w||_F^2``.  Without
    coincidences among phase differences this reduces to
    :func:`asymptotic_entropy`; with them (the p = pi/2 tops have exactly paired
    eigenphases) extra terms survive the average.
    """
    d = spectrum.vectors.shape[0]
    if d > max_dim:
        raise ResourceError(f"resonant evaluation limited to dimension {max_dim}")
    psi = np.asarray(psi)
    if psi.shape == tuple(spectrum.dims):
        psi = psi.reshape(d)
    coef = spectrum.coefficients(psi)
    c = spectrum.amplitude_matrices()
    if c.shape[1] > c.shape[2]:
        c = c.swapaxes(-1, -2)
    phases = spectrum.phases
    omega = np.angle(np.exp(1j * (phases[:, None] - phases[None, :]))).ravel()
    labels = _frequency_labels(omega, tol)
    # term[i, j] = c_i c_j^* C_i C_j^+, one reduced-state matrix per ordered pair
    a = coef[:, None, None] * c
    term = np.einsum("iab,jcb->ijac", a, a.conj()).reshape(d * d, c.shape[1], c.shape[1])
    m = np.zeros((labels.max() + 1,) + term.shape[1:], complex)
    np.add.at(m, labels, term)
    return float(1.0 - np.sum(m.real ** 2 + m.imag ** 2))


def averaged_state_entropy(spectrum, psi, stacks=None):
    """Linear entropy of the time-averaged reduced state ``sum_i p_i rho_i``.

    Differs from :func:`asymptotic_entropy` by the off-diagonal pair term.
    """
    rho, _, _ = stacks if stacks is not None else reduced_stacks(spectrum)
    r = np.tensordot(_populations(spectrum, psi), rho, axes=(-1, 0))
    return 1.0 - np.sum(np.abs(r) ** 2, axis=(-2, -1))


@dataclass(frozen=True)
class CrossInequalityReport:
    cross_lhs: float
    rho_lhs: float
    rhs: float

    @property
    def cross_margin(self):
        return self.rhs - self.cross_lhs

    @property
    def rho_margin(self):
        return self.rhs - self.rho_lhs

    def violated(self, tol=1e-12):
        return self.cross_margin < -tol or self.rho_margin < -tol


def check_cross_inequalities(e_i, e_j, dims):
    """Evaluate both sides of

        2 Tr(Tr_2|e_i><e_j| Tr_2|e_j><e_i|) <= Tr rho_i^2 + Tr rho_j^2
        2 Tr(rho_i rho_j)                   <= Tr rho_i^2 + Tr rho_j^2
    """
    ci = as_amplitude_matrix(e_i, dims)
    cj = as_amplitude_matrix(e_j, dims)
    rho_i, rho_j = ci @ ci.conj().T, cj @ cj.conj().T
    x_ij, x_ji = ci @ cj.conj().T, cj @ ci.conj().T
    rhs = np.trace(rho_i @ rho_i).real + np.trace(rho_j @ rho_j).real
    return CrossInequalityReport(2 * np.trace(x_ij @ x_ji).real,
                                 2 * np.trace(rho_i @ rho_j).real, rhs)


def window_average(op, c0, start, end, stride=1, spectrum=None):
    """Mean linear entropy over kicks ``start, start+stride, ..., <= end``.

    With a ``spectrum`` every sampled kick is reached exactly through the
    eigenbasis, so cost depends on the number of samples, not on ``end``.
    Without one the factored step is iterated kick by kick.  ``c0`` is a stack
    of amplitude matrices; the result has the stack shape.
    """
    if not 0 <= start <= end:
        raise ParameterError("need 0 <= start <= end")
    c0 = np.asarray(c0, complex)
    d1, d2 = op.dims
    times = np.arange(start, end + 1, stride)
    acc = np.zeros(c0.shape[:-2])
    if spectrum is not None:
        coeffs = spectrum.coefficients(c0.reshape(c0.shape[:-2] + (d1 * d2,)))
        for n in times:
            c = (coeffs * np.exp(1j * n * spectrum.phases)) @ spectrum.vectors.T
            acc += 1.0 - purity(c.reshape(c0.shape))
        return acc / times.size
    c = op.evolve(c0, start)
    acc += 1.0 - purity(c)
    for n in range(start + 1, times[-1] + 1):
        c = op.step(c)
        if (n - start) % stride == 0:
            acc += 1.0 - purity(c)
    return acc / times.size
