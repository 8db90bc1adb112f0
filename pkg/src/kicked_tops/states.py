"""Initial-state ensembles: spin-coherent products, Haar-random products, full Haar states."""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError
from .spin import coherent_state, spin_dimension


class EnsembleKind(str, Enum):
    SU2 = "su2"
    SUD = "sud"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "").replace("(", "").replace(")", "")
        aliases = {"su2": cls.SU2, "su2coherent": cls.SU2, "coherent": cls.SU2,
                   "sud": cls.SUD, "sudrandom": cls.SUD, "haar": cls.SUD, "random": cls.SUD}
        try:
            return aliases[key]
        except KeyError:
            raise ParameterError(f"unknown ensemble {value!r}; use 'su2' or 'sud'") from None


@dataclass(frozen=True)
class ProductState:
    first: np.ndarray
    second: np.ndarray

    @property
    def dims(self):
        return self.first.shape[0], self.second.shape[0]

    def matrix(self):
        """Amplitude matrix C[m1, m2] of the composite state."""
        return np.outer(self.first, self.second)

    def vector(self):
        return np.kron(self.first, self.second)


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    count: int = 100
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind.parse(self.kind))
        if int(self.count) < 1:
            raise ParameterError("ensemble count must be >= 1")


def member_rng(seed, index):
    """Independent generator for ensemble member ``index`` under base ``seed``.

    Streams come from ``SeedSequence(seed, spawn_key=(index,))`` so any member can be
    regenerated alone, in any order, without touching the others.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def random_direction(rng):
    """(theta, phi) uniform on the unit sphere."""
    return float(np.arccos(rng.uniform(-1.0, 1.0))), float(rng.uniform(0.0, 2 * np.pi))


def sample_su2_product(j1, j2, rng):
    """Product of two independent spin-coherent states with isotropic directions."""
    return ProductState(coherent_state(j1, *random_direction(rng)),
                        coherent_state(j2, *random_direction(rng)))


def _haar_unitary_column(d, rng):
    # Ginibre QR with the R-diagonal phase fix gives a Haar unitary
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return q[:, 0]


def sample_haar_state(d, rng, method="gaussian"):
    """Unitarily invariant random pure state in dimension ``d``.

    ``method="gaussian"`` normalises a vector of i.i.d. complex Gaussians (O(d));
    ``method="qr"`` takes the first column of a Haar unitary built from a Ginibre
    QR (O(d^3)), kept for cross-checking the fast path.
    """
    d = int(d)
    if d < 1:
        raise ParameterError("dimension must be >= 1")
    if method == "gaussian":
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return z / np.linalg.norm(z)
    if method == "qr":
        return _haar_unitary_column(d, rng)
    raise ParameterError(f"unknown Haar sampling method {method!r}")


def sample_sud_product(j1, j2, rng, method="gaussian"):
    return ProductState(sample_haar_state(spin_dimension(j1), rng, method),
                        sample_haar_state(spin_dimension(j2), rng, method))


def sample_product(kind, j1, j2, rng):
    kind = EnsembleKind.parse(kind)
    if kind is EnsembleKind.SU2:
        return sample_su2_product(j1, j2, rng)
    return sample_sud_product(j1, j2, rng)


def ensemble_matrices(spec, j1, j2, start=0):
    """Stack the amplitude matrices of ensemble members ``start .. start+count-1``.

    Returns an array of shape ``(count, d1, d2)``; member ``i`` depends only on
    ``(spec.seed, i)``.
    """
    out = np.empty((spec.count, spin_dimension(j1), spin_dimension(j2)), complex)
    for n in range(spec.count):
        out[n] = sample_product(spec.kind, j1, j2, member_rng(spec.seed, start + n)).matrix()
    return out


def sample_full_haar_state(d1, d2, rng):
    """Haar-random state of the whole d1*d2 system, as a d1 x d2 amplitude matrix."""
    return sample_haar_state(d1 * d2, rng).reshape(d1, d2)
