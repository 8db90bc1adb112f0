"""Classical kicked-top maps on the unit sphere and their largest Lyapunov exponent.

Points are arrays whose last axis holds (X, Y, Z); leading axes are batch axes.
"""
from dataclasses import dataclass

import numpy as np


def _renormalize(s):
    return s / np.linalg.norm(s, axis=-1, keepdims=True)


def _rotate(s, angle):
    x, y, z = s[..., 0], s[..., 1], s[..., 2]
    c, sn = np.cos(angle), np.sin(angle)
    return np.stack([z * c + y * sn, -z * sn + y * c, -x], axis=-1)


def classical_step(s, k, renormalize=True):
    """X' = Z cos(kX) + Y sin(kX),  Y' = -Z sin(kX) + Y cos(kX),  Z' = -X."""
    s = np.asarray(s, float)
    out = _rotate(s, k * s[..., 0])
    return _renormalize(out) if renormalize else out


def coupled_classical_step(s1, s2, k, epsilon, renormalize=True):
    """Both tops rotate by kX_i + eps X_other, using the pre-kick X values."""
    s1 = np.asarray(s1, float)
    s2 = np.asarray(s2, float)
    x1, x2 = s1[..., 0], s2[..., 0]
    out1 = _rotate(s1, k * x1 + epsilon * x2)
    out2 = _rotate(s2, k * x2 + epsilon * x1)
    if renormalize:
        out1, out2 = _renormalize(out1), _renormalize(out2)
    return out1, out2


def jacobian(s, k):
    """Analytic 3x3 derivative of the single-top map at ``s`` (batched)."""
    s = np.asarray(s, float)
    x, y, z = s[..., 0], s[..., 1], s[..., 2]
    c, sn = np.cos(k * x), np.sin(k * x)
    jac = np.zeros(s.shape[:-1] + (3, 3))
    jac[..., 0, 0] = k * (-z * sn + y * c)
    jac[..., 0, 1] = sn
    jac[..., 0, 2] = c
    jac[..., 1, 0] = -k * (z * c + y * sn)
    jac[..., 1, 1] = c
    jac[..., 1, 2] = -sn
    jac[..., 2, 0] = -1.0
    return jac


def sphere_points(n, rng):
    """``n`` points uniform on the unit sphere."""
    cos_t = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    sin_t = np.sqrt(1.0 - cos_t ** 2)
    return np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=-1)


def _project_tangent(v, s):
    return v - np.sum(v * s, axis=-1, keepdims=True) * s


@dataclass(frozen=True)
class LyapunovEstimate:
    k: float
    value: float
    stderr: float
    n_points: int
    n_steps: int
    transient: int = 100

    def row(self):
        return (self.k, self.value, self.stderr, self.n_points, self.n_steps)


def lyapunov_exponents(k, points, n_steps=10_000, transient=100, renorm_every=10, rng=None):
    """Per-trajectory largest exponent (per kick) by tangent-vector propagation.

    Each trajectory first discards ``transient`` kicks, then carries a tangent vector
    projected onto the sphere's tangent plane every kick and renormalised every
    ``renorm_every`` kicks, accumulating the log stretch.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    s = np.array(points, float)
    for _ in range(transient):
        s = classical_step(s, k)
    v = _project_tangent(rng.standard_normal(s.shape), s)
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    log_growth = np.zeros(s.shape[:-1])
    for n in range(1, n_steps + 1):
        jac = jacobian(s, k)
        s = classical_step(s, k)
        v = _project_tangent(np.einsum("...ij,...j->...i", jac, v), s)
        if n % renorm_every == 0 or n == n_steps:
            norm = np.linalg.norm(v, axis=-1, keepdims=True)
            log_growth += np.log(norm[..., 0])
            v /= norm
    return log_growth / n_steps


def lyapunov_exponent(k, n_points=200, n_steps=10_000, rng=None, transient=100, renorm_every=10):
    """Largest Lyapunov exponent averaged over ``n_points`` isotropic initial conditions."""
    rng = np.random.default_rng(0) if rng is None else rng
    lam = lyapunov_exponents(k, sphere_points(n_points, rng), n_steps, transient, renorm_every, rng)
    stderr = float(lam.std(ddof=1) / np.sqrt(n_points)) if n_points > 1 else float("nan")
    return LyapunovEstimate(float(k), float(lam.mean()), stderr, int(n_points), int(n_steps),
                            int(transient))


def classical_trajectory(s0, k, n_steps):
    out = np.empty((n_steps + 1, 3))
    out[0] = s0
    for n in range(n_steps):
        out[n + 1] = classical_step(out[n], k)
    return out
