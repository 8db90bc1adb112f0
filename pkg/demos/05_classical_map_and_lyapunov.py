"""
The classical kicked top and its Lyapunov exponent
==================================================

The classical limit maps a unit vector (X, Y, Z) on the sphere.  At k = 0 it
is a quarter turn with period four; as k grows the map turns chaotic and the
largest Lyapunov exponent, estimated by tangent-vector propagation, rises.
"""
import numpy as np

from kicked_tops.classical import classical_trajectory, lyapunov_exponent

traj = classical_trajectory(np.array([0.6, 0.0, 0.8]), 0.0, 4)
print("k=0 orbit:\n", np.round(traj, 3))

for k in (0.01, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0):
    est = lyapunov_exponent(k, n_points=100, n_steps=5000, rng=np.random.default_rng(0))
    print(f"k={k:<4g} lambda = {est.value:.4f} +/- {est.stderr:.4f}")
