"""
Spin operators, rotations and coherent states
=============================================

The building blocks of a kicked top: angular-momentum matrices in the J_z
eigenbasis (ordered m = j .. -j), the quarter-turn rotation about y, and
spin-coherent states pointing along a chosen direction.
"""
import numpy as np

from kicked_tops.spin import bloch_vector, build_spin_operators, coherent_state, rotation_about_y

# Operators for j = 3/2 obey [J_x, J_y] = i J_z and J^2 = j(j+1).
ops = build_spin_operators(1.5)
print("dimension:", ops.dim, " m values:", ops.m)
comm = ops.jx @ ops.jy - ops.jy @ ops.jx
print("max |[Jx, Jy] - i Jz|:", np.abs(comm - 1j * ops.jz).max())

# A quarter turn about y carries J_z into -J_x.
r = rotation_about_y(ops, np.pi / 2)
print("max |R^+ Jz R + Jx|:", np.abs(r.conj().T @ ops.jz @ r + ops.jx).max())

# Coherent states are the most classical spin states; their mean spin points
# along the polar direction they were built from, with full length j.
big = build_spin_operators(20.0)
theta, phi = 1.0, 0.4
psi = coherent_state(20.0, theta, phi)
print("direction  :", np.round([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                                np.cos(theta)], 6))
print("<J>/j      :", np.round(bloch_vector(big, psi), 6))
