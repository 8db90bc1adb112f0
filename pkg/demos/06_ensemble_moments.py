"""
Moments of J_z over the two state ensembles
===========================================

The rate contrast in the regular regime rests on four ensemble averages:
E<J_z^2> and E<J_z>^2 over coherent states and over Haar-random states.  Each
is checked by Monte Carlo here, and the fourth moments of a single amplitude
of a Haar-random state are checked by quadrature of its marginal densities.
"""
import numpy as np

from kicked_tops.moments import (MOMENT_KINDS, marginal_integrals, monte_carlo_moment,
                                 predicted_rate_ratio)

rng = np.random.default_rng(3)
for j in (0.5, 1.0, 5.0):
    for kind in MOMENT_KINDS:
        res = monte_carlo_moment(kind, j, 20_000, rng)
        print(f"j={j:<4g} {kind:<10} analytic {res.analytic:8.4f}  "
              f"MC {res.monte_carlo_mean:8.4f} +/- {res.monte_carlo_stderr:.4f}")
    m = marginal_integrals(j)
    print(f"        marginals: x^4 {m.x4_quadrature:.6f} (exact {m.x4_analytic:.6f}), "
          f"x^2 y^2 {m.x2y2_quadrature:.6f} (exact {m.x2y2_analytic:.6f})")

print("predicted SUD/SU2 rate ratio for j1=19.5, j2=20:", predicted_rate_ratio(19.5, 20.0))
