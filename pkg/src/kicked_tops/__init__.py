"""Simulation toolkit for two weakly coupled quantum kicked tops.

Covers spin algebra, Floquet evolution, entanglement measures, eigenvector
entanglement and long-time averages, weak-coupling perturbation theory,
the classical map with Lyapunov exponents, and ensemble moment checks.
"""
__version__ = "0.1.0"

from .classical import (classical_step, coupled_classical_step, lyapunov_exponent)
from .entanglement import (linear_entropy, partial_trace_first, partial_trace_second,
                           statistical_limit, von_neumann_entropy)
from .errors import (ConvergenceError, DegenerateSpectrumError, DimensionError,
                     KickedTopsError, ParameterError, ResourceError)
from .floquet import (CoupledParams, CouplingScale, FloquetOperator, Spectrum, TopParams,
                      build_coupled_step, build_single_top_unitary, heisenberg_jz)
from .moments import analytic_moment, marginal_integrals, monte_carlo_moment
from .perturbative import (correlation, correlation_table, perturbative_entropy,
                           strong_chaos_rate)
from .spectral import (asymptotic_entropy, asymptotic_lower_bound, check_cross_inequalities,
                       eigenvector_entanglement, resonant_asymptotic_entropy,
                       window_average)
from .spin import SpinOperators, build_spin_operators, coherent_state, rotation_about_y
from .states import (EnsembleKind, EnsembleSpec, ProductState, sample_haar_state,
                     sample_sud_product, sample_su2_product)
