"""Fast oracle checks behind ``kicked-tops verify``.

Each check returns a :class:`Check`; sizes are chosen to finish in seconds, so
these are smoke tests of the same properties the full test suite pins down.
"""
from dataclasses import dataclass

import numpy as np

from .classical import classical_step, coupled_classical_step, lyapunov_exponent, sphere_points
from .entanglement import linear_entropy_of_state, statistical_limit
from .floquet import CoupledParams, build_coupled_step
from .moments import MOMENT_KINDS, marginal_integrals, monte_carlo_moment
from .spectral import asymptotic_entropy, check_cross_inequalities, eigenvector_entanglement
from .spectral import resonant_asymptotic_entropy, window_average
from .spin import build_spin_operators
from .states import member_rng, sample_haar_state, sample_sud_product


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_spin_algebra():
    worst = 0.0
    for j in (0.5, 1, 3.5, 19.5):
        o = build_spin_operators(j)
        for a, b, c in ((o.jx, o.jy, o.jz), (o.jy, o.jz, o.jx), (o.jz, o.jx, o.jy)):
            worst = max(worst, np.abs(a @ b - b @ a - 1j * c).max())
    return Check("spin commutators", worst < 1e-10, f"max deviation {worst:.1e}")


def check_statistical_limit(samples=1000, seed=0):
    rng = np.random.default_rng(seed)
    s = np.array([linear_entropy_of_state(sample_haar_state(12, rng).reshape(3, 4))
                  for _ in range(samples)])
    target = statistical_limit(3, 4)
    se = s.std(ddof=1) / np.sqrt(samples)
    ok = abs(s.mean() - target) <= 3 * se and abs(statistical_limit(40, 41) - (1 - 81 / 1641)) < 1e-12
    return Check("statistical limit", ok, f"MC {s.mean():.5f} vs {target:.5f} (se {se:.1e})")


def check_inequalities(pairs=2000, seed=0):
    rng = np.random.default_rng(seed)
    bad = 0
    for n in range(pairs):
        dims = ((2, 2), (3, 4), (8, 8))[n % 3]
        d = dims[0] * dims[1]
        rep = check_cross_inequalities(sample_haar_state(d, rng), sample_haar_state(d, rng), dims)
        bad += rep.violated()
    return Check("cross inequalities", bad == 0, f"{bad} violations in {pairs} pairs")


def check_asymptotic_formula(states=2, window=(50_000, 2_050_000), stride=41, tol=2e-3, seed=0):
    # A near-coincidence of two phase differences (~4e-5 apart) beats over ~1.4e5
    # kicks here, so the window must be long; the eigenbasis makes sampling cheap.
    params = CoupledParams.make(1.0, 1.5, 3.0, 0.1)
    op = build_coupled_step(params)
    spec = op.diagonalize()
    worst = 0.0
    for i in range(states):
        c0 = sample_haar_state(op.dim, member_rng(seed, i)).reshape(op.dims)
        avg = window_average(op, c0, *window, stride=stride, spectrum=spec)
        worst = max(worst, abs(resonant_asymptotic_entropy(spec, c0) - avg),
                    abs(asymptotic_entropy(spec, c0) - avg))
    return Check("asymptotic formula vs time average", worst <= tol, f"max gap {worst:.1e}")


def check_moments(samples=20_000, seed=0):
    fails = []
    for i, j in enumerate((0.5, 1.0, 5.0)):
        for n, kind in enumerate(MOMENT_KINDS):
            if not monte_carlo_moment(kind, j, samples, member_rng(seed, 10 * i + n)).passed(4.0):
                fails.append(f"{kind}@{j}")
        if marginal_integrals(j).max_relative_error() > 1e-8:
            fails.append(f"marginals@{j}")
    return Check("ensemble moments", not fails, ", ".join(fails) or "all within tolerance")


def check_classical(seed=0):
    rng = np.random.default_rng(seed)
    s = sphere_points(4, rng)
    period = np.abs(classical_step(classical_step(classical_step(classical_step(s, 0), 0), 0), 0)
                    - s).max()
    a, b = sphere_points(8, rng), sphere_points(8, rng)
    for _ in range(10_000):
        a, b = coupled_classical_step(a, b, 6.0, 0.01)
    drift = max(np.abs(np.linalg.norm(a, axis=1) - 1).max(), np.abs(np.linalg.norm(b, axis=1) - 1).max())
    lam = [lyapunov_exponent(k, 50, 2000, np.random.default_rng(seed)).value for k in (0.01, 3, 6)]
    ok = period < 1e-12 and drift < 1e-9 and lam[0] < 0.01 < lam[1] < lam[2]
    return Check("classical map", ok,
                 f"period-4 err {period:.1e}, drift {drift:.1e}, lambda {np.round(lam, 4).tolist()}")


def check_uncoupled_controls(seed=0):
    op = build_coupled_step(CoupledParams.make(2.0, 2.5, 6.0, 0.0))
    st = sample_sud_product(2.0, 2.5, np.random.default_rng(seed))
    s_max = float(op.entropy_trace(st.matrix(), 1000)[0].max())
    rep = eigenvector_entanglement(op.diagonalize())
    ok = s_max < 1e-10 and rep.mean < 1e-8
    return Check("epsilon = 0 controls", ok, f"max S {s_max:.1e}, eigen mean {rep.mean:.1e}")


ALL_CHECKS = (check_spin_algebra, check_statistical_limit, check_inequalities,
              check_asymptotic_formula, check_moments, check_classical, check_uncoupled_controls)


def run_all(seed=0):
    return [fn(seed=seed) if "seed" in fn.__code__.co_varnames else fn() for fn in ALL_CHECKS]
