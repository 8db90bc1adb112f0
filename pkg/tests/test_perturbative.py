import numpy as np
import pytest

from conftest import random_state
from kicked_tops.errors import ParameterError
from kicked_tops.experiments import fit_initial_rate
from kicked_tops.floquet import CoupledParams, CouplingScale, TopParams, build_coupled_step
from kicked_tops.perturbative import (correlation, correlation_matrix, correlation_table,
                                      coupling_prefactor, perturbative_curve,
                                      perturbative_entropy, strong_chaos_rate)
from kicked_tops.spin import coherent_state
from kicked_tops.states import member_rng, sample_su2_product, sample_sud_product

CHAOTIC = CoupledParams.make(19.5, 20.0, 6.0, 0.01)


def test_zero_variance_in_jz_eigenstate():
    psi = coherent_state(4.0, 0.0, 0.0)
    assert correlation(TopParams(4.0, 3.0), psi, 0, 0) == pytest.approx(0.0, abs=1e-14)


def test_raw_correlations_are_hermitian(rng):
    p = TopParams(3.0, 2.0)
    c = correlation_matrix(p, random_state(rng, 7), 8, symmetrize=False)
    np.testing.assert_allclose(c, c.conj().T, atol=1e-10)
    sym = correlation_matrix(p, random_state(rng, 7), 8)
    assert sym.dtype.kind == "f"
    np.testing.assert_allclose(sym, sym.T, atol=1e-12)


def test_table_d_is_statewise_product(rng):
    params = CoupledParams.make(2.0, 2.5, 3.0, 0.01)
    states = [sample_sud_product(2.0, 2.5, rng) for _ in range(3)]
    tab = correlation_table(params, states, 4)
    ref = np.mean([correlation_matrix(params.top1, s.first, 4)
                   * correlation_matrix(params.top2, s.second, 4) for s in states], axis=0)
    np.testing.assert_allclose(tab.d, ref, atol=1e-14)
    alt = correlation_table(params, states, 4, order="product_of_averages")
    np.testing.assert_allclose(alt.d, alt.c1 * alt.c2, atol=1e-15)
    assert len(tab.rows()) == 16 and tab.rows()[0][:2] == (1, 1)
    with pytest.raises(ParameterError):
        correlation_table(params, states, 4, order="median")


def test_strong_chaos_rate_values():
    assert strong_chaos_rate(CHAOTIC) == pytest.approx(2 / 9 * 1e-4 * 390, rel=1e-12)
    assert strong_chaos_rate(CHAOTIC) == pytest.approx(8.667e-3, abs=1e-6)
    assert strong_chaos_rate(CoupledParams.make(19.5, 20.0, 6.0, 0.0)) == 0.0
    # a non-geometric scale changes the prefactor through j1 j2 / j_c
    p = CoupledParams.make(19.5, 20.0, 6.0, 0.01, j_scale=CouplingScale.FIRST)
    assert coupling_prefactor(p) == pytest.approx(2e-4 * 20.0 ** 2)


def test_entropy_prediction_edges(rng):
    tab = correlation_table(CHAOTIC, [sample_sud_product(19.5, 20, rng)], 5)
    assert perturbative_entropy(CHAOTIC, tab, 0) == 0.0
    with pytest.raises(ParameterError):
        perturbative_entropy(CHAOTIC, tab, 6)
    assert perturbative_curve(CHAOTIC, tab).shape == (6,)


@pytest.mark.parametrize("kind, target", [("su2", lambda j: 1 / (3 * j)),
                                          ("sud", lambda j: 1 / 3 + 1 / (6 * j))])
def test_equal_time_variance_scaling(kind, target):
    # SU(2): (j(j+1)/3 - j^2/3)/j^2 = 1/(3j); SU(d): (j(j+1)/3 - j/6)/j^2
    j, n = 5.0, 3000
    p = TopParams(j, 0.01)
    sampler = sample_su2_product if kind == "su2" else sample_sud_product
    diag = np.array([np.diag(correlation_matrix(p, sampler(j, j, member_rng(1, i)).first, 4))
                     for i in range(n)])
    mean, se = diag.mean(axis=0), diag.std(axis=0, ddof=1) / np.sqrt(n)
    assert np.all(np.abs(mean - target(j)) <= 4 * se + 1e-3 * target(j))


def test_haar_variance_is_k_independent():
    j, n = 4.0, 2000
    vals = []
    for k in (0.01, 6.0):
        p = TopParams(j, k)
        d = [np.diag(correlation_matrix(p, sample_sud_product(j, j, member_rng(2, i)).first, 6))
             for i in range(n)]
        vals.append((np.mean(d, axis=0), np.std(d, axis=0, ddof=1) / np.sqrt(n)))
    (m0, s0), (m1, s1) = vals
    assert np.all(np.abs(m0 - m1) <= 4 * np.hypot(s0, s1))


def test_odd_separations_vanish_near_integrable_point():
    j, n = 5.0, 2000
    p = TopParams(j, 0.01)
    c = np.mean([correlation_matrix(p, sample_sud_product(j, j, member_rng(3, i)).first, 8)
                 for i in range(n)], axis=0)
    for a in range(1, 9):
        for b in range(1, 9):
            if (a - b) % 2:
                assert abs(c[a, b]) < 5e-2 * abs(c[a, a])


def test_regular_regime_growth_is_quadratic():
    params = CoupledParams.make(19.5, 20.0, 0.01, 0.01)
    states = [sample_sud_product(19.5, 20, member_rng(4, i)) for i in range(20)]
    curve = perturbative_curve(params, correlation_table(params, states, 12))
    # D(n, m) is nearly period-4 here, so compare t and 2t at multiples of four
    assert 3.0 < curve[8] / curve[4] < 5.0
    assert 3.0 < curve[12] / curve[6] < 5.0


def test_perturbative_line_matches_exact_growth_at_strong_chaos():
    op = build_coupled_step(CHAOTIC)
    c0 = np.stack([sample_sud_product(19.5, 20, member_rng(0, i)).matrix() for i in range(50)])
    s, _ = op.entropy_trace(c0, 15)
    n = np.arange(3, 16)
    slope = np.polyfit(n, s.mean(axis=1)[3:16], 1)[0]
    assert abs(slope / strong_chaos_rate(CHAOTIC) - 1) < 0.25
    states = [sample_sud_product(19.5, 20, member_rng(0, i)) for i in range(50)]
    pred = perturbative_curve(CHAOTIC, correlation_table(CHAOTIC, states, 15))
    fit = fit_initial_rate(s.mean(axis=1), 15)
    assert abs(fit_initial_rate(pred, 15).slope / fit.slope - 1) < 0.25
