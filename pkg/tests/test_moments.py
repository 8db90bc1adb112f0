import numpy as np
import pytest

from kicked_tops.errors import ParameterError
from kicked_tops.moments import (MOMENT_KINDS, analytic_moment, cross_term_vanishing_check,
                                 equal_time_variance, marginal_integrals, marginal_p1,
                                 marginal_p2, monte_carlo_moment, predicted_rate_ratio,
                                 sample_states)
from kicked_tops.spin import build_spin_operators
from kicked_tops.states import member_rng


def test_analytic_values():
    assert analytic_moment("SU2_Jz2", 1) == pytest.approx(2 / 3)
    assert analytic_moment("SUd_Jz_sq", 3) == pytest.approx(0.5)
    assert analytic_moment("SU2_Jz_sq", 0) == 0.0
    with pytest.raises(ParameterError):
        analytic_moment("SU3_Jz2", 1)
    with pytest.raises(ParameterError):
        analytic_moment("SU2_Jz2", 0.3)


def test_haar_moment_against_exact_haar_average():
    # E|a_m|^2 |a_n|^2 = (1 + delta_mn) / (d (d + 1)) gives E<J_z>^2 = (sum m^2 + (sum m)^2)/(d(d+1))
    for j in (0.5, 1.0, 3.0, 7.5):
        m = build_spin_operators(j).m
        d = m.size
        exact = (np.sum(m ** 2) + np.sum(m) ** 2) / (d * (d + 1))
        assert analytic_moment("SUd_Jz_sq", j) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("kind", MOMENT_KINDS)
@pytest.mark.parametrize("j", [0.5, 2.0])
def test_monte_carlo_moments(kind, j):
    res = monte_carlo_moment(kind, j, 20_000, member_rng(7, MOMENT_KINDS.index(kind)))
    assert res.passed(3.5)
    assert res.monte_carlo_stderr > 0 and res.samples == 20_000


@pytest.mark.parametrize("kind", MOMENT_KINDS)
def test_isotropy(kind):
    j = 1.5
    for axis in ("x", "y"):
        assert monte_carlo_moment(kind, j, 20_000, member_rng(8, 1), axis=axis).passed(3.5)


def test_unknown_kind_rejected(rng):
    with pytest.raises(ParameterError):
        monte_carlo_moment("SUd_Jx", 1.0, 10, rng)


def test_spin_zero_moment_is_exact(rng):
    res = monte_carlo_moment("SU2_Jz_sq", 0.0, 10, rng)
    assert res.monte_carlo_mean == 0.0 and res.passed()


def test_axis_sum_rule():
    ops = build_spin_operators(2.5)
    total = sum(np.trace(a @ a).real for a in (ops.jx, ops.jy, ops.jz)) / ops.dim
    assert total == pytest.approx(2.5 * 3.5, abs=1e-12)
    assert 3 * analytic_moment("SU2_Jz2", 2.5) == pytest.approx(2.5 * 3.5)


def test_sampled_states_normalized(rng):
    for ens in ("SU2", "SUd"):
        s = sample_states(ens, 2.0, 50, rng)
        np.testing.assert_allclose(np.linalg.norm(s, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("j", [0.5, 1.0, 5.0])
def test_marginal_quadrature(j):
    m = marginal_integrals(j)
    assert m.max_relative_error() < 1e-8
    assert m.p1_norm == pytest.approx(1.0, abs=1e-10)
    assert m.p2_norm == pytest.approx(1.0, abs=1e-10)


def test_marginal_values_at_spin_half():
    m = marginal_integrals(0.5)
    assert m.x4_analytic == pytest.approx(3 / 24) and m.x2y2_analytic == pytest.approx(1 / 24)


def test_marginal_p1_does_not_overflow_at_large_spin():
    assert np.isfinite(marginal_p1(0.01, 1000.0))
    assert marginal_p2(0.0, 0.0, 1.0) == pytest.approx(2 / np.pi)


def test_p1_against_sampled_amplitudes():
    j, n = 2.0, 100_000
    rng = np.random.default_rng(4)
    x = sample_states("SUd", j, n, rng)[:, 0].real
    m = marginal_integrals(j)
    se = (x ** 4).std(ddof=1) / np.sqrt(n)
    assert abs((x ** 4).mean() - m.x4_analytic) <= 3 * se


@pytest.mark.parametrize("ensemble, j", [("SU2", 1.0), ("SUd", 2.0)])
def test_cross_terms_vanish(ensemble, j):
    assert cross_term_vanishing_check(j, 100_000, member_rng(9, 0), ensemble).passed()


def test_cross_terms_exact_zero_for_spin_zero(rng):
    rep = cross_term_vanishing_check(0.0, 5, rng, "SU2")
    assert all(v == 0.0 for v in rep.means.values()) and rep.passed()


def test_rate_ratio_prediction():
    assert equal_time_variance("SU2", 19.5) == pytest.approx(1 / (3 * 19.5))
    r = predicted_rate_ratio(19.5, 20.0)
    assert r == pytest.approx(20.0 * 20.5, rel=1e-12)
    assert abs(r / (19.5 * 20.0) - 1) < 0.06
