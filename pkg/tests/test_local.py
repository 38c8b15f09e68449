import cmath

import pytest
from hypothesis import given, settings, strategies as st

from pvif.connection import CriticalData, Point
from pvif.local import (ResonanceError, formal_omega, local_residual, local_series_at_zero, rational_sigma,
                        transform_critical_point)
from pvif.painleve import PainleveError, pvi_residual_samples

ORDER = 12


def samples(y, x):
    yp = y.differentiate()
    return y.evaluate(x), yp.evaluate(x), yp.differentiate().evaluate(x)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-1, 1), st.complex_numbers(min_magnitude=0.2, max_magnitude=2,
                                                                    allow_nan=False, allow_infinity=False),
       st.floats(-0.9, 0.9))
def test_residual_vanishes_to_the_grade_bound(sr, si, a, mu):
    sol = local_series_at_zero(CriticalData(complex(sr, si), a, mu), ORDER)
    assert local_residual(sol).relative_grade >= ORDER


def test_numeric_residual_when_chain_ratio_is_small():
    # the truncated series sums a x^(1-sigma) geometrically; keep that ratio near 1e-3
    c = CriticalData(0.4 + 0.3j, 0.8 - 0.2j, 0.3 + 0.1j)
    sol = local_series_at_zero(c, ORDER)
    for arg in (-2.5, 0.0, 1.7):
        x = 1e-4 * cmath.exp(1j * arg)
        assert abs(c.a * x ** (1 - c.sigma)) < 1e-2
        assert pvi_residual_samples([(x, *samples(sol.y, x))], c.mu) < 1e-10


def test_leading_term_is_a_x_power():
    c = CriticalData(0.25, 1.5, 0.2)
    y = local_series_at_zero(c, ORDER).y
    # corrections are relative powers of x^sigma
    x = 1e-20
    assert y.evaluate(x) / (1.5 * x ** 0.75) == pytest.approx(1, abs=1e-3)


def test_case_ii_series():
    c = CriticalData(0, 0.5, 0.25)
    sol = local_series_at_zero(c, ORDER)
    r = local_residual(sol)
    # sigma = 0 is folded onto a ramified lattice; the residual is clean through its valid grade
    assert r.leading_grade > r.valid_grade


def test_sim2_moves_to_one():
    c = CriticalData(0.3 + 0.2j, 0.9, 0.35)
    sol = transform_critical_point(local_series_at_zero(c, ORDER), Point.ONE)
    assert sol.point == Point.ONE
    s = 1e-4 * cmath.exp(0.4j)
    Y, Yp, Ypp = samples(sol.y, s)
    # y(x) = Y(1 - x): first derivative flips sign
    assert pvi_residual_samples([(1 - s, Y, -Yp, Ypp)], c.mu) < 1e-10
    back = transform_critical_point(sol, Point.ONE)
    assert back.point == Point.ZERO


def test_sim1_moves_to_infinity():
    c = CriticalData(0.3 + 0.2j, 0.9, 0.35)
    sol = transform_critical_point(local_series_at_zero(c, ORDER), Point.INFINITY)
    s = 1e-4 * cmath.exp(-0.3j)
    Y, Yp, Ypp = samples(sol.y, s)
    x = 1 / s
    assert pvi_residual_samples([(x, Y, -s * s * Yp, s ** 4 * Ypp + 2 * s ** 3 * Yp)], c.mu) < 1e-10


def test_transform_guards():
    sol = transform_critical_point(local_series_at_zero(CriticalData(0.3, 0.9, 0.35), 6), Point.INFINITY)
    with pytest.raises(PainleveError):
        transform_critical_point(sol, Point.ONE)


def test_omega_normalization_resonance():
    with pytest.raises(ResonanceError):
        local_series_at_zero(CriticalData(0.5, 1.0, 0.25), ORDER)


def test_formal_omega_conserves_mu_squared():
    sigma, mu = 0.3 + 0.4j, 0.2
    b = 0.7
    a = (sigma * sigma / 4 - mu * mu) / (4 * b)
    o1, o2, o3 = formal_omega(sigma, mu, b, a, ORDER)
    total = o1 * o1 + o2 * o2 + o3 * o3
    assert abs(total.coeff(0) + mu * mu) < 1e-12
    assert all(abs(c) < 1e-10 for (m, n), c in total.terms.items() if m > 0)


def test_rational_sigma():
    assert rational_sigma(0.25) == pytest.approx(0.25)
    assert rational_sigma(0.3 + 0.1j) is None
