from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pvif.series import LogarithmError, PuiseuxSeries, SeriesError, series_arith

G = 16  # grade bound, in half-integer exponent units


def coeff():
    return st.complex_numbers(min_magnitude=0.0, max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def unit_coeff():
    return st.complex_numbers(min_magnitude=0.5, max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@st.composite
def taylor(draw, start=0, lead=True):
    """Integer-exponent series c_start x^start + ... with grade bound G."""
    n = G // 2 - start + 1
    cs = draw(st.lists(coeff(), min_size=n, max_size=n))
    if lead:
        cs[0] = draw(unit_coeff())
    terms = {(2 * (start + i), 0): c for i, c in enumerate(cs)}
    return PuiseuxSeries(terms, grade=G)


def close(a: PuiseuxSeries, b: PuiseuxSeries, tol=1e-8) -> bool:
    g = min(a.grade, b.grade)
    keys = {k for k in set(a.terms) | set(b.terms) if k[0] <= g}
    scale = max([1.0] + [abs(complex(c)) for c in a.terms.values()])
    return all(abs(complex(a.coeff(*k)) - complex(b.coeff(*k))) <= tol * scale for k in keys)


@settings(max_examples=60, deadline=None)
@given(taylor(), taylor())
def test_product_with_reciprocal_returns_factor(a, b):
    assert close((a * b) * b.reciprocal(), a, 1e-6)


@settings(max_examples=60, deadline=None)
@given(taylor(start=1, lead=False))
def test_exp_and_log_are_inverse(t):
    one_plus = t.const_like(1) + t
    assert close(one_plus.log().exp(), one_plus)


@settings(max_examples=60, deadline=None)
@given(taylor(), taylor())
def test_leibniz_rule(a, b):
    lhs = (a * b).differentiate()
    rhs = a.differentiate() * b + a * b.differentiate()
    assert close(lhs, rhs)


@settings(max_examples=40, deadline=None)
@given(taylor(start=1))
def test_reversion_composes_to_identity(f):
    g = f.revert("x")
    ident = f.compose(g)
    # coefficients of the inverse grow like |f1|^-G, so scale the tolerance with them
    growth = max(abs(complex(c)) for c in g.terms.values())
    assert close(ident, f.variable(), 1e-12 * growth ** 2)


@settings(max_examples=40, deadline=None)
@given(taylor(), st.sampled_from([Fraction(1, 2), Fraction(-1, 3), Fraction(3, 2)]))
def test_fractional_power_law(a, p):
    lhs = a.power(p) * a.power(1 - p)
    assert close(lhs, a, 1e-7)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=0.9, allow_nan=False, allow_infinity=False),
       taylor(start=0, lead=False))
def test_antiderivative_inverts_derivative(s, a):
    a = a - a.const_like(a.coeff(0))
    assert close(a.differentiate().antiderivative(), a)


def test_sigma_lattice_keys_add():
    s = PuiseuxSeries({(0, 1): 2.0}, sigma=0.3 + 0.2j, grade=6)
    t = PuiseuxSeries({(2, -1): 3.0}, sigma=0.3 + 0.2j, grade=6)
    prod = s * t
    assert prod.terms == {(2, 0): 6.0}
    assert s.exponent((0, 1)) == pytest.approx((0.3 + 0.2j) / 2)


def test_evaluate_matches_monomials():
    s = PuiseuxSeries({(0, 0): 1, (2, 0): 2, (1, 0): 3}, grade=4)
    x = 0.04
    assert s.evaluate(x) == pytest.approx(1 + 2 * x + 3 * x ** 0.5)


def test_specialize_folds_sigma():
    s = PuiseuxSeries({(0, 1): 1.0, (2, -1): 2.0}, sigma=0.5, grade=10)
    f = s.specialize(1, 2)
    assert f.ram == 2 and not f._uses_sigma()
    x = 0.01
    assert f.evaluate(x) == pytest.approx(s.evaluate(x))


def test_mismatched_sigma_is_rejected():
    a = PuiseuxSeries({(0, 1): 1.0}, sigma=0.25, grade=4)
    b = PuiseuxSeries({(0, 1): 1.0}, sigma=0.5, grade=4)
    with pytest.raises(SeriesError):
        a + b


def test_antiderivative_of_inverse_power_raises():
    s = PuiseuxSeries({(-2, 0): 1.0}, grade=4)
    with pytest.raises(LogarithmError):
        s.antiderivative()


def test_reciprocal_needs_single_leading_monomial():
    s = PuiseuxSeries({(0, 1): 1.0, (0, -1): 1.0}, sigma=0.4, grade=4)
    with pytest.raises(SeriesError):
        s.reciprocal()


def test_exact_arithmetic_in_fractions():
    x = PuiseuxSeries({(2, 0): Fraction(1)}, grade=10)
    one = x.const_like(Fraction(1))
    inv = (one - x).reciprocal()
    assert all(c == 1 for c in inv.terms.values())
    assert len(inv.terms) == 6


def test_json_round_trip():
    s = PuiseuxSeries({(0, 1): 1 + 2j, (2, -1): -0.5}, sigma=0.3, grade=4)
    back = PuiseuxSeries.from_json(s.to_json(), grade=4)
    assert back.terms == {k: complex(v) for k, v in s.terms.items()}


def test_series_arith_dispatch():
    s = PuiseuxSeries({(0, 0): 1.0, (2, 0): 1.0}, grade=6)
    assert close(series_arith("mul", s, s), s * s)
