import mpmath
import pytest
from hypothesis import given, strategies as st

from pvif.special import GammaPoleError, gamma, near_pole, rgamma


@given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False))
def test_lanczos_matches_mpmath(z):
    if near_pole(z, 1e-3):
        return
    want = complex(mpmath.gamma(z))
    if abs(want) > 1e280 or abs(want) < 1e-280:
        return
    assert abs(gamma(z) - want) <= 1e-11 * abs(want)


def test_extended_precision_route():
    z = 0.3 + 4.1j
    assert gamma(z, extended=True) == pytest.approx(gamma(z), rel=1e-13)


@pytest.mark.parametrize("n", [0, -1, -5])
def test_poles(n):
    with pytest.raises(GammaPoleError):
        gamma(n)
    assert rgamma(n) == 0


def test_integer_values():
    assert gamma(6) == pytest.approx(120)
    assert gamma(0.5) == pytest.approx(mpmath.sqrt(mpmath.pi))
