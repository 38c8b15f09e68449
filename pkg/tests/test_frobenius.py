import cmath
import math

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from pvif.connection import CriticalData
from pvif.frobenius import (FrobeniusError, InsufficientOrderError, SpecialMuError, build_frame,
                            closed_form_invert, h_scaling_exponents, local_solution_for, parametric_generic,
                            qh_reconstruct, two_dim_closed_form)
from pvif.local import local_series_at_zero

GW = [1, 1, 12, 620, 87304]


@pytest.fixture(scope="module")
def qh():
    return qh_reconstruct(order=16)


def test_qh_recovers_curve_counts(qh):
    assert qh.integers() == GW
    assert max(r[3] for r in qh.nk) < 1e-6
    assert qh.shortcut_residual < 1e-8


def test_qh_counts_do_not_depend_on_q0():
    assert qh_reconstruct(order=16, q0=2.5 - 1j).integers() == GW


def test_qh_closed_form_is_a_series_in_x_cubed(qh):
    assert all(e % 3 == 0 for e in qh.closed_form.coeffs)
    assert all(t["t3_pow"] == 3 * t["exp_t2"] - 1 for t in qh.closed_form.terms())


def test_qh_order_guard():
    with pytest.raises(InsufficientOrderError):
        qh_reconstruct(order=2)
    with pytest.raises(InsufficientOrderError):
        qh_reconstruct(order=10, kmax=5)


omega_entry = st.complex_numbers(min_magnitude=0.1, max_magnitude=2, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(omega_entry, omega_entry, omega_entry)
def test_frame_is_orthonormal_for_the_anti_diagonal_metric(o1, o2, o3):
    mu2 = -(o1 * o1 + o2 * o2 + o3 * o3)
    if abs(mu2) < 1e-2 or abs(o1 * o1 + o3 * o3) < 1e-2:
        return
    f = build_frame((o1, o2, o3), cmath.sqrt(mu2))
    scale = max(abs(v) for row in f.E for v in row)
    assert f.orthogonality_residual() <= 1e-10 * max(1, scale) ** 2


def test_generic_parametric_series_has_expected_exponents():
    sol = local_series_at_zero(CriticalData(0.4 + 0.2j, 0.8, 0.3), 8)
    p = parametric_generic(sol)
    assert p.exponents == pytest.approx((1.3, 1.6, 3.6))
    assert p.p() == pytest.approx(1.3 / 1.6)


def test_irrational_sigma_has_no_single_variable_closed_form():
    sol = local_series_at_zero(CriticalData(0.4 + 0.2j, 0.8, 0.3), 8)
    with pytest.raises(FrobeniusError):
        closed_form_invert(parametric_generic(sol))


@pytest.mark.parametrize("mu", [0.5, 1, -1.5])
def test_special_mu_rejected(mu):
    sol = local_series_at_zero(CriticalData(0.3 + 0.1j, 0.8, mu), 6)
    with pytest.raises(SpecialMuError):
        parametric_generic(sol)


def test_zero_k0_rejected():
    sol = local_solution_for(CriticalData(0.3, 0.8, 0.2), 6)
    with pytest.raises(FrobeniusError):
        parametric_generic(sol, k0=0)


def test_h_scaling_exponents():
    ex = h_scaling_exponents(sp.Rational(-1, 4))
    assert ex == {"t2": sp.Rational(3, 4), "t3": sp.Rational(1, 2), "F": sp.Rational(5, 2)}


@pytest.mark.parametrize("sigma,tag", [(sp.Rational(1, 3), "power"), (1, "t2log"), (-1, "exp"), (-3, "log")])
def test_two_dimensional_forms(sigma, tag):
    sol = two_dim_closed_form(sigma)
    assert sol.tag == tag
    assert sol.is_quasi_homogeneous()
    assert sol.d == -sp.nsimplify(sigma)


def test_two_dimensional_power_exponent():
    t2 = sp.Symbol("t2")
    sol = two_dim_closed_form(sp.Rational(1, 3))
    assert sp.Rational(5, 2) in [term.as_base_exp()[1] for term in sol.F.atoms(sp.Pow) if term.base == t2]


def test_two_dimensional_stokes_entry():
    assert two_dim_closed_form(sp.Rational(1, 3)).stokes == pytest.approx(2 * math.sin(math.pi / 6))
