import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvif import kontsevich as kz

# values frozen from the K = 1000 recurrence (50-digit least squares)
A_900, B_900 = 0.13800940338, 6.0311
A_500, B_500 = 0.138009444152, 6.02951


@pytest.fixture(scope="module")
def small():
    return kz.compute_nk(80)


def test_first_counts(small):
    assert small.N[:7] == [1, 1, 12, 620, 87304, 26312976, 14616808192]


def test_integer_and_rational_recurrences_agree():
    t = kz.compute_nk(30)
    assert t.A == kz.compute_ak_rational(30)


def test_recurrence_weight_symmetry():
    for k in range(2, 20):
        for i in range(1, k):
            assert kz.recurrence_weight(i, k) == kz.recurrence_weight(k - i, k)


@pytest.mark.parametrize("mutation", [
    dict(denominator=5),
    dict(weight=lambda i, k: kz.recurrence_weight(i, k) + 1),
])
def test_corrupted_recurrence_is_caught(mutation):
    with pytest.raises(kz.NonIntegralError):
        kz.compute_nk(12, **mutation)


@pytest.mark.parametrize("X", [-5.0, -3.5, -2.6])
def test_generating_series_solves_the_wdvv_ode(small, X):
    P, P1, P2, P3 = kz.phi_derivatives(small, X)
    res = -6 * P + 33 * P1 - 54 * P2 - P2 ** 2 + P3 * (27 + 2 * P1 - 3 * P2)
    assert abs(res) < 1e-12 * max(1.0, P3)


def test_log_a_matches_exact_value(small):
    k = 40
    assert float(small.log_a(k)) == pytest.approx(math.log(float(small.A[k - 1])), rel=1e-12)


def test_csv_output(small):
    lines = kz.compute_nk(5).to_csv().splitlines()
    assert lines == ["k,N_k", "1,1", "2,1", "3,12", "4,620", "5,87304"]
    assert small.to_csv(log_column=True).splitlines()[0] == "k,lnA_k+3.5lnk"


def test_two_point_window_interpolates(small):
    f = kz.fit_asymptotics(small, 40, 41)
    assert f.max_abs < 1e-30
    ratio = float(small.A[40] / small.A[39]) * (41 / 40) ** 3.5
    assert float(f.a) == pytest.approx(ratio, rel=1e-12)


@pytest.mark.parametrize("N0,N", [(10, 10), (0, 20), (10, 81)])
def test_degenerate_windows(small, N0, N):
    with pytest.raises(kz.DegenerateWindowError):
        kz.fit_asymptotics(small, N0, N)


@pytest.mark.slow
def test_fit_rows(nk_table):
    f9 = kz.fit_asymptotics(nk_table, 900, 1000)
    f5 = kz.fit_asymptotics(nk_table, 500, 1000)
    assert float(f9.a) == pytest.approx(A_900, abs=1e-10)
    assert float(f9.b) == pytest.approx(B_900, abs=1e-3)
    assert float(f5.a) == pytest.approx(A_500, abs=1e-11)
    assert float(f5.b) == pytest.approx(B_500, abs=1e-4)
    assert f9.rms < 1e-6


@pytest.mark.slow
def test_singular_point_at_reference_a(nk_table, fit900):
    s = kz.singular_point_analysis(nk_table, fit900, a_eval=0.138)
    assert s.Phi == pytest.approx(4.2689085, abs=1e-6)
    assert s.dPhi == pytest.approx(5.40759, abs=1e-4)
    assert s.ddPhi_raw == pytest.approx(12.248, abs=1e-3)
    assert s.raw_defect == pytest.approx(1.0707, abs=1e-3)
    assert s.u[0].real == pytest.approx(22.246, abs=1e-3)
    assert s.u[1] == pytest.approx(np.conj(s.u[2]))
    assert s.distinct


@pytest.mark.slow
def test_raw_defect_is_the_truncated_tail(nk_table, fit900):
    s = kz.singular_point_analysis(nk_table, fit900)
    assert s.raw_defect == pytest.approx(kz.tail_defect_estimate(fit900, 1000), rel=5e-3)
    # with the corrected Phi'' the trace identity holds for u_corrected
    assert abs(s.trace_defect(corrected=True)) < 1e-9
    assert abs(s.trace_defect()) < 1e-9


@pytest.mark.slow
def test_exponent_probe(nk_table, fit900):
    p = kz.singular_exponent_probe(nk_table, fit900)
    assert -0.6 <= p.slope <= -0.45
    assert p.raw_slope < p.slope
    window = [-0.1, -0.05, -0.025]
    full = kz.singular_exponent_probe(nk_table, fit900, offsets=window)
    half = kz.singular_exponent_probe(kz.NkTable(500, nk_table.N[:500]), fit900, offsets=window)
    assert half.slope == pytest.approx(full.slope, abs=1e-4)


def test_probe_rejects_bad_windows(small):
    fit = kz.fit_asymptotics(small, 40, 80)
    with pytest.raises(kz.DecayWindowError):
        kz.singular_exponent_probe(small, fit, offsets=[-0.1, -0.05])
    with pytest.raises(kz.DecayWindowError):
        kz.singular_exponent_probe(small, fit, offsets=[-0.1, -0.05, -0.02])
    with pytest.raises(kz.DecayWindowError):
        kz.singular_exponent_probe(small, fit)  # K|D| too small at K = 80


def test_fit_bracket_guard(small):
    fit = kz.fit_asymptotics(small, 40, 80)
    with pytest.raises(kz.FitBracketError):
        kz.singular_point_analysis(small, fit, a_eval=0.9)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(0.3, 3), st.floats(0, 10), st.floats(0, 10), st.floats(0, 20))
def test_cubic_roots_are_eigenvalues(t1, t3, Phi, dPhi, ddPhi):
    coeffs = kz.cubic_coefficients(t1, t3, Phi, dPhi, ddPhi)
    g = kz.intersection_form(t1, t3, Phi, dPhi, ddPhi)
    ev = np.linalg.eigvals(kz.ETA @ g)
    assert np.allclose(np.poly(ev), coeffs, rtol=1e-8, atol=1e-8 * max(1, np.max(np.abs(coeffs))))


def test_cubic_trace_term():
    c = kz.cubic_coefficients(2.0, 1.5, 1.0, 2.0, 3.0)
    assert c[1] == pytest.approx(-(6 + 3 / 1.5))
