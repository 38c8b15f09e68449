import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvif.painleve import (OmegaState, PainleveError, PathSpec, PviPoint, gauge_invariants, integrate_omega,
                           integrate_pvi, omega_to_y, pvi_residual, pvi_residual_samples, y_omega_convert,
                           y_to_omega)
from pvif.series import PuiseuxSeries

cnum = st.complex_numbers(min_magnitude=0.2, max_magnitude=3, allow_nan=False, allow_infinity=False)


def rational_family(a, x):
    """y = a x / (1 - (1-a) x) solves PVI at mu = 1, with y' and y''."""
    d = 1 - (1 - a) * x
    return a * x / d, a / d ** 2, 2 * a * (1 - a) / d ** 3


@settings(max_examples=50, deadline=None)
@given(cnum, cnum, cnum, st.complex_numbers(max_magnitude=1.2, allow_nan=False, allow_infinity=False))
def test_y_omega_round_trip(x, y, yp, mu):
    if min(abs(x - 1), abs(y - 1), abs(y - x), abs(mu)) < 0.1:
        return
    p = PviPoint(x, y, yp)
    q = omega_to_y(y_to_omega(p, mu))
    assert abs(q.y - y) <= 1e-10 * max(1, abs(y))
    assert abs(q.yprime - yp) <= 1e-10 * max(1, abs(yp))


def test_gauge_invariants_survive_round_trip():
    p = PviPoint(0.4 + 0.3j, 2.0 - 1j, 0.5j)
    st_ = y_to_omega(p, 0.3)
    again = y_to_omega(omega_to_y(st_), 0.3)
    assert np.allclose(gauge_invariants(st_), gauge_invariants(again), rtol=1e-10)


def test_convert_dispatch():
    p = PviPoint(0.4 + 0.3j, 2.0 - 1j, 0.5j)
    st_ = y_omega_convert("y_to_omega", p, 0.3)
    assert isinstance(st_, OmegaState)
    assert y_omega_convert("omega_to_y", st_).y == pytest.approx(p.y)


@pytest.mark.parametrize("a", [0.3, 2 + 1j, -0.7j])
def test_rational_family_residual(a):
    xs = [0.3 + 0.2j, -0.5 + 0.1j, 2.5 - 1j]
    assert pvi_residual_samples([(x, *rational_family(a, x)) for x in xs], 1) < 1e-13


def test_rational_family_series_residual_vanishes():
    a = 0.3
    x = PuiseuxSeries({(2, 0): 1.0}, grade=30)
    y = (x.scale(a)) * (x.const_like(1) - x.scale(1 - a)).reciprocal()
    r = pvi_residual(y, 1)
    assert max(abs(c) for c in r.residual.terms.values()) < 1e-12


def test_integrator_follows_rational_family():
    a = 0.3
    x0, x1 = 0.3 + 0.2j, 0.7 + 0.6j
    y, yp, _ = rational_family(a, x0)
    traj = integrate_pvi(PviPoint(x0, y, yp), PathSpec((x0, x1)), 1)
    end = traj.points[-1]
    assert traj.flag == "ok" and end.x == pytest.approx(x1)
    assert end.y == pytest.approx(rational_family(a, x1)[0], rel=1e-8)


def test_omega_flow_conserves_mu_squared():
    om = (0.3 + 0.1j, -0.2j, 0.25)
    mu = cmath.sqrt(-sum(o * o for o in om))
    traj = integrate_omega(OmegaState(2.5 + 1.5j, om, mu), PathSpec((2.5 + 1.5j, 3.5 + 1.5j, 3.5 + 2.5j)))
    assert max(p.mu_squared_defect() for p in traj.points) < 1e-9


def test_pole_is_flagged():
    # y = x/(1 - 2x) at a = -1 blows up at x = 1/2
    x0 = 0.2 + 0.05j
    y, yp, _ = rational_family(-1, x0)
    traj = integrate_pvi(PviPoint(x0, y, yp), PathSpec((x0, 0.8 - 0.05j), pole_threshold=1e6), 1)
    assert traj.flag == "pole_suspected"


def test_path_validation():
    with pytest.raises(PainleveError):
        PathSpec((0.5,))
    with pytest.raises(PainleveError):
        PathSpec((-1, 1j, 2j, 2j))
    with pytest.raises(PainleveError):
        PathSpec((-1 + 0j, 1 + 0j))  # through x = 0
    with pytest.raises(PainleveError):
        integrate_pvi(PviPoint(0.3, 0.3, 1), PathSpec((0.3, 0.5j)), 0.2)


def test_trajectory_csv():
    x0 = 0.3 + 0.2j
    y, yp, _ = rational_family(0.3, x0)
    csv = integrate_pvi(PviPoint(x0, y, yp), PathSpec((x0, x0 + 0.1)), 1).to_csv()
    assert csv.splitlines()[0].startswith("x_re,x_im,y_re")
