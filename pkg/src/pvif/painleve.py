"""PVI_mu and the equivalent Omega-system: right-hand sides, conversions, integration."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .series import PuiseuxSeries


class PainleveError(ValueError):
    tag = "painleve_error"


class StepUnderflowError(PainleveError):
    tag = "step_underflow"


@dataclass(frozen=True)
class OmegaState:
    x: complex
    omega: tuple[complex, complex, complex]
    mu: complex

    def mu_squared_defect(self) -> float:
        o1, o2, o3 = self.omega
        return abs(self.mu ** 2 + o1 * o1 + o2 * o2 + o3 * o3)


@dataclass(frozen=True)
class PviPoint:
    x: complex
    y: complex
    yprime: complex


@dataclass(frozen=True)
class PathSpec:
    """Piecewise linear path in the x-plane."""

    waypoints: tuple[complex, ...]
    first_step: float | None = None
    max_step: float = np.inf
    rtol: float = 1e-10
    atol: float = 1e-12
    pole_threshold: float = 1e8
    clearance: float = 1e-6

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        if len(pts) < 2:
            raise PainleveError("a path needs at least two waypoints")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise PainleveError("consecutive waypoints must differ")
            for sing in (0, 1):
                if _segment_distance(a, b, sing) < self.clearance:
                    raise PainleveError(f"path passes within clearance of x = {sing}")

    def length(self) -> float:
        return sum(abs(b - a) for a, b in zip(self.waypoints, self.waypoints[1:]))


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    d = b - a
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p)


# right-hand sides


def omega_rhs(x, om):
    o1, o2, o3 = om
    return (o2 * o3 / x, o1 * o3 / (1 - x), o1 * o2 / (x * (x - 1)))


def pvi_rhs(x, y, yp, mu):
    """y'' from PVI_mu."""
    th = (2 * mu - 1) ** 2
    return (0.5 * (1 / y + 1 / (y - 1) + 1 / (y - x)) * yp * yp
            - (1 / x + 1 / (x - 1) + 1 / (y - x)) * yp
            + y * (y - 1) * (y - x) / (2 * x * x * (x - 1) ** 2) * (th + x * (x - 1) / (y - x) ** 2))


# conversions


def omega_to_y(state: OmegaState) -> PviPoint:
    """y = x R / (x(1+R) - 1), R = ((O1 O2 + mu O3)/(mu^2 + O2^2))^2, with y'."""
    x, mu = state.x, state.mu
    o1, o2, o3 = state.omega
    d1, d2, d3 = omega_rhs(x, state.omega)
    N = o1 * o2 + mu * o3
    D = mu * mu + o2 * o2
    if D == 0:
        raise PainleveError("mu^2 + Omega2^2 vanishes")
    Np = d1 * o2 + o1 * d2 + mu * d3
    Dp = 2 * o2 * d2
    r = N / D
    R = r * r
    Rp = 2 * r * (Np * D - N * Dp) / (D * D)
    Q = x * (1 + R) - 1
    y = x * R / Q
    yp = ((R + x * Rp) * Q - x * R * (1 + R + x * Rp)) / (Q * Q)
    return PviPoint(x, y, yp)


def y_to_omega(p: PviPoint, mu, signs: Sequence[int] = (1, 1, 1)) -> OmegaState:
    """Omega from (y, y'); ``signs`` multiply the three square-root products."""
    x, y, yp = complex(p.x), complex(p.y), complex(p.yprime)
    if y == 0 or y == 1 or y == x:
        raise PainleveError("y must avoid 0, 1 and x")
    A = 0.5 * (yp * x * (x - 1) - y * (y - 1))
    sq = cmath.sqrt
    o1 = 1j * sq(y - 1) * sq(y - x) / sq(x) * (A / ((y - 1) * (y - x)) + mu)
    o2 = 1j * sq(y) * sq(y - x) / sq(1 - x) * (A / (y * (y - x)) + mu)
    o3 = -sq(y) * sq(y - 1) / (sq(x) * sq(1 - x)) * (A / (y * (y - 1)) + mu)
    s1, s2, s3 = signs
    return OmegaState(x, (s1 * o1, s2 * o2, s3 * o3), complex(mu))


def y_omega_convert(direction: str, data, mu=None, signs=(1, 1, 1)):
    if direction == "omega_to_y":
        return omega_to_y(data)
    if direction == "y_to_omega":
        return y_to_omega(data, mu, signs)
    raise ValueError(direction)


def gauge_invariants(state: OmegaState) -> tuple[complex, complex, complex, complex]:
    o1, o2, o3 = state.omega
    return (o1 * o1, o2 * o2, o3 * o3, o1 * o2 * o3)


def omega_to_y_series(x: PuiseuxSeries, omega, mu) -> PuiseuxSeries:
    """The y-series from Omega-series; x is the independent variable as a series."""
    o1, o2, o3 = omega
    N = o1 * o2 + o3.scale(mu)
    D = o2 * o2 + mu * mu
    R = (N / D) ** 2
    xR = x * R
    return xR / (x + xR - 1)


# integration


@dataclass
class Trajectory:
    points: list = field(default_factory=list)
    flag: str = "ok"
    location: complex | None = None

    def to_csv(self) -> str:
        rows = ["x_re,x_im,y_re,y_im,yp_re,yp_im,flag"]
        for i, p in enumerate(self.points):
            fl = self.flag if i == len(self.points) - 1 else "ok"
            rows.append(f"{p.x.real!r},{p.x.imag!r},{p.y.real!r},{p.y.imag!r},"
                        f"{p.yprime.real!r},{p.yprime.imag!r},{fl}")
        return "\n".join(rows) + "\n"


def _run_segments(rhs, y0, path: PathSpec, pole_measure, make_point):
    traj = Trajectory()
    state = np.array(y0, dtype=complex)
    traj.points.append(make_point(path.waypoints[0], state))
    for a, b in zip(path.waypoints, path.waypoints[1:]):
        d = b - a
        L = abs(d)

        def f(tau, Y, a=a, d=d):
            return d * np.array(rhs(a + tau * d, Y), dtype=complex)

        def pole_event(tau, Y, a=a, d=d):
            return path.pole_threshold - pole_measure(a + tau * d, Y)

        pole_event.terminal = True
        pole_event.direction = -1
        kw = {}
        if path.first_step:
            kw["first_step"] = path.first_step / L
        if np.isfinite(path.max_step):
            kw["max_step"] = path.max_step / L
        sol = solve_ivp(f, (0.0, 1.0), state, method="RK45", rtol=path.rtol, atol=path.atol,
                        events=pole_event, **kw)
        for tau, Y in zip(sol.t[1:], sol.y.T[1:]):
            traj.points.append(make_point(a + tau * d, Y))
        if sol.status == 1:
            traj.flag = "pole_suspected"
            traj.location = a + sol.t_events[0][0] * d
            return traj
        if sol.status != 0:
            raise StepUnderflowError(f"integration failed near x = {a + sol.t[-1] * d}: {sol.message}")
        state = sol.y[:, -1]
    return traj


def integrate_pvi(start: PviPoint, path: PathSpec, mu) -> Trajectory:
    """Adaptive RK5(4) continuation of (y, y') along the path."""
    if abs(complex(start.x) - path.waypoints[0]) > 1e-14:
        raise PainleveError("path must start at the initial point")
    x0, y0 = complex(start.x), complex(start.y)
    if y0 in (0, 1, x0):
        raise PainleveError("invalid start: y at 0, 1 or x")

    def rhs(x, Y):
        y, yp = Y
        return (yp, pvi_rhs(x, y, yp, mu))

    def measure(x, Y):
        y = Y[0]
        return max(abs(y), 1 / max(abs(y), 1e-300), 1 / max(abs(y - 1), 1e-300), 1 / max(abs(y - x), 1e-300))

    return _run_segments(rhs, (start.y, start.yprime), path, measure,
                         lambda x, Y: PviPoint(complex(x), complex(Y[0]), complex(Y[1])))


def integrate_omega(start: OmegaState, path: PathSpec) -> Trajectory:
    if start.mu == 0 or all(o == 0 for o in start.omega):
        raise PainleveError("zero Omega state is excluded")
    if abs(complex(start.x) - path.waypoints[0]) > 1e-14:
        raise PainleveError("path must start at the initial point")

    def measure(x, Y):
        return float(np.max(np.abs(Y)))

    return _run_segments(omega_rhs, start.omega, path, measure,
                         lambda x, Y: OmegaState(complex(x), tuple(complex(v) for v in Y), start.mu))


# residuals


def pvi_residual_samples(samples: Sequence[tuple], mu) -> float:
    """max |y'' - RHS| / max(1, |y''|) over samples (x, y, y', y'')."""
    worst = 0.0
    for x, y, yp, ypp in samples:
        r = abs(ypp - pvi_rhs(x, y, yp, mu)) / max(1.0, abs(ypp))
        worst = max(worst, r)
    return worst


@dataclass(frozen=True)
class SeriesResidual:
    residual: PuiseuxSeries
    base_grade: int
    leading_grade: int
    valid_grade: int

    @property
    def relative_grade(self) -> int:
        return self.leading_grade - self.base_grade


def pvi_polynomial_terms(y: PuiseuxSeries, mu):
    """The PVI_mu equation cleared of denominators, as (lhs, rhs) series."""
    x = y.variable()
    one = y.const_like(1)
    yp = y.differentiate()
    ypp = yp.differentiate()
    ym1 = y - one
    ymx = y - x
    xm1 = x - one
    th = (2 * mu - 1) ** 2
    lhs = (x * x * xm1 * xm1 * y * ym1 * ymx * ymx * ypp).scale(2)
    r1 = x * x * xm1 * xm1 * yp * yp * ymx * (ym1 * ymx + y * ymx + y * ym1)
    r2 = (yp * y * ym1 * ymx * x * xm1 * (xm1 * ymx + x * ymx + x * xm1)).scale(-2)
    r3 = y * y * ym1 * ym1 * ymx * (ymx * ymx).scale(th) + y * y * ym1 * ym1 * ymx * x * xm1
    return lhs, r1 + r2 + r3


def pvi_residual_series(y: PuiseuxSeries, mu, rel_tol: float = 1e-9) -> SeriesResidual:
    """Residual of the denominator-free PVI_mu on a point-zero y-series."""
    lhs, rhs = pvi_polynomial_terms(y, mu)
    res = lhs - rhs
    base = lhs.valuation()
    scale = max((abs(complex(c)) for c in lhs.terms.values()), default=1.0)
    valid = res.grade
    significant = [m for (m, n), c in res.terms.items() if abs(complex(c)) > rel_tol * scale]
    lead = min(significant) if significant else valid + 1
    return SeriesResidual(res, base, min(lead, valid + 1), valid)


def pvi_residual(y, mu):
    """Residual of PVI_mu for a point-zero y-series or for samples (x, y, y', y'')."""
    if isinstance(y, PuiseuxSeries):
        return pvi_residual_series(y, mu)
    return pvi_residual_samples(y, mu)
