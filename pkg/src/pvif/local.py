"""Formal local solutions of the Omega-system and PVI_mu at the critical points.

With s the local variable and D = s d/ds, the Omega-system at s = 0 reads

    D O1 = O2 O3,   (1 - s) D O2 = s O1 O3,   (1 - s) D O3 = -O1 O2.

The grade-0 solution is O2 = i sigma/2, O1 = b s^(-sigma/2) + a s^(sigma/2),
O3 = i b s^(-sigma/2) - i a s^(sigma/2) with 4ab = sigma^2/4 - mu^2.  Higher
grades follow from a linear solve per lattice key.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from fractions import Fraction

from .connection import CriticalData, Point
from .painleve import PainleveError, omega_to_y_series, pvi_residual_series
from .series import PuiseuxSeries


class ResonanceError(PainleveError):
    tag = "resonance"


@dataclass(frozen=True)
class LocalSolution:
    """y and Omega as series in the local variable s of ``point``."""

    critical: CriticalData
    y: PuiseuxSeries
    omega: tuple[PuiseuxSeries, PuiseuxSeries, PuiseuxSeries]
    order: int
    point: Point = Point.ZERO

    @property
    def mu(self):
        return self.critical.mu

    def x_series(self) -> PuiseuxSeries:
        """x as a series in the local variable."""
        s = self.y.variable()
        if self.point == Point.ZERO:
            return s
        if self.point == Point.ONE:
            return s.const_like(1) - s
        r = self.y.ram
        return self.y._like({(-2 * r, 0): 1}, band=10**9)

    def dx_ds(self) -> PuiseuxSeries:
        return self.x_series().differentiate()

    def specialize(self, p: int, q: int) -> "LocalSolution":
        return replace(self, y=self.y.specialize(p, q),
                       omega=tuple(o.specialize(p, q) for o in self.omega))


def _grade0(sigma, mu, a_y):
    """Omega parameters (b, a) so that the y leading coefficient equals a_y."""
    if sigma == 0:
        d = mu * cmath.sqrt(a_y)
        a = (-d + cmath.sqrt(d * d - mu * mu)) / 2
        return a + d, a
    b = (mu - sigma / 2) * cmath.sqrt(a_y)
    if b == 0:
        raise ResonanceError("sigma = 2 mu: Omega normalization degenerates")
    a = (sigma * sigma / 4 - mu * mu) / (4 * b)
    return b, a


def formal_omega(sigma, mu, b, a, order: int, var: str = "x"):
    """Omega-series to grade ``order`` from grade-0 data (b, a)."""
    kw = dict(sigma=sigma, grade=order, var=var)
    half = 1j * sigma / 2
    o1 = PuiseuxSeries({(0, -1): b, (0, 1): a}, **kw)
    o3 = PuiseuxSeries({(0, -1): 1j * b, (0, 1): -1j * a}, **kw)
    o2 = PuiseuxSeries({(0, 0): half}, **kw)
    s = o1.variable()
    for m in range(2, order + 1, 2):
        # Omega2: e * O2_k = [s O1 O3 + s D O2]_k, lower grades only
        r2 = (s * (o1 * o3 + o2.euler())).grade_part(m)
        new2 = {}
        for k, c in r2.items():
            e = o2.exponent(k)
            if abs(e) < 1e-14:
                raise ResonanceError(f"Omega2 resonance at exponent key {k}")
            new2[k] = c / e
        o2 = o2 + PuiseuxSeries(new2, **kw)
        r1 = (o2 * o3).grade_part(m)
        r3 = (-(o1 * o2) + s * o3.euler()).grade_part(m)
        new1, new3 = {}, {}
        for k in set(r1) | set(r3):
            e = o1.exponent(k)
            c1, c3 = r1.get(k, 0), r3.get(k, 0)
            det = e * e - sigma * sigma / 4
            if abs(det) < 1e-12:
                raise ResonanceError(f"Omega1/Omega3 resonance at exponent key {k}")
            new1[k] = (e * c1 + half * c3) / det
            new3[k] = (e * c3 - half * c1) / det
        o1 = o1 + PuiseuxSeries(new1, **kw)
        o3 = o3 + PuiseuxSeries(new3, **kw)
    return o1, o2, o3


def local_series_at_zero(c: CriticalData, order: int) -> LocalSolution:
    """Formal Omega- and y-series of y(x; sigma, a) at x = 0 to grade ``order``."""
    sigma, mu = c.sigma, c.mu
    s = complex(sigma)
    if s.imag == 0 and (s.real < 0 or s.real >= 1):
        raise PainleveError(f"sigma = {sigma} outside Omega")
    if s.imag == 0:
        sigma = s.real
    b, a = _grade0(sigma, mu, c.a)
    om = formal_omega(sigma, mu, b, a, order)
    if sigma == 0:
        om = tuple(o.specialize(0, 1) for o in om)
    x = om[0].variable()
    y = omega_to_y_series(x, om, mu)
    # y is known one grade step beyond Omega through the factor x
    return LocalSolution(replace(c, point=Point.ZERO), y, tuple(om), order)


def local_residual(sol: LocalSolution):
    return pvi_residual_series(sol.y, sol.mu)


def _sim2(sol: LocalSolution, point: Point) -> LocalSolution:
    """x = 1 - t, y = 1 - y_hat; Omega -> -(O2, O1, O3)."""
    o1, o2, o3 = sol.omega
    y = sol.y.const_like(1) - sol.y
    return LocalSolution(replace(sol.critical, point=point), y, (-o2, -o1, -o3), sol.order, point)


def transform_critical_point(sol: LocalSolution, target: Point | str) -> LocalSolution:
    """Express a point-zero solution as a solution near ``target`` in its local variable.

    one: s = 1 - x and y = 1 - y_hat(s); infinity: s = 1/x and y = y_hat(s)/s.
    The Omega-series are mapped by the matching sign permutation.
    """
    target = Point(target)
    if target == Point.ZERO:
        return sol
    if target == Point.ONE:
        if sol.point not in (Point.ZERO, Point.ONE):
            raise PainleveError("sim2 maps between points zero and one")
        return _sim2(sol, Point.ONE if sol.point == Point.ZERO else Point.ZERO)
    if sol.point != Point.ZERO:
        raise PainleveError("transform expects a point-zero solution")
    o1, o2, o3 = sol.omega
    r = sol.y.ram
    y = sol.y.shift(-2 * r)
    return LocalSolution(replace(sol.critical, point=Point.INFINITY), y, (-o1, -o3, -o2), sol.order,
                         Point.INFINITY)


def rational_sigma(sigma, max_den: int = 64) -> Fraction | None:
    s = complex(sigma)
    if abs(s.imag) > 1e-12:
        return None
    fr = Fraction(s.real).limit_denominator(max_den)
    return fr if abs(fr - s.real) < 1e-10 else None
