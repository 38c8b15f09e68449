"""Closed-form families near x = 0: Picard's elliptic solutions (mu = 1/2),
Shimomura's leading term and the logarithmic (Chazy) Omega behaviour."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .monodromy import MonodromyTriple
from .painleve import OmegaState, PainleveError, PviPoint, omega_rhs, pvi_residual_samples

EULER_GAMMA = 0.57721566490153286061
PSI_HALF = -EULER_GAMMA - 2 * math.log(2)
PSI_ONE = -EULER_GAMMA


class OutsideDomainError(PainleveError):
    tag = "outside_domain"


class PoleError(PainleveError):
    tag = "pole"

    def __init__(self, msg, x=None):
        super().__init__(msg)
        self.x = x


@dataclass(frozen=True)
class EllipticPeriods:
    omega1: complex
    omega2: complex
    F: complex
    F1: complex

    def __iter__(self):
        return iter((self.omega1, self.omega2, self.F, self.F1))

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1


def hypergeometric_coefficients(order: int) -> list[tuple[float, float]]:
    """(c_n, 2[psi(n+1/2) - psi(n+1)] c_n) for n < order, c_n = ((1/2)_n / n!)^2."""
    out = []
    c, p_half, p_one = 1.0, PSI_HALF, PSI_ONE
    for n in range(order):
        out.append((c, 2 * (p_half - p_one) * c))
        # (1/2)_{n+1}/(n+1)! = (1/2)_n/n! * (n + 1/2)/(n + 1)
        c *= ((n + 0.5) / (n + 1)) ** 2
        p_half += 1 / (n + 0.5)
        p_one += 1 / (n + 1)
    return out


def elliptic_periods(x, order: int = 200, log_x=None) -> EllipticPeriods:
    """Half-periods w1 = (pi/2) F(x), w2 = -(i/2)[F(x) ln x + F1(x)], truncated at ``order`` terms.

    ``log_x`` selects the branch of ln x (principal by default).
    """
    x = complex(x)
    if abs(x) >= 1:
        raise OutsideDomainError(f"|x| = {abs(x)} must be below 1")
    if order < 1:
        raise ValueError("order must be positive")
    if x == 0:
        raise OutsideDomainError("x = 0 is the branch point of ln x")
    F = F1 = 0j
    xn = 1 + 0j
    for c, c1 in hypergeometric_coefficients(order):
        F += c * xn
        F1 += c1 * xn
        xn *= x
    L = cmath.log(x) if log_x is None else complex(log_x)
    return EllipticPeriods(math.pi / 2 * F, -0.5j * (F * L + F1), F, F1)


def _order_for(x: complex, eps: float = 1e-17) -> int:
    """Terms needed for the hypergeometric sums to reach ``eps`` (coefficients are at most 1)."""
    r = abs(x)
    if r == 0:
        return 1
    return int(min(20000, max(8, math.log(eps) / math.log(r) + 8)))


# Picard solutions of PVI at mu = 1/2


def picard_phase(nu1, nu2, x, log_x=None):
    """(theta, q2) with theta = -(1/2)[i nu2 (ln x + F1/F) - pi nu1] and q2 = x^2 e^{2 F1/F}."""
    per = elliptic_periods(x, _order_for(x), log_x)
    L = cmath.log(x) if log_x is None else complex(log_x)
    ratio = per.F1 / per.F
    theta = -0.5 * (1j * nu2 * (L + ratio) - math.pi * nu1)
    # nome q = e^{i pi tau} = x e^{F1/F} on the chosen branch of ln x
    q = cmath.exp(L + ratio)
    return theta, q * q, per


def picard_in_domain(nu1, nu2, x, log_x=None) -> bool:
    """Fourier convergence condition |Im(u / (4 w1))| < Im tau."""
    nu1, nu2 = complex(nu1), complex(nu2)
    if abs(complex(x)) >= 1 or complex(x) == 0:
        return False
    per = elliptic_periods(x, _order_for(x), log_x)
    tau = per.tau
    return abs(((nu1 + nu2 * tau) / 2).imag) < tau.imag


def picard_y(nu1, nu2, x, nterms: int = 40, log_x=None) -> complex:
    """y(x) from the Fourier expansion of the Weierstrass function."""
    nu1, nu2 = complex(nu1), complex(nu2)
    if nu1 == 0 and nu2 == 0:
        raise PainleveError("(nu1, nu2) = (0, 0) is excluded")
    x = complex(x)
    if not picard_in_domain(nu1, nu2, x, log_x):
        raise OutsideDomainError(f"x = {x} is outside the Fourier convergence domain")
    theta, q2, per = picard_phase(nu1, nu2, x, log_x)
    s = cmath.sin(theta)
    if abs(s) < 1e-14:
        raise PoleError(f"sin^2 vanishes at x = {x}", x)
    total = 1 / (s * s) - 1 / 3
    qn = 1 + 0j
    for n in range(1, nterms + 1):
        qn *= q2
        total += 16 * n * qn / (1 - qn) * cmath.sin(n * theta) ** 2
    return (x + 1) / 3 + total / (per.F * per.F)


def _cauchy_derivatives(f, x: complex, r: float, n: int = 32):
    """f(x), f'(x), f''(x) by the trapezoidal rule on the circle |z - x| = r."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([f(x + r * wk) for wk in w])
    c = np.fft.fft(vals) / n
    return c[0], c[1] / r, 2 * c[2] / (r * r)


def picard_eval(nu1, nu2, x, nterms: int = 40, log_x=None, derivative_radius=None) -> PviPoint:
    """y and y' of Picard's solution at x; the branch of ln x follows ``log_x``."""
    x = complex(x)
    L = cmath.log(x) if log_x is None else complex(log_x)
    r = derivative_radius or 0.05 * abs(x)

    def f(z):
        return picard_y(nu1, nu2, z, nterms, L + cmath.log(z / x))

    y, yp, _ = _cauchy_derivatives(f, x, r)
    return PviPoint(x, complex(y), complex(yp))


def picard_residual(nu1, nu2, xs, nterms: int = 40) -> float:
    """PVI_{1/2} residual of Picard's solution sampled at the points ``xs``."""
    samples = []
    for x in xs:
        x = complex(x)
        r = 0.05 * abs(x)

        def f(z, x=x):
            return picard_y(nu1, nu2, z, nterms, cmath.log(x) + cmath.log(z / x))

        y, yp, ypp = _cauchy_derivatives(f, x, r)
        samples.append((x, y, yp, ypp))
    return pvi_residual_samples(samples, 0.5)


def picard_leading(nu1, nu2, x) -> complex:
    """Radial behaviour for 0 < Re nu2 < 2: a x^nu2 + x/2 + x^(2-nu2)/(16 a)."""
    nu1, nu2, x = complex(nu1), complex(nu2), complex(x)
    a = -0.25 * cmath.exp(1j * math.pi * nu1) / 16 ** (nu2 - 1)
    return a * x ** nu2 + x / 2 + x ** (2 - nu2) / (16 * a)


def picard_monodromy(nu1, nu2) -> MonodromyTriple:
    """(x0, x1, xinf) = -2 cos(pi r_i) with r_i chosen by the ordering of Re nu1, Re nu2."""
    nu1, nu2 = complex(nu1), complex(nu2)
    if nu1.real >= nu2.real:
        r = (nu2 / 2, 1 - nu1 / 2, (nu1 - nu2) / 2)
    else:
        r = (1 - nu2 / 2, nu1 / 2, (nu2 - nu1) / 2)
    x0, x1, xi = (-2 * cmath.cos(math.pi * ri) for ri in r)
    return MonodromyTriple.make(x0, x1, xi, 0.5)


# Shimomura's representation, leading term


def shimomura_leading(sigma, k, x) -> complex:
    """1/cosh^2((sigma-1)/2 ln x + k/2) = 4 e^{-k} x^{1-sigma} / (1 + e^{-k} x^{1-sigma})^2."""
    sigma, k, x = complex(sigma), complex(k), complex(x)
    w = cmath.exp(-k + (1 - sigma) * cmath.log(x))
    den = (1 + w) ** 2
    if abs(den) < 1e-300:
        raise PoleError(f"cosh vanishes at x = {x}", x)
    return 4 * w / den


# Logarithmic behaviour at sigma = 1


def chazy_omega(s, C=0) -> OmegaState:
    """Leading Omega values of the logarithmic solutions, mu^2 = 1/4."""
    s, C = complex(s), complex(C)
    L = cmath.log(s) + C
    if abs(L) < 1e-14:
        raise PainleveError("ln s + C vanishes")
    r = cmath.sqrt(s) * L
    return OmegaState(s, (1j / r, 0.5j + 1j / L, -1 / r), 0.5 + 0j)


def chazy_system_residual(s, C=0, h=None) -> tuple[float, float]:
    """(|Omega' - rhs|, |Omega'|) for the leading formulas, derivative by central difference."""
    s = complex(s)
    h = h or 1e-4 * abs(s)
    om = np.array(chazy_omega(s, C).omega)
    d = (np.array(chazy_omega(s + h, C).omega) - np.array(chazy_omega(s - h, C).omega)) / (2 * h)
    rhs = np.array(omega_rhs(s, om))
    return float(np.max(np.abs(d - rhs))), float(np.max(np.abs(d)))
