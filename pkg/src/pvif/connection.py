"""Connection formulae between monodromy triples and critical data (sigma, a)."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from enum import Enum

from .monodromy import MonodromyTriple
from .special import gamma, near_pole, rgamma

PI = cmath.pi
TOL = 1e-9


class ConnectionError_(ValueError):
    """Base class; ``tag`` names the failure for machine-readable output."""

    tag = "connection_error"


class SigmaOneError(ConnectionError_):
    tag = "sigma_one"


class DegenerateFamilyError(ConnectionError_):
    """mu integer and triple (0, 0, 0): the rational family y = ax/(1-(1-a)x)."""

    tag = "degenerate_rational_family"
    family = "y = a x / (1 - (1 - a) x), a arbitrary"


class OutsideOmegaError(ConnectionError_):
    tag = "sigma_outside_omega"


class Point(str, Enum):
    ZERO = "zero"
    ONE = "one"
    INFINITY = "infinity"


@dataclass(frozen=True)
class CriticalData:
    """y ~ a x^(1-sigma) at the critical point (in its local variable)."""

    sigma: complex
    a: complex
    mu: complex
    point: Point = Point.ZERO
    case: str = "I"

    def __post_init__(self):
        if not in_omega(self.sigma):
            raise OutsideOmegaError(f"sigma = {self.sigma} is not in Omega")
        if self.a == 0:
            raise ConnectionError_("a must be nonzero")

    def to_json(self) -> dict:
        s, a, m = complex(self.sigma), complex(self.a), complex(self.mu)
        return {"sigma": [s.real, s.imag], "a": [a.real, a.imag], "mu": [m.real, m.imag],
                "point": self.point.value, "case": self.case}


@dataclass(frozen=True)
class AuxFactors:
    f: complex
    G: complex


def in_omega(sigma, tol: float = 1e-14) -> bool:
    """sigma not in (-inf, 0) and not in [1, +inf)."""
    s = complex(sigma)
    if abs(s.imag) > tol:
        return True
    return -tol <= s.real < 1 - tol


def _is_int(z, tol: float = TOL) -> int | None:
    z = complex(z)
    n = round(z.real)
    return n if abs(z - n) < tol else None


def f_sigma_mu(sigma, mu) -> complex:
    return 2 * cmath.cos(PI * sigma / 2) ** 2 / (cmath.cos(PI * sigma) - cmath.cos(2 * PI * mu))


def f_triple(x0, x1, xinf) -> complex:
    return (4 - x0 * x0) / (x1 * x1 + xinf * xinf - x0 * x1 * xinf)


def G_sigma_mu(sigma, mu, extended: bool = False) -> complex:
    num = 0.5 * 4 ** sigma * gamma((sigma + 1) / 2, extended) ** 2
    return num * rgamma(1 - mu + sigma / 2, extended) * rgamma(mu + sigma / 2, extended)


def aux_factors(sigma, mu, extended: bool = False) -> AuxFactors:
    return AuxFactors(f_sigma_mu(sigma, mu), G_sigma_mu(sigma, mu, extended))


# point permutations


def pretransform(entries, point: Point):
    """Triple seen from the critical point ``point`` as if it were zero."""
    x0, x1, xi = entries
    if point == Point.ZERO:
        return (x0, x1, xi)
    if point == Point.ONE:
        return (x1, x0, x0 * x1 - xi)
    if point == Point.INFINITY:
        return (xi, -x1, x0 - x1 * xi)
    raise ValueError(point)


def posttransform(entries, point: Point):
    """Inverse of :func:`pretransform`."""
    y0, y1, yi = entries
    if point == Point.ZERO:
        return (y0, y1, yi)
    if point == Point.ONE:
        return (y1, y0, y0 * y1 - yi)
    if point == Point.INFINITY:
        return (yi - y0 * y1, -y1, y0)
    raise ValueError(point)


# sigma from x0


def principal_sigma(x0) -> complex:
    """Root of cos(pi sigma) = 1 - x0^2/2 with 0 <= Re sigma <= 1."""
    s = cmath.acos(1 - x0 * x0 / 2) / PI
    if abs(s.real) < 1e-13 and s.imag < 0:
        s = -s
    if abs(s.real - 1) < 1e-13 and s.imag < 0:
        s = 2 - s
    return complex(s)


def _branch_sigma(sigma: complex, branch: str | tuple) -> complex:
    if branch in ("principal", None):
        return sigma
    if branch == "reflected":
        return -sigma
    if isinstance(branch, tuple) and branch[0] == "shift":
        n = int(branch[1])
        for cand in (sigma + 2 * n, -sigma + 2 * n):
            if in_omega(cand):
                return cand
        raise OutsideOmegaError(f"no shift by {2 * n} of +-sigma lies in Omega")
    raise ValueError(f"unknown branch {branch!r}")


def parse_branch(text: str):
    if text.startswith("shift"):
        return ("shift", int(text[5:].strip("()=: ") or 0))
    return text


# converse map: triple -> (sigma, a)


def _case_I_a(sigma, mu, x0, x1, xi, extended=False) -> complex:
    f = f_triple(x0, x1, xi)
    G = G_sigma_mu(sigma, mu, extended)
    e = cmath.exp(-1j * PI * sigma)
    return 1j * G * G / (2 * cmath.sin(PI * sigma)) * (2 * (1 + e) - f * (xi * xi + e * x1 * x1)) * f


def _case_III(sigma, mu, x1, xi):
    """Return (label, a) for x0^2 = 4 sin^2(pi mu)."""
    rel_minus = abs(xi * xi + x1 * x1 * cmath.exp(-2j * PI * mu))
    rel_plus = abs(xi * xi + x1 * x1 * cmath.exp(2j * PI * mu))
    scale = max(1.0, abs(x1) ** 2)
    if x1 == 0:
        raise ConnectionError_("case III needs x1 != 0")
    cands = []
    m = _is_int((sigma - 2 * mu) / 2)
    if m is not None:
        if m >= 0:
            cands.append(("III1", m, rel_minus))
        else:
            cands.append(("III2", m, rel_plus))
    m = _is_int((sigma + 2 * mu) / 2)
    if m is not None:
        if m >= 1:
            cands.append(("III3", m, rel_plus))
        else:
            cands.append(("III4", m, rel_minus))
    for label, m, rel in cands:
        if rel < 1e-8 * scale:
            c4 = cmath.cos(PI * mu) ** 4
            if label == "III1":
                a = -(16 ** (2 * mu + 2 * m) * gamma(mu + m + 0.5) ** 4
                      * rgamma(m + 1) ** 2 * rgamma(2 * mu + m) ** 2) / (4 * x1 * x1)
            elif label == "III2":
                a = -c4 / (4 * PI ** 4) * 16 ** (2 * mu + 2 * m) * gamma(mu + m + 0.5) ** 4 \
                    * gamma(-2 * mu - m + 1) ** 2 * gamma(-m) ** 2 * x1 * x1
            elif label == "III3":
                a = -(16 ** (-2 * mu + 2 * m) * gamma(-mu + m + 0.5) ** 4
                      * rgamma(m - 2 * mu + 1) ** 2 * rgamma(m) ** 2) / (4 * x1 * x1)
            else:
                a = -c4 / (4 * PI ** 4) * 16 ** (-2 * mu + 2 * m) * gamma(-mu + m + 0.5) ** 4 \
                    * gamma(2 * mu - m) ** 2 * gamma(1 - m) ** 2 * x1 * x1
            return label, a
    raise OutsideOmegaError("x0^2 = 4 sin^2(pi mu) but no case III branch gives sigma in Omega")


def triple_to_critical(t: MonodromyTriple, point: Point | str = Point.ZERO,
                       branch="principal", extended: bool = False) -> CriticalData:
    """Critical data (sigma, a) of the branch with monodromy data t at ``point``."""
    point = Point(point)
    mu = t.mu
    x0, x1, xi = pretransform(t.entries, point)
    if abs(x0 * x0 - 4) < TOL:
        raise SigmaOneError("x0^2 = 4: sigma = 1 is not in Omega")
    mu_int = _is_int(mu) is not None
    if mu_int and max(abs(x0), abs(x1), abs(xi)) < TOL:
        raise DegenerateFamilyError("mu integer with triple (0,0,0)")
    s4 = 4 * cmath.sin(PI * mu) ** 2
    sigma0 = principal_sigma(x0)
    if abs(x0 * x0 - s4) < TOL and not mu_int:
        label, a = _case_III(sigma0, mu, x1, xi)
        return CriticalData(sigma0, a, mu, point, label)
    if mu_int and abs(x0) < TOL:
        label, a = _case_III(0j, mu, x1, xi)
        return CriticalData(0j, a, mu, point, label)
    if abs(x0) < TOL:
        denom = x1 * x1 + xi * xi
        if abs(x1) < TOL or abs(xi) < TOL:
            raise ConnectionError_("case II needs x1, xinf nonzero")
        return CriticalData(0j, xi * xi / denom, mu, point, "II")
    sigma = _branch_sigma(sigma0, branch)
    if not in_omega(sigma) and branch != "reflected":
        raise OutsideOmegaError(f"sigma = {sigma} not in Omega")
    for s in (sigma,):
        for pm in (1, -1):
            if _is_int((s - pm * 2 * mu) / 2) is not None:
                raise ConnectionError_("sigma = +-2mu + 2m hit in case I")
    a = _case_I_a(sigma, mu, x0, x1, xi, extended)
    if branch == "reflected":
        return _unchecked(sigma, a, mu, point, "I")
    return CriticalData(sigma, a, mu, point, "I")


def _unchecked(sigma, a, mu, point, case) -> CriticalData:
    obj = object.__new__(CriticalData)
    for k, v in (("sigma", sigma), ("a", a), ("mu", mu), ("point", point), ("case", case)):
        object.__setattr__(obj, k, v)
    return obj


# direct map: (sigma, a) -> triple


def _sqrt(z) -> complex:
    return cmath.sqrt(z)


def critical_to_triple(c: CriticalData, extended: bool = False) -> MonodromyTriple:
    """Monodromy triple of y(x; sigma, a); principal sqrt(a) throughout."""
    sigma, a, mu = complex(c.sigma), complex(c.a), complex(c.mu)
    ra = _sqrt(a)
    sm = cmath.sin(PI * mu)
    if abs(sigma) < TOL:
        entries = (0j, 2 * sm * _sqrt(1 - a), 2 * sm * ra)
        label = "ii"
    else:
        label, entries = None, None
        m = _is_int((sigma - 2 * mu) / 2)
        if m is not None:
            if m >= 0:
                x1 = -0.5j * 16 ** (mu + m) * gamma(mu + m + 0.5) ** 2 \
                    * rgamma(m + 1) * rgamma(2 * mu + m) / ra
                entries, label = (2 * sm, x1, 1j * x1 * cmath.exp(-1j * PI * mu)), "iii1"
            else:
                x1 = 2j * PI ** 2 / cmath.cos(PI * mu) ** 2 * ra * rgamma(mu + m + 0.5) ** 2 \
                    * rgamma(-2 * mu - m + 1) * rgamma(-m) / 16 ** (mu + m)
                entries, label = (2 * sm, x1, -1j * x1 * cmath.exp(1j * PI * mu)), "iii2"
        else:
            m = _is_int((sigma + 2 * mu) / 2)
            if m is not None:
                if m >= 1:
                    x1 = -0.5j * 16 ** (-mu + m) * gamma(-mu + m + 0.5) ** 2 \
                        * rgamma(m - 2 * mu + 1) * rgamma(m) / ra
                    entries, label = (-2 * sm, x1, 1j * x1 * cmath.exp(1j * PI * mu)), "iii3"
                else:
                    x1 = 2j * PI ** 2 / cmath.cos(PI * mu) ** 2 * ra * rgamma(-mu + m + 0.5) ** 2 \
                        * rgamma(2 * mu - m) * rgamma(1 - m) / 16 ** (-mu + m)
                    entries, label = (-2 * sm, x1, -1j * x1 * cmath.exp(-1j * PI * mu)), "iii4"
        if entries is None:
            f = f_sigma_mu(sigma, mu)
            G = G_sigma_mu(sigma, mu, extended)
            e = cmath.exp(-0.5j * PI * sigma)
            x0 = 2 * cmath.sin(PI * sigma / 2)
            x1 = 1j * (ra / (f * G) - G / ra)
            xi = ra / (f * G * e) + G * e / ra
            entries, label = (x0, x1, xi), "i"
    e0, e1, ei = posttransform(entries, c.point)
    return MonodromyTriple(e0, e1, ei, mu)


def connection_case(c: CriticalData) -> str:
    """Label of the direct-map case used for c."""
    sigma, mu = complex(c.sigma), complex(c.mu)
    if abs(sigma) < TOL:
        return "ii"
    m = _is_int((sigma - 2 * mu) / 2)
    if m is not None:
        return "iii1" if m >= 0 else "iii2"
    m = _is_int((sigma + 2 * mu) / 2)
    if m is not None:
        return "iii3" if m >= 1 else "iii4"
    return "i"


def critical_actions(c: CriticalData, action: str) -> CriticalData:
    """beta1_sq: (sigma, a) -> (sigma, a e^{-2 pi i sigma}); reflect: (-sigma, 1/(16 a))."""
    if action == "beta1_sq":
        return replace(c, a=c.a * cmath.exp(-2j * PI * c.sigma))
    if action == "reflect":
        s = -complex(c.sigma)
        if abs(s.imag) < 1e-14 and s.real != 0:
            raise OutsideOmegaError("reflection of real nonzero sigma leaves Omega")
        return replace(c, sigma=s, a=1 / (16 * c.a))
    raise ValueError(f"unknown action {action!r}")
