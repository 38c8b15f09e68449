"""Reconstruction of 3-dimensional WDVV solutions from PVI_mu transcendents.

The orthogonal matrix phi_0 is written through the frame E_ij built from the
Omega-system; flat coordinates and F - F_0 are rational in the frame, x and
the functions f(x, H), k(x, H).  Splitting off the H-dependence leaves series
tau_2, tau_3 and a function calF of the local variable, and series reversion
turns them into the closed form F = F_0 + (t3)^q phi(t2 / (t3)^p).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy as sp

from .connection import CriticalData, Point
from .local import LocalSolution, local_series_at_zero, transform_critical_point, rational_sigma
from .painleve import omega_to_y_series
from .series import PuiseuxSeries, SeriesError

SPECIAL_MU = {Fraction(k, 2) for k in (-6, -4, -3, -2, -1, 1, 2, 3, 4, 6)}
XC = cmath.exp(-1j * math.pi / 3)
QH_OMEGA0 = (-1j / math.sqrt(3), 1j / math.sqrt(3), 1j / math.sqrt(3))
# q = e^{t2} at the classical point: u_1 = 3 q^(1/3) gives H^3 = -81 sqrt(3) i q
QH_NORMALIZATION = 1j * math.sqrt(3) / 243


class FrobeniusError(ValueError):
    tag = "frobenius_error"


class DegenerateFrameError(FrobeniusError):
    tag = "degenerate_frame"


class SpecialMuError(FrobeniusError):
    tag = "special_mu"


class NoLimitError(FrobeniusError):
    tag = "no_limit"


class ReversionError(FrobeniusError):
    tag = "reversion_failure"


class InsufficientOrderError(FrobeniusError):
    tag = "insufficient_order"


def as_fraction(z, max_den: int = 1000, tol: float = 1e-10) -> Fraction | None:
    z = complex(z)
    if abs(z.imag) > tol:
        return None
    fr = Fraction(z.real).limit_denominator(max_den)
    return fr if abs(fr - z.real) < tol else None


def _is_zero(v, tol=1e-300) -> bool:
    if isinstance(v, PuiseuxSeries):
        return v.is_zero() or all(abs(complex(c)) < tol for c in v.terms.values())
    return abs(v) < 1e-14


# E-frame and structure functions


@dataclass(frozen=True)
class EijFrame:
    """E[i][j], 0-based, for phi_0 = (E_i1 / f, E_i2, E_i3 f)."""

    E: tuple
    mu: complex

    def __getitem__(self, ij):
        i, j = ij
        return self.E[i - 1][j - 1]

    def orthogonality_residual(self) -> float:
        """max |(E^T E) - eta|, with eta anti-diagonal; numeric frames only."""
        E = self.E
        eta = {(0, 0): 0, (0, 1): 0, (0, 2): 1, (1, 1): 1, (1, 2): 0, (2, 2): 0}
        worst = 0.0
        for (a, b), target in eta.items():
            v = sum(E[i][a] * E[i][b] for i in range(3))
            if isinstance(v, PuiseuxSeries):
                v = v - target
                worst = max([worst] + [abs(complex(c)) for c in v.terms.values()])
            else:
                worst = max(worst, abs(v - target))
        return worst


def build_frame(omega: Sequence, mu) -> EijFrame:
    """Frame of phi_0 from (Omega_1, Omega_2, Omega_3), numbers or series."""
    o1, o2, o3 = omega
    mu = complex(mu)
    s13 = o1 * o1 + o3 * o3
    if _is_zero(s13):
        raise DegenerateFrameError("Omega_1^2 + Omega_3^2 vanishes")
    m2 = 2 * mu * mu
    inv13 = 1 / s13
    E = (
        ((o1 * o2 - o3 * mu) * (1 / m2), o1 * (1 / (1j * mu)), -(o1 * o2 + o3 * mu) * inv13),
        (-s13 * (1 / m2), o2 * (1 / (1j * mu)), _one_like(o1)),
        ((o2 * o3 + o1 * mu) * (1 / m2), o3 * (1 / (1j * mu)), -(o2 * o3 - o1 * mu) * inv13),
    )
    return EijFrame(E, mu)


def _one_like(v):
    return v.const_like(1) if isinstance(v, PuiseuxSeries) else 1.0


@dataclass(frozen=True)
class StructureFunctions:
    a: object
    b: object
    b1: object
    a1: object
    b2: object
    c: object

    def as_tuple(self):
        return (self.a, self.b, self.b1, self.a1, self.b2, self.c)


def structure_functions(f: EijFrame, x) -> StructureFunctions:
    """a, b, b1, a1, b2, c: quadratic in the second and third frame rows."""
    E = f.E
    e21, e22, e23 = E[1]
    e31, e32, e33 = E[2]
    return StructureFunctions(
        a=e21 * e23 + x * e31 * e33,
        b=e22 * e21 + x * e32 * e31,
        b1=e23 * e22 + x * e33 * e32,
        a1=e23 * e23 + x * e33 * e33,
        b2=e22 * e22 + x * e32 * e32,
        c=e21 * e21 + x * e31 * e31,
    )


def generic_bracket(sf: StructureFunctions, mu):
    """The x-dependent factor of (F - F_0) f^2 / H^3 in the generic case."""
    a, b, b1, a1, b2, c = sf.as_tuple()
    return (a1 * c * c * (1 / (2 * (1 - 2 * mu) * (3 + 2 * mu)))
            + b * b1 * c * ((mu + 4) / (2 * (1 - mu) * (2 + mu) * (3 + 2 * mu)))
            + b * b * (b2 - a) * (1 / ((2 + mu) * (3 + 2 * mu))))


def qh_bracket(sf: StructureFunctions):
    a, b, b1, a1, b2, c = sf.as_tuple()
    return a1 * c * c * (1 / 6) + b * b1 * c * (3 / 4) + (b2 - a) * b * b


def h_scaling_exponents(mu=None) -> dict:
    """H-exponents of t2, t3 and F - F_0 from f ~ sqrt(k/H), k ~ H^(1 - 2 mu)."""
    m, H = sp.symbols("mu H", positive=True)
    k = H ** (1 - 2 * m)
    f = sp.sqrt(k) / sp.sqrt(H)
    out = {
        "t2": sp.simplify(sp.log(sp.powsimp(H / f, force=True)).expand(force=True) / sp.log(H)),
        "t3": sp.simplify(sp.log(sp.powsimp(H / f ** 2, force=True)).expand(force=True) / sp.log(H)),
        "F": sp.simplify(sp.log(sp.powsimp(H ** 3 / f ** 2, force=True)).expand(force=True) / sp.log(H)),
    }
    if mu is not None:
        out = {key: v.subs(m, sp.nsimplify(mu)) for key, v in out.items()}
    return out


# generic parametric solution


@dataclass(frozen=True)
class ParametricSolution:
    """t2 = tau2 H^(1+mu), t3 = tau3 H^(1+2mu), F - F_0 = calF H^(3+2mu)."""

    mu: complex
    k0: complex
    tau2: PuiseuxSeries
    tau3: PuiseuxSeries
    calF: PuiseuxSeries
    point: Point
    x: PuiseuxSeries
    structure: StructureFunctions

    @property
    def exponents(self):
        mu = self.mu
        return (1 + mu, 1 + 2 * mu, 3 + 2 * mu)

    def p(self):
        return (1 + self.mu) / (1 + 2 * self.mu)

    def q(self):
        return (3 + 2 * self.mu) / (1 + 2 * self.mu)


def check_generic_mu(mu) -> Fraction | None:
    fr = as_fraction(mu)
    if fr is not None and fr in SPECIAL_MU:
        raise SpecialMuError(f"mu = {fr} is not generic; mu = -1 is handled by qh_reconstruct")
    return fr


def _lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // math.gcd(out, n)
    return out


def _prepare_local(local: LocalSolution):
    """Fold rational sigma into the integer lattice; returns (y, omega, x)."""
    y, om = local.y, local.omega
    fr = rational_sigma(local.critical.sigma)
    if fr is not None and (y._uses_sigma() or any(o._uses_sigma() for o in om)):
        y = y.specialize(fr.numerator, fr.denominator)
        om = tuple(o.specialize(fr.numerator, fr.denominator) for o in om)
    return y, om


def parametric_generic(local: LocalSolution, k0=1.0) -> ParametricSolution:
    """tau2, tau3 and calF as series in the local variable of ``local``."""
    mu = complex(local.mu)
    mu_fr = check_generic_mu(mu)
    if k0 == 0:
        raise FrobeniusError("k0 must be nonzero")
    k0 = complex(k0)
    y, om = _prepare_local(local)
    R = 2
    if mu_fr is not None:
        p = (1 + mu_fr) / (1 + 2 * mu_fr)
        q = (3 + 2 * mu_fr) / (1 + 2 * mu_fr)
        R = _lcm(2, mu_fr.denominator, p.denominator, q.denominator)
    y = y.ramify(R)
    om = tuple(o.ramify(R) for o in om)
    sol = LocalSolution(local.critical, y, om, local.order, local.point)
    # x is exact; give it the working grade so that 1/(x - 1) etc. truncate
    x = sol.x_series()._like_grade(y.grade)
    frame = build_frame(om, mu)
    sf = structure_functions(frame, x)

    # k(x, H) = k0 exp{(2mu - 1) int (y - z)/(z(z - 1)) dz} / H^(2mu - 1)
    integrand = (y - x) / (x * (x - 1)) * x.differentiate()
    log_key = (-2 * y.ram, 0)
    c_log = integrand.terms.get(log_key, 0)
    rest = integrand._like({k: v for k, v in integrand.terms.items() if k != log_key})
    expo = (2 * mu - 1) * rest.antiderivative()
    ek = expo.exp()
    if abs(c_log) > 1e-12:
        c_fr = as_fraction(c_log)
        if c_fr is None or mu_fr is None:
            raise FrobeniusError(f"logarithmic term {c_log} in k needs rational mu and coefficient")
        e = (2 * mu_fr - 1) * c_fr * 2 * y.ram
        if e.denominator != 1:
            raise FrobeniusError("k monomial leaves the ramified lattice")
        ek = ek.shift(int(e))
    g = ek * ((y - 1) / (x - 1)) * k0
    tau2 = sf.b * g.power(Fraction(-1, 2)) * (1 / (1 + mu))
    tau3 = sf.c / g * (1 / (1 + 2 * mu))
    calF = generic_bracket(sf, mu) / g
    return ParametricSolution(mu, k0, tau2, tau3, calF, local.point, x, sf)


# closed forms


@dataclass
class ClosedForm:
    """F - F_0 = (t3)^q phi(zeta), zeta = t2 / (t3)^p, phi a series in X.

    ``xtype`` is 'zeta' (X = zeta), 'inverse' (X = 1/zeta) or 'shifted'
    (X = zeta - zeta0).  For the quantum cohomology form, xtype is 'qh',
    X^3 = (t3)^3 e^{t2} and F - F_0 = phi(X) / t3.
    """

    case: str
    mu: complex
    xtype: str
    coeffs: dict
    max_power: Fraction
    p: Fraction | None = None
    q: Fraction | None = None
    zeta0: complex | None = None
    point: str = "zero"
    meta: dict = field(default_factory=dict)

    def coefficient(self, power) -> complex:
        return self.coeffs.get(Fraction(power), 0j)

    def phi(self, X) -> complex:
        return sum(c * complex(X) ** float(e) for e, c in self.coeffs.items())

    def evaluate(self, t2, t3) -> complex:
        """F - F_0 at (t2, t3) from the truncated series; principal powers."""
        t2, t3 = complex(t2), complex(t3)
        if self.xtype == "qh":
            x3 = t3 ** 3 * cmath.exp(t2)
            return sum(c * x3 ** (float(e) / 3) for e, c in self.coeffs.items()) / t3
        zeta = t2 / t3 ** float(self.p)
        X = {"zeta": zeta, "inverse": 1 / zeta, "shifted": zeta - (self.zeta0 or 0)}[self.xtype]
        return t3 ** float(self.q) * self.phi(X)

    def terms(self, tol: float = 1e-10) -> list[dict]:
        """Monomials in t2, t3 (or e^{t2} for the 'qh' form); coefficients below tol * max are dropped."""
        out = []
        cut = tol * max((abs(c) for c in self.coeffs.values()), default=0.0)
        for e, c in sorted(self.coeffs.items()):
            if abs(c) <= cut:
                continue
            if self.xtype == "qh":
                out.append({"exp_t2": e / 3, "t3_pow": e - 1, "coeff": c})
            elif self.xtype == "zeta":
                out.append({"t2_pow": e, "t3_pow": self.q - e * self.p, "coeff": c})
            elif self.xtype == "inverse":
                out.append({"t2_pow": -e, "t3_pow": self.q + e * self.p, "coeff": c})
            else:
                out.append({"X_pow": e, "t3_pow": self.q, "coeff": c})
        return out

    def to_json(self) -> dict:
        def num(v):
            if isinstance(v, Fraction):
                return str(v) if v.denominator != 1 else v.numerator
            v = complex(v)
            return [v.real, v.imag]

        return {
            "case": self.case,
            "mu": num(self.mu),
            "xtype": self.xtype,
            "p": None if self.p is None else num(self.p),
            "q": None if self.q is None else num(self.q),
            "zeta0": None if self.zeta0 is None else num(self.zeta0),
            "max_power": num(self.max_power),
            "terms": [{k: num(v) for k, v in t.items()} for t in self.terms()],
        }


def _x_series_coefficients(phiZ: PuiseuxSeries, j: int, c, tol: float) -> tuple[dict, Fraction]:
    """Rewrite a series in Z = (X/c)^(1/j) as coefficients of powers of X."""
    scale = max((abs(complex(v)) for v in phiZ.terms.values()), default=1.0)
    coeffs: dict[Fraction, complex] = {}
    for (m, _), v in sorted(phiZ.terms.items()):
        i = m // 2
        e = Fraction(i, j)
        v = complex(v)
        if e.denominator != 1 and abs(v) <= tol * scale:
            continue
        coeffs[e] = v * complex(c) ** (-float(e)) if e else v
    max_power = Fraction(phiZ.grade // 2, j) if phiZ.grade < 10 ** 8 else Fraction(10 ** 6)
    return coeffs, max_power


def _prune(s: PuiseuxSeries, rel: float = 1e-13) -> PuiseuxSeries:
    """Drop coefficients that are rounding residue of exact cancellations."""
    total = sum(abs(complex(c)) for c in s.terms.values())
    return s._like({k: c for k, c in s.terms.items() if abs(complex(c)) > rel * total})


def closed_form_invert(p: ParametricSolution, case_hint: str = "auto", case: str = "generic",
                       tol: float = 1e-9) -> ClosedForm:
    """phi(X) by reverting X(s); X is zeta, 1/zeta or zeta - zeta0 by the limit of zeta."""
    mu_fr = as_fraction(p.mu)
    if mu_fr is None:
        raise FrobeniusError("closed-form inversion needs rational mu")
    pe = (1 + mu_fr) / (1 + 2 * mu_fr)
    qe = (3 + 2 * mu_fr) / (1 + 2 * mu_fr)
    if any(s._uses_sigma() for s in (p.tau2, p.tau3, p.calF)):
        raise NoLimitError("zeta has irrational exponents; no single-variable closed form")
    zeta = _prune(p.tau2 * p.tau3.power(-pe))
    phi_s = p.calF * p.tau3.power(-qe)
    lead = zeta.leading_terms()
    if len(lead) != 1:
        raise NoLimitError("zeta has no single leading monomial")
    (m0, _), c0 = next(iter(lead.items()))
    hint = case_hint
    if hint == "auto":
        hint = "zeta" if m0 > 0 else "inverse" if m0 < 0 else "shifted"
    zeta0 = None
    if hint == "zeta":
        X = zeta
    elif hint == "inverse":
        X = zeta.reciprocal()
    elif hint == "shifted":
        if m0 != 0:
            raise NoLimitError("zeta does not tend to a finite nonzero limit")
        zeta0 = complex(c0)
        X = zeta - zeta0
    else:
        raise FrobeniusError(f"unknown case hint {case_hint!r}")
    if X.is_zero() or X.valuation() <= 0:
        raise NoLimitError("X does not tend to zero")
    Xw = X.uniformize("w")
    phiw = phi_s.uniformize("w")
    (mj, _), c, _ = Xw._split_leading()
    j = mj // 2
    try:
        Z = Xw.scale(1 / c).power(Fraction(1, j), lead=1)
        wZ = Z.revert("Z")
        phiZ = phiw.retag("Z").compose(wZ)
    except SeriesError as exc:
        raise ReversionError(str(exc)) from exc
    coeffs, max_power = _x_series_coefficients(phiZ, j, c, tol)
    return ClosedForm(case, p.mu, hint, coeffs, max_power, pe, qe, zeta0, p.point.value,
                      {"k0": p.k0, "ramification": j})


# quantum cohomology of CP^2 (mu = -1)


@dataclass
class QHResult:
    closed_form: ClosedForm
    nk: list  # (k, value, rounded, relative residual)
    shortcut_residual: float
    x_leading: complex

    def integers(self) -> list[int]:
        return [r for _, _, r, _ in self.nk]


def qh_omega_taylor(order: int, x0=XC, omega0=QH_OMEGA0, var: str = "s") -> tuple:
    """Taylor coefficients of the Omega-system solution at x0 through s^order."""
    G = 2 * order
    one = PuiseuxSeries({(0, 0): 1}, grade=G, var=var)
    s = one.variable()
    x = one.scale(x0) + s
    inv_x = x.reciprocal()
    inv_1mx = (one - x).reciprocal()
    inv_xxm1 = (x * (x - one)).reciprocal()
    coef = [[complex(o)] for o in omega0]
    for k in range(order):
        om = [PuiseuxSeries({(2 * i, 0): c for i, c in enumerate(cs)}, grade=2 * k, var=var) for cs in coef]
        r = (om[1] * om[2] * inv_x, om[0] * om[2] * inv_1mx, om[0] * om[1] * inv_xxm1)
        for i in range(3):
            coef[i].append(complex(r[i].coeff(2 * k)) / (k + 1))
    om = tuple(PuiseuxSeries({(2 * i, 0): c for i, c in enumerate(cs)}, grade=G, var=var) for cs in coef)
    return om, x


def qh_reconstruct(order: int = 16, q0=1.0, kmax: int | None = None, tol: float = 1e-6) -> QHResult:
    """Kontsevich's form of F for QH*(CP^2) from the Omega-system at x_c = e^{-i pi/3}."""
    if order < 3:
        raise InsufficientOrderError("order must be at least 3")
    q0 = complex(q0)
    if q0 == 0:
        raise FrobeniusError("q0 must be nonzero")
    avail = (order - 1) // 3
    kmax = avail if kmax is None else kmax
    if kmax > avail:
        raise InsufficientOrderError(f"order {order} reaches k <= {avail}, not {kmax}")
    mu = -1.0
    om, x = qh_omega_taylor(order)
    frame = build_frame(om, mu)
    sf = structure_functions(frame, x)
    E = frame.E
    # t3 = 0 at the classical point, so c(x_c) vanishes; drop its rounding residue
    c0 = complex(sf.c.coeff(0))
    if abs(c0) > 1e-10:
        raise FrobeniusError(f"c(x_c) = {c0} should vanish at the classical point")
    c = sf.c._like({k: v for k, v in sf.c.terms.items() if k != (0, 0)})
    tau3 = c / (sf.b * sf.b) * (-9)
    calF = qh_bracket(sf) / (sf.b * sf.b) * 9
    # t2 = 3 ln H + 3 J, J = int dz / (z + E21 E22 / (E31 E32)), J(x_c) = 0
    J = (x + E[1][0] * E[1][1] / (E[2][0] * E[2][1])).reciprocal().antiderivative()
    kappa = (QH_NORMALIZATION * q0) ** (1 / 3)
    X = tau3 * J.exp() * kappa
    phi_s = calF * tau3
    try:
        sX = X.revert("X")
        phiX = phi_s.retag("X").compose(sX)
    except SeriesError as exc:
        raise ReversionError(str(exc)) from exc
    coeffs, max_power = _x_series_coefficients(phiX, 1, 1, 1e-9)
    scale = max(abs(v) for v in coeffs.values())
    stray = max((abs(v) for e, v in coeffs.items() if e % 3), default=0.0)
    if stray > 1e-8 * scale:
        raise FrobeniusError(f"phi is not a series in X^3 (stray coefficient {stray:.2e})")
    coeffs = {e: v for e, v in coeffs.items() if e % 3 == 0 and e <= 3 * kmax}
    nk = []
    for k in range(1, kmax + 1):
        v = coeffs.get(Fraction(3 * k), 0j) * math.factorial(3 * k - 1) * q0 ** k
        r = round(v.real)
        res = abs(v - r) / max(1.0, abs(r))
        nk.append((k, v, r if res <= tol else None, res))
    # shortcut: sum k^2 c_k X^{3k} / tau3 = 1 + x - 3 a(x)
    lhs = X._like({}, grade=X.grade)
    for e, v in coeffs.items():
        lhs = lhs + (X ** int(e)).scale(v * (int(e) // 3) ** 2)
    lhs = lhs / tau3
    rhs = x.const_like(1) + x - sf.a * 3
    G = min(lhs.grade, 2 * (3 * kmax))
    diff = (lhs - rhs).truncate(G)
    shortcut = max((abs(complex(c)) for c in diff.terms.values()), default=0.0)
    cf = ClosedForm("QH_CP2", mu, "qh", coeffs, Fraction(3 * kmax), point="x_c",
                    meta={"q0": q0, "order": order})
    return QHResult(cf, nk, shortcut, complex(X.coeff(2)))


# two-dimensional solutions


@dataclass(frozen=True)
class TwoDimSolution:
    sigma: complex
    constant: complex
    tag: str
    F: sp.Expr
    euler: sp.Expr
    d: sp.Expr
    stokes: complex

    def quasi_homogeneity_defect(self) -> sp.Expr:
        """E(F) - (3 - d) F, which must be at most quadratic in t."""
        t1, t2 = sp.symbols("t1 t2")
        E = self.euler
        EF = t1 * sp.diff(self.F, t1) + E * sp.diff(self.F, t2)
        return sp.expand(sp.simplify(EF - (3 - self.d) * self.F))

    def is_quasi_homogeneous(self) -> bool:
        t1, t2 = sp.symbols("t1 t2")
        defect = self.quasi_homogeneity_defect()
        if defect == 0:
            return True
        poly = sp.Poly(defect, t1, t2) if defect.is_polynomial(t1, t2) else None
        return poly is not None and poly.total_degree() <= 2


def two_dim_closed_form(sigma, constant=1, r=1) -> TwoDimSolution:
    """F(t) of the 2-dimensional semisimple solutions, d = -sigma."""
    t1, t2 = sp.symbols("t1 t2")
    sig = sp.nsimplify(sigma)
    C = sp.nsimplify(constant)
    base = t1 ** 2 * t2 / 2
    d = -sig
    s = complex(2 * cmath.sin(cmath.pi * complex(sigma) / 2))
    if sig == -1:
        rr = sp.nsimplify(r)
        return TwoDimSolution(complex(sigma), complex(constant), "exp", base + C * sp.exp(2 * t2 / rr),
                              rr, d, s)
    euler = (1 - d) * t2
    if sig == 1:
        F, tag = base + C * t2 ** 2 * sp.log(t2), "t2log"
    elif sig == -3:
        F, tag = base + C * sp.log(t2), "log"
    else:
        F, tag = base + C * t2 ** ((3 + sig) / (1 + sig)), "power"
    return TwoDimSolution(complex(sigma), complex(constant), tag, F, euler, d, s)


def local_solution_for(critical: CriticalData, order: int) -> LocalSolution:
    """Point-zero series for the critical data, moved to its own critical point."""
    from dataclasses import replace

    sol = local_series_at_zero(replace(critical, point=Point.ZERO), order)
    if critical.point == Point.ZERO:
        return sol
    return transform_critical_point(sol, critical.point)
