"""Algebraic solutions of PVI_mu and the WDVV closed forms they produce.

Each entry bundles a monodromy triple, the critical point where the local
expansion is taken, the expected leading behaviour of y and the expected
coefficients of phi.  Coefficients that depend on a branch of k0^(1/2) are
checked through relations that do not depend on the branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import sympy as sp

from .connection import CriticalData, triple_to_critical
from .frobenius import ClosedForm, closed_form_invert, local_solution_for, parametric_generic
from .monodromy import MonodromyTriple

SQ5 = math.sqrt(5)


class CatalogError(KeyError):
    tag = "unknown_variant"


@dataclass(frozen=True)
class CatalogEntry:
    case: str
    variant: str
    triple: tuple
    mu: Fraction
    point: str
    leading_a: complex
    leading_exponent: Fraction
    xtype: str
    target: str
    checks: Callable = field(repr=False, compare=False)
    # compare a^n when the displayed a is one of several equivalent branches
    leading_power: int = 1


@dataclass
class CatalogReport:
    entry: CatalogEntry
    critical: CriticalData
    closed_form: ClosedForm
    checks: list  # (name, value, expected, ok)

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checks)

    @property
    def verified_terms(self) -> int:
        return int(self.closed_form.max_power) + 1


def _close(a, b, rel=1e-8) -> bool:
    return abs(complex(a) - complex(b)) <= rel * max(1.0, abs(complex(b)))


def _check(name, value, expected, rel=1e-8):
    return (name, complex(value), complex(expected), _close(value, expected, rel))


def _vanishing(cf: ClosedForm, powers, scale: float = 1.0):
    out = []
    for e in powers:
        if e <= cf.max_power:
            out.append(_check(f"A{e}", cf.coefficient(e), 0, 1e-8 * scale))
    return out


def _higher(cf: ClosedForm, start: int):
    return [e for e in range(start, int(cf.max_power) + 1)]


def _a3_checks(sign):
    def run(cf: ClosedForm, k0):
        A = cf.coefficient
        return [
            _check("A0 = 4/15 k0^4", A(0), Fraction(4, 15) * k0 ** 4),
            _check("A2 = -/+ k0^2", A(2), sign * k0 ** 2),
            _check("A0 = 4/15 a^2 with a = A2", A(0), Fraction(4, 15) * A(2) ** 2),
        ] + _vanishing(cf, [1, 3] + _higher(cf, 4))
    return run


def _a3_111(cf: ClosedForm, k0):
    A = cf.coefficient
    alpha = -A(2)
    z0 = cf.zeta0
    return [
        _check("alpha = -2187/625 k0^2", alpha, -Fraction(2187, 625) * k0 ** 2),
        _check("zeta0^2 = (72 sqrt2 / 25)^2 k0^2", z0 ** 2, (72 * math.sqrt(2) / 25) ** 2 * k0 ** 2),
        _check("A1 = -2 alpha zeta0", A(1), -2 * alpha * z0),
        _check("A0 = 4/15 alpha^2 - alpha zeta0^2", A(0), Fraction(4, 15) * alpha ** 2 - alpha * z0 ** 2),
        _check("A0 = 119751372/1953125 k0^4", A(0), Fraction(119751372, 1953125) * k0 ** 4),
    ] + _vanishing(cf, _higher(cf, 3), 10.0)


def _b3(cf: ClosedForm, k0):
    A = cf.coefficient
    a = A(3)
    return [
        _check("A3^2 = (2 i sqrt2/9)^2 k0^3", a ** 2, -Fraction(8, 81) * k0 ** 3),
        _check("A2 = -16/27 k0^3", A(2), -Fraction(16, 27) * k0 ** 3),
        _check("A0 = 512/8505 k0^6", A(0), Fraction(512, 8505) * k0 ** 6),
        _check("A2 = 6 a^2", A(2), 6 * a ** 2),
        _check("A0 = 216/35 a^4", A(0), Fraction(216, 35) * a ** 4),
    ] + _vanishing(cf, [1] + _higher(cf, 4))


def _h3(cf: ClosedForm, k0):
    A = cf.coefficient
    alpha = A(3)
    return [
        _check("alpha^2 = -256/5625 k0^5", alpha ** 2, -Fraction(256, 5625) * k0 ** 5),
        _check("A2 = 9/5 alpha^2", A(2), Fraction(9, 5) * alpha ** 2),
        _check("A0 = 18/55 alpha^4", A(0), Fraction(18, 55) * alpha ** 4),
    ] + _vanishing(cf, [1] + _higher(cf, 4))


def _great_dodecahedron(exact: bool):
    def run(cf: ClosedForm, k0):
        A = cf.coefficient
        out = [
            _check("A0 / A2^2 = 6/35", A(0) / A(2) ** 2, Fraction(6, 35)),
            _check("A3^2 / A2 = 5/3", A(3) ** 2 / A(2), Fraction(5, 3)),
            _check("A4 = 1/8", A(4), Fraction(1, 8)),
            _check("A5 A3 = -1/36", A(5) * A(3), -Fraction(1, 36)),
            _check("A6 A2 = 1/108", A(6) * A(2), Fraction(1, 108)),
            _check("|A2| = 16/27 |k0|^3", abs(A(2)), Fraction(16, 27) * abs(k0) ** 3),
        ] + _vanishing(cf, [1])
        if exact:
            out += [_check("A0 = 512/8505 k0^6", A(0), Fraction(512, 8505) * k0 ** 6),
                    _check("A2 = -16/27 k0^3", A(2), -Fraction(16, 27) * k0 ** 3),
                    _check("A3^2 = (4 i sqrt5/9)^2 k0^3", A(3) ** 2, -Fraction(80, 81) * k0 ** 3)]
        return out
    return run


def _great_icosahedron(cf: ClosedForm, k0):
    A = cf.coefficient
    alpha = -15j * A(3)
    return [
        _check("k0^5 = alpha^6 / 90000", k0 ** 5, alpha ** 6 / 90000),
        _check("A0 = 54/284375 alpha^4", A(0), Fraction(54, 284375) * alpha ** 4),
        _check("A2 = -3/125 alpha^2", A(2), -Fraction(3, 125) * alpha ** 2),
        _check("A4 = 1/72", A(4), Fraction(1, 72)),
        _check("A5 = i/(108 alpha)", A(5), 1j / (108 * alpha)),
    ] + _vanishing(cf, [1])


_F = Fraction
CATALOG: dict[tuple[str, str], CatalogEntry] = {}


def _add(case, variant, triple, mu, point, a, expo, xtype, target, checks, leading_power=1):
    CATALOG[(case, variant)] = CatalogEntry(case, variant, triple, mu, point, a, expo, xtype, target, checks,
                                            leading_power)


_add("A3", "i", (0, -1, -1), _F(-1, 4), "zero", 0.5, _F(1), "zeta",
     "4/15 k0^4 (t3)^5 - k0^2 (t2)^2 (t3)^2", _a3_checks(-1))
_add("A3", "ii", (-1, 0, -1), _F(-1, 4), "one", 0.5, _F(1), "zeta",
     "4/15 k0^4 (t3)^5 + k0^2 (t2)^2 (t3)^2", _a3_checks(1))
_add("A3", "iii", (-1, -1, 0), _F(-1, 4), "infinity", 0.5, _F(0), "zeta",
     "4/15 k0^4 (t3)^5 - k0^2 (t2)^2 (t3)^2", _a3_checks(-1))
_add("A3", "111", (1, 1, 1), _F(-1, 4), "zero", 4 ** (2 / 3) / 50, _F(2, 3), "shifted",
     "4/15 alpha^2 (t3)^5 - alpha (t2)^2 (t3)^2, alpha = -2187/625 k0^2", _a3_111, leading_power=3)
_add("B3", "i", (0, -1, -math.sqrt(2)), _F(-1, 3), "zero", 2 / 3, _F(1), "zeta",
     "512/8505 k0^6 (t3)^7 - 16/27 k0^3 (t2)^2 (t3)^3 - 2i sqrt2/9 k0^(3/2) (t2)^3 t3", _b3)
_add("H3", "i", (0, 1, (1 + SQ5) / 2), _F(-2, 5), "zero", (3 + SQ5) / (5 + SQ5), _F(1), "zeta",
     "18/55 alpha^4 (t3)^11 + 9/5 alpha^2 (t2)^2 (t3)^5 + alpha (t2)^3 (t3)^2", _h3)
_add("greatDodecahedron", "i", (0, (1 + SQ5) / 2, (SQ5 - 1) / 2), _F(-1, 3), "zero", None, _F(1), "zeta",
     "512/8505 k0^6 (t3)^7 - 16/27 k0^3 (t2)^2 (t3)^3 + 4i sqrt5/9 k0^(3/2) t3 (t2)^3 + 1/8 (t2)^4/t3 + ...",
     _great_dodecahedron(True))
_add("greatDodecahedron", "ii", ((1 + SQ5) / 2, 0, (SQ5 - 1) / 2), _F(-1, 3), "one", None, _F(1), "zeta",
     "as variant i up to the choice of k0", _great_dodecahedron(False))
_add("greatDodecahedron", "iii", ((1 + SQ5) / 2, (SQ5 - 1) / 2, 0), _F(-1, 3), "infinity", None, _F(0), "zeta",
     "as variant i up to the choice of k0", _great_dodecahedron(False))
_add("greatIcosahedron", "i", (0, -1, (1 - SQ5) / 2), _F(-1, 5), "zero", None, _F(1), "zeta",
     "54/284375 alpha^4 (t3)^(13/3) - 3/125 alpha^2 (t2)^2 (t3)^(5/3) + i/15 alpha (t2)^3 (t3)^(1/3)"
     " + 1/72 (t2)^4/t3 + i/(108 alpha) (t2)^5/(t3)^(7/3) + ...", _great_icosahedron)
_add("greatIcosahedron", "ii", (-1, (1 - SQ5) / 2, 0), _F(-1, 5), "infinity", None, _F(0), "zeta",
     "as variant i", _great_icosahedron)

CASES = ("A3", "B3", "H3", "greatDodecahedron", "greatIcosahedron")


def catalog_entry(case: str, variant: str = "i") -> CatalogEntry:
    try:
        return CATALOG[(case, variant)]
    except KeyError:
        known = sorted(v for c, v in CATALOG if c == case)
        raise CatalogError(f"unknown catalog entry {case}/{variant}; variants: {known}") from None


def algebraic_catalog(case: str, variant: str = "i", order: int = 16, k0=1.0):
    """(triple, critical data, closed form) for a catalog entry, via the generic pipeline."""
    rep = run_catalog_entry(case, variant, order, k0)
    e = rep.entry
    return MonodromyTriple.make(*e.triple, e.mu), rep.critical, rep.closed_form


def run_catalog_entry(case: str, variant: str = "i", order: int = 16, k0=1.0) -> CatalogReport:
    e = catalog_entry(case, variant)
    k0 = complex(k0)
    t = MonodromyTriple.make(*e.triple, float(e.mu))
    c = triple_to_critical(t, e.point)
    sol = local_solution_for(c, order)
    cf = closed_form_invert(parametric_generic(sol, k0), case=f"{case}/{variant}")
    checks = []
    if e.leading_a is not None:
        n = e.leading_power
        name = "leading coefficient a" if n == 1 else f"leading coefficient a^{n}"
        checks.append(_check(name, c.a ** n, e.leading_a ** n))
    if cf.xtype != e.xtype:
        checks.append(("small variable", 0j, 0j, False))
    checks += e.checks(cf, k0)
    return CatalogReport(e, c, cf, checks)


def polynomial_solution(kind: str):
    """The polynomial WDVV solutions F - F_0 in (t2, t3) with constant a (sympy)."""
    a, t2, t3 = sp.symbols("a t2 t3")
    table = {
        "A3": a * t2 ** 2 * t3 ** 2 + sp.Rational(4, 15) * a ** 2 * t3 ** 5,
        "B3": a * t2 ** 3 * t3 + 6 * a ** 2 * t2 ** 2 * t3 ** 3 + sp.Rational(216, 35) * a ** 4 * t3 ** 7,
        "H3": a * t2 ** 3 * t3 ** 2 + sp.Rational(9, 5) * a ** 2 * t2 ** 2 * t3 ** 5
        + sp.Rational(18, 55) * a ** 4 * t3 ** 11,
    }
    return table[kind]
