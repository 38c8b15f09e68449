"""Truncated Puiseux series on the exponent lattice.

A term is stored under an integer key ``(m, n)`` and stands for the monomial
``c * x**e`` with realized exponent ``e = (m + n*sigma) / (2*ram)``.  The
ramification ``ram`` is 1 for series produced by the formal solver; it grows
only after :meth:`PuiseuxSeries.specialize` folds a rational sigma into ``m``
or after an explicit :meth:`PuiseuxSeries.ramify`.

Truncation is by grade: a series with grade bound ``G`` is known exactly for
every key with ``m <= G`` and says nothing about larger ``m``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import mpmath

BigRational = Fraction

Key = tuple[int, int]

NO_BOUND = 10**9


class SeriesError(ValueError):
    """Raised when an operation is not defined for the given series."""

    tag = "series"


class LogarithmError(SeriesError):
    """Raised when integration would produce a logarithm."""

    tag = "logarithm"


def is_mp(c) -> bool:
    return isinstance(c, (mpmath.mpc, mpmath.mpf))


def cpow(c, p):
    """Principal power of a scalar coefficient."""
    if is_mp(c) or is_mp(p):
        return mpmath.power(c, p)
    if isinstance(p, Fraction):
        if p.denominator == 1:
            return complex(c) ** p.numerator if p >= 0 else 1 / complex(c) ** (-p.numerator)
        p = float(p)
    if isinstance(p, int):
        return complex(c) ** p
    c = complex(c)
    if c == 0:
        return 0j
    return cmath.exp(complex(p) * cmath.log(c))


def cexp(c):
    return mpmath.exp(c) if is_mp(c) else cmath.exp(c)


def clog(c):
    return mpmath.log(c) if is_mp(c) else cmath.log(c)


def _cap(g: int) -> int:
    return min(g, NO_BOUND)


class PuiseuxSeries:
    """Immutable truncated series ``sum c_{m,n} x^{(m + n sigma)/(2 ram)}``."""

    __slots__ = ("sigma", "terms", "grade", "band", "var", "ram")

    def __init__(
        self,
        terms: Mapping[Key, object] | None = None,
        sigma=0,
        grade: int = NO_BOUND,
        band: int = NO_BOUND,
        var: str = "x",
        ram: int = 1,
    ):
        self.sigma = sigma
        self.grade = _cap(int(grade))
        self.band = _cap(int(band))
        self.var = var
        self.ram = int(ram)
        clean: dict[Key, object] = {}
        for (m, n), c in (terms or {}).items():
            if m > self.grade or abs(n) > self.band or c == 0:
                continue
            clean[(int(m), int(n))] = c
        self.terms = clean

    # construction helpers

    def _like(self, terms, grade=None, band=None, sigma=None, var=None, ram=None) -> "PuiseuxSeries":
        return PuiseuxSeries(
            terms,
            self.sigma if sigma is None else sigma,
            self.grade if grade is None else grade,
            self.band if band is None else band,
            self.var if var is None else var,
            self.ram if ram is None else ram,
        )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Key, object]], **kw) -> "PuiseuxSeries":
        acc: dict[Key, object] = {}
        for k, c in pairs:
            acc[k] = acc.get(k, 0) + c
        return cls(acc, **kw)

    @classmethod
    def monomial(cls, c, m: int, n: int = 0, **kw) -> "PuiseuxSeries":
        return cls({(m, n): c}, **kw)

    @classmethod
    def constant(cls, c, **kw) -> "PuiseuxSeries":
        return cls({(0, 0): c}, **kw)

    def const_like(self, c) -> "PuiseuxSeries":
        return self._like({(0, 0): c}, grade=NO_BOUND, band=NO_BOUND)

    def variable(self) -> "PuiseuxSeries":
        """The local variable itself, on this series' lattice."""
        return self._like({(2 * self.ram, 0): 1}, grade=NO_BOUND, band=NO_BOUND)

    # inspection

    def exponent(self, key: Key) -> complex:
        m, n = key
        return (m + n * self.sigma) / (2 * self.ram)

    def coeff(self, m: int, n: int = 0):
        return self.terms.get((m, n), 0)

    def valuation(self) -> int:
        """Smallest grade present; ``grade + 1`` for the zero series."""
        if not self.terms:
            return self.grade + 1
        return min(m for m, _ in self.terms)

    def leading_terms(self) -> dict[Key, object]:
        v = self.valuation()
        return {k: c for k, c in self.terms.items() if k[0] == v}

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_items(self) -> list[tuple[Key, object]]:
        return sorted(self.terms.items())

    def truncate(self, grade: int) -> "PuiseuxSeries":
        return self._like(self.terms, grade=min(grade, self.grade))

    def grade_part(self, m: int) -> dict[Key, object]:
        return {k: c for k, c in self.terms.items() if k[0] == m}

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{self.var}^[{m},{n}]" for (m, n), c in self.sorted_items()[:8])
        more = " + ..." if len(self.terms) > 8 else ""
        return f"PuiseuxSeries({body or '0'}{more}; G={self.grade})"

    # arithmetic

    def _check(self, other: "PuiseuxSeries") -> None:
        if other.var != self.var:
            raise SeriesError(f"variable mismatch: {self.var} vs {other.var}")
        if other.ram != self.ram:
            raise SeriesError(f"ramification mismatch: {self.ram} vs {other.ram}")
        if other.sigma != self.sigma:
            if self._uses_sigma() or other._uses_sigma():
                raise SeriesError("sigma mismatch")

    def _uses_sigma(self) -> bool:
        return any(n for _, n in self.terms)

    def _coerce(self, other) -> "PuiseuxSeries":
        if isinstance(other, PuiseuxSeries):
            self._check(other)
            return other
        return self.const_like(other)

    def __add__(self, other) -> "PuiseuxSeries":
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return self._like(out, grade=min(self.grade, other.grade), band=min(self.band, other.band))

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "PuiseuxSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PuiseuxSeries":
        return (-self) + other

    def scale(self, c) -> "PuiseuxSeries":
        return self._like({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        self._check(other)
        grade = _cap(min(self.grade + other.valuation(), other.grade + self.valuation()))
        band = min(self.band, other.band)
        out: dict[Key, object] = {}
        b_items = sorted(other.terms.items())
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in b_items:
                m = m1 + m2
                if m > grade:
                    break
                k = (m, n1 + n2)
                out[k] = out.get(k, 0) + c1 * c2
        return self._like(out, grade=grade, band=band)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PuiseuxSeries":
        if isinstance(other, PuiseuxSeries):
            return self * other.reciprocal()
        return self.scale(1 / other)

    def __rtruediv__(self, other) -> "PuiseuxSeries":
        return self.reciprocal() * other

    def __pow__(self, p) -> "PuiseuxSeries":
        if isinstance(p, int) and p >= 0:
            out = self.const_like(1)
            base = self
            while p:
                if p & 1:
                    out = out * base
                base = base * base
                p >>= 1
            return out
        return self.power(p)

    def shift(self, m: int, n: int = 0) -> "PuiseuxSeries":
        """Multiply by the monomial with key ``(m, n)``."""
        return self._like({(a + m, b + n): c for (a, b), c in self.terms.items()}, grade=self.grade + m)

    # one-leading-monomial operations

    def _split_leading(self) -> tuple[Key, object, "PuiseuxSeries"]:
        """Write self = c * x^key * (1 + T) with T of strictly positive grade."""
        if not self.terms:
            raise SeriesError("zero leading term")
        lead = self.leading_terms()
        if len(lead) != 1:
            raise SeriesError(f"leading grade is not a single monomial: {sorted(lead)}")
        (key, c), = lead.items()
        m0, n0 = key
        rel = {(m - m0, n - n0): v / c for (m, n), v in self.terms.items() if (m, n) != key}
        T = self._like(rel, grade=self.grade - m0)
        return key, c, T

    def _one_plus_series(self, T: "PuiseuxSeries", coeffs: Callable[[int], object]) -> "PuiseuxSeries":
        """sum_j coeffs(j) T^j truncated at T's grade; T must have positive valuation."""
        out = T.const_like(coeffs(0))
        if T.is_zero():
            return out._like(out.terms, grade=T.grade)
        step = T.valuation()
        if step <= 0:
            raise SeriesError("series part does not have positive grade")
        if T.grade >= NO_BOUND:
            raise SeriesError("infinite expansion of an exact series; set a grade bound first")
        power = T.const_like(1)
        j = 0
        while True:
            j += 1
            if j * step > T.grade:
                break
            power = power * T
            cj = coeffs(j)
            if cj != 0:
                out = out + power.scale(cj)
        return out._like(out.terms, grade=T.grade)

    def reciprocal(self) -> "PuiseuxSeries":
        (m0, n0), c, T = self._split_leading()
        inv = self._one_plus_series(T, lambda j: (-1) ** j)
        return inv.scale(1 / c).shift(-m0, -n0)._like_grade(T.grade - m0)

    def _like_grade(self, grade: int) -> "PuiseuxSeries":
        return self._like(self.terms, grade=grade)

    def power(self, p, lead=None) -> "PuiseuxSeries":
        """``self**p`` for rational or complex p.

        The leading key times p must be an integer key.  ``lead`` overrides the
        principal value of the leading coefficient's power.
        """
        (m0, n0), c, T = self._split_leading()
        if isinstance(p, Fraction) or isinstance(p, int):
            fp = Fraction(p)
            mm, nn = fp * m0, fp * n0
            if mm.denominator != 1 or nn.denominator != 1:
                raise SeriesError(f"power {p} of leading key {(m0, n0)} leaves the lattice")
            mm, nn = int(mm), int(nn)
            pnum = fp
        else:
            if m0 or n0:
                raise SeriesError("non-rational power needs a constant leading term")
            mm = nn = 0
            pnum = p
        lc = cpow(c, pnum) if lead is None else lead
        binom = _binomials(pnum)
        body = self._one_plus_series(T, binom)
        return body.scale(lc).shift(mm, nn)._like_grade(T.grade + mm)

    def sqrt(self, lead=None) -> "PuiseuxSeries":
        return self.power(Fraction(1, 2), lead)

    def exp(self) -> "PuiseuxSeries":
        c0 = self.terms.get((0, 0), 0)
        rest = self - self.const_like(c0) if c0 else self
        if any(m <= 0 for m, _ in rest.terms):
            raise SeriesError("exp needs a series whose non-constant part has positive grade")
        body = self._one_plus_series(rest, lambda j: 1 / _factorial(j))
        return body.scale(cexp(c0) if c0 else 1)

    def log(self) -> "PuiseuxSeries":
        (m0, n0), c, T = self._split_leading()
        if m0 or n0:
            raise SeriesError("log needs a constant leading term")
        body = self._one_plus_series(T, lambda j: 0 if j == 0 else (-1) ** (j + 1) / j)
        return body + clog(c)

    # calculus

    def differentiate(self) -> "PuiseuxSeries":
        d = 2 * self.ram
        out = {(m - d, n): c * self.exponent((m, n)) for (m, n), c in self.terms.items()}
        return self._like(out, grade=self.grade - d)

    def euler(self) -> "PuiseuxSeries":
        """x d/dx: multiplies each term by its exponent."""
        return self._like({k: c * self.exponent(k) for k, c in self.terms.items()})

    def antiderivative(self) -> "PuiseuxSeries":
        d = 2 * self.ram
        out = {}
        for (m, n), c in self.terms.items():
            if m + d == 0 and (n == 0 or self.sigma == 0):
                raise LogarithmError(f"term with exponent -1 at key {(m, n)}")
            out[(m + d, n)] = c / (self.exponent((m, n)) + 1)
        return self._like(out, grade=self.grade + d)

    # evaluation

    def evaluate(self, x, branch=None):
        """Sum the monomials at x with arg(x) fixed by ``branch``."""
        if x == 0:
            if any(complex(self.exponent(k)).real < 0 for k in self.terms):
                raise SeriesError("negative exponent evaluated at x = 0")
            return self.terms.get((0, 0), 0)
        if is_mp(x):
            lnx = mpmath.log(abs(x)) + 1j * (mpmath.arg(x) if branch is None else branch)
            return mpmath.fsum(c * mpmath.exp(self.exponent(k) * lnx) for k, c in self.terms.items())
        lnx = complex(math.log(abs(x)), cmath.phase(x) if branch is None else branch)
        total = 0j
        for k, c in self.terms.items():
            e = self.exponent(k)
            total += c * (cmath.exp(e * lnx) if e != 0 else 1)
        return total

    # lattice changes

    def specialize(self, p: int, q: int, n_slack: int = 2) -> "PuiseuxSeries":
        """Fold sigma = p/q into the integer key, merging colliding exponents.

        The result has n = 0 everywhere, sigma = 0 and ramification ram*q.
        Terms of grade above G with |n| <= m + n_slack are assumed absent, which
        fixes the new grade bound.
        """
        if q <= 0:
            raise SeriesError("denominator must be positive")
        if abs(complex(self.sigma) - p / q) > 1e-12:
            raise SeriesError(f"sigma {self.sigma} is not {p}/{q}")
        out: dict[Key, object] = {}
        for (m, n), c in self.terms.items():
            k = (m * q + n * p, 0)
            out[k] = out.get(k, 0) + c
        if self.grade >= NO_BOUND:
            grade = NO_BOUND
        else:
            grade = (self.grade + 1) * (q - abs(p)) - n_slack * abs(p) - 1
        return PuiseuxSeries(out, 0, grade, NO_BOUND, self.var, self.ram * q)

    def ramify(self, k: int) -> "PuiseuxSeries":
        """Same series written with ramification ram*k."""
        if k == 1:
            return self
        out = {(m * k, n * k): c for (m, n), c in self.terms.items()}
        grade = NO_BOUND if self.grade >= NO_BOUND else (self.grade + 1) * k - 1
        return PuiseuxSeries(out, self.sigma, grade, self.band if self.band >= NO_BOUND else self.band * k,
                             self.var, self.ram * k)

    def uniformize(self, var: str | None = None) -> "PuiseuxSeries":
        """Rewrite an n = 0 series in w = x^(1/(2 ram)) with integer exponents."""
        if self._uses_sigma():
            raise SeriesError("uniformize needs a specialized (n = 0) series")
        out = {(2 * m, 0): c for (m, n), c in self.terms.items()}
        grade = NO_BOUND if self.grade >= NO_BOUND else 2 * self.grade + 1
        return PuiseuxSeries(out, 0, grade, NO_BOUND, var or f"{self.var}^(1/{2 * self.ram})", 1)

    def retag(self, var: str) -> "PuiseuxSeries":
        return self._like(self.terms, var=var)

    # composition and reversion (integer exponents only)

    def _require_integer(self, what: str) -> None:
        if self.ram != 1 or self._uses_sigma() or any(m % 2 for m, _ in self.terms):
            raise SeriesError(f"{what} needs integer exponents")

    def compose(self, g: "PuiseuxSeries") -> "PuiseuxSeries":
        """self(g) where g = g1*Z + ... has integer exponents."""
        self._require_integer("compose")
        g._require_integer("compose")
        if g.valuation() != 2:
            raise SeriesError("inner series must start at the first power")
        ginv = None
        out = g._like({}, grade=NO_BOUND)
        grade = NO_BOUND
        for (m, _), c in sorted(self.terms.items()):
            k = m // 2
            if k >= 0:
                term = g ** k
            else:
                ginv = ginv or g.reciprocal()
                term = ginv ** (-k)
            out = out + term.scale(c)
        # terms of self beyond its grade would enter at that same grade
        return out._like(out.terms, grade=min(out.grade, self.grade))

    def revert(self, var: str = "X") -> "PuiseuxSeries":
        """Compositional inverse t(X) with self(t(X)) = X to the grade bound."""
        self._require_integer("revert")
        if (0, 0) in self.terms or self.valuation() < 2:
            raise SeriesError("series must have zero constant term")
        c1 = self.terms.get((2, 0), 0)
        if c1 == 0:
            raise SeriesError("vanishing linear coefficient")
        G = self.grade
        X = PuiseuxSeries({(2, 0): 1}, 0, G, NO_BOUND, var, 1)
        nonlin = self._like({k: c for k, c in self.terms.items() if k != (2, 0)})
        t = X.scale(1 / c1)
        iters = (G // 2 if G < NO_BOUND else len(self.terms) + 2) + 1
        for _ in range(iters):
            t_new = (X - nonlin.retag(var).compose(t)).scale(1 / c1)
            t_new = t_new.truncate(G)
            if t_new.terms == t.terms:
                break
            t = t_new
        return t.truncate(G)

    # serialization

    def to_json(self) -> dict:
        sig = complex(self.sigma)
        out = {"sigma": [sig.real, sig.imag], "terms": []}
        if self.ram != 1:
            out["ram"] = self.ram
        for (m, n), c in self.sorted_items():
            c = complex(c)
            out["terms"].append({"m": m, "n": n, "re": c.real, "im": c.imag})
        return out

    @classmethod
    def from_json(cls, data: Mapping, **kw) -> "PuiseuxSeries":
        s = data.get("sigma", [0, 0])
        sigma = complex(s[0], s[1])
        if sigma.imag == 0:
            sigma = sigma.real
        terms = {(t["m"], t["n"]): complex(t["re"], t["im"]) for t in data["terms"]}
        return cls(terms, sigma, ram=data.get("ram", 1), **kw)


_FACT = [1]


def _factorial(j: int) -> int:
    while len(_FACT) <= j:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[j]


def _binomials(p):
    cache = [1]

    def coeff(j: int):
        while len(cache) <= j:
            i = len(cache)
            prev = cache[-1]
            cache.append(prev * (p - i + 1) / i)
        v = cache[j]
        return float(v) if isinstance(v, Fraction) else v

    return coeff


def series_arith(op: str, lhs: PuiseuxSeries, rhs=None) -> PuiseuxSeries:
    """Dispatch form of the arithmetic operations."""
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    if op == "scale":
        return lhs.scale(rhs)
    if op == "reciprocal":
        return lhs.reciprocal()
    if op == "sqrt":
        return lhs.sqrt(rhs)
    raise SeriesError(f"unknown op {op!r}")


def series_calculus(op: str, s: PuiseuxSeries) -> PuiseuxSeries:
    if op == "differentiate":
        return s.differentiate()
    if op == "antiderivative":
        return s.antiderivative()
    raise SeriesError(f"unknown op {op!r}")


def series_revert(s: PuiseuxSeries, var: str = "X") -> PuiseuxSeries:
    return s.revert(var)


def series_eval(s: PuiseuxSeries, x, branch=None):
    return s.evaluate(x, branch)


def log_abs_rational(q: Fraction, dps: int = 50):
    """ln|q| for huge or tiny rationals via bit-length exponent extraction."""
    if q == 0:
        raise ValueError("log of zero")

    def lg(n: int):
        n = abs(n)
        e = max(n.bit_length() - 2 * dps * 4, 0)
        mant = n >> e
        with mpmath.workdps(dps):
            return mpmath.log(mant) + e * mpmath.log(2)

    with mpmath.workdps(dps):
        return lg(q.numerator) - lg(q.denominator)
