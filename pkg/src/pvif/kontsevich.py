"""Rational plane curve counts for CP^2 and the singularity of their generating series.

The genus-zero potential of CP^2 is f = phi(tau)/t3 with phi = sum A_k tau^k,
tau = t3^3 e^{t2} and A_k = N_k/(3k-1)!.  Here we compute N_k exactly, fit the
growth A_k ~ b a^k k^{-7/2} and look at the canonical coordinates at the
boundary point X0 = ln(1/a) of the disc of convergence.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

try:  # GMP integers make the K = 1000 recurrence about ten times faster
    from gmpy2 import comb as _comb, mpz as _mpz
except ImportError:  # pragma: no cover
    _comb, _mpz = math.comb, int

FIT_DIGITS = 50


class KontsevichError(ValueError):
    tag = "kontsevich"


class NonIntegralError(KontsevichError):
    tag = "non_integral"


class DegenerateWindowError(KontsevichError):
    tag = "degenerate_window"


class FitBracketError(KontsevichError):
    tag = "fit_out_of_bracket"


class CubicSolveError(KontsevichError):
    tag = "cubic_solver"


class DecayWindowError(KontsevichError):
    tag = "insufficient_decay"


def recurrence_weight(i: int, k: int) -> int:
    """i(k-i)[(3i-2)(3k-3i-2)(k+2) + 8k - 8], the convolution weight of the recurrence."""
    return i * (k - i) * ((3 * i - 2) * (3 * k - 3 * i - 2) * (k + 2) + 8 * k - 8)


@dataclass
class NkTable:
    K: int
    N: list[int]  # N[0] is N_1
    _A: list[Fraction] | None = field(default=None, repr=False)

    @property
    def A(self) -> list[Fraction]:
        if self._A is None:
            self._A = [Fraction(n, math.factorial(3 * k - 1)) for k, n in enumerate(self.N, 1)]
        return self._A

    def n(self, k: int) -> int:
        return self.N[k - 1]

    def log_a(self, k: int, dps: int = FIT_DIGITS):
        """ln A_k = ln N_k - ln (3k-1)! at ``dps`` digits without forming A_k as a float."""
        with mpmath.workdps(dps):
            return _log_int(self.N[k - 1]) - mpmath.loggamma(3 * k)

    def to_csv(self, log_column: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if log_column:
            w.writerow(["k", "lnA_k+3.5lnk"])
            for k in range(1, self.K + 1):
                w.writerow([k, mpmath.nstr(self.log_a(k) + 3.5 * mpmath.log(k), 20)])
        else:
            w.writerow(["k", "N_k"])
            for k, n in enumerate(self.N, 1):
                w.writerow([k, n])
        return buf.getvalue()


def _log_int(n: int):
    """Natural log of a huge positive integer: keep the top bits, add the binary exponent."""
    if n <= 0:
        raise KontsevichError("log of a non-positive count")
    prec = mpmath.mp.prec + 16
    shift = max(0, n.bit_length() - prec)
    return mpmath.log(mpmath.mpf(n >> shift)) + shift * mpmath.log(2)


def compute_nk(K: int, weight: Callable[[int, int], int] = recurrence_weight,
               denominator: int = 6) -> NkTable:
    """N_1..N_K from the WDVV recurrence, in integers.

    With A_k = N_k/(3k-1)! the recurrence becomes
    N_k = sum_i N_i N_{k-i} C(3k-2, 3i-1) w(i, k) / (denominator (3k-2)(3k-3)),
    and the division is exact.  ``weight`` and ``denominator`` exist so a
    corrupted recurrence can be fed in as a negative control.
    """
    if K < 1:
        raise KontsevichError("K must be at least 1")
    N = [_mpz(1)]
    for k in range(2, K + 1):
        # the summand is symmetric under i -> k - i, so add each pair once
        num = _mpz(0)
        for i in range(1, k // 2 + 1):
            term = N[i - 1] * N[k - i - 1] * _comb(3 * k - 2, 3 * i - 1)
            w = weight(i, k)
            if 2 * i != k:
                w += weight(k - i, k)
            num += term * w
        den = denominator * (3 * k - 2) * (3 * k - 3)
        q, r = divmod(num, den)
        if r or q <= 0:
            raise NonIntegralError(f"N_{k} = {Fraction(int(num), den)} is not a positive integer")
        N.append(q)
    return NkTable(K, [int(n) for n in N])


def compute_ak_rational(K: int) -> list[Fraction]:
    """A_1..A_K straight from the rational recurrence (slow; a cross-check for small K)."""
    A = [Fraction(1, 2)]
    for k in range(2, K + 1):
        s = sum(A[i - 1] * A[k - i - 1] * recurrence_weight(i, k) for i in range(1, k))
        A.append(s / (6 * (3 * k - 1) * (3 * k - 2) * (3 * k - 3)))
    return A


@dataclass(frozen=True)
class FitResult:
    a: mpmath.mpf
    b: mpmath.mpf
    N0: int
    N: int
    rms: float
    max_abs: float

    @property
    def X0(self):
        return -mpmath.log(self.a)

    def to_json(self) -> dict:
        return {"a": mpmath.nstr(self.a, 15), "b": mpmath.nstr(self.b, 15), "N0": self.N0, "N": self.N,
                "rms": self.rms, "max_abs": self.max_abs}


def fit_asymptotics(t: NkTable, N0: int, N: int | None = None, dps: int = FIT_DIGITS) -> FitResult:
    """Least-squares line through ln(A_k k^{7/2}) = (ln a) k + ln b for N0 <= k <= N."""
    N = t.K if N is None else N
    if not 1 <= N0 < N <= t.K:
        raise DegenerateWindowError(f"need 1 <= N0 < N <= {t.K}, got N0={N0}, N={N}")
    with mpmath.workdps(dps):
        ks = list(range(N0, N + 1))
        ys = [t.log_a(k, dps) + mpmath.mpf(7) / 2 * mpmath.log(k) for k in ks]
        m = len(ks)
        kbar = mpmath.mpf(sum(ks)) / m
        ybar = mpmath.fsum(ys) / m
        sxx = mpmath.fsum((k - kbar) ** 2 for k in ks)
        sxy = mpmath.fsum((k - kbar) * (y - ybar) for k, y in zip(ks, ys))
        ln_a = sxy / sxx
        ln_b = ybar - ln_a * kbar
        res = [float(y - ln_a * k - ln_b) for k, y in zip(ks, ys)]
        a, b = mpmath.exp(ln_a), mpmath.exp(ln_b)
    return FitResult(a, b, N0, N, float(np.sqrt(np.mean(np.square(res)))), float(np.max(np.abs(res))))


def phi_derivatives(t: NkTable, X, orders: Sequence[int] = (0, 1, 2, 3), K: int | None = None) -> list[float]:
    """Truncated sums Phi^{(n)}(X) = sum_{k<=K} k^n A_k e^{kX} for real X."""
    K = t.K if K is None else K
    X = mpmath.mpf(X)
    out = [mpmath.mpf(0)] * len(orders)
    with mpmath.workdps(30):
        for k in range(1, K + 1):
            term = mpmath.exp(t.log_a(k, 30) + k * X)
            for j, n in enumerate(orders):
                out[j] += term * k ** n
    return [float(v) for v in out]


def cubic_coefficients(t1, t3, Phi, dPhi, ddPhi) -> list[complex]:
    """Monic coefficients of -det(g - u eta) in u, highest power first."""
    c2 = -(3 * t1 + ddPhi / t3)
    c1 = -(-3 * t1 ** 2 - 2 * t1 / t3 * ddPhi + (9 * ddPhi + 15 * dPhi - 6 * Phi) / t3 ** 2)
    s = t1 * t3
    c0 = -(-9 * s * ddPhi + 243 * ddPhi - 243 * dPhi + 6 * Phi * ddPhi - 9 * ddPhi ** 2 + 6 * s * Phi
           + s ** 2 * ddPhi - 3 * dPhi * ddPhi + s ** 3 - 4 * dPhi ** 2 + 54 * Phi - 15 * s * dPhi) / t3 ** 3
    return [1, c2, c1, c0]


def intersection_form(t1, t3, Phi, dPhi, ddPhi) -> np.ndarray:
    """g^{ab} of the CP^2 potential in terms of Phi and its X-derivatives."""
    g12 = 2 / t3 ** 2 * (3 * ddPhi - dPhi)
    return np.array([
        [3 / t3 ** 3 * (2 * Phi - 9 * dPhi + 9 * ddPhi), g12, t1],
        [g12, t1 + ddPhi / t3, 3],
        [t1, 3, -t3],
    ], dtype=complex)


ETA = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)


def solve_cubic(coeffs: Sequence[complex]) -> np.ndarray:
    """Companion-matrix roots with one Newton step each."""
    roots = np.roots(np.asarray(coeffs, dtype=complex))
    if len(roots) != 3 or not np.all(np.isfinite(roots)):
        raise CubicSolveError(f"cubic with coefficients {coeffs} has no three finite roots")
    p = np.poly1d(coeffs)
    dp = p.deriv()
    polished = []
    for r in roots:
        d = dp(r)
        polished.append(r - p(r) / d if d != 0 else r)
    return np.array(sorted(polished, key=lambda z: (-round(z.real, 9), z.imag)))


def canonical_coordinates(t1, t3, Phi, dPhi, ddPhi, check_pairing: bool = True):
    """Roots of det(g - u eta) = 0 two ways: the expanded cubic, and eigenvalues of eta g.

    Both lists are sorted by decreasing real part, so a conjugate pair may
    appear in either order.
    """
    t1, t3 = complex(t1), complex(t3)
    u = solve_cubic(cubic_coefficients(t1, t3, Phi, dPhi, ddPhi))
    # eta is its own inverse, so det(g - u eta) = 0 iff u is an eigenvalue of eta g
    ue = np.array(sorted(np.linalg.eigvals(ETA @ intersection_form(t1, t3, Phi, dPhi, ddPhi)),
                         key=lambda z: (-round(z.real, 9), z.imag)))
    mismatch = max(float(np.min(np.abs(ue - z))) for z in u)
    if mismatch > 1e-8 * max(1.0, float(np.max(np.abs(ue)))):
        raise CubicSolveError(f"cubic roots {u} disagree with eigenvalues {ue}")
    if check_pairing and t1.imag == 0 and t3.imag == 0 and abs(u[1].imag) > 1e-12:
        # real data: the non-real roots come as a conjugate pair
        if abs(u[1] - np.conj(u[2])) > 1e-6 * max(1.0, abs(u[1])):
            raise CubicSolveError(f"roots {u} are not a conjugate pair")
    return tuple(complex(z) for z in u), tuple(complex(z) for z in ue)


def _min_gap(u) -> float:
    return float(min(abs(u[i] - u[j]) for i in range(3) for j in range(i + 1, 3)))


@dataclass(frozen=True)
class SingularPointData:
    X0: float
    Phi: float
    dPhi: float
    ddPhi_raw: float
    ddPhi: float  # corrected through 27 + 2 Phi' - 3 Phi'' = 0
    raw_defect: float
    t1: complex
    t3: complex
    u: tuple[complex, complex, complex]  # with the summed Phi''
    u_corrected: tuple[complex, complex, complex]  # with the corrected Phi''
    u_eigen: tuple[complex, complex, complex]

    @property
    def min_gap(self) -> float:
        return _min_gap(self.u)

    @property
    def distinct(self) -> bool:
        return self.min_gap > 1e-6 and _min_gap(self.u_corrected) > 1e-6

    def trace_defect(self, corrected: bool = False) -> complex:
        u, dd = (self.u_corrected, self.ddPhi) if corrected else (self.u, self.ddPhi_raw)
        return sum(u) - (3 * self.t1 + dd / self.t3)

    def to_json(self) -> dict:
        c = lambda z: [complex(z).real, complex(z).imag]  # noqa: E731
        return {"X0": self.X0, "Phi": self.Phi, "dPhi": self.dPhi, "ddPhi_raw": self.ddPhi_raw,
                "ddPhi": self.ddPhi, "defect": self.raw_defect, "u": [c(z) for z in self.u],
                "u_corrected": [c(z) for z in self.u_corrected], "min_gap": self.min_gap}


def singular_point_analysis(t: NkTable, fit: FitResult, t1=1.0, t3=1.0, a_eval=None) -> SingularPointData:
    """Phi, Phi', Phi'' at X0 by summation, then the canonical coordinates there.

    ``u`` uses the summed Phi'' and ``u_corrected`` the value forced by the
    vanishing of 27 + 2 Phi' - 3 Phi'' at X0.  ``a_eval`` replaces the fitted a
    in X0 = ln(1/a); the sums move at the 1e-4 level between a = 0.138 and the
    fitted value.
    """
    a = float(fit.a) if a_eval is None else float(a_eval)
    if not 1 / 108 < a < 2 / 3:
        raise FitBracketError(f"a = {a} is outside (1/108, 2/3)")
    t1, t3 = complex(t1), complex(t3)
    if t3 == 0:
        raise KontsevichError("t3 must be nonzero")
    X0 = fit.X0 if a_eval is None else -math.log(a)
    Phi, dPhi, ddPhi_raw = phi_derivatives(t, X0, (0, 1, 2), min(fit.N, t.K))
    defect = 27 + 2 * dPhi - 3 * ddPhi_raw
    ddPhi = (27 + 2 * dPhi) / 3
    u, ue = canonical_coordinates(t1, t3, Phi, dPhi, ddPhi_raw)
    uc, _ = canonical_coordinates(t1, t3, Phi, dPhi, ddPhi)
    return SingularPointData(float(X0), Phi, dPhi, ddPhi_raw, ddPhi, defect, t1, t3, u, uc, ue)


def tail_defect_estimate(fit: FitResult, K: int) -> float:
    """Raw defect left by truncating Phi'' at K: 3 sum_{k>K} b k^{-3/2} ~ 6 b / sqrt(K)."""
    return 6 * float(fit.b) / math.sqrt(K + 0.5)


@dataclass(frozen=True)
class ExponentProbe:
    slope: float  # from successive differences, free of the regular part
    raw_slope: float  # straight fit of log Phi''' against log|D|
    offsets: tuple[float, ...]
    values: tuple[float, ...]
    note: str = "fit window chosen by the implementation"

    def to_json(self) -> dict:
        return {"slope": self.slope, "raw_slope": self.raw_slope, "offsets": list(self.offsets),
                "values": list(self.values), "note": self.note}


def singular_exponent_probe(t: NkTable, fit: FitResult, offsets: Sequence[float] | None = None,
                            min_decay: float = 10.0) -> ExponentProbe:
    """Exponent p in Phi'''(X0 + D) ~ c |D|^p + const, expected p = -1/2.

    The offsets must form a geometric sequence; differences of neighbouring
    values cancel the constant regular part before the log-log fit.
    """
    if offsets is None:
        offsets = [-0.1 * 2.0 ** -j for j in range(4)]
    offsets = [float(d) for d in offsets]
    if len(offsets) < 3 or any(d >= 0 for d in offsets):
        raise DecayWindowError("need at least three negative offsets")
    ratios = [offsets[j + 1] / offsets[j] for j in range(len(offsets) - 1)]
    if max(ratios) - min(ratios) > 1e-9 or not 0 < ratios[0] < 1:
        raise DecayWindowError("offsets must shrink geometrically towards 0")
    # the truncated sum is only faithful while the last term is negligible
    for d in offsets:
        if t.K * abs(d) < min_decay:
            raise DecayWindowError(f"K = {t.K} is too small for offset {d}: K|D| = {t.K * abs(d):.2f}")
    X0 = fit.X0
    vals = [phi_derivatives(t, X0 + d, (3,))[0] for d in offsets]
    logd = np.log(np.abs(offsets))
    raw = np.polyfit(logd, np.log(vals), 1)[0]
    diffs = np.diff(vals)
    if np.any(diffs <= 0):
        raise DecayWindowError("Phi''' does not grow towards X0 on this window")
    slope = np.polyfit(logd[:-1], np.log(diffs), 1)[0]
    return ExponentProbe(float(slope), float(raw), tuple(offsets), tuple(vals))
