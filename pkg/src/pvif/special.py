"""Complex Gamma function by the Lanczos approximation, with pole detection."""

from __future__ import annotations

import cmath
import math

import mpmath

POLE_TOL = 1e-9

# g = 7, n = 9 coefficient set; relative error below 1e-14 on the right half plane.
_G = 7
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class GammaPoleError(ArithmeticError):
    """Argument within POLE_TOL of a non-positive integer."""

    tag = "gamma_pole"

    def __init__(self, z):
        super().__init__(f"Gamma pole at {z}")
        self.z = z


def near_pole(z, tol: float = POLE_TOL) -> bool:
    z = complex(z)
    n = round(z.real)
    return n <= 0 and abs(z - n) < tol


def gamma(z, extended: bool = False):
    """Gamma(z) for complex z; raises GammaPoleError near 0, -1, -2, ..."""
    if near_pole(z):
        raise GammaPoleError(z)
    if extended:
        return complex(mpmath.gamma(mpmath.mpc(z)))
    z = complex(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1 - z))
    z -= 1
    x = _COEF[0]
    for i in range(1, _G + 2):
        x += _COEF[i] / (z + i)
    t = z + _G + 0.5
    return math.sqrt(2 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def rgamma(z, extended: bool = False):
    """1/Gamma(z), exactly zero at the poles of Gamma."""
    if near_pole(z):
        return 0j
    return 1 / gamma(z, extended)
