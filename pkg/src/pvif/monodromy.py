"""Monodromy triples, Stokes matrices and the braid-group actions on them."""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

QF_TOL = 1e-10

_NON_ADMISSIBLE = ((2, 2, 2), (-2, -2, 2), (2, -2, -2), (-2, 2, -2))


class MonodromyError(ValueError):
    """Invalid monodromy data."""

    tag = "invalid_monodromy"


def _c(z) -> complex:
    return complex(z)


@dataclass(frozen=True)
class MonodromyTriple:
    """Isomonodromy data (x0, x1, xinf) of PVI_mu."""

    x0: complex
    x1: complex
    xinf: complex
    mu: complex

    @classmethod
    def make(cls, x0, x1, xinf, mu, trusted: bool = False, tol: float = QF_TOL) -> "MonodromyTriple":
        t = cls(_c(x0), _c(x1), _c(xinf), _c(mu))
        if t.mu == 0:
            raise MonodromyError("mu must be nonzero")
        if not trusted:
            target = 4 * cmath.sin(cmath.pi * t.mu) ** 2
            if abs(quadratic_form(t) - target) > tol * max(1.0, abs(target)):
                raise MonodromyError(
                    f"quadratic form {quadratic_form(t)} differs from 4 sin^2(pi mu) = {target}"
                )
        return t

    @property
    def entries(self) -> tuple[complex, complex, complex]:
        return (self.x0, self.x1, self.xinf)

    def admissible(self, tol: float = 1e-12) -> bool:
        zeros = sum(abs(v) < tol for v in self.entries)
        if zeros > 1:
            return False
        for bad in _NON_ADMISSIBLE:
            if max(abs(a - b) for a, b in zip(self.entries, bad)) < tol:
                return False
        return True

    def to_json(self) -> dict:
        return {k: [v.real, v.imag] for k, v in
                (("x0", self.x0), ("x1", self.x1), ("xinf", self.xinf), ("mu", self.mu))}

    @classmethod
    def from_json(cls, data: dict, trusted: bool = False) -> "MonodromyTriple":
        vals = [complex(*data[k]) if isinstance(data[k], list) else complex(data[k])
                for k in ("x0", "x1", "xinf", "mu")]
        return cls.make(*vals, trusted=trusted)


def quadratic_form(t: MonodromyTriple):
    x0, x1, xi = t.entries
    return x0 * x0 + x1 * x1 + xi * xi - x0 * x1 * xi


def _beta1(e):
    x0, x1, xi = e
    return (-x0, xi - x0 * x1, x1)


def _beta1_inv(e):
    x0, x1, xi = e
    return (-x0, xi, x1 - x0 * xi)


def _beta2(e):
    x0, x1, xi = e
    return (xi, -x1, x0 - x1 * xi)


def _beta2_inv(e):
    x0, x1, xi = e
    return (xi - x0 * x1, -x1, x0)


_GENERATORS = {"b1": _beta1, "B1": _beta1_inv, "b2": _beta2, "B2": _beta2_inv}


def parse_braid(word: str | Sequence[str]) -> list[str]:
    tokens = word.split() if isinstance(word, str) else list(word)
    for tok in tokens:
        if tok not in _GENERATORS:
            raise MonodromyError(f"unknown braid generator {tok!r}; use b1, b2, B1, B2")
    return tokens


def apply_braid(t: MonodromyTriple, word: str | Sequence[str]) -> MonodromyTriple:
    """Apply generators left to right; capitals are inverses."""
    e = t.entries
    for tok in parse_braid(word):
        e = _GENERATORS[tok](e)
    return MonodromyTriple(e[0], e[1], e[2], t.mu)


def sign_equivalent(a: MonodromyTriple, b: MonodromyTriple, tol: float = 0.0) -> bool:
    """True when b is a with zero or two entries negated."""
    return sign_distance(a, b) <= tol


def sign_distance(a: MonodromyTriple, b: MonodromyTriple) -> float:
    """Smallest max-entry distance from b to a sign-equivalent copy of a."""
    best = float("inf")
    for signs in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
        d = max(abs(s * u - v) for s, u, v in zip(signs, a.entries, b.entries))
        best = min(best, d)
    return best


# Stokes matrices


@dataclass(frozen=True)
class StokesMatrix:
    """Upper triangular matrix with unit diagonal."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = m.shape[0]
        if m.shape != (n, n):
            raise MonodromyError("Stokes matrix must be square")
        if np.any(np.abs(np.diag(m) - 1) > 1e-12) or np.any(np.abs(np.tril(m, -1)) > 1e-12):
            raise MonodromyError("Stokes matrix must be upper triangular with unit diagonal")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def upper(self) -> list[complex]:
        """Entries above the diagonal, row by row."""
        return [self.matrix[i, j] for i in range(self.n) for j in range(i + 1, self.n)]

    @classmethod
    def from_upper(cls, n: int, entries: Iterable) -> "StokesMatrix":
        m = np.eye(n, dtype=complex)
        it = iter(entries)
        for i in range(n):
            for j in range(i + 1, n):
                m[i, j] = next(it)
        return cls(m)

    @classmethod
    def from_triple(cls, t: MonodromyTriple) -> "StokesMatrix":
        """S = [[1, xinf, x0], [0, 1, x1], [0, 0, 1]]."""
        return cls.from_upper(3, (t.xinf, t.x0, t.x1))

    def to_triple(self, mu) -> MonodromyTriple:
        if self.n != 3:
            raise MonodromyError("only 3x3 Stokes matrices carry a triple")
        s12, s13, s23 = self.upper()
        return MonodromyTriple(s13, s23, s12, complex(mu))

    # In the display form above, beta_{12} on S is not one of the triple braids.
    # Reading (s12, s13, s23) as (x0, xinf, x1) instead makes beta_{i,i+1} on S
    # coincide exactly with beta_i on the triple.

    @classmethod
    def from_triple_braid_frame(cls, t: MonodromyTriple) -> "StokesMatrix":
        """S = [[1, x0, xinf], [0, 1, x1], [0, 0, 1]]."""
        return cls.from_upper(3, (t.x0, t.xinf, t.x1))

    def to_triple_braid_frame(self, mu) -> MonodromyTriple:
        if self.n != 3:
            raise MonodromyError("only 3x3 Stokes matrices carry a triple")
        s12, s13, s23 = self.upper()
        return MonodromyTriple(s12, s23, s13, complex(mu))


def cp_d_stokes(d: int) -> StokesMatrix:
    """Canonical Stokes matrix of the quantum cohomology of CP^d."""
    if d < 1:
        raise MonodromyError("d must be positive")
    n = d + 1
    m = np.eye(n, dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = (-1) ** (j - i) * comb(d + 1, j - i)
    return StokesMatrix(m)


def braid_on_stokes(S: StokesMatrix, i: int, inverse: bool = False) -> StokesMatrix:
    """Elementary braid beta_{i,i+1} (1-based i) acting as S -> A S A."""
    n = S.n
    if not 1 <= i <= n - 1:
        raise MonodromyError(f"generator index {i} out of range")
    k = i - 1
    s = S.matrix[k, k + 1]
    A = np.eye(n, dtype=complex)
    A[k, k] = 0
    A[k + 1, k + 1] = 0
    A[k, k + 1] = A[k + 1, k] = 1
    if inverse:
        A[k, k] = -s
    else:
        A[k + 1, k + 1] = -s
    out = A @ S.matrix @ A
    # the product is exactly triangular; clear rounding noise below the diagonal
    out = np.triu(out)
    np.fill_diagonal(out, 1)
    return StokesMatrix(out)


def sign_conjugate(S: StokesMatrix, signs: Sequence[int]) -> StokesMatrix:
    """J S J with J = diag(signs), signs in {+1, -1}."""
    J = np.diag(np.array(signs, dtype=complex))
    return StokesMatrix(J @ S.matrix @ J)


def stokes_orbit_contains(S: StokesMatrix, target: Sequence, depth: int = 4, tol: float = 1e-9) -> list[str] | None:
    """Bounded search of the braid/sign orbit of S for the target upper entries.

    Returns the braid word (generators 'b<i>' and inverses 'B<i>') found, or None.
    """
    target = np.array(target, dtype=complex)
    n = S.n
    signs_list = list(itertools.product((1, -1), repeat=n))
    gens = [(f"b{i}", i, False) for i in range(1, n)] + [(f"B{i}", i, True) for i in range(1, n)]
    frontier = [([], S)]
    seen = set()
    for _ in range(depth + 1):
        nxt = []
        for word, M in frontier:
            for signs in signs_list:
                up = np.array(sign_conjugate(M, signs).upper())
                if np.max(np.abs(up - target)) < tol:
                    return word + [f"J{''.join('+' if s > 0 else '-' for s in signs)}"]
            key = tuple(np.round(np.abs(np.array(M.upper())), 9))
            if key in seen:
                continue
            seen.add(key)
            for name, i, inv in gens:
                nxt.append((word + [name], braid_on_stokes(M, i, inv)))
        frontier = nxt
    return None
