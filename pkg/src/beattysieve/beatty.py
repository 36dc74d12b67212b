"""Beatty sequences as circle rotations.

The sequence B(alpha, beta) = { floor(alpha*m + beta) : m = 1, 2, ... } with
alpha > 1 hits an integer n exactly when, writing gamma = 1/alpha,

    gamma*n  mod 1  in  (gamma*beta - gamma, gamma*beta]      (half open arc)

and the recovered index m = ceil(gamma*(n - beta)) is at least 1.  All
membership arithmetic here is exact: alpha and beta are stored as high
precision Fractions (quadratic surds are converted with ~40 correct decimal
digits), so enumeration by m and the torus criterion agree on every integer
up to ~1e9.  For a quadratic irrational alpha the distance from alpha*m to
the nearest integer is >> 1/m, far above the 1e-40 representation error.

Arcs on R/Z are half open (left, left + length]; this makes the criterion
exact on the right endpoint, where floor(alpha*m + beta) lands when
gamma*(n - beta) is an integer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import PreconditionError

SURD_DIGITS = 40


def sqrt_fraction(d: int, digits: int = SURD_DIGITS) -> Fraction:
    """Rational approximation of sqrt(d) good to `digits` decimal digits."""
    if d < 0:
        raise ValueError("d must be >= 0")
    scale = 10**digits
    return Fraction(math.isqrt(d * scale * scale), scale)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(float(x))  # exact binary value of the float


@dataclass(frozen=True)
class BeattyParams:
    """Slope/intercept pair; alpha_exact drives all membership decisions."""

    alpha_exact: Fraction
    beta_exact: Fraction = Fraction(0)

    def __post_init__(self):
        if self.alpha_exact <= 1:
            raise PreconditionError("alpha must be > 1", alpha=float(self.alpha_exact))
        if not 0 <= self.beta_exact < self.alpha_exact:
            raise PreconditionError("beta must lie in [0, alpha)", beta=float(self.beta_exact))

    @classmethod
    def make(cls, alpha, beta=0) -> "BeattyParams":
        return cls(_to_fraction(alpha), _to_fraction(beta))

    @classmethod
    def quadratic(cls, a: int, b: int, d: int, c: int = 1, beta=0) -> "BeattyParams":
        """alpha = (a + b*sqrt(d)) / c."""
        alpha = (Fraction(a) + b * sqrt_fraction(d)) / c
        return cls(alpha, _to_fraction(beta))

    @property
    def alpha(self) -> float:
        return float(self.alpha_exact)

    @property
    def beta(self) -> float:
        return float(self.beta_exact)

    @property
    def gamma_exact(self) -> Fraction:
        return 1 / self.alpha_exact

    @property
    def gamma(self) -> float:
        return float(self.gamma_exact)


@dataclass(frozen=True)
class TorusInterval:
    """Half open arc (left, left + length] on R/Z; endpoints may be Fraction or float."""

    left: object
    length: object

    def __post_init__(self):
        if not 0 < self.length < 1:
            raise PreconditionError("arc length must lie in (0, 1)", length=float(self.length))

    def contains(self, x) -> bool:
        d = (x - self.left) % 1
        return 0 < d <= self.length

    def contains_open(self, x) -> bool:
        d = (x - self.left) % 1
        return 0 < d < self.length

    @property
    def right(self):
        return (self.left + self.length) % 1


def membership_interval(params: BeattyParams) -> TorusInterval:
    """Arc I with: n in B(alpha, beta) iff gamma*n mod 1 in I (index check aside)."""
    g = params.gamma_exact
    left = (g * params.beta_exact - g) % 1
    return TorusInterval(left, g)


def recovered_index(params: BeattyParams, n: int) -> int:
    """The unique m with floor(alpha*m + beta) = n, if n is a member."""
    x = params.gamma_exact * (n - params.beta_exact)
    return int(math.ceil(x))


def torus_member(params: BeattyParams, n: int) -> bool:
    """Exact membership test for n >= 1 via the rotation criterion."""
    if n < 1:
        raise PreconditionError("n must be >= 1", n=n)
    if not membership_interval(params).contains(params.gamma_exact * n):
        return False
    return recovered_index(params, n) >= 1


def beatty_enumerate(params: BeattyParams, lo: int, hi: int) -> list[int]:
    """All members of B(alpha, beta) in [lo, hi), ascending, by stepping the index m."""
    if hi <= lo:
        return []
    a, b = params.alpha_exact, params.beta_exact
    m = max(1, int(math.floor((lo - b) / a)))
    out = []
    while True:
        val = int(math.floor(a * m + b))
        if val >= hi:
            break
        if val >= lo:
            out.append(val)
        m += 1
    return out


def shift_intersection(interval: TorusInterval, params: BeattyParams, h: int,
                       eps) -> TorusInterval:
    """Arc J with {n in B : n - h in B} = {n >= N + h : gamma*n mod 1 in J}.

    Shifting the membership arc I = (a, a + l] by -h*gamma and intersecting
    with I gives exactly (a, a + l - t] where t = -h*gamma mod 1, provided
    0 < t < 2*eps and 2*eps < l.
    """
    eps = _to_fraction(eps)
    t = (-h * params.gamma_exact) % 1
    if not 0 < t < 2 * eps:
        raise PreconditionError(
            f"shift offset t = -h*gamma mod 1 = {float(t):.6g} outside (0, {float(2 * eps):.6g})",
            t=t, h=h)
    if not 2 * eps < interval.length:
        raise PreconditionError(
            f"arc too short: 2*eps = {float(2 * eps):.6g} >= length = {float(interval.length):.6g}",
            t=t)
    return TorusInterval(interval.left, interval.length - t)


def pigeonhole_shift(points, length):
    """Left endpoint z maximizing |{j : x_j in (z, z + length] mod 1}|.

    Candidates z = x_j - length suffice: the hit count, as a function of z,
    only steps up at those values.  Ties go to the smallest z in [0, 1).
    For M points the best count is >= ceil(M * length) (area argument; exact
    when the inputs are Fractions).  Returns (z, hit_indices).
    """
    if not 0 < length < 1:
        raise PreconditionError("length must lie in (0, 1)", length=float(length))
    pts = list(points)
    if not pts:
        return 0, []
    best = None
    for x in pts:
        z = (x - length) % 1
        hits = [j for j, y in enumerate(pts) if 0 < (y - z) % 1 <= length]
        key = (-len(hits), z)
        if best is None or key < best[0]:
            best = (key, z, hits)
    return best[1], best[2]
