"""Certified complex ball arithmetic over dyadic rationals.

A :class:`Ball` is a complex midpoint with one shared radius.  Midpoints are
rounded to ``prec`` significant bits and every rounding error is folded into
the radius, so the true value always lies inside the closed ball.  Precision
is carried by the values themselves; there is no global context.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from decimal import ROUND_CEILING, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import CertificationFailure
from .exactfield import FieldElement, QuadExtElement, QuadParams
from .lattice import GAUSSIAN, LatticeKind, LatticePoint, round_nearest

ZERO = Fraction(0)
HALF = Fraction(1, 2)
_RAD_BITS = 30


@dataclass(frozen=True)
class PrecisionPolicy:
    initial_bits: int = 64
    max_bits: int = 65536

    def __post_init__(self):
        if self.initial_bits < 32:
            raise ValueError("initial_bits must be at least 32")
        if self.max_bits < self.initial_bits:
            raise ValueError("max_bits must be >= initial_bits")

    def levels(self) -> Iterator[int]:
        p = self.initial_bits
        while p < self.max_bits:
            yield p
            p *= 2
        yield self.max_bits

    @classmethod
    def from_env(cls, initial_bits: int | None = None, max_bits: int | None = None) -> "PrecisionPolicy":
        """Default policy with the ceiling taken from ``QUADCF_PREC_MAX`` when set."""
        if max_bits is None:
            env = os.environ.get("QUADCF_PREC_MAX")
            max_bits = int(env) if env else cls.max_bits
        return cls(initial_bits or cls.initial_bits, max_bits)


def _as_prec(prec) -> int:
    return prec.initial_bits if isinstance(prec, PrecisionPolicy) else int(prec)


# -- dyadic helpers -----------------------------------------------------------

def _dyadic(m: int, e: int) -> Fraction:
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def _round(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Round to ``prec`` significant bits; return ``(value, error bound)``."""
    n, d = q.numerator, q.denominator
    if n == 0 or (d & (d - 1) == 0 and abs(n).bit_length() <= prec):
        return q, ZERO
    e = abs(n).bit_length() - d.bit_length() - prec
    m = round(Fraction(n, d << e)) if e >= 0 else round(Fraction(n << -e, d))
    v = _dyadic(m, e)
    if v == q:
        return v, ZERO
    return v, _dyadic(1, e - 1)


def _up(r: Fraction) -> Fraction:
    """Round a nonnegative radius upward to a short dyadic."""
    n, d = r.numerator, r.denominator
    if n == 0:
        return ZERO
    if d & (d - 1) == 0 and n.bit_length() <= _RAD_BITS:
        return r
    e = n.bit_length() - d.bit_length() - _RAD_BITS
    if e >= 0:
        m = -((-n) // (d << e))
    else:
        m = -((-(n << -e)) // d)
    return _dyadic(m, e)


def sqrt_bounds(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Dyadic ``lo <= sqrt(q) <= hi`` with about ``prec`` bits."""
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return ZERO, ZERO
    n, d = q.numerator, q.denominator
    k = prec - (n.bit_length() - d.bit_length()) // 2
    if k >= 0:
        s = math.isqrt((n << (2 * k)) // d)
    else:
        s = math.isqrt(n // (d << (-2 * k)))
    lo, hi = _dyadic(s, -k), _dyadic(s + 1, -k)
    if lo * lo == q:
        hi = lo
    return lo, hi


def _abs_hi(x: Fraction, y: Fraction, bits: int = 40) -> Fraction:
    return sqrt_bounds(x * x + y * y, bits)[1]


def _abs_lo(x: Fraction, y: Fraction, bits: int = 40) -> Fraction:
    return sqrt_bounds(x * x + y * y, bits)[0]


def _decimal(q: Fraction, digits: int, ceiling: bool = False) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        if ceiling:
            ctx.rounding = ROUND_CEILING
        return str(Decimal(q.numerator) / Decimal(q.denominator))


# -- balls --------------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    re: Fraction
    im: Fraction
    rad: Fraction
    prec: int

    @classmethod
    def exact(cls, re, im=0, prec: int = 64) -> "Ball":
        r, er = _round(Fraction(re), prec)
        i, ei = _round(Fraction(im), prec)
        return cls(r, i, _up(er + ei), prec)

    @classmethod
    def from_field(cls, z, prec: int = 64) -> "Ball":
        if isinstance(z, LatticePoint):
            z = FieldElement.from_lattice(z)
        re, k = z.real_imag()
        if z.kind is GAUSSIAN or k == 0:
            return cls.exact(re, k, prec)
        lo, hi = sqrt_bounds(Fraction(3), prec + 8)
        r, er = _round(re, prec)
        i, ei = _round(k * lo, prec)
        return cls(r, i, _up(er + ei + abs(k) * (hi - lo)), prec)

    def _coerce(self, other) -> "Ball | None":
        if isinstance(other, Ball):
            return other
        if isinstance(other, (FieldElement, LatticePoint)):
            return Ball.from_field(other, self.prec)
        if isinstance(other, (int, Fraction)):
            return Ball.exact(other, 0, self.prec)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = max(self.prec, o.prec)
        r, er = _round(self.re + o.re, p)
        i, ei = _round(self.im + o.im, p)
        return Ball(r, i, _up(self.rad + o.rad + er + ei), p)

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.re, -self.im, self.rad, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = max(self.prec, o.prec)
        x1, y1, x2, y2 = self.re, self.im, o.re, o.im
        r, er = _round(x1 * x2 - y1 * y2, p)
        i, ei = _round(x1 * y2 + y1 * x2, p)
        rad = er + ei
        if self.rad or o.rad:
            rad += _abs_hi(x1, y1) * o.rad + _abs_hi(x2, y2) * self.rad + self.rad * o.rad
        return Ball(r, i, _up(rad), p)

    __rmul__ = __mul__

    def inv(self) -> "Ball":
        n = self.re * self.re + self.im * self.im
        lo = sqrt_bounds(n, 40)[0] if n else ZERO
        if lo <= self.rad:
            raise CertificationFailure("ball contains zero; cannot invert")
        r, er = _round(self.re / n, self.prec)
        i, ei = _round(-self.im / n, self.prec)
        rad = er + ei
        if self.rad:
            rad += self.rad / ((lo - self.rad) * lo)
        return Ball(r, i, _up(rad), self.prec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int) -> "Ball":
        if n < 0:
            return (self ** -n).inv()
        result = Ball(Fraction(1), ZERO, ZERO, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conj(self) -> "Ball":
        return Ball(self.re, -self.im, self.rad, self.prec)

    def abs_bounds(self) -> tuple[Fraction, Fraction]:
        """Rigorous ``(lower, upper)`` bounds on the modulus of every point."""
        lo, hi = sqrt_bounds(self.re * self.re + self.im * self.im, self.prec)
        return max(ZERO, lo - self.rad), hi + self.rad

    def abs(self) -> "Ball":
        lo, hi = sqrt_bounds(self.re * self.re + self.im * self.im, self.prec)
        return Ball(lo, ZERO, _up(hi - lo + self.rad), self.prec)

    def lower(self) -> Fraction:
        """Lower end of a real ball."""
        return self.re - self.rad

    def upper(self) -> Fraction:
        return self.re + self.rad

    def contains(self, re, im=0) -> bool:
        dx = Fraction(re) - self.re
        dy = Fraction(im) - self.im
        return dx * dx + dy * dy <= self.rad * self.rad

    def contains_field(self, z) -> bool:
        """Containment test for an element of Q(i) or Q(sqrt(-3)), decided exactly."""
        if isinstance(z, LatticePoint):
            z = FieldElement.from_lattice(z)
        re, k = z.real_imag()
        dx = re - self.re
        if z.kind is GAUSSIAN:
            dy2 = (k - self.im) ** 2
            return dx * dx + dy2 <= self.rad * self.rad
        # dy^2 = 3k^2 - 2*k*sqrt(3)*im + im^2; compare X >= 2*k*im*sqrt(3)
        x_term = self.rad * self.rad - dx * dx - 3 * k * k - self.im * self.im
        return _ge_sqrt3(x_term, -2 * k * self.im)

    def overlaps(self, other: "Ball") -> bool:
        dx = self.re - other.re
        dy = self.im - other.im
        r = self.rad + other.rad
        return dx * dx + dy * dy <= r * r

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        digits = max(20, int(self.prec * 0.302) + 3)
        return {
            "re": _decimal(self.re, digits),
            "im": _decimal(self.im, digits),
            "radius": _decimal(self.rad, 12, ceiling=True),
            "bits": self.prec,
        }

    def __str__(self) -> str:
        return f"[{float(self.re):.15g}{float(self.im):+.15g}i +/- {float(self.rad):.3g}]"


def _gt_sqrt3(x: Fraction, b: Fraction) -> bool:
    """Exactly decide ``x > b*sqrt(3)``."""
    if b == 0:
        return x > 0
    if b > 0:
        return x > 0 and x * x > 3 * b * b
    return x >= 0 or x * x < 3 * b * b


def _ge_sqrt3(x: Fraction, b: Fraction) -> bool:
    if b == 0:
        return x >= 0
    if b > 0:
        return x >= 0 and x * x >= 3 * b * b
    return x >= 0 or x * x <= 3 * b * b


# -- square roots and roots of X^2 - tX + u -----------------------------------

def principal_sqrt(z: Ball) -> Ball:
    """Square root with argument in ``(-pi/2, pi/2]``.

    A zero-radius ball is an exact input; an exact negative real maps to
    ``i*sqrt(|z|)``.  A ball with positive radius touching the closed
    negative real axis raises :class:`CertificationFailure`.
    """
    x, y, r, p = z.re, z.im, z.rad, z.prec
    if r == 0 and x == 0 and y == 0:
        return z
    dist2 = y * y if x <= 0 else x * x + y * y
    if r and dist2 <= r * r:
        raise CertificationFailure("ball meets the branch cut of the principal square root")
    a_lo, a_hi = sqrt_bounds(x * x + y * y, p + 8)
    re_lo = sqrt_bounds(max(ZERO, (a_lo + x) / 2), p + 4)[0]
    re_hi = sqrt_bounds((a_hi + x) / 2, p + 4)[1]
    im_lo = sqrt_bounds(max(ZERO, (a_lo - x) / 2), p + 4)[0]
    im_hi = sqrt_bounds(max(ZERO, (a_hi - x) / 2), p + 4)[1]
    sign = -1 if y < 0 else 1
    mre, e1 = _round((re_lo + re_hi) / 2, p)
    mim, e2 = _round(sign * (im_lo + im_hi) / 2, p)
    rad = e1 + e2 + (re_hi - re_lo) / 2 + (im_hi - im_lo) / 2
    if r:
        # |sqrt(w) - sqrt(m)| = |w - m| / |sqrt(w) + sqrt(m)| <= r / sqrt|m| off the cut
        rad += r / sqrt_bounds(a_lo, 40)[0]
    return Ball(mre, mim, _up(rad), p)


def _discriminant_sqrt(params: QuadParams, prec: int) -> Ball:
    """Ball for ``sqrt(1 - 4u/t^2)``, resolving exact negative reals in the field."""
    t, u = params.tf, params.uf
    w = 1 - 4 * u / (t * t)
    re, k = w.real_imag()
    if k == 0 and re <= 0:
        lo, hi = sqrt_bounds(-re, prec + 4)
        m, e = _round((lo + hi) / 2, prec)
        return Ball(ZERO, m, _up(e + (hi - lo) / 2), prec)
    return principal_sqrt(Ball.from_field(w, prec))


@lru_cache(maxsize=4096)
def roots_at(params: QuadParams, prec: int) -> tuple[Ball, Ball]:
    """``(alpha, beta)`` at a fixed precision; see :func:`roots_numeric`."""
    if params.t.is_zero():
        s = principal_sqrt(Ball.from_field(-params.uf, prec))
        return -s, s
    s = _discriminant_sqrt(params, prec)
    half_t = Ball.from_field(params.tf, prec) * Fraction(1, 2)
    return half_t * (1 - s), half_t * (1 + s)


def roots_numeric(params: QuadParams, policy: PrecisionPolicy | int | None = None) -> tuple[Ball, Ball]:
    """Balls for ``alpha = (t/2)(1 - sqrt(1 - 4u/t^2))`` and ``beta = (t/2)(1 + ...)``.

    For ``t = 0`` the roots are ``-/+ sqrt(-u)``.
    """
    if isinstance(policy, int):
        return roots_at(params, policy)
    policy = policy or PrecisionPolicy()
    last = None
    for p in policy.levels():
        try:
            return roots_at(params, p)
        except CertificationFailure as exc:
            last = exc
    raise CertificationFailure(f"roots of {params} not certified at {policy.max_bits} bits") from last


def eval_ext(z, prec: PrecisionPolicy | int = 64) -> Ball:
    p = _as_prec(prec)
    if isinstance(z, (FieldElement, LatticePoint)):
        return Ball.from_field(z, p)
    a = Ball.from_field(z.a, p)
    if z.b.is_zero():
        return a
    alpha, _ = roots_at(z.params, p)
    return a + Ball.from_field(z.b, p) * alpha


# -- certified rounding -------------------------------------------------------

_EIS_DIRECTIONS = [
    (Fraction(1), 0),
    (HALF, 1),
    (-HALF, 1),
    (Fraction(-1), 0),
    (-HALF, -1),
    (HALF, -1),
]


def _in_eisenstein_cell(ball: Ball, cx: int, cy: int) -> bool:
    """Ball strictly inside the open Voronoi cell of ``cx*b + cy*conj(b)``."""
    w_re = ball.re - Fraction(cx + cy, 2)
    k = cx - cy
    for dr, ds in _EIS_DIRECTIONS:
        # Re((z - c) * conj(d)) = A + B*sqrt(3) must stay below 1/2 on the ball
        a = w_re * dr - Fraction(3, 4) * k * ds
        b = ball.im * ds / 2
        if not _gt_sqrt3(HALF - ball.rad - a, b):
            return False
    return True


def round_ball(ball: Ball, kind: LatticeKind) -> LatticePoint | None:
    """The unique lattice point consistent with every point of the ball, else None."""
    r = ball.rad
    if kind is GAUSSIAN:
        x0 = math.floor(ball.re - r + HALF)
        y0 = math.floor(ball.im - r + HALF)
        if x0 == math.floor(ball.re + r + HALF) and y0 == math.floor(ball.im + r + HALF):
            return LatticePoint(kind, x0, y0)
        return None
    re, im = float(ball.re), float(ball.im)
    s3 = math.sqrt(3.0)
    xf, yf = re + im / s3, re - im / s3
    cands = [
        (cx, cy)
        for cx in range(math.floor(xf) - 1, math.floor(xf) + 3)
        for cy in range(math.floor(yf) - 1, math.floor(yf) + 3)
    ]
    cands.sort(key=lambda c: abs(complex((c[0] + c[1]) / 2, (c[0] - c[1]) * s3 / 2) - complex(re, im)))
    for cx, cy in cands[:3]:
        if _in_eisenstein_cell(ball, cx, cy):
            return LatticePoint(kind, cx, cy)
    return None


def certified_round(z, kind: LatticeKind | None = None, policy: PrecisionPolicy | None = None) -> LatticePoint:
    """Nearest lattice point of an exact field element or of ``a + b*alpha``.

    Field elements round exactly.  Irrational extension elements are
    evaluated at increasing precision until one lattice point is certified.
    """
    if isinstance(z, QuadExtElement):
        kind = kind or z.params.kind
        if z.is_rational():
            return round_nearest(z.a, kind)
        policy = policy or PrecisionPolicy()
        for p in policy.levels():
            try:
                found = round_ball(eval_ext(z, p), kind)
            except CertificationFailure:
                continue
            if found is not None:
                return found
        raise CertificationFailure(f"cannot certify rounding of {z} at {policy.max_bits} bits")
    return round_nearest(z, kind)


# -- modulus comparisons ------------------------------------------------------

def small_root_modulus_equals(params: QuadParams, c: Fraction) -> bool:
    """Exact test of ``|alpha| == c`` for the smaller-modulus root (``0 < c <= 1``).

    ``|alpha|^2`` and ``|beta|^2`` are the roots of ``Y^2 - sY + 1`` with
    ``2s = |t|^2 + |t^2 - 4u|``, so the tie reduces to a rational square test.
    """
    t, u = params.tf, params.uf
    c2 = c * c
    lhs = 2 * (c2 * c2 + 1) / c2 - t.norm()
    disc_norm = (t * t - 4 * u).norm()
    return lhs >= 0 and lhs * lhs == disc_norm


def compare_small_root_modulus(params: QuadParams, c: Fraction, policy: PrecisionPolicy | None = None) -> int:
    """Sign of ``|alpha| - c`` for the smaller-modulus root ``alpha``."""
    policy = policy or PrecisionPolicy()
    for p in policy.levels():
        try:
            alpha, beta = roots_at(params, p)
        except CertificationFailure:
            continue
        lo_a, hi_a = alpha.abs_bounds()
        lo_b, hi_b = beta.abs_bounds()
        lo, hi = min(lo_a, lo_b), min(hi_a, hi_b)
        if hi < c:
            return -1
        if lo > c:
            return 1
        if small_root_modulus_equals(params, c):
            return 0
    raise CertificationFailure(f"|alpha| vs {c} undecided for {params} at {policy.max_bits} bits")
