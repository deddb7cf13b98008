"""Exact arithmetic in Q(i), Q(sqrt(-3)) and their quadratic extensions K(alpha)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, NotAdmissible
from .lattice import (
    GAUSSIAN,
    LatticeKind,
    LatticePoint,
    Level,
    builtin_exclusion_set,
    conj_coords,
    format_point,
    mul_coords,
    norm_coords,
    one_coords,
    real_imag_coords,
    to_complex,
)


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class FieldElement:
    kind: LatticeKind
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not isinstance(self.x, Fraction):
            object.__setattr__(self, "x", Fraction(self.x))
        if not isinstance(self.y, Fraction):
            object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def from_int(cls, kind: LatticeKind, n) -> "FieldElement":
        ox, oy = one_coords(kind)
        return cls(kind, Fraction(n) * ox, Fraction(n) * oy)

    @classmethod
    def from_lattice(cls, p: LatticePoint) -> "FieldElement":
        return cls(p.kind, Fraction(p.x), Fraction(p.y))

    @classmethod
    def zero(cls, kind: LatticeKind) -> "FieldElement":
        return cls(kind, Fraction(0), Fraction(0))

    @classmethod
    def one(cls, kind: LatticeKind) -> "FieldElement":
        return cls.from_int(kind, 1)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.kind is not self.kind:
                raise TypeError("mixed field kinds")
            return other
        if isinstance(other, LatticePoint):
            if other.kind is not self.kind:
                raise TypeError("mixed field kinds")
            return FieldElement.from_lattice(other)
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_int(self.kind, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.kind, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.kind, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.kind, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.kind, self.x * other, self.y * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.kind, *mul_coords(self.kind, self.x, self.y, o.x, o.y))

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return norm_coords(self.kind, self.x, self.y)

    def conj(self) -> "FieldElement":
        return FieldElement(self.kind, *conj_coords(self.kind, self.x, self.y))

    def inv(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero field element")
        c = self.conj()
        return FieldElement(self.kind, c.x / n, c.y / n)

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

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inv()
        n = abs(n)
        result = FieldElement.one(self.kind)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.kind is other.kind and self.x == other.x and self.y == other.y
        o = self._coerce(other) if isinstance(other, (int, Fraction, LatticePoint)) else None
        if o is None:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.kind, self.x, self.y))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def to_lattice(self) -> LatticePoint:
        if not self.is_integral():
            raise ValueError(f"{self} is not a lattice point")
        return LatticePoint(self.kind, int(self.x), int(self.y))

    def real_imag(self):
        """Exact ``(re, k)``; the imaginary part is ``k`` (Gaussian) or ``k*sqrt(3)``."""
        return real_imag_coords(self.kind, self.x, self.y)

    def is_real(self) -> bool:
        return self.real_imag()[1] == 0

    def to_complex(self) -> complex:
        return to_complex(self.kind, self.x, self.y)

    def embed_numeric(self, prec: int = 64):
        from .approx import Ball

        return Ball.from_field(self, prec)

    def sqrt(self) -> "FieldElement | None":
        """A square root inside the field, or None when the element is not a square."""
        if self.is_zero():
            return self
        if self.kind is GAUSSIAN:
            a, b, m = self.x, self.y, 1
        else:
            a, b = self.real_imag()
            m = 3
        # self = a + b*sqrt(-m); find c + d*sqrt(-m) squaring to it
        r = rational_sqrt(a * a + m * b * b)
        if r is None:
            return None
        c = rational_sqrt((r + a) / 2)
        d = rational_sqrt((r - a) / (2 * m))
        if c is None or d is None:
            return None
        if 2 * c * d != b:
            d = -d
        if self.kind is GAUSSIAN:
            return FieldElement(self.kind, c, d)
        return FieldElement(self.kind, c + d, c - d)

    def __str__(self) -> str:
        if self.is_integral():
            return format_point(self.to_lattice())
        if self.kind is GAUSSIAN:
            return f"({self.x})+({self.y})i"
        return f"({self.x})b+({self.y})b'"

    def __repr__(self) -> str:
        return f"FieldElement({self.kind.value}, {self.x}, {self.y})"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "x": _frac_str(self.x), "y": _frac_str(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldElement":
        return cls(LatticeKind.parse(data["kind"]), _parse_frac(data["x"]), _parse_frac(data["y"]))


@dataclass(frozen=True)
class QuadParams:
    """Coefficients of ``f(X) = X^2 - t X + u`` with ``t`` a lattice point and ``u`` a unit."""

    kind: LatticeKind
    t: LatticePoint
    u: LatticePoint

    @classmethod
    def unchecked(cls, t: LatticePoint, u: LatticePoint) -> "QuadParams":
        if t.kind is not u.kind:
            raise TypeError("t and u must share a lattice kind")
        if not u.is_unit():
            raise ValueError(f"u = {u} is not a unit")
        return cls(t.kind, t, u)

    @classmethod
    def admissible(cls, t: LatticePoint, u: LatticePoint, level: Level) -> "QuadParams":
        params = cls.unchecked(t, u)
        excl = builtin_exclusion_set(t.kind, level, u)
        if t in excl:
            name = ("G" if t.kind is GAUSSIAN else "E") + str(level.value)
            raise NotAdmissible(f"t = {t} lies in {name}({u})")
        return params

    @classmethod
    def admissible_L2(cls, t: LatticePoint, u: LatticePoint) -> "QuadParams":
        return cls.admissible(t, u, Level.L2)

    @classmethod
    def admissible_L3(cls, t: LatticePoint, u: LatticePoint) -> "QuadParams":
        return cls.admissible(t, u, Level.L3)

    @property
    def tf(self) -> FieldElement:
        return FieldElement.from_lattice(self.t)

    @property
    def uf(self) -> FieldElement:
        return FieldElement.from_lattice(self.u)

    def alpha(self) -> "QuadExtElement":
        k = self.kind
        return QuadExtElement(self, FieldElement.zero(k), FieldElement.one(k))

    def beta(self) -> "QuadExtElement":
        k = self.kind
        return QuadExtElement(self, self.tf, -FieldElement.one(k))

    def embed(self, value) -> "QuadExtElement":
        if isinstance(value, QuadExtElement):
            return value
        k = self.kind
        if isinstance(value, LatticePoint):
            value = FieldElement.from_lattice(value)
        elif not isinstance(value, FieldElement):
            value = FieldElement.from_int(k, value)
        return QuadExtElement(self, value, FieldElement.zero(k))

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "t": self.t.to_json(), "u": self.u.to_json()}

    def __str__(self) -> str:
        return f"{self.kind.value}(t={self.t}, u={self.u})"


def minimal_polynomial_check(params: QuadParams) -> bool:
    """True iff ``X^2 - tX + u`` has no root in the base field."""
    disc = params.tf * params.tf - 4 * params.uf
    return disc.sqrt() is None


@dataclass(frozen=True)
class QuadExtElement:
    """``a + b*alpha`` where ``alpha`` is the small root of the params' polynomial."""

    params: QuadParams
    a: FieldElement
    b: FieldElement

    def _coerce(self, other):
        if isinstance(other, QuadExtElement):
            if other.params != self.params:
                raise TypeError("elements of different extensions")
            return other
        if isinstance(other, (FieldElement, LatticePoint, int, Fraction)):
            return self.params.embed(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.params, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElement(self.params, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.params, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t, u = self.params.tf, self.params.uf
        bb = self.b * o.b
        return QuadExtElement(
            self.params,
            self.a * o.a - u * bb,
            self.a * o.b + o.a * self.b + t * bb,
        )

    __rmul__ = __mul__

    def norm(self) -> FieldElement:
        """Product with the conjugate ``a + b*(t - alpha)``: ``a^2 + abt + b^2 u``."""
        t, u = self.params.tf, self.params.uf
        return self.a * self.a + self.a * self.b * t + self.b * self.b * u

    def inv(self) -> "QuadExtElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero extension element")
        n = self.norm()
        if n.is_zero():
            raise DivisionByZero("zero norm: the defining polynomial is reducible")
        ninv = n.inv()
        return QuadExtElement(self.params, (self.a + self.b * self.params.tf) * ninv, -self.b * ninv)

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

    def __eq__(self, other):
        if isinstance(other, QuadExtElement):
            return self.params == other.params and self.a == other.a and self.b == other.b
        o = self._coerce(other) if isinstance(other, (FieldElement, LatticePoint, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.params, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_rational(self) -> bool:
        """True when the element lies in the base field."""
        return self.b.is_zero()

    def __str__(self) -> str:
        return f"({self.a}) + ({self.b})*alpha"

    def to_json(self) -> dict:
        return {
            "t": self.params.t.to_json(),
            "u": self.params.u.to_json(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
        }
