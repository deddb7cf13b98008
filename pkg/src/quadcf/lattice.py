"""Gaussian and Eisenstein integer lattices.

Coordinates are always taken over the kind's fixed basis: ``{1, i}`` for the
Gaussian integers and ``{b, conj(b)}`` with ``b = (1 + sqrt(-3))/2`` for the
Eisenstein integers, so ``(x, y)`` embeds as ``x*b + y*conj(b)``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import CertificationFailure

SQRT3_HALF = math.sqrt(3.0) / 2.0


class LatticeKind(enum.Enum):
    GAUSSIAN = "G"
    EISENSTEIN = "E"

    @classmethod
    def parse(cls, text: str) -> "LatticeKind":
        key = text.strip().upper()
        for kind in cls:
            if key in (kind.value, kind.name):
                return kind
        raise ValueError(f"unknown lattice kind {text!r}")


GAUSSIAN = LatticeKind.GAUSSIAN
EISENSTEIN = LatticeKind.EISENSTEIN


# -- coordinate arithmetic shared by LatticePoint and FieldElement ----------

def mul_coords(kind: LatticeKind, x1, y1, x2, y2):
    if kind is GAUSSIAN:
        return x1 * x2 - y1 * y2, x1 * y2 + y1 * x2
    # b^2 = -conj(b), conj(b)^2 = -b, b*conj(b) = 1 = b + conj(b)
    cross = x1 * y2 + y1 * x2
    return cross - y1 * y2, cross - x1 * x2


def norm_coords(kind: LatticeKind, x, y):
    if kind is GAUSSIAN:
        return x * x + y * y
    return x * x - x * y + y * y


def conj_coords(kind: LatticeKind, x, y):
    if kind is GAUSSIAN:
        return x, -y
    return y, x


def one_coords(kind: LatticeKind):
    return (1, 0) if kind is GAUSSIAN else (1, 1)


def real_imag_coords(kind: LatticeKind, x, y):
    """Return ``(re, k)`` with the embedded value ``re + i*k`` (Gaussian) or
    ``re + i*k*sqrt(3)`` (Eisenstein); both parts exact in the coordinates' ring."""
    if kind is GAUSSIAN:
        return x, y
    return Fraction(x + y, 2), Fraction(x - y, 2)


def to_complex(kind: LatticeKind, x, y) -> complex:
    if kind is GAUSSIAN:
        return complex(float(x), float(y))
    return complex(float(x + y) / 2.0, float(x - y) * SQRT3_HALF)


@dataclass(frozen=True)
class LatticePoint:
    kind: LatticeKind
    x: int
    y: int

    @classmethod
    def from_int(cls, kind: LatticeKind, n: int) -> "LatticePoint":
        ox, oy = one_coords(kind)
        return cls(kind, ox * n, oy * n)

    @classmethod
    def zero(cls, kind: LatticeKind) -> "LatticePoint":
        return cls(kind, 0, 0)

    def _coerce(self, other):
        if isinstance(other, LatticePoint):
            if other.kind is not self.kind:
                raise TypeError("mixed lattice kinds")
            return other
        if isinstance(other, int):
            return LatticePoint.from_int(self.kind, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LatticePoint(self.kind, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return LatticePoint(self.kind, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LatticePoint(self.kind, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LatticePoint(self.kind, *mul_coords(self.kind, self.x, self.y, o.x, o.y))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not lattice points in general")
        result = LatticePoint.from_int(self.kind, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self) -> int:
        return norm_coords(self.kind, self.x, self.y)

    def conj(self) -> "LatticePoint":
        return LatticePoint(self.kind, *conj_coords(self.kind, self.x, self.y))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def to_complex(self) -> complex:
        return to_complex(self.kind, self.x, self.y)

    def __str__(self) -> str:
        return format_point(self)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "x": str(self.x), "y": str(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "LatticePoint":
        return cls(LatticeKind.parse(data["kind"]), int(data["x"]), int(data["y"]))


def units(kind: LatticeKind) -> list[LatticePoint]:
    """Units ordered by exponent: ``i**j`` (Gaussian) or ``b**j`` (Eisenstein)."""
    gen = LatticePoint(kind, 0, 1) if kind is GAUSSIAN else LatticePoint(kind, 1, 0)
    order = 4 if kind is GAUSSIAN else 6
    return [gen ** j for j in range(order)]


def unit_exponent(u: LatticePoint) -> int:
    try:
        return units(u.kind).index(u)
    except ValueError:
        raise ValueError(f"{u} is not a unit") from None


# -- literals -----------------------------------------------------------------

_TERM = re.compile(r"[+-]?[^+-]+")


def parse_point(text: str, kind: LatticeKind) -> LatticePoint:
    """Parse ``a+bi`` (Gaussian), or ``x,y`` / ``a+cw`` with ``w = b`` (Eisenstein)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty lattice literal")
    if "," in s:
        if kind is not EISENSTEIN:
            raise ValueError("coordinate pairs are only accepted for Eisenstein literals")
        xs, ys = s.split(",", 1)
        return LatticePoint(kind, int(xs), int(ys))
    letter = "i" if kind is GAUSSIAN else "w"
    real = 0
    other = 0
    if _TERM.sub("", s):
        raise ValueError(f"bad lattice literal {text!r}")
    for tok in _TERM.findall(s):
        sign = -1 if tok[0] == "-" else 1
        body = tok.lstrip("+-")
        if body.endswith(letter) or body.endswith("*" + letter):
            coef = body[:-1].rstrip("*")
            other += sign * (int(coef) if coef else 1)
        elif body.isdigit():
            real += sign * int(body)
        else:
            raise ValueError(f"bad lattice literal {text!r}")
    if kind is GAUSSIAN:
        return LatticePoint(kind, real, other)
    return LatticePoint(kind, real + other, real)


def format_point(p: LatticePoint) -> str:
    if p.kind is GAUSSIAN:
        a, c, letter = p.x, p.y, "i"
    else:
        a, c, letter = p.y, p.x - p.y, "w"
    if c == 0:
        return str(a)
    coef = {1: "", -1: "-"}.get(c, str(c))
    if a == 0:
        return f"{coef}{letter}"
    if c > 0:
        return f"{a}+{coef}{letter}"
    return f"{a}{coef}{letter}"


# -- rounding -----------------------------------------------------------------

def _round_exact(kind: LatticeKind, x: Fraction, y: Fraction) -> LatticePoint:
    if kind is GAUSSIAN:
        half = Fraction(1, 2)
        return LatticePoint(kind, math.floor(x + half), math.floor(y + half))
    # any nearest point lies within 2/3 of (x, y) in each coordinate
    fx, fy = math.floor(x), math.floor(y)
    best = None
    for cx in range(fx - 1, fx + 3):
        for cy in range(fy - 1, fy + 3):
            d = norm_coords(kind, x - cx, y - cy)
            key = (d, Fraction(cx + cy, 2), cx - cy)
            if best is None or key < best[0]:
                best = (key, cx, cy)
    return LatticePoint(kind, best[1], best[2])


def round_nearest(z, kind: LatticeKind | None = None) -> LatticePoint:
    """Nearest lattice point.

    Gaussian rounding is ``floor(x + 1/2) + floor(y + 1/2) i``.  Eisenstein
    ties go to the candidate with the lexicographically smallest
    ``(Re, Im)``.  Balls are accepted too; an undecidable ball raises
    :class:`CertificationFailure`.
    """
    from .approx import Ball, round_ball

    if isinstance(z, LatticePoint):
        return z
    if isinstance(z, Ball):
        if kind is None:
            raise TypeError("a lattice kind is required to round a ball")
        p = round_ball(z, kind)
        if p is None:
            raise CertificationFailure("ball straddles a rounding boundary")
        return p
    if kind is not None and z.kind is not kind:
        raise TypeError("lattice kind mismatch")
    return _round_exact(z.kind, Fraction(z.x), Fraction(z.y))


def fractional_part(z, kind: LatticeKind | None = None):
    from .approx import Ball
    from .exactfield import FieldElement

    p = round_nearest(z, kind)
    if isinstance(z, Ball):
        return z - FieldElement.from_lattice(p).embed_numeric(z.prec)
    return z - p


# -- exclusion sets -----------------------------------------------------------

class Level(enum.Enum):
    L1 = 1
    L2 = 2
    L3 = 3

    @classmethod
    def parse(cls, text: str) -> "Level":
        return cls[text.strip().upper()]


def _pm(kind, pairs: Iterable[tuple[int, int]]) -> set[LatticePoint]:
    out = set()
    for x, y in pairs:
        out.add(LatticePoint(kind, x, y))
        out.add(LatticePoint(kind, -x, -y))
    return out


def _gaussian_set(level: Level, j: int) -> set[LatticePoint]:
    G = GAUSSIAN
    zero = {LatticePoint(G, 0, 0)}
    if level is Level.L1:
        pairs = {0: [(1, 0), (2, 0)], 1: [(1, 1)], 2: [(0, 1), (0, 2)], 3: [(1, -1)]}[j]
        return zero | _pm(G, pairs)
    box = {LatticePoint(G, x, y) for x in (-1, 0, 1) for y in (-1, 0, 1)}
    extra = {
        0: [(2, 0)],
        1: [(1, 2), (2, 1)],
        2: [(0, 2)],
        3: [(1, -2), (2, -1)],
    }[j]
    members = box | _pm(G, extra)
    if level is Level.L3:
        members |= _pm(G, [(2, 0), (0, 2)])
    return members


_E1 = {
    0: [(1, 1), (2, 2)],
    1: [(2, 1)],
    2: [(1, 0), (2, 0)],
    3: [(1, -1)],
    4: [(0, 1), (0, 2)],
    5: [(1, 2)],
}

_E2 = {
    0: [(1, 2), (2, 1), (2, 2)],
    1: [(2, 0), (2, 1), (2, 2)],
    2: [(1, -1), (2, 0), (2, 1)],
    3: [(0, 2), (1, -1), (2, 0)],
    4: [(0, 2), (1, -1), (1, 2)],
    5: [(0, 2), (1, 2), (2, 2)],
}


def _eisenstein_set(level: Level, j: int) -> set[LatticePoint]:
    E = EISENSTEIN
    zero = {LatticePoint(E, 0, 0)}
    if level is Level.L1:
        return zero | _pm(E, _E1[j])
    if level is Level.L2:
        return zero | set(units(E)) | _pm(E, _E2[j])
    return {p for p in _disc(E, 4)}


def _disc(kind: LatticeKind, max_norm) -> list[LatticePoint]:
    """Lattice points with ``|z|^2 <= max_norm``."""
    r = math.isqrt(int(4 * max_norm)) + 2
    return [
        LatticePoint(kind, x, y)
        for x in range(-r, r + 1)
        for y in range(-r, r + 1)
        if norm_coords(kind, x, y) <= max_norm
    ]


@dataclass(frozen=True)
class ExclusionSet:
    kind: LatticeKind
    level: Level
    unit: LatticePoint
    members: frozenset

    def __contains__(self, t: LatticePoint) -> bool:
        return t in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[LatticePoint]:
        return sorted(self.members, key=lambda p: (p.x, p.y))

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.sorted_members()]


def builtin_exclusion_set(kind: LatticeKind, level: Level, unit: LatticePoint) -> ExclusionSet:
    if unit.kind is not kind:
        raise TypeError("unit kind mismatch")
    j = unit_exponent(unit)
    members = _gaussian_set(level, j) if kind is GAUSSIAN else _eisenstein_set(level, j)
    return ExclusionSet(kind, level, unit, frozenset(members))


def scan_box(kind: LatticeKind) -> list[LatticePoint]:
    """Candidates tested by :func:`recompute_exclusion_set`."""
    if kind is GAUSSIAN:
        return [LatticePoint(kind, x, y) for x in range(-2, 3) for y in range(-2, 3)]
    # |t| <= 2.5, i.e. norm <= 6 on the integer-valued norm form
    return _disc(kind, 6)


def recompute_exclusion_set(kind: LatticeKind, level: Level, unit: LatticePoint, policy=None) -> ExclusionSet:
    """Rebuild an L1/L2 set by certified root-modulus comparisons over the scan box.

    With ``|alpha| <= |beta|`` and ``|alpha*beta| = 1``, the condition
    ``|alpha| < 1 < |beta|`` is equivalent to ``|alpha| < 1``.
    """
    from .approx import PrecisionPolicy, compare_small_root_modulus
    from .exactfield import QuadParams

    if level is Level.L3:
        raise ValueError("L3 sets are defined, not computed")
    policy = policy or PrecisionPolicy()
    threshold = Fraction(1) if level is Level.L1 else Fraction(1, 2)
    members = set()
    for t in scan_box(kind):
        params = QuadParams.unchecked(t, unit)
        if compare_small_root_modulus(params, threshold, policy) >= 0:
            members.add(t)
    return ExclusionSet(kind, level, unit, frozenset(members))
