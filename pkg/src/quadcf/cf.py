"""Finite continued fractions, the Hurwitz expansion, and periodicity detection."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .approx import PrecisionPolicy, certified_round
from .errors import DomainError, ZeroDenominator
from .exactfield import FieldElement, QuadExtElement, QuadParams
from .lattice import GAUSSIAN, LatticePoint


@dataclass(frozen=True)
class CFWord:
    """``[a0; partials...]``.  ``terminated`` is set when an exact zero remainder ended an expansion."""

    a0: object
    partials: tuple = ()
    terminated: bool = False

    @property
    def terms(self) -> tuple:
        return (self.a0, *self.partials)

    def __len__(self) -> int:
        return len(self.partials)

    def __str__(self) -> str:
        return "[" + str(self.a0) + "; " + ", ".join(str(a) for a in self.partials) + "]"

    def to_json(self) -> dict:
        return {
            "a0": _fe_json(self.a0),
            "partials": [_fe_json(a) for a in self.partials],
            "terminated": self.terminated,
        }


def _fe_json(a) -> dict:
    if isinstance(a, LatticePoint):
        a = FieldElement.from_lattice(a)
    elif isinstance(a, (int, Fraction)):
        a = FieldElement.from_int(GAUSSIAN, a)
    return a.to_json()


def _lift(a):
    if isinstance(a, LatticePoint):
        return FieldElement.from_lattice(a)
    if isinstance(a, int):
        return Fraction(a)
    return a


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def eval_cf(word: CFWord):
    """Exact value ``p_N / q_N`` through the two-term convergent recurrence."""
    terms = [_lift(a) for a in word.terms]
    p2, p1 = 0, 1
    q2, q1 = 1, 0
    for n, a in enumerate(terms):
        p2, p1 = p1, a * p1 + p2
        q2, q1 = q1, a * q1 + q2
        if _is_zero(q1):
            raise ZeroDenominator(n)
    return p1 / q1


def hurwitz_expand(z, count: int, policy: PrecisionPolicy | None = None) -> CFWord:
    """First ``count + 1`` partial denominators of the Hurwitz expansion of ``z``.

    ``z`` is a :class:`FieldElement` or a :class:`QuadExtElement`; remainders
    are kept exact and only the rounding step is numerical.
    """
    if isinstance(z, LatticePoint):
        z = FieldElement.from_lattice(z)
    kind = z.params.kind if isinstance(z, QuadExtElement) else z.kind
    digits: list[LatticePoint] = []
    terminated = False
    for _ in range(count + 1):
        a = certified_round(z, kind, policy)
        digits.append(a)
        rem = z - a
        if rem.is_zero():
            terminated = True
            break
        z = 1 / rem
    return CFWord(digits[0], tuple(digits[1:]), terminated)


class Root(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"


def predicted_expansion(params: QuadParams, root: Root, count: int) -> CFWord:
    """Closed-form periodic word: ``[0; t/u, -t, t/u, ...]`` or ``[t; -t/u, t, -t/u, ...]``."""
    t = params.t
    uinv_t = (params.tf / params.uf).to_lattice()
    if root is Root.ALPHA:
        a0, odd, even = LatticePoint.zero(params.kind), uinv_t, -t
    else:
        a0, odd, even = t, -uinv_t, t
    return CFWord(a0, tuple(odd if n % 2 else even for n in range(1, count + 1)))


@dataclass(frozen=True)
class PeriodicityReport:
    preperiod_length: int
    period_length: int
    period: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "preperiod": self.preperiod_length,
            "period_length": self.period_length,
            "period": [_fe_json(a) for a in self.period],
        }


def detect_periodicity(word: CFWord | Sequence) -> PeriodicityReport | None:
    """Smallest preperiod, then smallest period, fitting the window.

    The periodic tail must show at least two full periods and the period may
    not exceed half the window.  Returns None when nothing fits.
    """
    seq = list(word.terms if isinstance(word, CFWord) else word)
    L = len(seq)
    if L < 4:
        raise ValueError("need at least four terms to detect a period")
    for k in range(L):
        for p in range(1, L // 2 + 1):
            if L - k < 2 * p:
                break
            if all(seq[i] == seq[i + p] for i in range(k, L - p)):
                return PeriodicityReport(k, p, tuple(seq[k:k + p]))
    return None


def symmetric_simple_cf(t: int, n: int) -> CFWord:
    """``[0; t-1, (1, t-2) * (2^(n+1) - 3), 1, t-1]``, of length ``2^(n+2) - 3``."""
    if t < 3 or n < 1:
        raise DomainError("requires integer t >= 3 and n >= 1")
    partials = [t - 1] + [1, t - 2] * (2 ** (n + 1) - 3) + [1, t - 1]
    as_fe = tuple(FieldElement.from_int(GAUSSIAN, a) for a in partials)
    return CFWord(FieldElement.zero(GAUSSIAN), as_fe)


def nearest_integer_cf(x: Fraction, limit: int = 10_000) -> list[int]:
    """Nearest-integer continued fraction of a rational (``floor(x + 1/2)`` digits)."""
    out = []
    for _ in range(limit):
        a = math.floor(x + Fraction(1, 2))
        out.append(a)
        rem = x - a
        if rem == 0:
            break
        x = 1 / rem
    return out


def illegal_partials(word: CFWord) -> list[int]:
    """Indices >= 1 whose partial denominator is zero or a unit of the lattice."""
    bad = []
    for i, a in enumerate(word.partials, start=1):
        p = a if isinstance(a, LatticePoint) else _lift(a).to_lattice()
        if p.norm() <= 1:
            bad.append(i)
    return bad

