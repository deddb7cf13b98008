"""Bivariate polynomials and unreduced rational functions in T, U over the integers.

Rational functions are never gcd-reduced.  Two fractions are equal when their
cross products agree, which is exact because Z[T, U] is an integral domain.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded, ZeroDenominator

DEFAULT_CAP = 6


class BivarPoly:
    """Sparse polynomial ``{(deg_T, deg_U): coefficient}`` with no zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: int) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, dT: int, dU: int, c: int = 1) -> "BivarPoly":
        return cls({(dT, dU): c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        if isinstance(other, int):
            other = BivarPoly.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        if isinstance(other, int):
            other = BivarPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "BivarPoly":
        return (-self) + other

    def __mul__(self, other) -> "BivarPoly":
        if isinstance(other, int):
            return BivarPoly({k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivarPoly":
        result = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = BivarPoly.const(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree_T(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def degree_U(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def evaluate(self, T, U):
        """Evaluate at ring elements supporting ``+``, ``*`` and integer scaling."""
        tpow: dict = {}
        upow: dict = {}
        total = None
        for (a, b), c in self.terms.items():
            if a not in tpow:
                tpow[a] = T ** a
            if b not in upow:
                upow[b] = U ** b
            term = tpow[a] * upow[b] * c
            total = term if total is None else total + term
        return total if total is not None else T * 0

    def divide_monomial(self, other: "BivarPoly") -> "BivarPoly":
        """Exact quotient by a monomial known to divide every term."""
        ((a, b), c), = other.terms.items()
        out = {}
        for (x, y), d in self.terms.items():
            q, r = divmod(d, c)
            if r or x < a or y < b:
                raise ValueError("monomial does not divide polynomial")
            out[(x - a, y - b)] = q
        return BivarPoly(out)

    def to_json(self) -> list[dict]:
        return [{"dT": a, "dU": b, "c": str(c)} for (a, b), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data: list[dict]) -> "BivarPoly":
        return cls({(int(d["dT"]), int(d["dU"])): int(d["c"]) for d in data})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(s for s in (
                "T" if a == 1 else f"T^{a}" if a else "",
                "U" if b == 1 else f"U^{b}" if b else "",
            ) if s)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


T = BivarPoly.monomial(1, 0)
U = BivarPoly.monomial(0, 1)
ONE = BivarPoly.const(1)
ZERO = BivarPoly()


def _monomial_lcm(d1: BivarPoly, d2: BivarPoly) -> BivarPoly:
    from math import gcd

    ((a1, b1), c1), = d1.terms.items()
    ((a2, b2), c2), = d2.terms.items()
    return BivarPoly.monomial(max(a1, a2), max(b1, b2), c1 * c2 // gcd(c1, c2))


class BivarRatFunc:
    """``num / den`` in Q(T, U), kept unreduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: BivarPoly, den: BivarPoly = ONE):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, x) -> "BivarRatFunc":
        if isinstance(x, BivarRatFunc):
            return x
        if isinstance(x, BivarPoly):
            return cls(x)
        if isinstance(x, int):
            return cls(BivarPoly.const(x))
        raise TypeError(f"cannot lift {type(x).__name__}")

    def __add__(self, other) -> "BivarRatFunc":
        o = BivarRatFunc.lift(other)
        if self.den == o.den:
            return BivarRatFunc(self.num + o.num, self.den)
        if self.den.is_monomial() and o.den.is_monomial():
            # common monomial denominator keeps U^k denominators from multiplying out
            L = _monomial_lcm(self.den, o.den)
            return BivarRatFunc(
                self.num * L.divide_monomial(self.den) + o.num * L.divide_monomial(o.den), L
            )
        return BivarRatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "BivarRatFunc":
        return BivarRatFunc(-self.num, self.den)

    def __sub__(self, other) -> "BivarRatFunc":
        return self + (-BivarRatFunc.lift(other))

    def __rsub__(self, other) -> "BivarRatFunc":
        return BivarRatFunc.lift(other) + (-self)

    def __mul__(self, other) -> "BivarRatFunc":
        o = BivarRatFunc.lift(other)
        return BivarRatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BivarRatFunc":
        o = BivarRatFunc.lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return BivarRatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "BivarRatFunc":
        return BivarRatFunc.lift(other) / self

    def __pow__(self, n: int) -> "BivarRatFunc":
        if n < 0:
            return BivarRatFunc(self.den, self.num) ** -n
        return BivarRatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        try:
            o = BivarRatFunc.lift(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, t, u):
        den = self.den.evaluate(t, u)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(t, u) / den

    def degrees(self) -> dict:
        return {
            "num_deg_T": self.num.degree_T(),
            "num_deg_U": self.num.degree_U(),
            "den_deg_T": self.den.degree_T(),
            "den_deg_U": self.den.degree_U(),
        }

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self) -> str:
        return f"({self.num!r}) / ({self.den!r})"


RT = BivarRatFunc(T)
RU = BivarRatFunc(U)


class SymbolicCFTerm(enum.Enum):
    ZERO = "0"
    PLUS_T = "T"
    MINUS_T = "-T"
    UINV_T = "T/U"
    MINUS_UINV_T = "-T/U"

    def render(self) -> BivarRatFunc:
        return {
            SymbolicCFTerm.ZERO: BivarRatFunc(ZERO),
            SymbolicCFTerm.PLUS_T: BivarRatFunc(T),
            SymbolicCFTerm.MINUS_T: BivarRatFunc(-T),
            SymbolicCFTerm.UINV_T: BivarRatFunc(T, U),
            SymbolicCFTerm.MINUS_UINV_T: BivarRatFunc(-T, U),
        }[self]


def a_term(n: int) -> SymbolicCFTerm:
    """Partial denominators of the small root: ``0; T/U, -T, T/U, -T, ...``."""
    if n == 0:
        return SymbolicCFTerm.ZERO
    return SymbolicCFTerm.UINV_T if n % 2 else SymbolicCFTerm.MINUS_T


def b_term(n: int) -> SymbolicCFTerm:
    """Partial denominators of the large root: ``T; -T/U, T, -T/U, ...``."""
    return SymbolicCFTerm.MINUS_UINV_T if n % 2 else SymbolicCFTerm.PLUS_T


def _check_cap(n: int, cap: int):
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the symbolic cap {cap}")


def h_symbolic(n: int, cap: int = DEFAULT_CAP) -> BivarPoly:
    _check_cap(n, cap)
    h = T
    for m in range(n):
        h = h * h - BivarPoly.monomial(0, 2 ** m, 2)
    return h


def h_sequence(n: int, cap: int = DEFAULT_CAP) -> list[BivarPoly]:
    _check_cap(n, cap)
    hs = [T]
    for m in range(n):
        hs.append(hs[-1] * hs[-1] - BivarPoly.monomial(0, 2 ** m, 2))
    return hs


def s_symbolic(n: int, cap: int = DEFAULT_CAP) -> BivarRatFunc:
    """Truncated series over the common denominator ``h_0 h_1 ... h_n``."""
    hs = h_sequence(n, cap)
    num = ZERO
    for m in range(n + 1):
        tail = ONE
        for k in range(m + 1, n + 1):
            tail = tail * hs[k]
        num = num + BivarPoly.monomial(0, 2 ** m) * tail
    den = ONE
    for h in hs:
        den = den * h
    return BivarRatFunc(num, den)


def newton_map(x: BivarRatFunc) -> BivarRatFunc:
    """``F(X) = (X^2 - U)/(2X - T)`` applied to ``p/q`` as ``(p^2 - U q^2)/(q (2p - T q))``."""
    p, q = x.num, x.den
    den_factor = 2 * p - T * q
    if den_factor.is_zero():
        raise ZeroDivisionError("2X - T vanishes identically")
    return BivarRatFunc(p * p - U * q * q, q * den_factor)


class Start(enum.Enum):
    AT_ZERO = "0"
    AT_T = "T"


def newton_iterate_symbolic(n: int, start: Start = Start.AT_ZERO, cap: int = DEFAULT_CAP + 1) -> BivarRatFunc:
    """``F^(n)`` at 0 or at T; ``F^(0)`` is the start value."""
    _check_cap(n, cap)
    x = BivarRatFunc(ZERO) if start is Start.AT_ZERO else BivarRatFunc(T)
    for _ in range(n):
        x = newton_map(x)
    return x


def _convergents(values: Sequence[BivarRatFunc]):
    """Yield ``(n, p_n, q_n)`` for the two-term recurrence, starting at n = 0."""
    p2, p1 = BivarRatFunc(ZERO), BivarRatFunc(ONE)
    q2, q1 = BivarRatFunc(ONE), BivarRatFunc(ZERO)
    for n, a in enumerate(values):
        p2, p1 = p1, a * p1 + p2
        q2, q1 = q1, a * q1 + q2
        yield n, p1, q1


def cf_ratfunc(values: Sequence) -> BivarRatFunc:
    """``[a_0; a_1, ..., a_N]`` for arbitrary rational-function partial denominators."""
    values = [BivarRatFunc.lift(v) for v in values]
    if not values:
        raise ValueError("empty continued fraction")
    p = q = None
    for n, p, q in _convergents(values):
        if q.is_zero():
            raise ZeroDenominator(n)
    return p / q


def cf_symbolic(terms: Sequence[SymbolicCFTerm]) -> BivarRatFunc:
    return cf_ratfunc([t.render() for t in terms])


def alpha_terms(length: int) -> list[SymbolicCFTerm]:
    """``a_0 .. a_length`` (``length + 1`` entries)."""
    return [a_term(n) for n in range(length + 1)]


def beta_terms(length: int) -> list[SymbolicCFTerm]:
    return [b_term(n) for n in range(length + 1)]


@dataclass
class PQRS:
    """Convergent numerators/denominators indexed from -2 (dicts keyed by n)."""

    p: dict
    q: dict
    r: dict
    s: dict
    N: int


def pqrs_sequences(N: int, max_index: int = 2 ** (DEFAULT_CAP + 1)) -> PQRS:
    if N > max_index:
        raise CapExceeded(f"index {N} exceeds {max_index}")
    p = {-2: BivarRatFunc(ZERO), -1: BivarRatFunc(ONE)}
    q = {-2: BivarRatFunc(ONE), -1: BivarRatFunc(ZERO)}
    r = {-2: BivarRatFunc(ZERO), -1: BivarRatFunc(ONE)}
    s = {-2: BivarRatFunc(ONE), -1: BivarRatFunc(ZERO)}
    for n in range(N + 1):
        a = a_term(n).render()
        b = b_term(n).render()
        p[n] = a * p[n - 1] + p[n - 2]
        q[n] = a * q[n - 1] + q[n - 2]
        r[n] = b * r[n - 1] + r[n - 2]
        s[n] = b * s[n - 1] + s[n - 2]
    return PQRS(p, q, r, s, N)


# -- verification reports -----------------------------------------------------

@dataclass
class IdentityCheck:
    name: str
    n: int
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"identity": self.name, "n": self.n, "pass": self.passed, **self.detail}


def random_points(rng: random.Random, count: int) -> list[tuple[Fraction, Fraction]]:
    pts = []
    while len(pts) < count:
        t = Fraction(rng.randint(-60, 60), rng.randint(1, 17))
        u = Fraction(rng.randint(-60, 60), rng.randint(1, 17))
        if t != 0 and u != 0:
            pts.append((t, u))
    return pts


def agree_at_points(f: BivarRatFunc, g: BivarRatFunc, pts) -> tuple[int, bool]:
    """Evaluate both sides at sample points; return (points used, all agree)."""
    used = 0
    for t, u in pts:
        try:
            fv = f.evaluate(t, u)
            gv = g.evaluate(t, u)
        except ZeroDivisionError:
            continue
        used += 1
        if fv != gv:
            return used, False
    return used, True


def _compare(name: str, n: int, f: BivarRatFunc, g: BivarRatFunc, pts=None) -> IdentityCheck:
    ok = f == g
    detail = {"lhs": f.degrees(), "rhs": g.degrees()}
    if pts is not None:
        used, spot = agree_at_points(f, g, pts)
        detail["spot_points"] = used
        detail["spot_pass"] = spot
        ok = ok and spot
    return IdentityCheck(name, n, ok, detail)


@dataclass
class IdentityReport:
    n: int
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"n": self.n, "pass": self.passed, "checks": [c.to_json() for c in self.checks]}


def verify_newton_cf_identities(n: int, cap: int = DEFAULT_CAP, seed: int = 0, points: int = 20) -> IdentityReport:
    """Cross-multiplied check of ``F^(n+1)(0) = S_n = [0; a_1..]`` and
    ``F^(n+1)(T) = T - S_n = [b_0; b_1..]`` with ``2^(n+1) - 1`` partials."""
    _check_cap(n, cap)
    pts = random_points(random.Random(seed + n), points) if points else None
    length = 2 ** (n + 1) - 1
    f0 = newton_iterate_symbolic(n + 1, Start.AT_ZERO, cap + 1)
    fT = newton_iterate_symbolic(n + 1, Start.AT_T, cap + 1)
    sn = s_symbolic(n, cap)
    cf_a = cf_symbolic(alpha_terms(length))
    cf_b = cf_symbolic(beta_terms(length))
    t_minus_s = RT - sn
    checks = [
        _compare("F(n+1)(0) = S_n", n, f0, sn, pts),
        _compare("S_n = [0; a_1, ...]", n, sn, cf_a, pts),
        _compare("F(n+1)(T) = T - S_n", n, fT, t_minus_s, pts),
        _compare("T - S_n = [b_0; b_1, ...]", n, t_minus_s, cf_b, pts),
    ]
    return IdentityReport(n, checks)


def auxiliary_identity_checks(n_max: int, cap: int = DEFAULT_CAP, seed: int = 0, points: int = 20,
                 scaling_samples: int = 20) -> list[IdentityCheck]:
    """Telescoping, the auxiliary h-identity, PQRS relations, determinant,
    reversal, scaling and Newton squaring identities up to ``n_max``."""
    _check_cap(n_max, cap)
    rng = random.Random(seed)
    pts = random_points(rng, points) if points else None
    out: list[IdentityCheck] = []

    hs = h_sequence(n_max + 1, cap + 1)
    f0 = [newton_iterate_symbolic(k, Start.AT_ZERO, cap + 1) for k in range(n_max + 2)]
    fT = [newton_iterate_symbolic(k, Start.AT_T, cap + 1) for k in range(n_max + 2)]
    prod = ONE
    for n in range(n_max + 1):
        prod = prod * hs[n]
        term = BivarRatFunc(BivarPoly.monomial(0, 2 ** n), prod)
        out.append(_compare("F(n+1)(0) - F(n)(0) = U^(2^n)/(h_0..h_n)", n, f0[n + 1] - f0[n], term, pts))
        out.append(_compare("F(n+1)(T) - F(n)(T) = -U^(2^n)/(h_0..h_n)", n, fT[n + 1] - fT[n], -term, pts))
        x = f0[n]
        quad = x * x - RT * x + RU
        lhs = BivarRatFunc(T * T - 4 * U) / quad + 2
        rhs = BivarRatFunc(hs[n + 1], BivarPoly.monomial(0, 2 ** n))
        out.append(_compare("(T^2-4U)/(F^2 - T F + U) + 2 = h_(n+1)/U^(2^n)", n, lhs, rhs, pts))

    N = 2 ** (n_max + 1) - 1
    seq = pqrs_sequences(N + 1)
    p, q, r, s = seq.p, seq.q, seq.r, seq.s
    ru = RU
    for n in range(-1, N + 1):
        if n % 2:
            out.append(_compare("p_n = q_(n-1) (odd n)", n, p[n], q[n - 1]))
            out.append(_compare("r_n = s_(n+1) (odd n)", n, r[n], s[n + 1]))
        else:
            out.append(_compare("p_n = -U q_(n-1) (even n)", n, p[n], -ru * q[n - 1]))
            out.append(_compare("r_n = -U s_(n+1) (even n)", n, r[n], -ru * s[n + 1]))
        sign = 1 if (n - 1) % 2 == 0 else -1
        out.append(_compare("p_n q_(n-1) - p_(n-1) q_n = (-1)^(n-1)", n,
                            p[n] * q[n - 1] - p[n - 1] * q[n], BivarRatFunc.lift(sign)))
    a_vals = [a_term(k).render() for k in range(N + 1)]
    for n in range(1, N + 1):
        rev = cf_ratfunc(list(reversed(a_vals[1:n + 1])))
        out.append(_compare("q_n/q_(n-1) = [a_n; ..., a_1]", n, q[n] / q[n - 1], rev))

    forms = [f for f in SymbolicCFTerm if f is not SymbolicCFTerm.ZERO]
    for k in range(scaling_samples):
        length = rng.randint(1, 8)
        terms = [rng.choice(list(SymbolicCFTerm))] + [rng.choice(forms) for _ in range(length)]
        vals = [t.render() for t in terms]
        try:
            lhs = ru * cf_ratfunc(vals)
            scaled = [v * (ru if i % 2 == 0 else BivarRatFunc(ONE, U)) for i, v in enumerate(vals)]
            rhs = cf_ratfunc(scaled)
        except ZeroDenominator:
            continue
        chk = _compare("U[a_0; a_1, ...] = [U a_0; a_1/U, U a_2, ...]", k, lhs, rhs)
        chk.detail["terms"] = [t.value for t in terms]
        out.append(chk)

    for n in range(n_max + 1):
        i, j = 2 ** n - 1, 2 ** (n + 1) - 1
        out.append(_compare("F(p_(2^n-1)/q_(2^n-1)) = p_(2^(n+1)-1)/q_(2^(n+1)-1)", n,
                            newton_map(p[i] / q[i]), p[j] / q[j], pts))
        out.append(_compare("F(r_(2^n-1)/s_(2^n-1)) = r_(2^(n+1)-1)/s_(2^(n+1)-1)", n,
                            newton_map(r[i] / s[i]), r[j] / s[j], pts))
    return out
