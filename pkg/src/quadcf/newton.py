"""Concrete Newton iteration, Sierpinski partial sums, and the convergence bound."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .approx import Ball, PrecisionPolicy, roots_at, sqrt_bounds
from .errors import CertificationFailure, DomainError, ZeroDerivative, ZeroTerm
from .exactfield import FieldElement, QuadParams
from .symbolic import Start, h_symbolic


@dataclass(frozen=True)
class NewtonTrace:
    params: QuadParams
    start: Start
    iterates: tuple

    @property
    def last(self) -> FieldElement:
        return self.iterates[-1]


def newton_step(x: FieldElement, params: QuadParams) -> FieldElement:
    d = 2 * x - params.tf
    if d.is_zero():
        raise ZeroDerivative(f"2X - t vanishes at X = {x}")
    return (x * x - params.uf) / d


def newton_trace(params: QuadParams, start: Start, n: int) -> NewtonTrace:
    x = FieldElement.zero(params.kind) if start is Start.AT_ZERO else params.tf
    its = [x]
    for _ in range(n):
        x = newton_step(x, params)
        its.append(x)
    return NewtonTrace(params, start, tuple(its))


def h_values(params: QuadParams, n: int) -> list[FieldElement]:
    """``h_0 = t``, ``h_(m+1) = h_m^2 - 2 u^(2^m)``, exactly in the field."""
    hs = [params.tf]
    upow = params.uf
    for _ in range(n):
        hs.append(hs[-1] * hs[-1] - 2 * upow)
        upow = upow * upow
    return hs


def sierpinski_value(params: QuadParams, n: int) -> FieldElement:
    hs = h_values(params, n)
    total = FieldElement.zero(params.kind)
    prod = FieldElement.one(params.kind)
    upow = params.uf
    for m, h in enumerate(hs):
        if h.is_zero():
            raise ZeroTerm(f"h_{m} vanishes for {params}")
        prod = prod * h
        total = total + upow / prod
        upow = upow * upow
    return total


def h_matches_symbolic(params: QuadParams, n: int) -> bool:
    """Exact h_m against the polynomial h_m(T, U) evaluated at (t, u), m <= n."""
    return all(
        h_symbolic(m).evaluate(params.tf, params.uf) == h
        for m, h in enumerate(h_values(params, n))
    )


def _modulus_ball(q: Fraction, prec: int) -> Ball:
    lo, hi = sqrt_bounds(q, prec + 4)
    return Ball.exact((lo + hi) / 2, 0, prec) + Ball(Fraction(0), Fraction(0), (hi - lo) / 2, prec)


def rho_ball(params: QuadParams, prec: int) -> Ball:
    """``(|t| + sqrt(|t|^2 - 4))/2`` for ``|t| > 2``."""
    nt = params.tf.norm()
    if nt <= 4:
        raise DomainError(f"|t| must exceed 2 (|t|^2 = {nt})")
    return (_modulus_ball(nt, prec) + _modulus_ball(nt - 4, prec)) * Fraction(1, 2)


@dataclass
class GrowthData:
    params: QuadParams
    rho: Ball
    g: list          # Balls g_0..g_N
    h_abs: list      # Balls |h_0|..|h_N|
    g_exact: list    # integers g_n for n >= 1 (None for n = 0, where g_0 = |t|)
    h_norm: list     # exact |h_n|^2

    def h_dominates(self, n: int) -> bool:
        """``|h_n| >= g_n``, decided exactly on squared moduli."""
        if n == 0:
            return True
        g = self.g_exact[n]
        return g > 0 and self.h_norm[n] >= g * g

    def above_two(self, n: int) -> bool:
        if self.h_norm[n] <= 4:
            return False
        return self.g_exact[n] > 2 if n else self.h_norm[0] > 4

    def closed_form(self, n: int) -> Ball:
        r = self.rho ** (2 ** n)
        return r + r.inv()

    def closed_form_matches(self, n: int) -> bool:
        """``g_n`` lies within the ball for ``rho^(2^n) + rho^(-2^n)``."""
        cf = self.closed_form(n)
        if n == 0:
            return cf.overlaps(self.g[0])
        return cf.contains(self.g_exact[n])


def growth_data(params: QuadParams, N: int, policy: PrecisionPolicy | int | None = None) -> GrowthData:
    prec = policy if isinstance(policy, int) else max(256, (policy or PrecisionPolicy()).initial_bits)
    rho = rho_ball(params, prec)
    nt = params.tf.norm()
    g_exact: list = [None]
    if N >= 1:
        g_exact.append(int(nt) - 2)
    while len(g_exact) <= N:
        g_exact.append(g_exact[-1] ** 2 - 2)
    g = [_modulus_ball(nt, prec)] + [Ball.exact(v, 0, prec) for v in g_exact[1:]]
    h_norm = [h.norm() for h in h_values(params, N)]
    h_abs = [_modulus_ball(q, prec) for q in h_norm]
    return GrowthData(params, rho, g, h_abs, g_exact, h_norm)


@dataclass
class BoundRow:
    params: QuadParams
    n: int
    side: str
    lhs: Ball
    rhs: Ball
    passed: bool

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "n": self.n,
            "side": self.side,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "pass": self.passed,
        }


def _bound_row(params, n, side, approx_root, exact_iterate, prec):
    lhs = (approx_root - exact_iterate).abs()
    rhs = 2 / rho_ball(params, prec) ** (2 ** (n + 1) - 1)
    if lhs.upper() < rhs.lower():
        return BoundRow(params, n, side, lhs, rhs, True)
    if lhs.lower() > rhs.upper():
        return BoundRow(params, n, side, lhs, rhs, False)
    return None


def check_error_bound(params: QuadParams, n_max: int, policy: PrecisionPolicy | None = None) -> list[BoundRow]:
    """Certify ``|alpha - F^(n)(0)| < 2/rho^(2^(n+1)-1)`` and its mirror at ``t``, for 1 <= n <= n_max.

    Each comparison is refined until the balls separate; a certified
    violation is reported with ``passed=False``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    policy = policy or PrecisionPolicy()
    zero = newton_trace(params, Start.AT_ZERO, n_max).iterates
    at_t = newton_trace(params, Start.AT_T, n_max).iterates
    rows = []
    for n in range(1, n_max + 1):
        for side, idx, its in (("alpha", 0, zero), ("beta", 1, at_t)):
            row = None
            for p in policy.levels():
                root = roots_at(params, p)[idx]
                row = _bound_row(params, n, side, root, its[n], p)
                if row is not None:
                    break
            if row is None:
                raise CertificationFailure(f"bound at n = {n} ({side}) unresolved for {params}")
            rows.append(row)
    return rows
