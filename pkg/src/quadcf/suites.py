"""Verification suites shared by the command line and the test-suite."""
from __future__ import annotations

import itertools
import math
import operator
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .approx import Ball, PrecisionPolicy, certified_round, roots_at
from .cf import (
    Root,
    detect_periodicity,
    eval_cf,
    hurwitz_expand,
    illegal_partials,
    nearest_integer_cf,
    predicted_expansion,
    symmetric_simple_cf,
)
from .errors import CertificationFailure, QuadCFError
from .exactfield import FieldElement, QuadParams
from .lattice import (
    GAUSSIAN,
    LatticeKind,
    LatticePoint,
    Level,
    builtin_exclusion_set,
    format_point,
    fractional_part,
    recompute_exclusion_set,
    round_nearest,
    units,
)
from .newton import check_error_bound, growth_data, h_matches_symbolic, h_values, newton_trace, sierpinski_value
from .symbolic import Start

DEFAULT_SEED = 20240601


def certify_below(ball_at, bound: Fraction, policy: PrecisionPolicy) -> bool:
    """Decide ``|x| < bound`` where ``ball_at(prec)`` encloses ``x``."""
    for p in policy.levels():
        try:
            lo, hi = ball_at(p).abs_bounds()
        except CertificationFailure:
            continue
        if hi < bound:
            return True
        if lo >= bound:
            return False
    raise CertificationFailure(f"|x| < {bound} undecided at {policy.max_bits} bits")


# -- parameter grids ----------------------------------------------------------

def box_points(kind: LatticeKind, bound: int) -> list[LatticePoint]:
    return [LatticePoint(kind, x, y) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1)]


def grid_params(kind: LatticeKind, level: Level, bound: int) -> Iterator[tuple[LatticePoint, LatticePoint]]:
    """``(u, t)`` pairs in unit-exponent then coordinate order, skipping the level's exclusion set."""
    for u in units(kind):
        excluded = builtin_exclusion_set(kind, level, u)
        for t in box_points(kind, bound):
            if t not in excluded:
                yield u, t


@dataclass
class GridRow:
    kind: LatticeKind
    level: Level
    u: LatticePoint
    t: LatticePoint
    checks: dict = field(default_factory=dict)
    error: str | None = None
    certification_failure: bool = False

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "level": self.level.name,
            "u": format_point(self.u),
            "t": format_point(self.t),
            "pass": self.passed,
            "checks": self.checks,
            "error": self.error,
        }


def _chain(params: QuadParams, n_max: int) -> tuple[bool, bool]:
    """Exact ``F^(n+1)(0) = S_n = [0; ...]`` and ``F^(n+1)(t) = t - S_n = [t; ...]``."""
    zero = newton_trace(params, Start.AT_ZERO, n_max + 1).iterates
    at_t = newton_trace(params, Start.AT_T, n_max + 1).iterates
    ok_a = ok_b = True
    for n in range(n_max + 1):
        length = 2 ** (n + 1) - 1
        s = sierpinski_value(params, n)
        ok_a &= zero[n + 1] == s == eval_cf(predicted_expansion(params, Root.ALPHA, length))
        ok_b &= at_t[n + 1] == params.tf - s == eval_cf(predicted_expansion(params, Root.BETA, length))
    return ok_a, ok_b


def verify_case(kind: LatticeKind, level: Level, u: LatticePoint, t: LatticePoint,
                n_max: int, policy: PrecisionPolicy | None = None) -> GridRow:
    policy = policy or PrecisionPolicy()
    row = GridRow(kind, level, u, t)
    c = row.checks
    try:
        params = QuadParams.admissible(t, u, level)
        half = Fraction(1, 2)
        c["alpha_small"] = certify_below(lambda p: roots_at(params, p)[0], half, policy)
        c["beta_near_t"] = certify_below(lambda p: roots_at(params, p)[1] - Ball.from_field(params.tf, p), half, policy)
        count = 2 ** (n_max + 1) - 1
        for name, root, z in (("alpha", Root.ALPHA, params.alpha()), ("beta", Root.BETA, params.beta())):
            word = hurwitz_expand(z, count, policy)
            c[f"{name}_expansion"] = word == predicted_expansion(params, root, count)
            c[f"{name}_legal"] = not illegal_partials(word)
            # preperiod 1 plus two full periods of 2 needs five terms
            if len(word.terms) >= 5:
                rep = detect_periodicity(word)
                c[f"{name}_periodic"] = rep is not None and rep.preperiod_length <= 1 and rep.period_length <= 2
        c["chain_alpha"], c["chain_beta"] = _chain(params, n_max)
        if level is Level.L3:
            c["error_bound"] = all(r.passed for r in check_error_bound(params, max(n_max, 1), policy))
    except CertificationFailure as exc:
        row.error = str(exc)
        row.certification_failure = True
    except QuadCFError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def _case_job(args):
    return verify_case(*args)


def verify_grid(kind: LatticeKind, level: Level, bound: int, n_max: int,
                policy: PrecisionPolicy | None = None, jobs: int = 1) -> Iterator[GridRow]:
    """Rows in deterministic grid order; ``jobs > 1`` computes them in a process pool."""
    policy = policy or PrecisionPolicy()
    tasks = [(kind, level, u, t, n_max, policy) for u, t in grid_params(kind, level, bound)]
    if jobs <= 1:
        for task in tasks:
            yield _case_job(task)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_case_job, tasks, chunksize=4)


@dataclass
class GridSummary:
    total: int = 0
    failures: int = 0
    certification_failures: int = 0

    def add(self, row: GridRow) -> None:
        self.total += 1
        if not row.passed:
            self.failures += 1
        if row.certification_failure:
            self.certification_failures += 1

    def to_json(self) -> dict:
        return {"total": self.total, "failures": self.failures,
                "certification_failures": self.certification_failures}


# -- growth comparison --------------------------------------------------------

@dataclass
class GrowthRow:
    u: LatticePoint
    t: LatticePoint
    dominates: list
    closed_form: list
    above_two: list

    @property
    def passed(self) -> bool:
        return all(self.dominates) and all(self.closed_form) and all(self.above_two)


def growth_suite(kind: LatticeKind, bound: int, N: int = 6) -> list[GrowthRow]:
    """``|h_n| >= g_n`` and the closed form of ``g_n`` over the box, where ``|t| > 2``."""
    rows = []
    for u in units(kind):
        for t in box_points(kind, bound):
            if t.norm() <= 4:
                continue
            gd = growth_data(QuadParams.unchecked(t, u), N)
            rng = range(N + 1)
            rows.append(GrowthRow(u, t, [gd.h_dominates(n) for n in rng],
                                  [gd.closed_form_matches(n) for n in rng],
                                  [gd.above_two(n) for n in rng]))
    return rows


# -- exclusion sets -----------------------------------------------------------

@dataclass
class ExclusionRow:
    kind: LatticeKind
    level: Level
    unit: LatticePoint
    builtin: list
    recomputed: list

    @property
    def equal(self) -> bool:
        return self.builtin == self.recomputed

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "level": self.level.name,
            "unit": format_point(self.unit),
            "size": len(self.builtin),
            "equal": self.equal,
            "builtin": [format_point(p) for p in self.builtin],
            "recomputed": [format_point(p) for p in self.recomputed],
        }


def exclusion_report(kind: LatticeKind, level: Level, policy: PrecisionPolicy | None = None) -> list[ExclusionRow]:
    rows = []
    for u in units(kind):
        rows.append(ExclusionRow(kind, level, u,
                                 builtin_exclusion_set(kind, level, u).sorted_members(),
                                 recompute_exclusion_set(kind, level, u, policy).sorted_members()))
    return rows


# -- the (3, 1) showcase ------------------------------------------------------

def lucas_report(n: int = 3, policy: PrecisionPolicy | None = None) -> dict:
    """Sierpinski sums, Newton iterates and the symmetric simple CF at ``t = 3, u = 1``."""
    policy = policy or PrecisionPolicy()
    G = GAUSSIAN
    params = QuadParams.unchecked(LatticePoint(G, 3, 0), LatticePoint(G, 1, 0))
    hs = [h.x for h in h_values(params, n)]
    denoms = list(itertools.accumulate(hs, operator.mul))
    sums = [sierpinski_value(params, m).x for m in range(n + 1)]
    newton = [x.x for x in newton_trace(params, Start.AT_ZERO, n + 1).iterates]
    bound_rows = check_error_bound(params, n + 1, policy)
    last = [r for r in bound_rows if r.n == n + 1 and r.side == "alpha"][0]
    sym = symmetric_simple_cf(3, n)
    return {
        "h": [int(h) for h in hs],
        "denominators": [int(d) for d in denoms],
        "partial_sums": [str(s) for s in sums],
        "newton": [str(x) for x in newton],
        "newton_equals_sum": newton[n + 1] == sums[n],
        "symmetric_cf": [int(a.x) for a in sym.partials],
        "symmetric_cf_equals_sum": eval_cf(sym) == sierpinski_value(params, n),
        "distance": last.lhs.to_json(),
        "bound": last.rhs.to_json(),
        "bound_holds": last.passed,
        "h_matches_symbolic": h_matches_symbolic(params, min(n, 4)),
    }


def symmetric_cf_check(t: int, n: int) -> tuple[bool, bool]:
    """``(value matches S_n(t, 1), length is 2^(n+2) - 3)``."""
    word = symmetric_simple_cf(t, n)
    G = GAUSSIAN
    params = QuadParams.unchecked(LatticePoint(G, t, 0), LatticePoint(G, 1, 0))
    return eval_cf(word) == sierpinski_value(params, n), len(word) == 2 ** (n + 2) - 3


# -- seeded property suites ---------------------------------------------------

@dataclass
class PropertyResult:
    name: str
    cases: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def to_json(self) -> dict:
        return {"property": self.name, "cases": self.cases, "pass": self.passed,
                "failures": self.failures[:5]}


def _rand_frac(rng: random.Random, num: int = 40, den: int = 12) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def _rand_field(rng: random.Random, kind: LatticeKind) -> FieldElement:
    return FieldElement(kind, _rand_frac(rng), _rand_frac(rng))


def _rand_params(rng: random.Random, kind: LatticeKind) -> QuadParams:
    while True:
        u = rng.choice(units(kind))
        t = LatticePoint(kind, rng.randint(-6, 6), rng.randint(-6, 6))
        if t not in builtin_exclusion_set(kind, Level.L2, u):
            return QuadParams.unchecked(t, u)


def _field_axioms(rng, samples):
    res = PropertyResult("field axioms", 0)
    for kind in LatticeKind:
        for _ in range(samples):
            a, b, c = (_rand_field(rng, kind) for _ in range(3))
            res.cases += 1
            ok = (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c)
                  and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
                  and (a * b).norm() == a.norm() * b.norm() and (a * b).conj() == a.conj() * b.conj())
            if ok and not a.is_zero():
                ok = a * a.inv() == 1
            if not ok:
                res.failures.append([str(a), str(b), str(c)])
    return res


def _extension_axioms(rng, samples):
    res = PropertyResult("extension arithmetic", 0)
    for kind in LatticeKind:
        for _ in range(samples):
            params = _rand_params(rng, kind)
            x = params.embed(_rand_field(rng, kind)) + params.alpha() * _rand_field(rng, kind)
            y = params.embed(_rand_field(rng, kind)) + params.alpha() * _rand_field(rng, kind)
            a = params.alpha()
            res.cases += 1
            ok = (a * a - params.tf * a + params.uf).is_zero() and (a * params.beta()) == params.embed(params.uf)
            ok = ok and x * y == y * x and (x * y).norm() == x.norm() * y.norm()
            if ok and not x.is_zero():
                ok = x * x.inv() == params.embed(FieldElement.one(kind))
            if not ok:
                res.failures.append([str(params), str(x), str(y)])
    return res


def _ball_containment(rng, samples):
    res = PropertyResult("ball containment", 0)
    for kind in LatticeKind:
        for _ in range(samples):
            prec = rng.choice([32, 53, 64, 128])
            a, b = _rand_field(rng, kind), _rand_field(rng, kind)
            A, B = Ball.from_field(a, prec), Ball.from_field(b, prec)
            res.cases += 1
            pairs = [(A + B, a + b), (A - B, a - b), (A * B, a * b), (A ** 3, a ** 3), (A.conj(), a.conj())]
            if not b.is_zero():
                pairs.append((A / B, a / b))
            ok = all(ball.contains_field(val) for ball, val in pairs)
            lo, hi = A.abs_bounds()
            ok = ok and lo * lo <= a.norm() <= hi * hi
            if not ok:
                res.failures.append([str(a), str(b), prec])
    return res


def _round_reconstruction(rng, samples):
    res = PropertyResult("round/fractional reconstruction", 0)
    for kind in LatticeKind:
        for _ in range(samples):
            z = _rand_field(rng, kind)
            a = round_nearest(z, kind)
            f = fractional_part(z, kind)
            res.cases += 1
            # no other lattice point may be strictly closer
            others = [a + d for d in units(kind)]
            ok = z == f + a and all((z - o).norm() >= f.norm() for o in others)
            if not ok:
                res.failures.append(str(z))
    return res


def _certified_vs_exact(rng, samples):
    res = PropertyResult("certified rounding of roots", 0)
    for kind in LatticeKind:
        for _ in range(samples):
            params = _rand_params(rng, kind)
            res.cases += 1
            ok = certified_round(params.alpha()) == LatticePoint.zero(kind)
            ok = ok and certified_round(params.beta()) == params.t
            if not ok:
                res.failures.append(str(params))
    return res


def _nearest_integer(rng, samples):
    res = PropertyResult("nearest-integer specialization", 0)
    for _ in range(samples):
        x = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 5))
        word = hurwitz_expand(FieldElement.from_int(GAUSSIAN, x), 200)
        digits = [int(a.x) for a in word.terms]
        res.cases += 1
        if not (word.terminated and all(a.y == 0 for a in word.terms) and digits == nearest_integer_cf(x)
                and eval_cf(word) == x):
            res.failures.append(str(x))
    return res


def _grid_periodicity(bound_g: int, bound_e: int, count: int):
    res = PropertyResult("periodicity of grid expansions", 0)
    for kind, bound in ((LatticeKind.GAUSSIAN, bound_g), (LatticeKind.EISENSTEIN, bound_e)):
        for u, t in grid_params(kind, Level.L2, bound):
            params = QuadParams.unchecked(t, u)
            for z in (params.alpha(), params.beta()):
                rep = detect_periodicity(hurwitz_expand(z, count))
                res.cases += 1
                if rep is None or rep.preperiod_length > 1 or rep.period_length > 2:
                    res.failures.append([format_point(u), format_point(t)])
    return res


def property_suites(seed: int = DEFAULT_SEED, samples: int = 100, rationals: int = 50,
                    grid_bound: tuple[int, int] = (5, 4), grid_terms: int = 15) -> list[PropertyResult]:
    """Randomised arithmetic checks under ``seed`` plus periodicity over the grids."""
    rng = random.Random(seed)
    return [
        _field_axioms(rng, samples),
        _extension_axioms(rng, samples),
        _ball_containment(rng, samples),
        _round_reconstruction(rng, samples),
        _certified_vs_exact(rng, max(1, samples // 5)),
        _nearest_integer(rng, rationals),
        _grid_periodicity(*grid_bound, grid_terms),
    ]


def digits_of_agreement(params: QuadParams, n_max: int, prec: int = 4096) -> list[float]:
    """``-log10 |alpha - F^(n)(0)|`` for ``0 <= n <= n_max`` (diagnostic, not certified)."""
    alpha = roots_at(params, prec)[0]
    its = newton_trace(params, Start.AT_ZERO, n_max).iterates
    out = []
    for x in its:
        err = (alpha - x).abs()
        mid = err.re
        out.append(math.inf if mid <= 0 else -math.log10(mid))
    return out
