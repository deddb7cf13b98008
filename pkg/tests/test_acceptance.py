"""End-to-end acceptance criteria; each test records one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""
import time
from fractions import Fraction

from quadcf.approx import roots_numeric, sqrt_bounds
from quadcf.errors import DomainError
from quadcf.exactfield import QuadParams
from quadcf.lattice import EISENSTEIN, GAUSSIAN, LatticeKind, Level, builtin_exclusion_set
from quadcf.newton import check_error_bound, h_values, newton_trace, rho_ball, sierpinski_value
from quadcf.suites import (
    DEFAULT_SEED,
    exclusion_report,
    grid_params,
    growth_suite,
    property_suites,
    symmetric_cf_check,
    verify_grid,
)
from quadcf.symbolic import Start, auxiliary_identity_checks, verify_newton_cf_identities

from conftest import gp

RESULTS = {}


def record(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[num] = line
    print(line)
    return ok


def test_c1_symbolic_identities():
    start = time.perf_counter()
    reports = [verify_newton_cf_identities(n) for n in range(5)]
    aux = auxiliary_identity_checks(4)
    elapsed = time.perf_counter() - start
    failures = sum(not r.passed for r in reports) + sum(not c.passed for c in aux)
    ok = failures == 0 and elapsed < 60
    record(1, ok, f"{4 * len(reports) + len(aux)} identities, {failures} failures, {elapsed:.1f}s")
    assert ok


def test_c2_exclusion_sets():
    rows = [r for kind in LatticeKind for level in (Level.L1, Level.L2) for r in exclusion_report(kind, level)]
    bad = [f"{r.kind.value}{r.level.value}({r.unit})" for r in rows if not r.equal]
    ok = len(rows) == 20 and not bad
    record(2, ok, f"{len(rows)} sets compared, mismatches: {bad or 'none'}")
    assert ok


def _grid(num, kind, box):
    start = time.perf_counter()
    rows = list(verify_grid(kind, Level.L2, box, 4))
    elapsed = time.perf_counter() - start
    bad = [r.to_json() for r in rows if not r.passed]
    ok = rows and not bad and elapsed < 300
    record(num, ok, f"{len(rows)} (u, t) pairs, {len(bad)} failures, {elapsed:.1f}s")
    return ok, bad


def test_c3_gaussian_grid():
    ok, bad = _grid(3, GAUSSIAN, 5)
    assert ok, bad[:3]


def test_c4_eisenstein_grid():
    ok, bad = _grid(4, EISENSTEIN, 4)
    assert ok, bad[:3]


def test_c5_convergence_bound():
    checked = violations = 0
    for kind, box in ((GAUSSIAN, 5), (EISENSTEIN, 4)):
        for u, t in grid_params(kind, Level.L3, box):
            for row in check_error_bound(QuadParams.admissible_L3(t, u), 5):
                checked += 1
                violations += not row.passed
    # informational only: t excluded at L3 but admissible at L2 (|t| = 2, where rho = 1)
    boundary = []
    for kind, box in ((GAUSSIAN, 5), (EISENSTEIN, 4)):
        for u, t in grid_params(kind, Level.L2, box):
            if t in builtin_exclusion_set(kind, Level.L3, u):
                try:
                    boundary.append(all(r.passed for r in check_error_bound(QuadParams.unchecked(t, u), 5)))
                except DomainError:
                    boundary.append(None)
    ok = checked > 0 and violations == 0
    record(5, ok, f"{checked} certified comparisons, {violations} violations; "
                  f"{len(boundary)} L3-only boundary cases logged (rho undefined for {boundary.count(None)})")
    assert ok


def test_c6_growth_comparison():
    rows = growth_suite(GAUSSIAN, 5) + growth_suite(EISENSTEIN, 4)
    bad = [(str(r.u), str(r.t)) for r in rows if not r.passed]
    ok = rows and not bad
    record(6, ok, f"{len(rows)} params with |t| > 2, n <= 6, failures: {bad or 'none'}")
    assert ok


def test_c7_lucas_anchor():
    p = QuadParams.unchecked(gp(3), gp(1))
    hs = [h.x for h in h_values(p, 3)]
    s3 = sierpinski_value(p, 3)
    f4 = newton_trace(p, Start.AT_ZERO, 4).last
    bound = 2 / rho_ball(p, 256) ** 15
    # alpha = (3 - sqrt 5)/2 lies between (3 - hi)/2 and (3 - lo)/2, so the
    # distance is bounded by exact rationals without using the ball roots
    lo, hi = sqrt_bounds(Fraction(5), 256)
    far = max(abs(s3.x - (3 - hi) / 2), abs(s3.x - (3 - lo) / 2))
    alpha, _ = roots_numeric(p, 256)
    dist = (alpha - s3).abs()
    ok = (hs == [3, 7, 47, 2207] and s3 == f4 and s3.is_real()
          and far < bound.lower() and dist.upper() < bound.lower())
    record(7, ok, f"h = {[int(h) for h in hs]}, S_3 = F^(4)(0) = {s3.x}, "
                  f"|S_3 - alpha| <= {float(dist.upper()):.3e} < {float(bound.lower()):.3e}")
    assert ok


def test_c8_symmetric_simple_cf():
    results = {(t, n): symmetric_cf_check(t, n) for t in (3, 4, 5, 6) for n in (1, 2, 3)}
    bad = [k for k, (val, length) in results.items() if not (val and length)]
    ok = not bad
    record(8, ok, f"{len(results)} (t, n) cases, failures: {bad or 'none'}")
    assert ok


def test_c9_property_suites():
    results = property_suites(DEFAULT_SEED)
    bad = [r.name for r in results if not r.passed]
    ok = not bad
    cases = sum(r.cases for r in results)
    record(9, ok, f"{len(results)} suites, {cases} cases, seed {DEFAULT_SEED}, failures: {bad or 'none'}")
    assert ok, [r.to_json() for r in results if not r.passed]


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
