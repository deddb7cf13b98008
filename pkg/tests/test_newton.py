import math
from fractions import Fraction

import pytest

from quadcf.approx import roots_numeric
from quadcf.errors import ZeroDerivative, ZeroTerm
from quadcf.exactfield import QuadParams
from quadcf.lattice import GAUSSIAN, LatticePoint
from quadcf.newton import (
    check_error_bound,
    growth_data,
    h_matches_symbolic,
    h_values,
    newton_trace,
    rho_ball,
    sierpinski_value,
)
from quadcf.symbolic import Start

from conftest import gp

SQRT5 = math.sqrt(5)
RHO = (3 + SQRT5) / 2


def test_trace_lucas(lucas):
    its = newton_trace(lucas, Start.AT_ZERO, 2).iterates
    assert its == (0, Fraction(1, 3), Fraction(8, 21))
    assert newton_trace(lucas, Start.AT_T, 1).last == Fraction(8, 3)


def test_trace_at_t_generic():
    p = QuadParams.unchecked(gp(2, 3), gp(0, -1))
    assert newton_trace(p, Start.AT_T, 1).last == (p.tf * p.tf - p.uf) / p.tf


def test_zero_derivative():
    p = QuadParams.unchecked(gp(0), gp(1))
    with pytest.raises(ZeroDerivative):
        newton_trace(p, Start.AT_ZERO, 1)


def test_reflection():
    for t, u in ((gp(3), gp(1)), (gp(2, 2), gp(0, 1)), (gp(-4, 1), gp(-1))):
        p = QuadParams.unchecked(t, u)
        a = newton_trace(p, Start.AT_ZERO, 5).iterates
        b = newton_trace(p, Start.AT_T, 5).iterates
        assert all(y == p.tf - x for x, y in zip(a, b))


def test_sierpinski_lucas(lucas):
    assert [h.x for h in h_values(lucas, 3)] == [3, 7, 47, 2207]
    assert sierpinski_value(lucas, 1) == Fraction(8, 21)
    assert sierpinski_value(lucas, 3) == sum(Fraction(1, d) for d in (3, 21, 987, 2178309))


def test_sierpinski_first_term():
    p = QuadParams.unchecked(gp(1, 3), gp(0, 1))
    assert sierpinski_value(p, 0) == p.uf / p.tf


def test_zero_term():
    # h_1 = t^2 - 2u vanishes for t = 1+i, u = i
    with pytest.raises(ZeroTerm):
        sierpinski_value(QuadParams.unchecked(gp(1, 1), gp(0, 1)), 2)


def test_h_matches_symbolic():
    assert h_matches_symbolic(QuadParams.unchecked(gp(2, 3), gp(0, -1)), 4)


def test_growth_lucas(lucas):
    gd = growth_data(lucas, 6)
    assert abs(gd.rho.to_complex() - RHO) < 1e-15
    assert gd.g[0].contains(3)
    assert gd.g_exact[1:3] == [7, 47]
    assert gd.h_norm[1:3] == [49, 47 ** 2]
    assert all(gd.h_dominates(n) and gd.closed_form_matches(n) for n in range(7))


def test_growth_gaussian_unit_i():
    gd = growth_data(QuadParams.unchecked(gp(2, 2), gp(0, 1)), 6)
    assert all(gd.h_dominates(n) and gd.above_two(n) for n in range(7))


def test_bound_lucas_values(lucas):
    rows = check_error_bound(lucas, 3)
    first = rows[0]
    assert (first.n, first.side, first.passed) == (1, "alpha", True)
    assert abs(float(first.lhs.re) - 0.04863) < 1e-5
    assert abs(float(first.rhs.re) - 0.11146) < 1e-5
    third = [r for r in rows if r.n == 3 and r.side == "alpha"][0]
    assert float(third.rhs.re) == pytest.approx(2 / RHO ** 15)
    assert float(third.rhs.re) < 1.08e-6
    # F^(3)(0) = S_2(3, 1) = 377/987 by exact arithmetic
    assert newton_trace(lucas, Start.AT_ZERO, 3).last == Fraction(377, 987)
    assert abs((3 - SQRT5) / 2 - 377 / 987) < float(third.rhs.re)


def test_bound_mirror(lucas):
    rows = check_error_bound(lucas, 4)
    for a, b in zip(rows[::2], rows[1::2]):
        assert a.n == b.n and a.lhs.overlaps(b.lhs)


def test_bound_decay_and_doubling():
    p = QuadParams.unchecked(gp(3, 1), gp(0, 1))
    rows = [r for r in check_error_bound(p, 5) if r.side == "alpha"]
    uppers = [r.lhs.upper() for r in rows]
    assert all(x > y for x, y in zip(uppers, uppers[1:]))
    digits = [-math.log10(float(u)) for u in uppers]
    assert all(d2 >= 2 * d1 for d1, d2 in zip(digits[1:], digits[2:]))


def test_bound_row_json(lucas):
    d = check_error_bound(lucas, 1)[0].to_json()
    assert set(d) == {"params", "n", "side", "lhs", "rhs", "pass"}


def test_rho_requires_large_t():
    with pytest.raises(ValueError):
        rho_ball(QuadParams.unchecked(gp(2), gp(1)), 64)


def test_grid_doubling_and_reflection():
    from quadcf.lattice import EISENSTEIN, Level
    from quadcf.suites import digits_of_agreement, grid_params

    for kind in (GAUSSIAN, EISENSTEIN):
        for u, t in grid_params(kind, Level.L3, 3):
            p = QuadParams.unchecked(t, u)
            d = digits_of_agreement(p, 5)
            assert all(d[n] >= 2 * d[n - 1] for n in range(2, 6)), (str(p), d)
            a = newton_trace(p, Start.AT_ZERO, 6).iterates
            b = newton_trace(p, Start.AT_T, 6).iterates
            assert all(y == p.tf - x for x, y in zip(a, b))
