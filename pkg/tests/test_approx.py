import math
from fractions import Fraction

import pytest

from quadcf.approx import (
    Ball,
    PrecisionPolicy,
    certified_round,
    compare_small_root_modulus,
    eval_ext,
    principal_sqrt,
    round_ball,
    roots_numeric,
    sqrt_bounds,
)
from quadcf.errors import CertificationFailure
from quadcf.exactfield import FieldElement, QuadParams
from quadcf.lattice import EISENSTEIN, GAUSSIAN

from conftest import ep, gp

SQRT5 = math.sqrt(5)


def test_sqrt_bounds_bracket():
    lo, hi = sqrt_bounds(Fraction(2), 80)
    assert lo * lo <= 2 <= hi * hi
    assert hi - lo < Fraction(1, 2 ** 70)


@pytest.mark.parametrize("z,expected", [(-1, 1j), (4, 2), (2j, 1 + 1j)])
def test_principal_sqrt(z, expected):
    ball = principal_sqrt(Ball.exact(Fraction(z.real), Fraction(z.imag) if isinstance(z, complex) else 0))
    assert abs(ball.to_complex() - expected) < 1e-15
    assert ball.contains(Fraction(expected.real), Fraction(expected.imag)) if isinstance(expected, complex) else ball.contains(expected)


def test_principal_sqrt_refuses_branch_cut():
    fuzzy = Ball(Fraction(-1), Fraction(0), Fraction(1, 1000), 64)
    with pytest.raises(CertificationFailure):
        principal_sqrt(fuzzy)


def test_principal_sqrt_branch():
    # argument of the result lies in (-pi/2, pi/2]
    for z in (complex(-3, 1e-9), complex(-3, -1e-9), complex(0, -5), complex(2, -7)):
        b = principal_sqrt(Ball.exact(Fraction(z.real), Fraction(z.imag)))
        assert b.re >= 0
        assert abs(b.to_complex() - complex(z) ** 0.5) < 1e-12


def test_roots_lucas(lucas):
    a, b = roots_numeric(lucas)
    assert abs(a.to_complex() - (3 - SQRT5) / 2) < 1e-15
    assert abs(b.to_complex() - (3 + SQRT5) / 2) < 1e-15
    lo, hi = sqrt_bounds(Fraction(5), 200)
    assert a.contains((3 - hi) / 2) or a.contains((3 - lo) / 2)


def test_roots_t_zero():
    a, b = roots_numeric(QuadParams.unchecked(gp(0), gp(-1)))
    assert a.contains(-1) and b.contains(1)


def test_small_root_inside_half_disc():
    p = QuadParams.unchecked(gp(2, 2), gp(1))
    a, _ = roots_numeric(p, 128)
    assert a.abs_bounds()[1] < Fraction(1, 2)
    assert compare_small_root_modulus(p, Fraction(1, 2)) == -1


def test_modulus_tie_detected_exactly():
    # t = 2: double root 1, so |alpha| = 1 exactly
    assert compare_small_root_modulus(QuadParams.unchecked(gp(2), gp(1)), Fraction(1)) == 0
    # t = 1+i, u = i has roots 1 and i
    assert compare_small_root_modulus(QuadParams.unchecked(gp(1, 1), gp(0, 1)), Fraction(1)) == 0


def test_eval_ext(lucas):
    assert abs(eval_ext(lucas.alpha(), 64).to_complex() - 0.3819660112501051) < 1e-15
    one = eval_ext(lucas.embed(1), 64)
    assert one.rad == 0 and one.re == 1
    assert abs(eval_ext(lucas.beta(), 64).to_complex() - 2.618033988749895) < 1e-15


def test_certified_round_roots(lucas):
    assert certified_round(lucas.alpha()) == gp(0)
    p = QuadParams.unchecked(gp(2, 2), gp(1))
    assert certified_round(p.beta()) == gp(2, 2)
    assert certified_round(FieldElement.from_int(GAUSSIAN, Fraction(1, 2))) == gp(1)


def test_round_ball_refuses_straddle():
    ball = Ball(Fraction(1, 2), Fraction(0), Fraction(1, 100), 64)
    assert round_ball(ball, GAUSSIAN) is None
    assert round_ball(Ball.exact(Fraction(1, 10)), GAUSSIAN) == gp(0)
    # 0.49 sits inside the Eisenstein cell of 0 (inradius 1/2)
    assert round_ball(Ball(Fraction(49, 100), Fraction(0), Fraction(1, 1000), 64), EISENSTEIN) == ep(0, 0)
    assert round_ball(Ball(Fraction(1, 2), Fraction(0), Fraction(1, 1000), 64), EISENSTEIN) is None


def test_ball_arithmetic_contains_exact():
    x = FieldElement(EISENSTEIN, Fraction(1, 3), Fraction(-2, 7))
    y = FieldElement(EISENSTEIN, Fraction(5), Fraction(1, 9))
    X, Y = Ball.from_field(x, 53), Ball.from_field(y, 53)
    for ball, val in ((X * Y, x * y), (X / Y, x / y), (X - Y, x - y), (X ** 5, x ** 5)):
        assert ball.contains_field(val)


def test_precision_policy():
    assert list(PrecisionPolicy(64, 300).levels()) == [64, 128, 256, 300]
    with pytest.raises(ValueError):
        PrecisionPolicy(128, 64)


def test_policy_env(monkeypatch):
    monkeypatch.setenv("QUADCF_PREC_MAX", "512")
    assert PrecisionPolicy.from_env().max_bits == 512
    assert PrecisionPolicy.from_env(max_bits=1024).max_bits == 1024


def test_ball_json():
    d = Ball.exact(Fraction(1, 3), 0, 64).to_json()
    assert set(d) == {"re", "im", "radius", "bits"}
    assert d["bits"] == 64
