from fractions import Fraction

import pytest

from quadcf.errors import NotAdmissible
from quadcf.exactfield import FieldElement, QuadExtElement, QuadParams, minimal_polynomial_check
from quadcf.lattice import EISENSTEIN, GAUSSIAN, LatticePoint, Level

from conftest import ep, gp


def fe(kind, x, y=0):
    return FieldElement(kind, Fraction(x), Fraction(y))


def test_gaussian_square_of_i():
    i = fe(GAUSSIAN, 0, 1)
    assert i * i == -1


def test_eisenstein_units():
    b = FieldElement.from_lattice(ep(1, 0))
    assert b * b.conj() == 1
    assert b ** 6 == 1
    assert b ** -1 == b.conj()


def test_inverse_and_division():
    z = fe(GAUSSIAN, Fraction(3, 2), -2)
    assert z * z.inv() == 1
    assert (z / z) == 1
    with pytest.raises(ZeroDivisionError):
        FieldElement.zero(GAUSSIAN).inv()


def test_field_sqrt():
    assert fe(GAUSSIAN, -1).sqrt() == fe(GAUSSIAN, 0, 1)
    r = fe(GAUSSIAN, 0, 2).sqrt()
    assert r * r == fe(GAUSSIAN, 0, 2)
    assert fe(GAUSSIAN, 5).sqrt() is None
    w = FieldElement.from_int(EISENSTEIN, -3)
    s = w.sqrt()
    assert s == FieldElement.from_lattice(ep(1, -1))
    assert FieldElement.from_lattice(ep(-3, 0)).sqrt() is None


def test_to_lattice_only_for_integral():
    assert fe(GAUSSIAN, 2, -1).to_lattice() == gp(2, -1)
    with pytest.raises(ValueError):
        fe(GAUSSIAN, Fraction(1, 2)).to_lattice()


def test_roots_sum_and_product(lucas):
    a, b = lucas.alpha(), lucas.beta()
    assert a * b == lucas.embed(lucas.uf)
    assert a + b == lucas.embed(lucas.tf)


def test_extension_inverse(lucas):
    a = lucas.alpha()
    inv = a.inv()
    # (t - alpha)/u: a = t/u, b = -1/u
    assert inv == QuadExtElement(lucas, lucas.tf / lucas.uf, -1 / lucas.uf)
    assert a * inv == lucas.embed(1)


def test_extension_inverse_eisenstein():
    p = QuadParams.unchecked(ep(3, 1), ep(1, 0))
    x = p.embed(FieldElement(EISENSTEIN, Fraction(1, 3), Fraction(2))) + p.alpha() * 5
    assert x * x.inv() == p.embed(1)


@pytest.mark.parametrize("t,u,expected", [
    (gp(3), gp(1), True),
    (gp(2), gp(1), False),
    (gp(1, 1), gp(0, 1), False),
])
def test_minimal_polynomial(t, u, expected):
    assert minimal_polynomial_check(QuadParams.unchecked(t, u)) is expected


def test_admissibility_names_the_set():
    with pytest.raises(NotAdmissible, match="G2"):
        QuadParams.admissible_L2(gp(2), gp(1))
    with pytest.raises(NotAdmissible, match="E3"):
        QuadParams.admissible_L3(ep(2, 2), ep(1, 1))
    QuadParams.admissible(gp(2), gp(-1), Level.L2)


def test_unit_required():
    with pytest.raises(ValueError):
        QuadParams.unchecked(gp(3), gp(2))


def test_json_round_trip():
    z = fe(GAUSSIAN, Fraction(-3, 7), Fraction(5, 2))
    d = z.to_json()
    assert d["x"] == "-3/7"
    assert FieldElement.from_json(d) == z
