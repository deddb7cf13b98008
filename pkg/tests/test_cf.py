from fractions import Fraction

import pytest

from quadcf.cf import (
    CFWord,
    Root,
    detect_periodicity,
    eval_cf,
    hurwitz_expand,
    illegal_partials,
    nearest_integer_cf,
    predicted_expansion,
    symmetric_simple_cf,
)
from quadcf.errors import DomainError, ZeroDenominator
from quadcf.exactfield import FieldElement, QuadParams
from quadcf.lattice import EISENSTEIN, GAUSSIAN

from conftest import ep, gp


def ints(word):
    return [int(a.x) if hasattr(a, "kind") else a for a in word.terms]


def test_eval_rational_words():
    assert eval_cf(CFWord(0, (3, -3, 3))) == Fraction(8, 21)
    assert eval_cf(CFWord(0, (2, 1, 1, 1, 2))) == Fraction(8, 21)
    assert eval_cf(CFWord(7)) == 7


def test_eval_zero_denominator():
    with pytest.raises(ZeroDenominator):
        eval_cf(CFWord(0, (0,)))


def test_expand_lucas(lucas):
    assert ints(hurwitz_expand(lucas.alpha(), 6)) == [0, 3, -3, 3, -3, 3, -3]
    assert ints(hurwitz_expand(lucas.beta(), 4)) == [3, -3, 3, -3, 3]


def test_expand_rational_terminates():
    z = FieldElement.from_int(GAUSSIAN, Fraction(8, 21))
    word = hurwitz_expand(z, 50)
    assert word.terminated
    assert eval_cf(word) == z


def test_expand_eisenstein():
    p = QuadParams.unchecked(ep(3, 3), ep(1, 1))
    word = hurwitz_expand(p.alpha(), 4)
    assert word == predicted_expansion(p, Root.ALPHA, 4)
    assert word.partials[0] == ep(3, 3)


def test_predicted_gaussian_unit_i():
    p = QuadParams.unchecked(gp(2, 2), gp(0, 1))
    w = predicted_expansion(p, Root.ALPHA, 3)
    assert list(w.partials) == [gp(2, -2), gp(-2, -2), gp(2, -2)]
    assert hurwitz_expand(p.alpha(), 3) == w


def test_predicted_minus_one_has_period_one():
    p = QuadParams.unchecked(gp(5), gp(-1))
    w = predicted_expansion(p, Root.ALPHA, 8)
    assert set(w.partials) == {gp(-5)}
    rep = detect_periodicity(hurwitz_expand(p.alpha(), 8))
    assert (rep.preperiod_length, rep.period_length) == (1, 1)


@pytest.mark.parametrize("seq,pre,per", [
    ([0, 3, -3, 3, -3, 3, -3], 1, 2),
    ([5, -5, -5, -5], 1, 1),
    ([2, 2, 2, 2, 2], 0, 1),
])
def test_periodicity(seq, pre, per):
    rep = detect_periodicity(seq)
    assert (rep.preperiod_length, rep.period_length) == (pre, per)


def test_periodicity_none_when_no_fit():
    assert detect_periodicity([1, 2, 3, 4, 5, 6]) is None


def test_symmetric_simple_cf():
    w = symmetric_simple_cf(3, 1)
    assert ints(w) == [0, 2, 1, 1, 1, 2] and len(w) == 5
    assert ints(symmetric_simple_cf(4, 1)) == [0, 3, 1, 2, 1, 3]
    w = symmetric_simple_cf(3, 2)
    assert len(w) == 13
    assert eval_cf(w) == Fraction(1, 3) + Fraction(1, 21) + Fraction(1, 987)
    with pytest.raises(DomainError):
        symmetric_simple_cf(2, 1)


def test_nearest_integer_specialization():
    for x in (Fraction(355, 113), Fraction(-17, 6), Fraction(5, 2), Fraction(1, 2)):
        word = hurwitz_expand(FieldElement.from_int(GAUSSIAN, x), 100)
        assert ints(word) == nearest_integer_cf(x)


def test_illegal_partials():
    assert illegal_partials(CFWord(gp(0), (gp(3), gp(1), gp(0, 1), gp(0)))) == [2, 3, 4]


def test_word_json(lucas):
    d = hurwitz_expand(lucas.alpha(), 2).to_json()
    assert set(d) == {"a0", "partials", "terminated"}
    assert len(d["partials"]) == 2
