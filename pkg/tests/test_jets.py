import random

import pytest

from carlitz import (
    JetMatrix,
    TruncSeries,
    hyperderiv,
    jet,
    jet_inv,
    jet_mul,
    parse_series,
    spec_for_order,
    verify_iteration,
    verify_leibniz,
    verify_taylor,
)
from carlitz.binomials import binom_pascal_oracle
from carlitz.errors import InsufficientPrecision, NonUnit, ShapeMismatch

from conftest import random_series


def lit(q, text, prec):
    return parse_series(spec_for_order(q), text, prec)


def test_hyperderiv_examples(f2, f3):
    assert hyperderiv(1, TruncSeries.monomial(f3, 2, 4)) == lit(3, "2*t", 3)
    assert hyperderiv(1, TruncSeries.monomial(f2, 2, 4)) == lit(2, "0", 3)
    # C(3,2) = 3 = 1 mod 2, cross-checked against the Pascal oracle
    assert binom_pascal_oracle(3, 2, 2) == 1
    assert hyperderiv(2, TruncSeries.monomial(f2, 3, 5)) == lit(2, "t", 3)


def test_hyperderiv_linearity(f3):
    rng = random.Random(4)
    for _ in range(30):
        f, g = random_series(rng, f3, 10), random_series(rng, f3, 10)
        n = rng.randrange(4)
        c = rng.randrange(3)
        assert hyperderiv(n, f + g) == hyperderiv(n, f) + hyperderiv(n, g)
        assert hyperderiv(n, f.scale(c)) == hyperderiv(n, f).scale(c)


def test_precision_exhausted_flag(f2):
    out = hyperderiv(5, TruncSeries.one(f2, 3))
    assert out.exhausted and out.prec == 1 and out.ranks == (0,)
    assert not hyperderiv(2, TruncSeries.one(f2, 3)).exhausted


def test_jet_basic_shapes(f3):
    f = random_series(random.Random(5), f3, 6)
    j = jet(2, f)
    assert j.k == 2 and j.prec == 4
    assert jet(0, f).rows == (f,)


def test_jet_of_constant(f3):
    j = jet(2, TruncSeries.one(f3, 5))
    assert j.rows[0] == TruncSeries.one(f3, 3)
    assert j.rows[1] == TruncSeries.zero(f3, 3)
    assert j.rows[2] == TruncSeries.zero(f3, 3)


def test_jet_carlitz_action_matrix(f3):
    # the order-1 jet of t - c for a constant c has rows (t - c, 1)
    f = lit(3, "2+t", 3)  # t - 1 with -1 = 2
    j = jet(1, f)
    assert j.rows == (lit(3, "2+t", 2), lit(3, "1", 2))


def test_jet_insufficient_precision(f3):
    with pytest.raises(InsufficientPrecision):
        jet(3, TruncSeries.one(f3, 3))
    with pytest.raises(InsufficientPrecision):
        jet(1, TruncSeries.one(f3, 3), prec=3)


def test_jet_mul_example(f3):
    a = jet(1, TruncSeries.monomial(f3, 1, 4))  # rows (t, 1) at prec 3
    sq = a * a
    assert sq.rows == (lit(3, "t^2", 3), lit(3, "2*t", 3))
    assert sq == jet(1, TruncSeries.monomial(f3, 2, 4))


def test_jet_mul_identity(f4):
    rng = random.Random(6)
    f = random_series(rng, f4, 7)
    a = jet(2, f)
    ident = JetMatrix.identity(f4, 2, a.prec)
    assert jet_mul(a, ident) == a and jet_mul(ident, a) == a


def test_jet_hom_derived_example(f3):
    f, g = lit(3, "1+t", 4), lit(3, "1+2*t", 4)
    lhs = jet(2, f * g)
    rhs = jet_mul(jet(2, f), jet(2, g))
    assert lhs == rhs
    assert lhs.rows == (lit(3, "1", 2), lit(3, "t", 2), lit(3, "2", 2))


def test_jet_mul_shape_mismatch(f2, f3):
    with pytest.raises(ShapeMismatch):
        jet(1, TruncSeries.one(f2, 4)) * jet(2, TruncSeries.one(f2, 5))
    with pytest.raises(ShapeMismatch):
        jet(1, TruncSeries.one(f2, 4)) * jet(1, TruncSeries.one(f3, 4))


def test_jet_inv_matches_series_inverse(f3):
    a = lit(3, "1+t", 5)
    assert jet_inv(jet(1, a)) == jet(1, a.inverse(), prec=4)


def test_jet_inv_identity_and_constant(f3):
    ident = JetMatrix.identity(f3, 2, 4)
    assert jet_inv(ident) == ident
    c = jet(1, lit(3, "2", 4))
    assert jet_inv(c).rows == (lit(3, "2", 3), lit(3, "0", 3))


def test_jet_inv_requires_unit(f2):
    with pytest.raises(NonUnit):
        jet_inv(jet(1, TruncSeries.monomial(f2, 1, 4)))


def test_jet_inv_roundtrip(f4):
    rng = random.Random(7)
    for _ in range(20):
        f = random_series(rng, f4, 8, unit=True)
        a = jet(3, f)
        assert a * a.inverse() == JetMatrix.identity(f4, 3, a.prec)


def test_verify_iteration_char2(f2):
    f = random_series(random.Random(8), f2, 10)
    assert verify_iteration(1, 1, f)  # D1 D1 = C(2,1) D2 = 0
    assert hyperderiv(1, hyperderiv(1, f)) == TruncSeries.zero(f2, 8)


def test_verify_leibniz_with_one(f3):
    rng = random.Random(9)
    for n in range(4):
        f = random_series(rng, f3, 9)
        assert verify_leibniz(n, f, TruncSeries.one(f3, 9))


def test_verify_taylor_polynomial(f3):
    assert verify_taylor(lit(3, "1+t+t^2", 5))


def test_verify_insufficient_precision(f3):
    with pytest.raises(InsufficientPrecision):
        verify_iteration(2, 2, TruncSeries.one(f3, 3))
    with pytest.raises(InsufficientPrecision):
        verify_leibniz(4, TruncSeries.one(f3, 4), TruncSeries.one(f3, 4))


def test_entries_layout(f3):
    f = lit(3, "1+t", 5)
    j = jet(2, f)
    m = j.entries()
    for r in range(3):
        for c in range(3):
            expected = j.rows[c - r] if c >= r else TruncSeries.zero(f3, j.prec)
            assert m[r][c] == expected
