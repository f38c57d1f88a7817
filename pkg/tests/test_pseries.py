from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tmotives.ffield import get_field
from tmotives.pseries import INF, PrecisionExhausted, PSeries, ZeroSeries, theta_pow

F = Fraction
FIELDS = [get_field(2, 1), get_field(2, 2), get_field(3, 1), get_field(3, 2)]


def test_ord_and_rendering():
    ctx = get_field(2, 1)
    s = theta_pow(ctx, 2) + theta_pow(ctx, F(-1, 2))
    assert s.ord() == -2
    assert str(s) == "θ^2 + θ^-1/2"
    assert PSeries.zero(ctx).ord() == INF
    with pytest.raises(ZeroSeries):
        PSeries.zero(ctx).leading()


def test_precision_is_tracked():
    ctx = get_field(3, 1)
    a = PSeries(ctx, [(0, 1), (1, 1)], prec=3)
    b = theta_pow(ctx, 1)
    assert (a * b).prec == 2
    assert (a + b).prec == 3
    with pytest.raises(PrecisionExhausted):
        a.coeff(5)


def test_inverse():
    ctx = get_field(3, 1)
    a = theta_pow(ctx, 2) + theta_pow(ctx, 1)
    inv = a.inverse(20)
    prod = a * inv
    assert (prod - PSeries.const(ctx, ctx.one)).is_zero()
    assert prod.prec >= 18


@st.composite
def series(draw, ctx):
    n = draw(st.integers(0, 5))
    terms = [(draw(st.fractions(-6, 6, max_denominator=4)), ctx.from_int(draw(st.integers(1, ctx.order - 1))))
             for _ in range(n)]
    prec = draw(st.one_of(st.just(INF), st.fractions(7, 12, max_denominator=3)))
    return PSeries(ctx, terms, prec)


@st.composite
def series_pair(draw):
    ctx = draw(st.sampled_from(FIELDS))
    return ctx, draw(series(ctx)), draw(series(ctx)), draw(st.integers(-2, 2))


@settings(max_examples=1000, deadline=None)
@given(series_pair())
def test_frobenius_morphism_and_ultrametric(data):
    ctx, a, b, k = data
    fa, fb = a.frob(k), b.frob(k)
    # ring morphism
    assert (a + b).frob(k) == fa + fb
    assert (a * b).frob(k) == fa * fb
    assert fa.frob(-k) == a
    # valuations scale by q^k
    if not a.is_zero():
        assert fa.ord() == a.ord() * F(ctx.q) ** k
    # ultrametric laws
    s = a + b
    if not s.is_zero():
        assert s.ord() >= min(a.ord(), b.ord())
        if a.ord() != b.ord():
            assert s.ord() == min(a.ord(), b.ord())
    p = a * b
    if not a.is_zero() and not b.is_zero() and a.ord() + b.ord() < p.prec:
        assert p.ord() == a.ord() + b.ord()
    # additive inverse and commutativity
    assert (a - a).is_zero()
    assert a * b == b * a
