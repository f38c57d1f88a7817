import itertools

import pytest

from tmotives.ffield import (
    CtxMismatch, NoSolutionInField, embed, escalation_degrees, fq_rank, get_field, prime_power, solve_additive,
)


@pytest.mark.parametrize("q,m", [(2, 1), (2, 3), (3, 2), (4, 2), (9, 1)])
def test_field_axioms(q, m):
    ctx = get_field(q, m)
    els = list(ctx.elements())
    assert len(els) == q ** m
    sample = els[: min(len(els), 12)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c
    for a in els:
        assert a + (-a) == ctx.zero
        if a:
            assert a * a.inverse() == ctx.one


@pytest.mark.parametrize("q,m", [(2, 4), (3, 3), (4, 2)])
def test_frobenius(q, m):
    ctx = get_field(q, m)
    for a in ctx.elements():
        assert a.frobenius() == a ** q
        assert a.frobenius(m) == a
        assert a.frobenius(1).frobenius(-1) == a
    assert len(ctx.fq_elements()) == q


def test_prime_power():
    assert prime_power(9) == (3, 2)
    with pytest.raises(ValueError):
        prime_power(6)


def test_solve_additive_and_kernel():
    ctx = get_field(2, 4)
    one = ctx.one
    # z^2 + z = rhs: solvable iff the trace vanishes; kernel F_2
    for rhs in ctx.elements():
        try:
            z, kernel = solve_additive({0: one, 1: one}, rhs)
        except NoSolutionInField:
            assert all(x * x + x != rhs for x in ctx.elements())
            continue
        assert z * z + z == rhs
        assert kernel == [one]


def test_embed_is_a_ring_morphism():
    small, big = get_field(2, 2), get_field(2, 4)
    for a in small.elements():
        for b in small.elements():
            assert embed(a + b, big) == embed(a, big) + embed(b, big)
            assert embed(a * b, big) == embed(a, big) * embed(b, big)
    with pytest.raises(CtxMismatch):
        embed(get_field(2, 3).one, big)


def test_fq_rank_and_escalation():
    ctx = get_field(2, 3)
    els = list(ctx.elements())
    assert fq_rank(els) == 3
    assert fq_rank([els[1], els[1]]) == 1
    assert escalation_degrees(1, 4) == [2, 3, 4]
