import pytest

from tmotives.ffield import get_field
from tmotives.pseries import PSeries, theta_pow
from tmotives.twistops import NoHead, NotSeparable, TwistOp, apply_to_Tseries, op_mul, to_affine

CTX = get_field(3, 1)


def th(a):
    return theta_pow(CTX, a)


def test_tau_commutation():
    tau = TwistOp.tau(CTX)
    c = TwistOp.scalar(th(1))
    assert op_mul(tau, c) == TwistOp(CTX, {(1, 0): th(3)})
    assert op_mul(c, tau) == TwistOp(CTX, {(1, 0): th(1)})


def test_product_is_associative_and_acts_compatibly():
    u = TwistOp(CTX, {(0, 0): th(1), (1, 1): th(-2)})
    v = TwistOp(CTX, {(0, 0): th(2), (2, 0): th(1)})
    w = TwistOp(CTX, {(1, 0): th(-1), (0, 1): th(3)})
    assert op_mul(op_mul(u, v), w) == op_mul(u, op_mul(v, w))
    xs = [th(1) + th(-1), th(2), th(-3)]
    assert apply_to_Tseries(op_mul(u, v), xs) == apply_to_Tseries(u, apply_to_Tseries(v, xs))


def test_to_affine_reads_head_and_tail():
    op = TwistOp(CTX, {(0, 0): th(2), (2, 0): th(1), (1, 1): th(-1), (0, 2): th(5)})
    eq = to_affine(op)
    assert eq.r == 2 and eq.n == 2
    assert eq.head == (th(2), PSeries.zero(CTX), th(1))
    assert eq.tail == {(1, 1): th(-1), (2, 0): th(5)}
    assert eq.to_op() == op
    with pytest.raises(NotSeparable):
        to_affine(TwistOp(CTX, {(1, 0): th(1)}))
    with pytest.raises(NoHead):
        to_affine(TwistOp(CTX, {(0, 1): th(1)}))


def test_embed_moves_to_larger_field():
    big = get_field(3, 2)
    op = TwistOp(CTX, {(1, 0): th(1)}).embed(big)
    assert op.ctx == big
    xs = [theta_pow(big, 1)]
    assert apply_to_Tseries(TwistOp(CTX, {(1, 0): th(1)}), xs) == apply_to_Tseries(op, xs)
