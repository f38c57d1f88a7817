import random
from fractions import Fraction

import pytest

from tmotives.affine import SolverConfig
from tmotives.catalog import example
from tmotives.ffield import get_field
from tmotives.pseries import PrecisionExhausted, PSeries, theta_pow
from tmotives.tmotive import (
    DualUnavailable, TMotiveSpec, build_q, check_quadruple, closed_form_n2, dual_spec, eliminate_n2,
    eliminate_std1, factorized_n2, homology, n2_operator, pairing_rank, poly_rank, random_specs, sweep_one,
    xi_residual, xi_series,
)
from tmotives.twistops import TwistOp, to_affine

F = Fraction


def random_rank2(rng, q):
    ctx = get_field(q, 1)
    entry = lambda: sum((theta_pow(ctx, rng.randint(-4, 4)).scale(ctx(rng.randint(1, q - 1)))
                         for _ in range(rng.randint(1, 2))), PSeries.zero(ctx))
    A = [[entry() for _ in range(2)] for _ in range(2)]
    while A[1][0].is_zero():
        A[1][0] = entry()
    return TMotiveSpec.rank2(A, rng.randint(0, 1))


@pytest.mark.parametrize("seed", range(12))
def test_elimination_matches_closed_form_and_factorization(seed):
    rng = random.Random(seed)
    spec = random_rank2(rng, rng.choice([2, 3]))
    eq, closed = eliminate_n2(spec), closed_form_n2(spec)
    assert len(eq.head) == len(closed.head)
    assert all(a.agrees_with(b) for a, b in zip(eq.head, closed.head))
    zero = PSeries.zero(spec.ctx)
    for key in set(eq.tail) | set(closed.tail):
        assert eq.tail.get(key, zero).agrees_with(closed.tail.get(key, zero))
    # the factorized form differs from the elimination by epsilon * tau^3 only
    eps = PSeries.const(spec.ctx, spec.ctx(spec.epsilon))
    diff = factorized_n2(spec) - n2_operator(spec) - TwistOp(spec.ctx, {(3, 0): eps})
    assert diff.agrees_with(TwistOp(spec.ctx))


def test_dual_is_transpose():
    spec = example("counterexample")
    assert dual_spec(spec) == example("counterexample-transpose")
    with pytest.raises(DualUnavailable):
        dual_spec(example("nilpotent-q3"))
    with pytest.raises(DualUnavailable):
        homology(example("rank5"))


def test_q_matrix_shape():
    Q = build_q(example("nilpotent-q3"))
    assert len(Q) == 4 and all(len(row) == 4 for row in Q)
    assert len(build_q(example("rank5"))) == 5


def test_rank5_elimination():
    spec = example("rank5")
    eq = eliminate_std1(spec)
    assert (eq.r, eq.n) == (5, 2)
    assert (eq.head[0] + spec.p("a12").inverse(eq.head[0].prec)).is_zero()


@pytest.mark.parametrize("q", [2, 3])
def test_xi_series(q):
    xi = xi_series(q, 32)
    assert xi[0].ord() == F(1, q - 1)
    assert all(c.is_zero() and c.prec >= 32 for c in xi_residual(xi))


def test_xi_series_reports_low_precision():
    with pytest.raises(PrecisionExhausted):
        xi_series(2, 32, SolverConfig(prec=F(4)))


def test_solution_vectors_have_zero_residual(results):
    for kind, name, eps in [("h1", "nilpotent-q3", 1), ("homology", "nilpotent-q3", 1),
                            ("homology", "counterexample", None)]:
        res = results(kind, name, eps)
        Q = build_q(example(name, eps))
        assert res.vectors
        assert all(v.residual_vanishes(Q) for v in res.vectors)
        assert res.residual_ok


def test_pairing_of_uniformizable_example(results):
    pr = pairing_rank(results("h1", "nilpotent-q3", 1).vectors, results("homology", "nilpotent-q3", 1).vectors)
    assert pr.shape == (4, 4)
    assert pr.decisive and pr.rank == 4 and pr.at_zero_rank == 4
    data = pr.to_data()
    assert data["rank"] == [4, 4] and data["rank_at_T0"] == [4, 4]


def test_poly_rank():
    ctx = get_field(2, 1)
    one, zero = ctx.one, ctx.zero
    # [[1, T], [T, T^2]] has rank 1; [[1, T], [0, 1]] rank 2
    assert poly_rank([[[one], [zero, one]], [[zero, one], [zero, zero, one]]]) == 1
    assert poly_rank([[[one], [zero, one]], [[], [one]]]) == 2


def test_check_quadruple():
    assert check_quadruple((4, 0, 1, 0)) == []
    assert check_quadruple((4, 4, 4, 4)) == []
    assert check_quadruple((4, 4, 3, 3)) == ["uniformizable motives have h^1 = h_1 = rank = r"]
    assert "rank >= h^1 + h_1 - r" in check_quadruple((4, 3, 3, 1))
    assert "h^1 >= rank >= 0" in check_quadruple((4, 1, 2, 2))


def test_random_specs_are_deterministic():
    a = random_specs(11, 5)
    assert a == random_specs(11, 5)
    assert all(not s.a(1, 2).is_zero() and not s.a(2, 1).is_zero() for s in a)


def test_sweep_record_of_counterexample():
    rec = sweep_one(example("counterexample"))
    assert rec["quadruple"] == [4, 0, 1, 0]
    assert rec["violations"] == [] and rec["decisive"] and rec["residuals_ok"]


def test_sweep_record_of_transpose_is_dual():
    rec = sweep_one(example("counterexample-transpose"))
    assert rec["quadruple"] == [4, 1, 0, 0]


def test_to_affine_of_rank2_operator():
    spec = example("counterexample")
    assert to_affine(n2_operator(spec)) == eliminate_n2(spec)
