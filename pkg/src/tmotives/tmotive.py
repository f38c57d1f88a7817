"""T-motive families, their eliminations to affine equations, duality and pairings.

Two families are implemented:

* ``rank2``: ``T e = (theta I_n + N) e + A tau e + tau^2 e`` with ``N = eps * N0``
  (``N0`` the single superdiagonal nilpotent, ``n = 2`` when ``eps = 1``);
  rank ``2n``.
* ``standard1``: the rank 5, dimension 2 motive
  ``T e = theta e + [[a11, a12], [a21, a22]] tau e + [[b1, 0], [b2, 1]] tau^2 e
  + [[1, 0], [0, 0]] tau^3 e`` with f-basis ``(e1, e2, tau e1, tau e2, tau^2 e1)``.

Row solutions ``Y`` satisfy ``Y^(1) Q = Y``; column solutions ``X`` satisfy
``Q X = X^(1)``.  Entries of ``Q`` are polynomials in ``T`` stored as
:class:`~tmotives.twistops.TwistOp` of tau-degree 0, so that ``Q_ij * tau``
acting on a T-series is ``y_i^(1) Q_ij``.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .affine import AffineEq, SolverConfig, minimal_chain, s0_basis
from .affine.certificate import SMALL
from .affine.combination import DimensionResult, dimension
from .ffield import FFElem, FieldCtx, get_field, solve_additive
from .pseries import PSeries, PrecisionExhausted, theta_pow
from .tseries import common_field, embed_all, tfrob, tinverse, tmul
from .twistops import TwistOp, apply_to_Tseries, to_affine
from .valuation import INF, fmt

log = logging.getLogger(__name__)

__all__ = [
    "TMotiveSpec", "SolutionVector", "H1Result", "PairingResult",
    "ZeroPivot", "DualUnavailable", "FqViolation", "SpecError",
    "build_q", "n2_operator", "eliminate_n2", "closed_form_n2", "factorized_n2",
    "std1_operator", "eliminate_std1", "dual_spec", "column_operator_n2",
    "h1", "h1_dual", "h1_columns", "homology", "back_substitute", "columns_from_chain",
    "xi_series", "dual_map_X", "pairing_matrix", "pairing_rank",
    "check_quadruple", "random_specs", "sweep", "sweep_one", "xi_residual", "xi_equation",
]

RANK2, STANDARD1 = "rank2", "standard1"
STD1_PARAMS = ("a11", "a12", "a21", "a22", "b1", "b2")


class ZeroPivot(ArithmeticError):
    """The elimination divides by a matrix entry that vanishes."""


class DualUnavailable(ValueError):
    """The transpose description of the dual needs ``N = 0``."""


class FqViolation(ArithmeticError):
    """A pairing coefficient is not an element of ``F_q`` to the known precision."""


class SpecError(ValueError):
    """The t-motive description violates a standing assumption."""


# -- specs --------------------------------------------------------------------

@dataclass(frozen=True)
class TMotiveSpec:
    family: str
    q: int
    n: int
    A: tuple = ()
    epsilon: int = 0
    params: tuple = ()  # standard1: ((name, PSeries), ...)

    def __post_init__(self):
        if self.family == RANK2:
            if len(self.A) != self.n or any(len(row) != self.n for row in self.A):
                raise SpecError(f"A must be {self.n}x{self.n}")
            if self.epsilon not in (0, 1):
                raise SpecError("epsilon must be 0 or 1")
            if self.epsilon and self.n != 2:
                raise SpecError("a nonzero nilpotent part is implemented for n = 2 only")
        elif self.family == STANDARD1:
            if self.n != 2 or sorted(dict(self.params)) != sorted(STD1_PARAMS):
                raise SpecError(f"standard1 needs n = 2 and parameters {', '.join(STD1_PARAMS)}")
        else:
            raise SpecError(f"unknown family {self.family!r}")
        if self.ctx.q != self.q:
            raise SpecError("coefficient field does not match q")

    @classmethod
    def rank2(cls, A, epsilon: int = 0) -> "TMotiveSpec":
        A = tuple(tuple(row) for row in A)
        return cls(RANK2, A[0][0].ctx.q, len(A), A, epsilon)

    @classmethod
    def standard1(cls, **params) -> "TMotiveSpec":
        ctx = next(iter(params.values())).ctx
        return cls(STANDARD1, ctx.q, 2, params=tuple(sorted(params.items())))

    @property
    def ctx(self) -> FieldCtx:
        return self.A[0][0].ctx if self.family == RANK2 else self.params[0][1].ctx

    @property
    def r(self) -> int:
        return 2 * self.n if self.family == RANK2 else 5

    def p(self, name: str) -> PSeries:
        return dict(self.params)[name]

    def a(self, i: int, j: int) -> PSeries:
        """Entry ``a_ij`` (1-based) of ``A``."""
        return self.A[i - 1][j - 1] if self.family == RANK2 else self.p(f"a{i}{j}")


def _const(ctx, c) -> TwistOp:
    return TwistOp.scalar(c if isinstance(c, PSeries) else PSeries.const(ctx, ctx(c)))


def _T_minus(ctx, power_of_theta) -> TwistOp:
    """``T - theta^k``."""
    return TwistOp.T(ctx) - _const(ctx, theta_pow(ctx, power_of_theta))


def build_q(spec: TMotiveSpec) -> list[list[TwistOp]]:
    ctx = spec.ctx
    zero = TwistOp(ctx)
    one = TwistOp.one(ctx)
    if spec.family == RANK2:
        n = spec.n
        Q = [[zero] * (2 * n) for _ in range(2 * n)]
        for k in range(n):
            Q[k][n + k] = one
            Q[n + k][k] = _T_minus(ctx, 1)
            for j in range(n):
                Q[n + k][n + j] = -_const(ctx, spec.A[k][j])
        if spec.epsilon:
            Q[n][1] = Q[n][1] - one
        return Q
    a = spec.p
    Q = [[zero] * 5 for _ in range(5)]
    for k in range(3):
        Q[k][2 + k] = one
    Q[3][1] = _T_minus(ctx, 1)
    Q[4][0] = _T_minus(ctx, 1)
    Q[3][2], Q[3][3], Q[3][4] = (-_const(ctx, a("a21")), -_const(ctx, a("a22")), -_const(ctx, a("b2")))
    Q[4][2], Q[4][3], Q[4][4] = (-_const(ctx, a("a11")), -_const(ctx, a("a12")), -_const(ctx, a("b1")))
    return Q


# -- eliminations ----------------------------------------------------------------

def _inv(x: PSeries) -> PSeries:
    if x.is_zero():
        raise ZeroPivot("pivot entry vanishes")
    return x.inverse(INF) if x.is_exact() and len(x.terms) == 1 else x.inverse(-x.ord() + 256)


def _y22_operator(spec: TMotiveSpec) -> TwistOp:
    """``E`` with ``y22^(1) = E(y21)``, from the first column of the block equation."""
    ctx, q = spec.ctx, spec.q
    if spec.a(2, 1).is_zero():
        raise ZeroPivot("a21 = 0: this elimination is unavailable")
    inv = _inv(spec.a(2, 1))
    tau = TwistOp.tau(ctx)
    return (-_const(ctx, inv) - _const(ctx, spec.a(1, 1) * inv) * tau
            + _T_minus(ctx, q) * _const(ctx, inv) * TwistOp.tau(ctx, 2))


def n2_operator(spec: TMotiveSpec) -> TwistOp:
    """Operator ``P`` in ``y21`` obtained by eliminating ``y22`` (and ``y1``) from ``Y^(1) Q = Y``."""
    if spec.family != RANK2 or spec.n != 2:
        raise SpecError("the n = 2 elimination needs the rank2 family with n = 2")
    ctx, q = spec.ctx, spec.q
    E = _y22_operator(spec)
    tau = TwistOp.tau(ctx)
    return (_T_minus(ctx, q ** 2) * TwistOp.tau(ctx, 2) * E
            - _const(ctx, spec.a(2, 2).frob(1)) * tau * E
            - E
            - _const(ctx, PSeries.const(ctx, ctx(spec.epsilon))) * TwistOp.tau(ctx, 3)
            - _const(ctx, spec.a(1, 2).frob(1)) * TwistOp.tau(ctx, 2))


def eliminate_n2(spec: TMotiveSpec) -> AffineEq:
    return to_affine(n2_operator(spec))


def closed_form_n2(spec: TMotiveSpec) -> AffineEq:
    """The coefficient table of the n = 2 elimination written out in closed form."""
    ctx, q = spec.ctx, spec.q
    a11, a12, a21, a22 = (spec.a(i, j) for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)))
    if a21.is_zero():
        raise ZeroPivot("a21 = 0")
    th = lambda k: theta_pow(ctx, k)
    i1, iq, iq2 = _inv(a21), _inv(a21.frob(1)), _inv(a21.frob(2))
    eps = PSeries.const(ctx, ctx(spec.epsilon))
    mixed = a11.frob(2) * iq2 + a22.frob(1) * iq
    head = [
        i1,
        a11 * i1 + a22.frob(1) * iq,
        th(q) * i1 + th(q ** 2) * iq2 + a11.frob(1) * a22.frob(1) * iq - a12.frob(1),
        mixed * th(q ** 2) - eps,
        th(q ** 3 + q ** 2) * iq2,
    ]
    tail = {
        (1, 4): -((th(q ** 3) + th(q ** 2)) * iq2),
        (1, 3): -mixed,
        (1, 2): -(i1 + iq2),
        (2, 4): iq2,
    }
    return AffineEq(q, head, tail)


def factorized_n2(spec: TMotiveSpec) -> TwistOp:
    """``L * R - a12^q tau^2`` with ``L = theta^(q^2) tau^2 + a22^q tau + 1 - tau^2 T`` and
    ``R = a21^-1 (theta^q tau^2 + a11 tau + 1 - tau^2 T)``."""
    ctx, q = spec.ctx, spec.q
    tau, tau2, T, one = TwistOp.tau(ctx), TwistOp.tau(ctx, 2), TwistOp.T(ctx), TwistOp.one(ctx)
    L = _const(ctx, theta_pow(ctx, q ** 2)) * tau2 + _const(ctx, spec.a(2, 2).frob(1)) * tau + one - tau2 * T
    R = _const(ctx, _inv(spec.a(2, 1))) * (
        _const(ctx, theta_pow(ctx, q)) * tau2 + _const(ctx, spec.a(1, 1)) * tau + one - tau2 * T)
    return L * R - _const(ctx, spec.a(1, 2).frob(1)) * tau2


def _y5_operator(spec: TMotiveSpec) -> TwistOp:
    """``F`` with ``y5^(1) = F(y4)`` for the standard1 family."""
    ctx, q = spec.ctx, spec.q
    a12 = spec.p("a12")
    if a12.is_zero():
        raise ZeroPivot("a12 = 0: this elimination is unavailable")
    inv = _inv(a12)
    return (-_const(ctx, inv) - _const(ctx, spec.p("a22") * inv) * TwistOp.tau(ctx)
            + _T_minus(ctx, q) * _const(ctx, inv) * TwistOp.tau(ctx, 2))


def std1_operator(spec: TMotiveSpec) -> TwistOp:
    """Operator in ``y4`` for the standard1 family (``y5`` eliminated)."""
    if spec.family != STANDARD1:
        raise SpecError("not a standard1 spec")
    ctx, q = spec.ctx, spec.q
    F = _y5_operator(spec)
    tau = lambda k: TwistOp.tau(ctx, k)
    c = lambda name, k: _const(ctx, spec.p(name).frob(k))
    return (F + c("b1", 1) * tau(1) * F + c("a11", 2) * tau(2) * F
            - _T_minus(ctx, q ** 3) * tau(3) * F + c("b2", 1) * tau(2) + c("a21", 2) * tau(3))


def eliminate_std1(spec: TMotiveSpec) -> AffineEq:
    return to_affine(std1_operator(spec))


def dual_spec(spec: TMotiveSpec) -> TMotiveSpec:
    """``M(A)' = M(A^t)``, valid when the nilpotent part vanishes."""
    if spec.family != RANK2:
        raise DualUnavailable("duality is implemented for the rank2 family only")
    if spec.epsilon:
        raise DualUnavailable("the transpose description of the dual needs N = 0")
    At = tuple(tuple(spec.A[j][i] for j in range(spec.n)) for i in range(spec.n))
    return TMotiveSpec(RANK2, spec.q, spec.n, At, 0)


def _v_operator(spec: TMotiveSpec) -> TwistOp:
    """``G`` with ``u^(1) = G(v)`` for columns ``X = (u, v, u^(1), v^(1))``."""
    ctx = spec.ctx
    if spec.a(2, 1).is_zero():
        raise ZeroPivot("a21 = 0")
    inv = _inv(spec.a(2, 1))
    return (_T_minus(ctx, 1) * _const(ctx, inv) - _const(ctx, spec.a(2, 2) * inv) * TwistOp.tau(ctx)
            - _const(ctx, inv) * TwistOp.tau(ctx, 2))


def column_operator_n2(spec: TMotiveSpec) -> TwistOp:
    """Operator in ``v`` for column solutions ``Q X = X^(1)`` of the n = 2 rank2 family."""
    if spec.family != RANK2 or spec.n != 2:
        raise SpecError("column elimination needs the rank2 family with n = 2")
    ctx, q = spec.ctx, spec.q
    G = _v_operator(spec)
    tau = TwistOp.tau(ctx)
    eps = _const(ctx, PSeries.const(ctx, ctx(spec.epsilon)))
    return (_T_minus(ctx, q) * G - eps * tau - _const(ctx, spec.a(1, 1).frob(1)) * tau * G
            - _const(ctx, spec.a(1, 2).frob(1)) * TwistOp.tau(ctx, 2) - TwistOp.tau(ctx, 2) * G)


# -- solution vectors ------------------------------------------------------------

@dataclass
class SolutionVector:
    components: list  # list of T-series (lists of PSeries), all of one length
    orientation: str  # "row" or "col"

    @property
    def length(self) -> int:
        return min(len(c) for c in self.components)

    @property
    def ctx(self) -> FieldCtx:
        return self.components[0][0].ctx

    def embed(self, big: FieldCtx) -> "SolutionVector":
        return SolutionVector([embed_all(c, big) for c in self.components], self.orientation)

    def residual(self, Q) -> list[list[PSeries]]:
        """``Y^(1) Q - Y`` for rows, ``Q X - X^(1)`` for columns."""
        L = self.length
        ctx = self.ctx
        Q = [[e.embed(ctx) for e in row] for row in Q]
        r = len(self.components)
        tau = TwistOp.tau(ctx)
        out = []
        for j in range(r):
            acc = [PSeries.zero(ctx)] * L
            for i in range(r):
                if self.orientation == "row":
                    op, src = Q[i][j] * tau, self.components[i]
                else:
                    op, src = Q[j][i], self.components[i]
                if op.terms:
                    acc = [a + b for a, b in zip(acc, apply_to_Tseries(op, src, L))]
            own = apply_to_Tseries(tau, self.components[j], L) if self.orientation == "col" else self.components[j][:L]
            out.append([a - b for a, b in zip(acc, own)])
        return out

    def residual_vanishes(self, Q) -> bool:
        return all(c.is_zero() for comp in self.residual(Q) for c in comp)

    def ord_table(self) -> list[list[str]]:
        return [[_ord_text(c) for c in comp] for comp in self.components]


def _ord_text(c: PSeries) -> str:
    """Valuation, or a lower bound ``>=prec`` for a coefficient that vanishes to its precision."""
    if c.is_zero() and not c.is_exact():
        return f">={fmt(c.prec)}"
    return fmt(c.ord())


def back_substitute(spec: TMotiveSpec, y21: Sequence[PSeries]) -> SolutionVector:
    """Full row ``Y = (y11, y12, y21, y22)`` from a solution ``y21`` of the eliminated equation."""
    ctx = y21[0].ctx
    L = len(y21)
    if all(c.is_zero() and c.is_exact() for c in y21):
        zero = [PSeries.zero(ctx)] * L
        return SolutionVector([zero] * 4, "row")
    E = _y22_operator(spec).embed(ctx)
    tau = TwistOp.tau(ctx)
    Ey = apply_to_Tseries(E, y21, L)  # coefficients of y22^(1)
    y22 = tfrob(Ey, -1)
    Tm = _T_minus(spec.ctx, 1).embed(ctx)
    eps = PSeries.const(ctx, ctx(spec.epsilon))
    y11 = apply_to_Tseries(Tm * tau, y21, L)
    y12 = [a - eps * b for a, b in zip(apply_to_Tseries(Tm * E, y21, L), apply_to_Tseries(tau, y21, L))]
    return SolutionVector([y11, y12, list(y21), y22], "row")


def columns_from_chain(spec: TMotiveSpec, v: Sequence[PSeries]) -> SolutionVector:
    """Full column ``X = (u, v, u^(1), v^(1))`` from a solution ``v`` of the column equation."""
    ctx = v[0].ctx
    L = len(v)
    G = _v_operator(spec).embed(ctx)
    u1 = apply_to_Tseries(G, v, L)
    u = tfrob(u1, -1)
    v1 = tfrob(v, 1)
    return SolutionVector([u, list(v), u1, v1], "col")


# -- dimensions ----------------------------------------------------------------------

@dataclass
class H1Result:
    spec: TMotiveSpec
    eq: AffineEq
    dim: DimensionResult
    vectors: list = field(default_factory=list)  # SolutionVector per small chain
    residual_ok: bool = True
    note: str = ""

    @property
    def interval(self) -> tuple[int, int]:
        return self.dim.lower, self.dim.upper

    @property
    def decisive(self) -> bool:
        return self.dim.decisive


def _small_series(res: DimensionResult) -> list[list[PSeries]]:
    return [c.coeffs for c, v in zip(res.chains, res.verdicts) if v.status == SMALL]


def h1(spec: TMotiveSpec, depth: int = 24, cfg: SolverConfig = SolverConfig()) -> H1Result:
    """Dimension of the small row solutions, with back-substituted vectors as a check."""
    if spec.family == RANK2:
        eq = eliminate_n2(spec)
    else:
        eq = eliminate_std1(spec)
    res = dimension(eq, depth, cfg)
    out = H1Result(spec, eq, res)
    if spec.family == RANK2:
        Q = build_q(spec)
        for coeffs in _small_series(res):
            Y = back_substitute(spec, coeffs)
            out.vectors.append(Y)
            out.residual_ok &= Y.residual_vanishes(Q)
    return out


def h1_dual(spec: TMotiveSpec, depth: int = 24, cfg: SolverConfig = SolverConfig()) -> H1Result:
    """``h_1`` of the motive as ``h^1`` of its dual."""
    return h1(dual_spec(spec), depth, cfg)


def h1_columns(spec: TMotiveSpec, depth: int = 24, cfg: SolverConfig = SolverConfig()) -> H1Result:
    """Small column solutions ``Q X = X^(1)`` found by eliminating ``u`` directly."""
    eq = to_affine(column_operator_n2(spec))
    res = dimension(eq, depth, cfg)
    out = H1Result(spec, eq, res)
    Q = build_q(spec)
    for coeffs in _small_series(res):
        X = columns_from_chain(spec, coeffs)
        out.vectors.append(X)
        out.residual_ok &= X.residual_vanishes(Q)
    return out


def homology(spec: TMotiveSpec, depth: int = 24, cfg: SolverConfig = SolverConfig()) -> H1Result:
    """``h_1`` with column solutions ``X`` of ``M`` itself (``Q X = X^(1)``).

    Without nilpotent part the dual ``M(A^t)`` is solved and its small rows are
    carried over by ``Y -> Xi^-1 Y'^t``; otherwise (``n = 2``) the column
    equation is eliminated directly.
    """
    if spec.family != RANK2:
        raise DualUnavailable("h_1 is implemented for the rank2 family only")
    if spec.epsilon:
        return h1_columns(spec, depth, cfg)
    res = h1_dual(spec, depth, cfg)
    if res.vectors:
        xi = xi_series(spec.q, min(v.length for v in res.vectors), cfg)
        Q = build_q(spec)
        res.vectors = [dual_map_X(Y, xi) for Y in res.vectors]
        res.residual_ok &= all(X.residual_vanishes(Q) for X in res.vectors)
    return res


# -- Xi and the duality map ------------------------------------------------------------

def xi_equation(q: int, m: int = 1) -> AffineEq:
    """``theta xi_i^q + xi_i - xi_(i-1)^q = 0``: coefficients of ``Xi = (T - theta) Xi^(1)``."""
    ctx = get_field(q, m)
    one = PSeries.const(ctx, ctx.one)
    return AffineEq(q, [one, theta_pow(ctx, 1)], {(1, 1): -one})


def xi_series(q: int, length: int = 8, cfg: SolverConfig = SolverConfig()) -> list[PSeries]:
    eq = xi_equation(q)
    xi0 = s0_basis(eq, cfg)[0]
    rec = minimal_chain(eq, xi0, length - 1, cfg)
    if len(rec.coeffs) < length:
        if rec.cutoff == "precision":
            raise PrecisionExhausted(f"only {len(rec.coeffs)} Xi coefficients are known: {rec.note}")
        raise ArithmeticError(f"Xi coefficients left the ambient field: {rec.note}")
    return rec.coeffs


def xi_residual(xi: Sequence[PSeries]) -> list[PSeries]:
    """Coefficients of ``Xi - (T - theta) Xi^(1)``."""
    ctx = xi[0].ctx
    op = TwistOp.one(ctx) - _T_minus(ctx, 1) * TwistOp.tau(ctx)
    return apply_to_Tseries(op, list(xi))


def _sign_twist(big: FieldCtx) -> FFElem:
    """A root of ``s^(q-1) = -1`` in ``big``."""
    if big.q == 2:
        return big.one
    # s^(q-1) = -1  <=>  s^q + s = 0 with s != 0
    _, kernel = solve_additive({1: big.one, 0: big.one}, big.zero)
    if not kernel:
        raise ArithmeticError("no root of s^(q-1) = -1 in the ambient field")
    return kernel[0]


def dual_map_X(Yd: SolutionVector, xi: Sequence[PSeries]) -> SolutionVector:
    """Column solution for ``M(A)`` from a row solution ``(y1, y2)`` for ``M(A^t)``.

    ``Y' = (s y2, s^q y1)`` with ``s^(q-1) = -1`` solves the row equation of the
    dual in its standard basis, and ``X = Xi^-1 Y'^t``.
    """
    big = common_field([Yd.ctx, xi[0].ctx] + ([get_field(Yd.ctx.q, 2)] if Yd.ctx.q != 2 else []))
    Yd = Yd.embed(big)
    xi = embed_all(xi, big)
    s = _sign_twist(big)
    sq = s.frobenius()
    n = len(Yd.components) // 2
    L = min(Yd.length, len(xi))
    comps = [[c * s for c in comp[:L]] for comp in Yd.components[n:]] + \
            [[c * sq for c in comp[:L]] for comp in Yd.components[:n]]
    inv = tinverse(xi[:L])
    return SolutionVector([tmul(inv, comp, L) for comp in comps], "col")


# -- pairing ---------------------------------------------------------------------------

Poly = list  # coefficients in F_q, constant term first


def _fq_value(c: PSeries) -> Optional[FFElem]:
    """The F_q constant that ``c`` equals, ``None`` if undetermined; raise if impossible."""
    if c.prec <= 0:
        return None
    if any(o != 0 for o, _ in c.terms):
        raise FqViolation(f"pairing coefficient {c} is not a constant")
    v = c.coeff(0)
    if not v.in_fq():
        raise FqViolation(f"pairing coefficient {c} is not in F_q")
    return v


def pairing_matrix(Ys: Sequence[SolutionVector], Xs: Sequence[SolutionVector]):
    """``[Y_a X_b]`` as polynomials over ``F_q`` with the number of determined coefficients.

    Returns ``(M, known)``: ``M[a][b]`` lists the coefficients of ``T^0, T^1, ...``
    that the available precision determines, ``known[a][b]`` how many there are.
    """
    if not Ys or not Xs:
        return [[[] for _ in Xs] for _ in Ys], [[0 for _ in Xs] for _ in Ys]
    big = common_field([v.ctx for v in list(Ys) + list(Xs)])
    Ys = [y.embed(big) for y in Ys]
    Xs = [x.embed(big) for x in Xs]
    L = min(v.length for v in list(Ys) + list(Xs))
    M, known = [], []
    for Y in Ys:
        row, krow = [], []
        for X in Xs:
            acc = [PSeries.zero(big)] * L
            for y, x in zip(Y.components, X.components):
                acc = [a + b for a, b in zip(acc, tmul(y, x, L))]
            poly = []
            for c in acc:
                v = _fq_value(c)
                if v is None:
                    break
                poly.append(v)
            row.append(poly)
            krow.append(len(poly))
        M.append(row)
        known.append(krow)
    return M, known


def _ptrim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    zero = (a or b)[0].ctx.zero if (a or b) else None
    return _ptrim([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)])


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [a[0].ctx.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pneg(a: Poly) -> Poly:
    return [-x for x in a]


def _pdivmod(a: Poly, b: Poly):
    a = list(a)
    q = [b[0].ctx.zero] * max(len(a) - len(b) + 1, 0)
    inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = a[k + i] - c * y
        a = _ptrim(a)
    return _ptrim(q), a


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return a


def poly_rank(M: list[list[Poly]]) -> int:
    """Rank over ``F_q(T)`` by fraction-free elimination with content removal."""
    rows = [list(r) for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [_padd(_pmul(p, x), _pneg(_pmul(f, y))) for x, y in zip(rows[i], rows[rank])]
                g = []
                for x in rows[i]:
                    g = _pgcd(g, x) if x else g
                if len(g) > 1:
                    rows[i] = [_pdivmod(x, g)[0] for x in rows[i]]
        rank += 1
    return rank


def _field_rank(rows: list[list[FFElem]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                f = rows[i][col] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# Largest number of undetermined F_q entries enumerated when bounding the T=0 rank.
ENUMERATION_CAP = 4096


@dataclass
class PairingResult:
    matrix: list  # determined coefficients per entry, T^0 first
    known: list  # number of determined coefficients per entry
    rank_bounds: tuple[int, int]  # rank over F_q(T)
    at_zero_bounds: tuple[int, int]  # rank of the T = 0 specialization over F_q
    truncated_rank: Optional[int] = None  # rank over F_q(T) of the determined truncations

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), (len(self.matrix[0]) if self.matrix else 0)

    @property
    def decisive(self) -> bool:
        return self.rank_bounds[0] == self.rank_bounds[1]

    @property
    def rank(self) -> Optional[int]:
        return self.rank_bounds[0] if self.decisive else None

    @property
    def at_zero_rank(self) -> Optional[int]:
        lo, hi = self.at_zero_bounds
        return lo if lo == hi else None

    def to_data(self) -> dict:
        return {
            "shape": list(self.shape),
            "rank": list(self.rank_bounds), "rank_at_T0": list(self.at_zero_bounds),
            "truncated_rank": self.truncated_rank, "known_terms": self.known,
            "matrix": [[[x.serialize() for x in _ptrim(p)] for p in row] for row in self.matrix],
        }


def _at_zero_bounds(M: list[list[Poly]], known: list[list[int]], ctx: FieldCtx) -> tuple[int, int]:
    """Rank bounds of ``M(T=0)``; undetermined entries range over ``F_q``."""
    rows, cols = len(M), len(M[0])
    holes = [(a, b) for a in range(rows) for b in range(cols) if known[a][b] == 0]
    base = [[M[a][b][0] if known[a][b] else ctx.zero for b in range(cols)] for a in range(rows)]
    if not holes:
        k = _field_rank(base)
        return k, k
    if ctx.q ** len(holes) <= ENUMERATION_CAP:
        ranks = set()
        for values in itertools.product(ctx.fq_elements(), repeat=len(holes)):
            for (a, b), v in zip(holes, values):
                base[a][b] = v
            ranks.add(_field_rank(base))
        return min(ranks), max(ranks)
    full_rows = [base[a] for a in range(rows) if all(known[a])]
    full_cols = [[base[a][b] for a in range(rows)] for b in range(cols) if all(known[a][b] for a in range(rows))]
    lo = max(_field_rank(full_rows), _field_rank(full_cols))
    return lo, min(rows, cols)


def pairing_rank(Ys: Sequence[SolutionVector], Xs: Sequence[SolutionVector]) -> PairingResult:
    """Rank of the pairing matrix ``[Y_a X_b]`` over ``F_q(T)``, as certified bounds.

    The lower bound is the rank of the ``T = 0`` specialization, which can only
    drop under specialization; the upper bound is the matrix size.
    """
    M, known = pairing_matrix(Ys, Xs)
    if not M or not M[0]:
        return PairingResult(M, known, (0, 0), (0, 0), 0)
    big = common_field([v.ctx for v in list(Ys) + list(Xs)])
    at0 = _at_zero_bounds(M, known, big)
    size = min(len(M), len(M[0]))
    truncated = poly_rank([[_ptrim(p) for p in row] for row in M])
    return PairingResult(M, known, (at0[0], size), at0, truncated)


# -- sweeps --------------------------------------------------------------------------

def check_quadruple(c: Sequence[int]) -> list[str]:
    """Violated constraints among the necessary conditions on ``(r, h^1, h_1, rank)``."""
    c1, c2, c3, c4 = c
    bad = []
    if c2 == c1 or c3 == c1:
        if not (c1 == c2 == c3 == c4):
            bad.append("uniformizable motives have h^1 = h_1 = rank = r")
        return bad
    checks = [
        (c1 > c2, "r > h^1"), (c1 > c3, "r > h_1"), (c2 >= c4 >= 0, "h^1 >= rank >= 0"),
        (c3 >= c4, "h_1 >= rank"), (c4 >= c2 + c3 - c1, "rank >= h^1 + h_1 - r"),
    ]
    return [name for ok, name in checks if not ok]


def random_specs(seed: int, count: int, q: int = 2, span: int = 8) -> list[TMotiveSpec]:
    """Random ``2 x 2`` rank2 specs with monomial entries ``theta^k``, ``|k| <= span``, ``a12, a21 != 0``."""
    rng = random.Random(seed)
    ctx = get_field(q, 1)
    out = []
    for _ in range(count):
        entries = []
        for i in range(4):
            if i in (1, 2) or rng.random() < 0.7:
                entries.append(theta_pow(ctx, rng.randint(-span, span)))
            else:
                entries.append(PSeries.zero(ctx))
        out.append(TMotiveSpec.rank2([entries[:2], entries[2:]]))
    return out


def sweep_one(spec: TMotiveSpec, depth: int = 12, cfg: SolverConfig = SolverConfig()) -> dict:
    """One record ``(r, h^1, h_1, rank)`` with intervals and constraint checks."""
    from .specio import spec_to_data  # specio builds on this module

    rec = {"spec": spec_to_data(spec), "r": spec.r}
    try:
        up = h1(spec, depth, cfg)
        down = homology(spec, depth, cfg)
        rec["h1"] = list(up.interval)
        rec["h_1"] = list(down.interval)
        rec["residuals_ok"] = up.residual_ok and down.residual_ok
        if up.decisive and down.decisive:
            pr = pairing_rank(up.vectors, down.vectors)
            rec["pairing_rank"] = list(pr.rank_bounds)
            if pr.decisive:
                quad = (spec.r, up.dim.lower, down.dim.lower, pr.rank)
                rec["quadruple"] = list(quad)
                rec["violations"] = check_quadruple(quad)
            rec["decisive"] = pr.decisive
        else:
            rec["pairing_rank"] = [0, min(rec["h1"][1], rec["h_1"][1])]
            rec["decisive"] = False
    except Exception as err:  # per-sample failures are data, not crashes
        rec["error"] = f"{type(err).__name__}: {err}"
        rec["decisive"] = False
    return rec


def sweep(specs: Sequence[TMotiveSpec], depth: int = 12, cfg: SolverConfig = SolverConfig()) -> list[dict]:
    return [dict(sweep_one(s, depth, cfg), sample=k) for k, s in enumerate(specs)]
