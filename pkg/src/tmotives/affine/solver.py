"""Solving affine equations coefficient by coefficient.

Every step of the recursion is an additive equation ``head(x) = -W`` with
``head(x) = sum a_g x^(q^g)``.  Its roots are found term by term: the
Newton polygon of the residual together with the head points gives the
valuation of the next term, and the coefficients lying on the chosen
segment give an additive equation over the finite field for its leading
coefficient.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..ffield import FieldCtx, NoSolutionInField, escalation_degrees, get_field, solve_additive
from ..pseries import PSeries, PrecisionExhausted
from ..valuation import INF, ExtRat, NPPoint, Segment, fmt, leftmost_root_ord, lower_hull
from .equation import AffineEq, ChainRecord, ChainStep

log = logging.getLogger(__name__)

__all__ = [
    "SolverConfig", "FieldTooSmall", "RootInfo",
    "refine_root", "solve_step", "s0_basis", "s0_field", "tail_value", "summand_ords",
    "is_simple_at", "is_simple_chain", "minimal_chain",
]

DEFAULT_REL_PREC = Fraction(64)
DEFAULT_MAX_TERMS = 32
DEFAULT_FIELD_CAP = 16


class FieldTooSmall(ArithmeticError):
    """No ambient field up to the configured degree holds a full S_0 basis."""


@dataclass(frozen=True)
class SolverConfig:
    """Precision policy.

    A root is expanded until its next term would have valuation at least
    ``min(prec, ord(root) + rel_prec)`` or until it has ``max_terms`` terms;
    the result carries the valuation of the first omitted term as its
    precision.
    """

    prec: ExtRat = INF
    rel_prec: Fraction = DEFAULT_REL_PREC
    max_terms: int = DEFAULT_MAX_TERMS
    field_cap: int = DEFAULT_FIELD_CAP


@dataclass
class RootInfo:
    segment: Optional[tuple] = None
    roots: int = 1


def _head_points(head: Sequence[PSeries], q: int) -> list[tuple[int, ExtRat]]:
    return [(q ** g, a.ord()) for g, a in enumerate(head) if not a.is_zero()]


def _apply_head(head: Sequence[PSeries], x: PSeries) -> PSeries:
    acc = PSeries.zero(x.ctx)
    for g, a in enumerate(head):
        if not a.is_zero():
            acc = acc + a * x.frob(g)
    return acc


def _leading_equation(head, q, rho, r0, points):
    """Leftmost segment of ``{(0, rho)} + head`` and the solution of its leading equation."""
    hull = lower_hull([NPPoint(0, rho)] + [NPPoint(x, y) for x, y in points])
    seg: Segment = hull.segments[0]
    delta = seg.root_ord
    coeffs = {}
    for pt in seg.on_segment:
        if pt.x == 0:
            continue
        g = _log_q(pt.x, q)
        coeffs[g] = head[g].leading()[1]
    z, kernel = solve_additive(coeffs, -r0)
    info = RootInfo(((seg.left.x, seg.left.y), (seg.right.x, seg.right.y)), q ** len(kernel))
    return delta, z, info


def _log_q(x: int, q: int) -> int:
    g = 0
    while x > 1:
        x //= q
        g += 1
    return g


def _residual_cutoff(target: ExtRat, points) -> ExtRat:
    """Smallest residual valuation whose correction can reach valuation ``target``."""
    if target == INF:
        return INF
    return min(target * x + y for x, y in points)


def refine_root(head: Sequence[PSeries], target: PSeries, prefix: Optional[PSeries] = None,
                prec: ExtRat = INF, cfg: SolverConfig = SolverConfig(),
                info: Optional[RootInfo] = None) -> PSeries:
    """Maximal-valuation root of ``head(x) + target = 0`` extending ``prefix``.

    ``prefix`` must be the start of such a root: its terms are kept and the
    expansion continues from the residual ``target + head(prefix)``.  If
    ``info`` is given it receives the segment and root count of the first
    term that was added.
    """
    ctx = target.ctx
    q = ctx.q
    points = _head_points(head, q)
    prefix = prefix if prefix is not None else PSeries.zero(ctx)
    terms = list(prefix.terms)
    stop = min(prec, cfg.prec)
    if terms:
        stop = min(stop, terms[0][0] + cfg.rel_prec)
    resid = (target + _apply_head(head, PSeries(ctx, terms))).truncate(_residual_cutoff(stop, points))
    first = True
    while True:
        if resid.is_zero():
            reach = leftmost_root_ord(resid.prec, points)
            break
        rho, r0 = resid.leading()
        delta = leftmost_root_ord(rho, points)
        if terms and delta <= terms[-1][0]:
            raise PrecisionExhausted(
                f"correction of valuation {fmt(delta)} does not extend the prefix; "
                "the prefix is not a partial root to the known precision")
        if not terms:
            stop = min(stop, delta + cfg.rel_prec)
            resid = resid.truncate(_residual_cutoff(stop, points))
        if delta >= stop or len(terms) >= cfg.max_terms:
            reach = delta
            break
        delta, z, step = _leading_equation(head, q, rho, r0, points)
        if first and info is not None:
            info.segment, info.roots = step.segment, step.roots
        first = False
        term = PSeries._raw(ctx, ((delta, z),), INF)
        terms.append((delta, z))
        resid = resid + _apply_head(head, term)
    return PSeries(ctx, terms, min(stop, reach))


# -- S_0 ---------------------------------------------------------------------

def _segment_kernels(eq: AffineEq):
    """Per head segment: (valuation, needed F_q-dimension, kernel basis found)."""
    q = eq.q
    hull = lower_hull(eq.head_points())
    out = []
    for seg in hull.segments:
        coeffs = {_log_q(p.x, q): eq.head[_log_q(p.x, q)].leading()[1] for p in seg.on_segment}
        need = _log_q(seg.right.x, q) - _log_q(seg.left.x, q)
        _, kernel = solve_additive(coeffs, eq.ctx.zero)
        out.append((seg, need, kernel))
    return out


def s0_field(eq: AffineEq, cap: int = DEFAULT_FIELD_CAP) -> FieldCtx:
    """Smallest ambient field, among the escalation degrees, holding all of S_0's leading terms."""
    ctx = eq.ctx
    for m in [ctx.m] + escalation_degrees(ctx.m, cap):
        big = ctx if m == ctx.m else get_field(ctx.q, m)
        e = eq if big == ctx else eq.embed(big)
        if all(len(k) == need for _, need, k in _segment_kernels(e)):
            return big
    raise FieldTooSmall(f"leading equations of the head need a field of degree above {cap}")


def s0_basis(eq: AffineEq, cfg: SolverConfig = SolverConfig()) -> list[PSeries]:
    """An F_q-basis of the solutions of ``head(x) = 0``, largest valuation first.

    The series live in :func:`s0_field` of the equation, which may be larger
    than the field of the equation itself.
    """
    big = s0_field(eq, cfg.field_cap)
    if big != eq.ctx:
        log.info("S_0 needs F_%d^%d; escalating from degree %d", eq.q, big.m, eq.ctx.m)
        eq = eq.embed(big)
    zero = PSeries.zero(big)
    basis = []
    for seg, _, kernel in _segment_kernels(eq):
        delta = seg.root_ord
        for c in kernel:
            start = PSeries._raw(big, ((delta, c),), INF)
            basis.append(refine_root(eq.head, zero, start, cfg=cfg))
    basis.sort(key=lambda s: s.ord(), reverse=True)
    return basis


# -- chains ------------------------------------------------------------------

def tail_value(eq: AffineEq, window: Sequence[PSeries], i: int) -> PSeries:
    """``W = sum c_{bg} x_{i-b}^(q^g)`` with ``window[-b] = x_{i-b}``."""
    acc = PSeries.zero(eq.ctx)
    for (b, g), c in eq.tail.items():
        if b <= min(i, len(window)):
            acc = acc + c * window[-b].frob(g)
    return acc


def summand_ords(eq: AffineEq, ords: Sequence[ExtRat], i: int) -> dict[tuple[int, int], ExtRat]:
    """Valuations of the individual tail summands at step ``i`` from ``ords[k] = ord x_k``."""
    out = {}
    for (b, g), c in eq.tail.items():
        if b <= i:
            y = ords[i - b]
            out[(b, g)] = INF if y == INF else c.ord() + eq.q ** g * y
    return out


def _distinct(values) -> bool:
    finite = [v for v in values if v != INF]
    return len(finite) == len(set(finite))


def is_simple_at(eq: AffineEq, window: Sequence[PSeries], i: int) -> bool:
    """All nonzero tail summands at step ``i`` have pairwise distinct valuations."""
    if i == 0:
        return True
    window = list(window)[-i:]
    ords = [INF] * (i - len(window)) + [x.ord() for x in window]
    return _distinct(summand_ords(eq, ords, i).values())


def is_simple_chain(record: ChainRecord) -> bool:
    return all(step.simple is not False for step in record.branch_log)


def solve_step(eq: AffineEq, window: Sequence[PSeries], i: int, cfg: SolverConfig = SolverConfig(),
               info: Optional[RootInfo] = None) -> PSeries:
    """The maximal-valuation solution ``x_i`` given the previous coefficients."""
    w = tail_value(eq, window, i)
    if w.is_zero():
        if w.is_exact():
            return PSeries.zero(eq.ctx)
        raise PrecisionExhausted(
            f"tail value at step {i} vanishes to its precision {fmt(w.prec)}")
    x = refine_root(eq.head, w, cfg=cfg, info=info)
    if x.is_zero():
        raise PrecisionExhausted(f"root at step {i} vanishes to its precision {fmt(x.prec)}")
    return x


def minimal_chain(eq: AffineEq, x0: PSeries, depth: int, cfg: SolverConfig = SolverConfig()) -> ChainRecord:
    """Minimal chain generated by ``x0`` up to index ``depth``.

    While the leading equations are solvable in the ambient field the chain
    is computed exactly.  Once one is not, only valuations are followed: this
    is sound as long as a single tail summand has the least valuation, which
    is checked at every such step; otherwise the chain stops early and the
    reason is recorded in ``note``.
    """
    if x0.ctx != eq.ctx:
        eq = eq.embed(x0.ctx)
    rec = ChainRecord(eq, [x0], [x0.ord()], [ChainStep(0, x0.ord())])
    exact = True
    points = eq.head_points()
    for i in range(1, depth + 1):
        sords = summand_ords(eq, rec.ord_history, i)
        simple = _distinct(sords.values())
        if exact:
            info = RootInfo()
            try:
                x = solve_step(eq, rec.window, i, cfg, info)
            except NoSolutionInField:
                exact = False
                rec.cutoff = "field"
                log.info("step %d leaves F_%d^%d; following valuations only", i, eq.q, eq.ctx.m)
                rec.note = f"valuations only from step {i}: leading equation not solvable in the ambient field"
            except PrecisionExhausted as err:
                exact = False
                rec.cutoff = "precision"
                rec.note = f"valuations only from step {i}: {err}"
            else:
                rec.coeffs.append(x)
                rec.ord_history.append(x.ord())
                rec.branch_log.append(ChainStep(i, x.ord(), info.segment, info.roots, simple, True))
                continue
        finite = [v for v in sords.values() if v != INF]
        if not finite:
            y = INF
        else:
            low = min(finite)
            if finite.count(low) > 1:
                rec.note += f"; stopped at step {i}: least tail summand valuation {fmt(low)} is not unique"
                break
            y = leftmost_root_ord(low, points)
        rec.ord_history.append(y)
        rec.branch_log.append(ChainStep(i, y, None, 0, simple, False))
    return rec
