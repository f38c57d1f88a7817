"""From per-chain verdicts to the dimension of an affine equation.

Small chains generated by an S_0 basis are independent small solutions,
which gives the lower bound.  For the upper bound every solution is an
``F_q[[T]]``-combination of the basis chains; a chain that is not small can
be *separated* when any combination involving it keeps infinitely many
coefficients of bounded valuation.  Two arguments are implemented:

* single chain (``distinct``): its valuations are pairwise distinct, so a
  combination of its shifts has, at each index, the valuation of one of its
  coefficients — no cancellation;
* chains with one common valuation sequence (``independent``): the
  valuations are pairwise distinct and the leading coefficients at each index
  are ``F_q``-independent, so a nonzero ``F_q``-combination at any index
  keeps its valuation and the single-chain argument applies;
* constant family (``absorbing``): all chains start on one Newton segment
  with valuation ``c`` and the equation maps any window whose newest
  coefficient has valuation ``c`` (older ones ``>= c``) to a coefficient of
  valuation exactly ``c``.

Families are peeled off from the lowest valuation band upwards; each must lie
strictly below everything that remains.

For an equation whose tail is the single term ``b x_(i-1)^(q^k)`` every
solution is simple and valuations are monotone in the first coefficient: a
solution whose first nonzero coefficient has valuation at most that of a
certified non-small chain's start is itself not small.  Since
``small / T small`` embeds into ``S_0`` via ``x -> x_0``, the dimension is at
most the number of basis elements of larger valuation.  The resulting count is a dimension
under the assumption that minimal chains of an S_0 basis detect all small
solutions, and the report says so.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..ffield import fq_rank
from ..tseries import common_field
from ..valuation import INF, ExtRat, NPPoint, fmt, lower_hull
from .certificate import (NOT_SMALL, SMALL, UNKNOWN, SmallnessVerdict, classify_chain,
                          strict_head_dominance)
from .equation import AffineEq, ChainRecord
from .solver import SolverConfig, minimal_chain, s0_basis

__all__ = [
    "SeparationFails", "NotSingleTail", "Band", "SeparationReport", "DimensionResult",
    "combination_analysis", "dimension", "monotone_bound", "single_tail_verdict", "single_tail_ords", "CONJECTURE_LABEL",
]

CONJECTURE_LABEL = "under the minimal-chain conjecture + separation analysis"


class SeparationFails(ArithmeticError):
    """Valuation bands overlap; no separation argument applies."""


class NotSingleTail(ValueError):
    """The closed form needs exactly one tail term."""


@dataclass(frozen=True)
class Band:
    """Valuations of a family: ``lo <= ord <= hi``, ``hi`` possibly a supremum not attained."""

    lo: ExtRat
    hi: ExtRat
    hi_attained: bool = True

    def below(self, level: ExtRat) -> bool:
        return self.hi < level or (self.hi == level and not self.hi_attained)

    def to_data(self) -> dict:
        return {"lo": fmt(self.lo), "hi": fmt(self.hi), "hi_attained": self.hi_attained}


@dataclass
class Family:
    members: list[int]
    method: str
    band: Band


@dataclass
class SeparationReport:
    separated: list[int] = field(default_factory=list)
    families: list[Family] = field(default_factory=list)
    small_span: str = ""
    failure: str = ""
    monotone_bound: Optional[int] = None

    def to_data(self) -> dict:
        return {
            "separated": self.separated,
            "families": [{"members": f.members, "method": f.method, "band": f.band.to_data()}
                         for f in self.families],
            "small_span": self.small_span,
            "failure": self.failure,
            "monotone_bound": self.monotone_bound,
        }


@dataclass
class DimensionResult:
    lower: int
    upper: int
    r: int
    verdicts: list[SmallnessVerdict]
    chains: list[ChainRecord]
    separation: SeparationReport
    label: str = CONJECTURE_LABEL

    @property
    def decisive(self) -> bool:
        return self.lower == self.upper

    def to_data(self) -> dict:
        return {
            "lower": self.lower, "upper": self.upper, "r": self.r, "label": self.label,
            "verdicts": [v.to_data() for v in self.verdicts],
            "chains": [c.to_data() for c in self.chains],
            "separation": self.separation.to_data(),
        }


# -- bands -------------------------------------------------------------------

def _chain_band(rec: ChainRecord, verdict: SmallnessVerdict) -> Optional[Band]:
    """Band of all valuations of a certified chain (observed prefix plus formula)."""
    cert = verdict.certificate
    if cert is None or cert.fit is None:
        return None
    fit = cert.fit
    prefix = [y for y in rec.ord_history[:fit.start]]
    if any(y == INF for y in prefix):
        return None
    first = fit.value(fit.start)
    if fit.A == 0:
        lo = hi = fit.B
        attained = True
    elif fit.rho < 1:
        if fit.A < 0:  # increasing towards B, which is never reached
            lo, hi, attained = first, fit.B, False
        else:  # decreasing towards B: the infimum is not attained, the max is
            lo, hi, attained = fit.B, first, True
    elif fit.A > 0:
        return Band(min(prefix + [first]), INF, False)
    else:
        lo, hi, attained = -INF, first, True
    if prefix:
        lo = min([lo] + prefix)
        if max(prefix) >= hi:
            hi, attained = max(prefix), True
    return Band(lo, hi, attained)


def _distinct_ords(rec: ChainRecord, verdict: SmallnessVerdict) -> bool:
    """Every valuation of the (infinite) chain occurs once."""
    fit = verdict.certificate.fit if verdict.certificate else None
    if fit is None or fit.A == 0:
        return False
    prefix = rec.ord_history[:fit.start]
    if len(set(prefix)) != len(prefix) or INF in prefix:
        return False
    # the formula part is injective; a prefix value may coincide with at most one formula value
    for y in prefix:
        k = _formula_index(fit, y)
        if k is not None and k >= fit.start:
            return False
    return True


def _formula_index(fit, y) -> Optional[int]:
    """Index ``k`` with ``fit.value(k) == y``, if any."""
    ratio = (Fraction(y) - fit.B) / fit.A  # the value of t at that index
    if fit.arithmetic:
        return int(ratio) if ratio >= 0 and ratio.denominator == 1 else None
    if ratio <= 0:
        return None
    k, t = 0, Fraction(1)
    big = fit.rho > 1
    while (t <= ratio) if big else (t >= ratio):
        if t == ratio:
            return k
        t *= fit.rho
        k += 1
    return None


def _independent_leading(eq: AffineEq, chains: Sequence[ChainRecord], verdicts, members: list[int]) -> bool:
    """Leading coefficients of the members are ``F_q``-independent at every index.

    Checked directly on the computed coefficients; beyond them the certified
    step maps leading coefficients by one ``F_q``-linear injection common to
    all members, which preserves independence.
    """
    certs = [verdicts[k].certificate for k in members]
    if any(c is None or not strict_head_dominance(eq, c) for c in certs):
        return False
    if len({(c.fit, c.induction_start, c.dominant_summand, c.dominant_head) for c in certs}) != 1:
        return False
    length = min(len(chains[k].coeffs) for k in members)
    if length < certs[0].induction_start:
        return False
    big = common_field([chains[k].coeffs[0].ctx for k in members])
    for i in range(length):
        leads = []
        for k in members:
            c = chains[k].coeffs[i]
            if c.is_zero():
                return False
            leads.append(c.embed(big).leading()[1] if c.ctx != big else c.leading()[1])
        if fq_rank(leads) != len(members):
            return False
    return True


def _absorbing(eq: AffineEq, c: Fraction) -> bool:
    """A window with newest valuation ``c`` and older ones ``>= c`` forces valuation ``c`` next."""
    q = eq.q
    sums = {(b, g): co.ord() + q ** g * c for (b, g), co in eq.tail.items()}
    if not sums:
        return False
    low = min(sums.values())
    winners = [k for k, v in sums.items() if v == low]
    if len(winners) != 1 or winners[0][0] != 1:
        return False
    hull = lower_hull([NPPoint(0, low)] + [NPPoint(x, y) for x, y in eq.head_points()])
    roots = {seg.root_ord for seg in hull.segments}
    return {o for o in roots if o >= c} == {c}


# -- the analysis --------------------------------------------------------------

def combination_analysis(chains: Sequence[ChainRecord], verdicts: Optional[Sequence[SmallnessVerdict]] = None,
                         eq: Optional[AffineEq] = None) -> SeparationReport:
    """Separate the non-small chains; raise :class:`SeparationFails` when bands overlap."""
    if not chains:
        return SeparationReport(small_span="no chains")
    eq = eq or chains[0].eq
    verdicts = list(verdicts) if verdicts is not None else [classify_chain(c, eq) for c in chains]
    report = SeparationReport()
    pending = [k for k, v in enumerate(verdicts) if v.status == NOT_SMALL]
    bands = {k: _chain_band(chains[k], verdicts[k]) for k in range(len(chains))}

    # group constant chains by valuation and other chains by valuation sequence
    groups: dict = {}
    for k in pending:
        fit = verdicts[k].certificate.fit if verdicts[k].certificate else None
        if fit is not None and fit.A == 0 and fit.start == 0:
            key = ("const", fit.B)
        elif fit is not None:
            key = ("seq", tuple(chains[k].ord_history), fit)
        else:
            key = ("single", k)
        groups.setdefault(key, []).append(k)
    fams = []
    for key, members in groups.items():
        if key[0] == "const":
            c = key[1]
            if _absorbing(eq, c):
                fams.append(Family(members, "absorbing", Band(c, c)))
                continue
            if len(members) > 1:
                raise SeparationFails(f"constant family at valuation {fmt(c)} is not absorbing")
        if len(members) > 1:
            k = members[0]
            if bands[k] is None or not _distinct_ords(chains[k], verdicts[k]) or \
                    not _independent_leading(eq, chains, verdicts, members):
                raise SeparationFails(f"chains {members} share valuations but are not separated")
            fams.append(Family(members, "independent", bands[k]))
            continue
        for k in members:
            band = bands[k]
            if band is None or not _distinct_ords(chains[k], verdicts[k]):
                raise SeparationFails(f"chain {k}: valuations are not pairwise distinct")
            fams.append(Family([k], "distinct", band))
    fams.sort(key=lambda f: (f.band.lo, f.band.hi))

    remaining = set(range(len(chains)))
    for fam in fams:
        remaining -= set(fam.members)
        if any(verdicts[k].status == UNKNOWN for k in remaining):
            raise SeparationFails("an undecided chain lies above a non-small family")
        rest_lo = min((bands[k].lo for k in remaining if bands[k] is not None), default=INF)
        if any(bands[k] is None for k in remaining):
            raise SeparationFails("a remaining chain has no certified valuation band")
        ok = fam.band.hi < rest_lo if fam.method == "absorbing" else fam.band.below(rest_lo)
        if not ok:
            raise SeparationFails(
                f"band [{fmt(fam.band.lo)}, {fmt(fam.band.hi)}] of chains {fam.members} "
                f"meets the remaining chains (lowest valuation {fmt(rest_lo)})")
        report.families.append(fam)
        report.separated.extend(fam.members)

    small = [k for k, v in enumerate(verdicts) if v.status == SMALL]
    if not small:
        report.small_span = "no small solutions"
    elif len(small) == 1 and _increasing(chains[small[0]], verdicts[small[0]]):
        report.small_span = f"small solutions are the F_q[T]-multiples of chain {small[0]}"
    else:
        report.small_span = f"small chains {small} span a free F_q[T]-module of rank {len(small)}"
    return report


def _increasing(rec: ChainRecord, verdict: SmallnessVerdict) -> bool:
    ords = rec.ord_history
    return verdict.certificate is not None and verdict.certificate.kind == "growth" and all(
        a < b for a, b in zip(ords, ords[1:]))


def dimension(eq: AffineEq, depth: int = 24, cfg: SolverConfig = SolverConfig()) -> DimensionResult:
    """Interval ``[lower, upper]`` for the number of independent small solutions."""
    basis = s0_basis(eq, cfg)
    chains = [minimal_chain(eq, x0, depth, cfg) for x0 in basis]
    verdicts = [classify_chain(c) for c in chains]
    lower = sum(v.status == SMALL for v in verdicts)
    try:
        sep = combination_analysis(chains, verdicts)
    except SeparationFails as err:
        sep = SeparationReport(failure=str(err))
    upper = eq.r - len(sep.separated)
    bound = monotone_bound(eq, chains, verdicts)
    if bound is not None and bound < upper:
        sep.monotone_bound = bound
        upper = bound
    return DimensionResult(lower, upper, eq.r, verdicts, chains, sep)


# -- single tail term ------------------------------------------------------------

def _single_tail(eq: AffineEq):
    if len(eq.tail) != 1:
        raise NotSingleTail(f"equation has {len(eq.tail)} tail terms")
    ((b, k), c), = eq.tail.items()
    if b != 1:
        raise NotSingleTail("the tail term must involve x_{i-1}")
    return k, c


def monotone_bound(eq: AffineEq, chains: Sequence[ChainRecord],
                   verdicts: Sequence[SmallnessVerdict]) -> Optional[int]:
    """Upper bound from monotonicity, for a single tail term on ``x_(i-1)``; ``None`` otherwise."""
    try:
        _single_tail(eq)
    except NotSingleTail:
        return None
    starts = [c.ord_history[0] for c in chains]
    bounded = [y for y, v in zip(starts, verdicts) if v.status == NOT_SMALL]
    if not bounded:
        return None
    w = max(bounded)
    return sum(y > w for y in starts)


def _normalized_ords(eq: AffineEq):
    """Head and tail valuations after dividing by ``a_r`` (so that ``a_r = 1``)."""
    k, c = _single_tail(eq)
    ar = eq.head[-1].ord()
    alphas = {g: a.ord() - ar for g, a in enumerate(eq.head) if not a.is_zero()}
    return alphas, k, c.ord() - ar


def _leftmost_end(eq: AffineEq, alphas) -> int:
    hull = lower_hull([(eq.q ** g, a) for g, a in alphas.items()])
    x = hull.segments[0].right.x
    return next(g for g in alphas if eq.q ** g == x)


def _closed_form_data(eq: AffineEq):
    alphas, k, beta = _normalized_ords(eq)
    j = _leftmost_end(eq, alphas)
    y0 = (alphas[0] - alphas[j]) / (eq.q ** j - 1)
    return alphas[0], k, beta, y0


def single_tail_verdict(eq: AffineEq) -> bool:
    """True iff the dimension is zero, by the single-tail closed form.

    With ``y_0`` the valuation of the leftmost head root, the first step of the
    chain has valuation ``beta + q^k y_0 - alpha_0``; the dimension is zero iff
    this does not exceed ``y_0``.  For ``k >= 1`` this is the inequality
    ``y_0 <= (alpha_0 - beta) / (q^k - 1)``; for ``k = 0`` it reads ``beta <= alpha_0``.
    """
    a0, k, beta, y0 = _closed_form_data(eq)
    return beta + eq.q ** k * y0 - a0 <= y0


def single_tail_ords(eq: AffineEq, count: int) -> list[Fraction]:
    """Closed-form valuations ``y_0, y_1, ...`` of the largest minimal chain.

    They solve ``y_(g+1) = beta + q^k y_g - alpha_0``: geometric for ``k >= 1``,
    arithmetic for ``k = 0``.
    """
    a0, k, beta, y0 = _closed_form_data(eq)
    if k == 0:
        return [y0 + (beta - a0) * g for g in range(count)]
    qk = eq.q ** k
    fixed = (a0 - beta) / (qk - 1)
    return [fixed + (y0 - fixed) * qk ** g for g in range(count)]
