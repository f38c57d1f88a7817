"""Smallness certificates for minimal chains.

A chain whose valuations follow ``y_i = B + A * rho**i`` (``rho != 1``) or
``y_i = B + A * i`` (``rho = 1``, which includes constants) from some index
on is certified by induction.  Put ``t = rho**i``, resp. ``t = i``.  If the
window ``y_{i-1}, ..., y_{i-n}`` follows the formula, each tail summand
``(b, g)`` has valuation ``ord c_{bg} + q**g * y_{i-b}``, a linear function
of ``t``.  The step is closed when, on the whole range of ``t``,

* one summand is strictly below all others (so ``ord W`` is that summand's), and
* one head point ``j`` maximizes ``(ord W - ord a_j) / q**j`` and gives
  exactly ``B + A * t``.

Both conditions compare linear functions on an interval, which is decided
at its endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..valuation import INF, ExtRat, NPPoint, ext, fmt, lower_hull
from .equation import AffineEq, ChainRecord

__all__ = [
    "OrdFit", "Certificate", "SmallnessVerdict", "SMALL", "NOT_SMALL", "UNKNOWN",
    "fit_ords", "classify_chain", "recheck", "fit_window", "strict_head_dominance",
]

SMALL, NOT_SMALL, UNKNOWN = "Small", "NotSmall", "Unknown"
WARM_UP = 2


@dataclass(frozen=True)
class OrdFit:
    """``y_i = B + A * rho**i`` (or ``B + A * i`` when ``rho = 1``) for all ``i >= start``."""

    B: Fraction
    A: Fraction
    rho: Fraction
    start: int

    @property
    def arithmetic(self) -> bool:
        return self.rho == 1

    def t(self, i: int) -> Fraction:
        return Fraction(i) if self.arithmetic else self.rho ** i

    def value(self, i: int) -> Fraction:
        return self.B + self.A * self.t(i)

    def window_line(self, b: int) -> tuple[Fraction, Fraction]:
        """``y_{i-b} = u + v * t`` as ``(u, v)``."""
        if self.arithmetic:
            return self.B - self.A * b, self.A
        return self.B, self.A * self.rho ** -b

    @property
    def small(self) -> bool:
        return self.A > 0 and self.rho >= 1

    def to_data(self) -> dict:
        return {"B": fmt(self.B), "A": fmt(self.A), "rho": fmt(self.rho), "start": self.start}

    @classmethod
    def from_data(cls, d: dict) -> "OrdFit":
        return cls(ext(d["B"]), ext(d["A"]), ext(d["rho"]), int(d["start"]))


@dataclass
class Certificate:
    kind: str  # "growth" or "zero"
    fit: Optional[OrdFit] = None
    induction_start: int = 0
    dominant_summand: Optional[tuple[int, int]] = None
    dominant_head: Optional[int] = None
    checks: list = field(default_factory=list)

    def to_data(self) -> dict:
        return {
            "kind": self.kind,
            "fit": self.fit.to_data() if self.fit else None,
            "induction_start": self.induction_start,
            "dominant_summand": list(self.dominant_summand) if self.dominant_summand else None,
            "dominant_head": self.dominant_head,
            "checks": list(self.checks),
        }

    @classmethod
    def from_data(cls, d: dict) -> "Certificate":
        return cls(d["kind"], OrdFit.from_data(d["fit"]) if d["fit"] else None, d["induction_start"],
                   tuple(d["dominant_summand"]) if d["dominant_summand"] else None,
                   d["dominant_head"], list(d["checks"]))


@dataclass
class SmallnessVerdict:
    status: str
    certificate: Optional[Certificate]
    depth: int
    reason: str = ""

    @property
    def decisive(self) -> bool:
        return self.status != UNKNOWN

    def to_data(self) -> dict:
        return {"status": self.status, "depth": self.depth, "reason": self.reason,
                "certificate": self.certificate.to_data() if self.certificate else None}

    @classmethod
    def from_data(cls, d: dict) -> "SmallnessVerdict":
        cert = Certificate.from_data(d["certificate"]) if d["certificate"] else None
        return cls(d["status"], cert, d["depth"], d["reason"])


# -- fitting -----------------------------------------------------------------

def fit_window(n: int) -> int:
    return max(2 * n, 6)


def fit_ords(ords: Sequence[ExtRat], width: int) -> Optional[OrdFit]:
    """Exact fit of the last ``width`` valuations by ``B + A * rho**i``, extended backwards."""
    if len(ords) < width or width < 3:
        return None
    last = len(ords) - width
    tail = ords[last:]
    if any(y == INF for y in tail):
        return None
    diffs = [b - a for a, b in zip(tail, tail[1:])]
    if all(d == diffs[0] for d in diffs):
        rho, A = Fraction(1), diffs[0]
    else:
        if any(d == 0 for d in diffs):
            return None
        rho = diffs[1] / diffs[0]
        if rho <= 0 or rho == 1 or any(b != rho * a for a, b in zip(diffs, diffs[1:])):
            return None
        A = diffs[0] / (rho ** last * (rho - 1))
    B = tail[0] - A * (last if rho == 1 else rho ** last)
    start = last
    fit = OrdFit(B, A, rho, start)
    while start > 0 and ords[start - 1] != INF and ords[start - 1] == fit.value(start - 1):
        start -= 1
    return OrdFit(B, A, rho, start)


# -- linear comparisons on a range of t ---------------------------------------

@dataclass(frozen=True)
class _Range:
    lo: Fraction  # inclusive unless lo_open
    hi: ExtRat
    lo_open: bool = False


def _t_range(fit: OrdFit, i1: int) -> _Range:
    t1 = fit.t(i1)
    if fit.rho >= 1:
        return _Range(t1, INF)
    return _Range(Fraction(0), t1, lo_open=True)


def _positive(du: Fraction, dv: Fraction, rng: _Range, strict: bool) -> bool:
    """``du + dv * t > 0`` (or ``>= 0``) for every ``t`` in the range."""
    def ok(x):
        return x > 0 if strict else x >= 0

    if rng.hi == INF:
        return dv >= 0 and ok(du + dv * rng.lo)
    if rng.lo_open:
        # positive at the closed end and nonnegative at the open one
        return ok(du + dv * rng.hi) and du + dv * rng.lo >= 0
    return ok(du + dv * rng.hi) and ok(du + dv * rng.lo)


def _linear_summands(eq: AffineEq, fit: OrdFit) -> dict:
    q = eq.q
    out = {}
    for (b, g), c in eq.tail.items():
        u, v = fit.window_line(b)
        out[(b, g)] = (c.ord() + q ** g * u, q ** g * v)
    return out


def _inductive_step(eq: AffineEq, fit: OrdFit, i1: int) -> Optional[Certificate]:
    rng = _t_range(fit, i1)
    lines = _linear_summands(eq, fit)
    if not lines:
        return None
    checks = []
    star = None
    for cand, (u, v) in lines.items():
        if all(_positive(u2 - u, v2 - v, rng, True) for k, (u2, v2) in lines.items() if k != cand):
            star = cand
            break
    if star is None:
        return None
    u, v = lines[star]
    checks.append(f"summand {star} strictly least: {fmt(u)} + {fmt(v)}*t")
    heads = {}
    for j, a in enumerate(eq.head):
        if not a.is_zero():
            x = eq.q ** j
            heads[j] = ((u - a.ord()) / x, v / x)
    for j, (hu, hv) in heads.items():
        if hu == fit.B and hv == fit.A and all(
                _positive(hu - u2, hv - v2, rng, False) for k, (u2, v2) in heads.items() if k != j):
            checks.append(f"head point {j} dominant: root valuation {fmt(hu)} + {fmt(hv)}*t")
            return Certificate("growth", fit, i1, star, j, checks)
    return None


def strict_head_dominance(eq: AffineEq, cert: Certificate) -> bool:
    """The certificate's head point beats every other head point strictly.

    Then each step's leftmost segment holds only ``(0, ord W)`` and the
    dominant head point, so the new leading coefficient is determined by the
    leading coefficient of the dominant summand through an ``F_q``-linear
    injective map (a scalar times a power of Frobenius).
    """
    if cert.kind != "growth" or cert.dominant_head is None:
        return False
    fit = cert.fit
    rng = _t_range(fit, cert.induction_start)
    u, v = _linear_summands(eq, fit)[cert.dominant_summand]
    j = cert.dominant_head
    line = lambda k: ((u - eq.head[k].ord()) / eq.q ** k, v / eq.q ** k)
    hu, hv = line(j)
    return all(_positive(hu - u2, hv - v2, rng, True)
               for u2, v2 in (line(k) for k, a in enumerate(eq.head) if k != j and not a.is_zero()))


def _status(fit: OrdFit) -> str:
    return SMALL if fit.small else NOT_SMALL


def classify_chain(record: ChainRecord, eq: Optional[AffineEq] = None) -> SmallnessVerdict:
    """Small / NotSmall with a certificate, or Unknown at the computed depth."""
    eq = eq or record.eq
    ords = record.ord_history
    depth = len(ords) - 1
    n = max(eq.n, 1)
    width = fit_window(n)
    if depth < n + WARM_UP:
        return SmallnessVerdict(UNKNOWN, None, depth, "chain too short")
    last_exact = record.exact_until
    if all(y == INF for y in ords[-n:]) and last_exact >= len(ords) - 1 and all(
            record.coeffs[k].is_exact() for k in range(len(ords) - n, len(ords))):
        return SmallnessVerdict(SMALL, Certificate("zero", checks=[f"{n} consecutive exact zero coefficients"]),
                                depth, "eventually zero")
    fit = fit_ords(ords, width)
    if fit is None:
        return SmallnessVerdict(UNKNOWN, None, depth, "valuations follow neither B + A*rho^i nor B + A*i")
    for i1 in range(max(fit.start + n, n), len(ords)):
        cert = _inductive_step(eq, fit, i1)
        if cert is not None:
            return SmallnessVerdict(_status(fit), cert, depth)
    return SmallnessVerdict(UNKNOWN, None, depth, "inductive step does not close")


# -- independent re-verification ---------------------------------------------

def recheck(verdict: SmallnessVerdict, eq: AffineEq, ords: Sequence[ExtRat], samples: int = 40) -> bool:
    """Re-derive the certificate's Newton vertices from valuations alone.

    The base case is compared with the observed valuations.  For sampled
    indices beyond the observed range, the window valuations given by the
    formula are pushed through the tail, the least summand is checked to be
    unique, and the lower hull of ``(0, ord W)`` with the head points must
    have its first vertex after ``(0, ord W)`` at the claimed head point
    with root valuation equal to the formula.
    """
    cert = verdict.certificate
    if cert is None:
        return verdict.status == UNKNOWN
    if cert.kind == "zero":
        return all(y == INF for y in ords[-max(eq.n, 1):])
    fit = cert.fit
    if any(ords[k] != fit.value(k) for k in range(fit.start, len(ords))):
        return False
    if (SMALL if fit.small else NOT_SMALL) != verdict.status:
        return False
    q = eq.q
    head = [(q ** j, a.ord()) for j, a in enumerate(eq.head) if not a.is_zero()]
    i1 = cert.induction_start
    indices = sorted({i1 + k for k in range(samples)} | {i1 + 2 ** k for k in range(12)})
    for i in indices:
        y = {b: fit.value(i - b) for b in range(1, max(eq.n, 1) + 1)}
        sums = sorted(c.ord() + q ** g * y[b] for (b, g), c in eq.tail.items())
        if len(sums) > 1 and sums[0] == sums[1]:
            return False
        hull = lower_hull([NPPoint(0, sums[0])] + [NPPoint(x, a) for x, a in head])
        seg = hull.segments[0]
        if seg.right.x != q ** cert.dominant_head or seg.root_ord != fit.value(i):
            # a collinear farther vertex is fine if the claimed point lies on the segment
            if seg.root_ord != fit.value(i) or all(p.x != q ** cert.dominant_head for p in seg.on_segment):
                return False
    return True
