"""Data types for affine equations and their solution chains."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..ffield import FieldCtx
from ..valuation import INF, ExtRat, fmt

__all__ = ["AffineEq", "ChainRecord", "ChainStep", "InvalidEquation"]


class InvalidEquation(ValueError):
    """A standing assumption on the coefficients fails."""


@dataclass(frozen=True)
class AffineEq:
    """``sum_g a_g x_i^(q^g) + sum_{b,g} c_{bg} x_{i-b}^(q^g) = 0`` for all ``i >= 0``.

    ``head[g]`` is ``a_g``; ``tail[(b, g)]`` is ``c_{bg}`` with ``b >= 1``.
    Coefficients equal to zero may be stored; they are ignored.
    """

    q: int
    head: tuple
    tail: dict

    def __init__(self, q: int, head, tail):
        head = tuple(head)
        tail = {(int(b), int(g)): c for (b, g), c in tail.items() if not c.is_zero()}
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", dict(sorted(tail.items())))
        if not head:
            raise InvalidEquation("empty head")
        ctx = head[0].ctx
        if ctx.q != q:
            raise InvalidEquation("field and q disagree")
        if head[0].is_zero():
            raise InvalidEquation("a_0 vanishes: the equation is not separable")
        if head[-1].is_zero():
            raise InvalidEquation("a_r vanishes")
        if len(head) < 2:
            raise InvalidEquation("r must be positive")
        if any(b < 1 or g < 0 for b, g in tail):
            raise InvalidEquation("tail indices must satisfy b >= 1, g >= 0")

    @property
    def ctx(self) -> FieldCtx:
        return self.head[0].ctx

    @property
    def r(self) -> int:
        return len(self.head) - 1

    @property
    def n(self) -> int:
        return max((b for b, _ in self.tail), default=0)

    @property
    def kappa(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b, g in self.tail:
            out[b] = max(out.get(b, -1), g)
        return out

    def head_points(self) -> list[tuple[int, ExtRat]]:
        """``(q^g, ord a_g)`` for the nonzero head coefficients."""
        return [(self.q ** g, a.ord()) for g, a in enumerate(self.head) if not a.is_zero()]

    def embed(self, big: FieldCtx) -> "AffineEq":
        return AffineEq(self.q, [a.embed(big) for a in self.head],
                        {k: c.embed(big) for k, c in self.tail.items()})

    def to_op(self):
        """The operator ``sum a_g tau^g + sum c_{bg} tau^g T^b``."""
        from ..twistops import TwistOp

        terms = [((g, 0), a) for g, a in enumerate(self.head)]
        terms += [((g, b), c) for (b, g), c in self.tail.items()]
        return TwistOp(self.ctx, terms)

    def describe(self) -> dict:
        return {
            "q": self.q, "r": self.r, "n": self.n,
            "kappa": {str(b): k for b, k in self.kappa.items()},
            "head": [str(a) for a in self.head],
            "tail": {f"{b},{g}": str(c) for (b, g), c in self.tail.items()},
        }


@dataclass
class ChainStep:
    """What happened when one coefficient of a chain was produced."""

    i: int
    ord: ExtRat
    segment: Optional[tuple] = None  # ((x0, y0), (x1, y1)) of the chosen Newton segment
    roots: int = 1  # number of maximal-ord roots available in the current field
    simple: Optional[bool] = None
    exact: bool = True  # False once only the valuation is tracked

    def to_data(self) -> dict:
        seg = None if self.segment is None else [[x, fmt(y)] for x, y in self.segment]
        return {"i": self.i, "ord": fmt(self.ord), "segment": seg, "roots": self.roots,
                "simple": self.simple, "exact": self.exact}


@dataclass
class ChainRecord:
    """A minimal chain ``x_0, x_1, ...`` computed to some depth.

    ``coeffs`` holds the series while they are known exactly; once the
    leading equation leaves the ambient field (``cutoff == "field"``) or the
    precision runs out (``cutoff == "precision"``) only valuations are
    tracked, and ``coeffs`` stops growing (see :attr:`exact_until`).
    """

    eq: AffineEq
    coeffs: list = field(default_factory=list)
    ord_history: list = field(default_factory=list)
    branch_log: list = field(default_factory=list)
    note: str = ""
    cutoff: str = ""

    @property
    def i(self) -> int:
        return len(self.ord_history) - 1

    @property
    def exact_until(self) -> int:
        """Index of the last coefficient known as a series."""
        return len(self.coeffs) - 1

    @property
    def window(self) -> list:
        n = max(self.eq.n, 1)
        return self.coeffs[-n:]

    def ords(self) -> list[ExtRat]:
        return list(self.ord_history)

    def to_data(self) -> dict:
        return {
            "depth": self.i,
            "ords": [fmt(o) for o in self.ord_history],
            "exact_until": self.exact_until,
            "cutoff": self.cutoff,
            "steps": [s.to_data() for s in self.branch_log],
            "note": self.note,
        }


def ord_fraction(v) -> ExtRat:
    return INF if v == INF else Fraction(v)
