"""Exact valuations and Newton polygons of additive polynomials.

Valuations are exact rationals (:class:`fractions.Fraction`) extended by the
sentinel :data:`INF` for the valuation of zero.  A Newton polygon is the lower
convex hull of points ``(x, ord)`` where ``x`` is the exponent ``q**gamma`` of
the monomial a coefficient is attached to.  The convention is ``ord theta = -1``,
so a segment of slope ``s`` and horizontal length ``k`` accounts for ``k`` roots
of valuation ``-s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

ExtRat = Union[Fraction, float]

INF = math.inf


class EmptyInput(ValueError):
    """No finite point was supplied to a hull computation."""


def ext(value) -> ExtRat:
    """Coerce ``value`` into an extended rational.

    Accepts ints, Fractions, strings like ``"3/2"``, ``"inf"`` and ``INF``.
    Floats other than infinity are rejected since they are not exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value == INF:
            return INF
        raise TypeError(f"refusing inexact float valuation {value!r}")
    if isinstance(value, str):
        s = value.strip()
        if s in ("inf", "+inf", "oo", "infinity"):
            return INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {value!r} as a valuation")


def is_inf(v: ExtRat) -> bool:
    return v == INF


def fmt(v: ExtRat) -> str:
    """Serialize an extended rational as ``num/den``, ``num``, ``inf`` or ``-inf``."""
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class NPPoint:
    x: int
    y: ExtRat


@dataclass(frozen=True)
class Segment:
    left: NPPoint
    right: NPPoint
    # points lying on the segment (vertices included), left to right
    on_segment: tuple[NPPoint, ...]

    @property
    def slope(self) -> Fraction:
        return Fraction(self.right.y - self.left.y) / (self.right.x - self.left.x)

    @property
    def x_span(self) -> int:
        return self.right.x - self.left.x

    @property
    def root_ord(self) -> Fraction:
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[NPPoint, ...]
    segments: tuple[Segment, ...] = field(default=())

    def root_ords(self) -> list[tuple[Fraction, int]]:
        return root_ords(self)

    def dump(self) -> str:
        """Plain-text dump, one ``x,y`` vertex per line."""
        return "\n".join(f"{p.x},{fmt(p.y)}" for p in self.vertices)


def _cross(o: NPPoint, a: NPPoint, b: NPPoint) -> Fraction:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def lower_hull(points: Iterable[NPPoint | tuple]) -> NewtonPolygon:
    """Lower convex hull of the finite points.

    Points at ``y = INF`` are dropped.  For repeated ``x`` only the smallest
    ``y`` is kept.  Collinear interior points are not vertices but are kept
    in :attr:`Segment.on_segment`, because the leading-coefficient equation of
    a segment involves every monomial lying on it.
    """
    best: dict[int, ExtRat] = {}
    for pt in points:
        if not isinstance(pt, NPPoint):
            pt = NPPoint(int(pt[0]), ext(pt[1]))
        if pt.y == INF:
            continue
        if pt.x < 0:
            raise ValueError("Newton polygon abscissas must be nonnegative")
        if pt.x not in best or pt.y < best[pt.x]:
            best[pt.x] = Fraction(pt.y)
    if not best:
        raise EmptyInput("no finite point")
    pts = [NPPoint(x, best[x]) for x in sorted(best)]

    hull: list[NPPoint] = []
    for p in pts:
        # pop while the turn is clockwise or straight: keeps strict vertices only
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)

    segments = []
    for a, b in zip(hull, hull[1:]):
        on = tuple(
            p for p in pts
            if a.x <= p.x <= b.x and (p.y - a.y) * (b.x - a.x) == (b.y - a.y) * (p.x - a.x)
        )
        segments.append(Segment(a, b, on))
    return NewtonPolygon(tuple(hull), tuple(segments))


def root_ords(np: NewtonPolygon) -> list[tuple[Fraction, int]]:
    """Root valuations with multiplicities, largest valuation first."""
    return [(seg.root_ord, seg.x_span) for seg in np.segments]


def leftmost_root_ord(w: ExtRat, head: list[tuple[int, ExtRat]]) -> ExtRat:
    """Largest root valuation of ``sum a_j z**x_j + W = 0`` given ``ord W = w``.

    ``head`` lists ``(x_j, ord a_j)``.  This is ``max_j (w - ord a_j) / x_j``
    over the finite head points, i.e. minus the slope of the leftmost segment
    once ``(0, w)`` is added to the polygon.
    """
    if w == INF:
        return INF
    return max(Fraction(w - a) / x for x, a in head if a != INF and x > 0)
