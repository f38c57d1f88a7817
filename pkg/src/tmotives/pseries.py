"""Truncated generalized power series in ``1/theta`` with rational exponents.

A :class:`PSeries` is a finite list of terms ``(ord, coeff)`` together with a
precision bound ``prec``: every term of valuation below ``prec`` is exactly
represented, nothing is known at or above it.  ``prec = INF`` marks an exact
(finite) sum.  With ``ord theta = -1`` the power ``theta**a`` is the single
term ``(-a, 1)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .ffield import CtxMismatch, FFElem, FieldCtx, embed
from .valuation import INF, ExtRat, ext, fmt

__all__ = ["PSeries", "ZeroSeries", "PrecisionExhausted", "theta_pow"]


class ZeroSeries(ArithmeticError):
    """Leading data requested from a series with no represented terms."""


class PrecisionExhausted(ArithmeticError):
    """A needed term lies at or beyond the known precision."""


class PSeries:
    __slots__ = ("ctx", "terms", "prec")

    def __init__(self, ctx: FieldCtx, terms: Iterable = (), prec: ExtRat = INF):
        self.ctx = ctx
        self.prec = ext(prec)
        acc: dict[Fraction, FFElem] = {}
        for o, c in terms:
            o = Fraction(o)
            if o >= self.prec:
                continue
            if not isinstance(c, FFElem):
                c = ctx(c)
            acc[o] = acc[o] + c if o in acc else c
        self.terms = tuple(sorted((o, c) for o, c in acc.items() if not c.is_zero()))

    @classmethod
    def _raw(cls, ctx, terms, prec):
        s = object.__new__(cls)
        s.ctx, s.terms, s.prec = ctx, terms, prec
        return s

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ctx: FieldCtx, prec: ExtRat = INF) -> "PSeries":
        return cls._raw(ctx, (), ext(prec))

    @classmethod
    def const(cls, ctx: FieldCtx, c) -> "PSeries":
        return cls(ctx, [(Fraction(0), c)])

    @classmethod
    def laurent(cls, ctx: FieldCtx, powers: dict) -> "PSeries":
        """Exact sum ``sum c * theta**a`` from a mapping ``a -> c``."""
        return cls(ctx, [(-Fraction(a), c) for a, c in powers.items()])

    # -- basic data -----------------------------------------------------------
    def ord(self) -> ExtRat:
        return self.terms[0][0] if self.terms else INF

    def _ord_lb(self) -> ExtRat:
        return self.terms[0][0] if self.terms else self.prec

    def leading(self) -> tuple[Fraction, FFElem]:
        if not self.terms:
            raise ZeroSeries("zero series has no leading term")
        return self.terms[0]

    def is_zero(self) -> bool:
        """True when no term is represented (zero up to ``prec``)."""
        return not self.terms

    def is_exact(self) -> bool:
        return self.prec == INF

    def coeff(self, o) -> FFElem:
        o = Fraction(o)
        if o >= self.prec:
            raise PrecisionExhausted(f"term at ord {fmt(o)} is beyond precision {fmt(self.prec)}")
        for t, c in self.terms:
            if t == o:
                return c
        return self.ctx.zero

    def _check(self, other: "PSeries"):
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise CtxMismatch("series over different fields")

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: "PSeries") -> "PSeries":
        if not isinstance(other, PSeries):
            return NotImplemented
        self._check(other)
        prec = min(self.prec, other.prec)
        acc = {o: c for o, c in self.terms if o < prec}
        for o, c in other.terms:
            if o >= prec:
                break
            if o in acc:
                s = acc[o] + c
                if s.is_zero():
                    del acc[o]
                else:
                    acc[o] = s
            else:
                acc[o] = c
        return PSeries._raw(self.ctx, tuple(sorted(acc.items())), prec)

    def __neg__(self) -> "PSeries":
        if self.ctx.p == 2:
            return self
        return PSeries._raw(self.ctx, tuple((o, -c) for o, c in self.terms), self.prec)

    def __sub__(self, other: "PSeries") -> "PSeries":
        return self + (-other)

    def __mul__(self, other) -> "PSeries":
        if isinstance(other, FFElem):
            return self.scale(other)
        if not isinstance(other, PSeries):
            return NotImplemented
        self._check(other)
        prec = min(self.prec + other._ord_lb(), other.prec + self._ord_lb())
        acc: dict[Fraction, FFElem] = {}
        for o1, c1 in self.terms:
            for o2, c2 in other.terms:
                o = o1 + o2
                if o >= prec:
                    break
                acc[o] = acc[o] + c1 * c2 if o in acc else c1 * c2
        return PSeries._raw(self.ctx, tuple(sorted((o, c) for o, c in acc.items() if not c.is_zero())), prec)

    def scale(self, c: FFElem) -> "PSeries":
        if c.is_zero():
            return PSeries.zero(self.ctx)
        return PSeries._raw(self.ctx, tuple((o, c * x) for o, x in self.terms), self.prec)

    def shift(self, a) -> "PSeries":
        """Multiply by ``theta**a``."""
        a = Fraction(a)
        return PSeries._raw(self.ctx, tuple((o - a, c) for o, c in self.terms), self.prec - a)

    def frob(self, k: int) -> "PSeries":
        """Coefficient twist ``x -> x**(q**k)`` (inverse twist for ``k < 0``)."""
        if k == 0:
            return self
        f = Fraction(self.ctx.q) ** k
        return PSeries._raw(self.ctx, tuple((o * f, c.frobenius(k)) for o, c in self.terms), self.prec * f)

    def truncate(self, prec: ExtRat) -> "PSeries":
        prec = min(self.prec, ext(prec))
        return PSeries._raw(self.ctx, tuple(t for t in self.terms if t[0] < prec), prec)

    def inverse(self, prec: ExtRat = INF) -> "PSeries":
        """Multiplicative inverse, to absolute precision at most ``prec``.

        The relative precision of ``self`` is preserved, so the result is
        never claimed beyond ``self.prec - 2 * ord(self)``.
        """
        o, c = self.leading()
        target = min(ext(prec), self.prec - 2 * o)
        if len(self.terms) == 1 and self.prec == INF:
            return PSeries._raw(self.ctx, ((-o, c.inverse()),), INF)
        if target == INF:
            raise PrecisionExhausted("inverse of a non-monomial needs a finite precision")
        cinv = c.inverse()
        # self = c theta^{-o} (1 + u), ord u > 0
        u = PSeries._raw(self.ctx, tuple((t - o, cinv * x) for t, x in self.terms[1:]), self.prec - o)
        rel = target + o  # relative precision needed
        result = PSeries.const(self.ctx, self.ctx.one).truncate(rel)
        power = PSeries.const(self.ctx, self.ctx.one)
        neg_u = -u
        while True:
            power = (power * neg_u).truncate(rel)
            if power.is_zero():
                break
            result = result + power
        result = result.truncate(min(rel, u.prec))
        return PSeries._raw(self.ctx, tuple((t - o, cinv * x) for t, x in result.terms), result.prec - o)

    def embed(self, big: FieldCtx) -> "PSeries":
        """The same series with coefficients moved into the larger field ``big``."""
        return PSeries._raw(big, tuple((o, embed(c, big)) for o, c in self.terms), self.prec)

    def __truediv__(self, other: "PSeries") -> "PSeries":
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.terms == other.terms and self.prec == other.prec

    def agrees_with(self, other: "PSeries") -> bool:
        """Equal on the common range of known terms."""
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.terms, self.prec))

    # -- rendering ------------------------------------------------------------
    def __repr__(self):
        return f"PSeries({self})"

    def __str__(self):
        parts = []
        for o, c in self.terms:
            a = fmt(-o)
            mono = "1" if o == 0 else f"θ^{a}" if a != "1" else "θ"
            if c == self.ctx.one:
                parts.append(mono)
            elif self.ctx.d == 1:
                parts.append(f"{c.v}·{mono}" if o else str(c.v))
            else:
                parts.append(f"[{c.serialize()}]·{mono}" if o else f"[{c.serialize()}]")
        if self.prec != INF:
            parts.append(f"O(θ^{fmt(-self.prec)})")
        return " + ".join(parts) if parts else "0"

    def to_data(self) -> dict:
        """Machine form: exponents of theta with coefficient vectors."""
        return {
            "terms": [[fmt(-o), c.serialize()] for o, c in self.terms],
            "prec": fmt(self.prec),
        }

    @classmethod
    def from_data(cls, ctx: FieldCtx, data: dict) -> "PSeries":
        terms = [(-Fraction(a), ctx.encode(int(x) for x in v.split(","))) for a, v in data["terms"]]
        return cls(ctx, [(o, ctx.from_int(v)) for o, v in terms], ext(data["prec"]))


def theta_pow(ctx: FieldCtx, a) -> PSeries:
    """The single-term series ``theta**a``."""
    return PSeries._raw(ctx, ((-Fraction(a), ctx.one),), INF)


def ords(series: Iterable[PSeries]) -> list[ExtRat]:
    return [s.ord() for s in series]
