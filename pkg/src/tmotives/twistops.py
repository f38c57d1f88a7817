"""The twisted operator algebra ``C{tau}[T]``.

Operators are finite sums ``c * tau**g * T**b`` with coefficients written on
the left.  ``T`` is central and ``tau * c = c**q * tau``.  Coefficients are
:class:`~tmotives.pseries.PSeries`, so an operator acts on power series in
``T`` whose coefficients are series in ``1/theta``.
"""
from __future__ import annotations

from typing import Iterable

from .ffield import CtxMismatch, FieldCtx
from .pseries import PSeries

__all__ = ["TwistOp", "NotSeparable", "NoHead"]


class NotSeparable(ValueError):
    """The ``tau**0`` coefficient of the head vanishes."""


class NoHead(ValueError):
    """The operator has no ``T**0`` part."""


class TwistOp:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: dict | Iterable = ()):
        self.ctx = ctx
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[tuple[int, int], PSeries] = {}
        for (g, b), c in items:
            if g < 0 or b < 0:
                raise ValueError("tau and T degrees must be nonnegative")
            if c.ctx != ctx:
                raise CtxMismatch("coefficient from another field")
            acc[(g, b)] = acc[(g, b)] + c if (g, b) in acc else c
        self.terms = {k: v for k, v in sorted(acc.items()) if not v.is_zero()}

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, c: PSeries) -> "TwistOp":
        return cls(c.ctx, {(0, 0): c})

    @classmethod
    def tau(cls, ctx: FieldCtx, k: int = 1) -> "TwistOp":
        return cls(ctx, {(k, 0): PSeries.const(ctx, ctx.one)})

    @classmethod
    def T(cls, ctx: FieldCtx, k: int = 1) -> "TwistOp":
        return cls(ctx, {(0, k): PSeries.const(ctx, ctx.one)})

    @classmethod
    def one(cls, ctx: FieldCtx) -> "TwistOp":
        return cls.tau(ctx, 0)

    # -- algebra ----------------------------------------------------------
    def _lift(self, other) -> "TwistOp":
        if isinstance(other, TwistOp):
            if other.ctx != self.ctx:
                raise CtxMismatch("operators over different fields")
            return other
        if isinstance(other, PSeries):
            return TwistOp.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return TwistOp(self.ctx, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return TwistOp(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return op_mul(self, other)

    def __rmul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return op_mul(other, self)

    def __eq__(self, other):
        if not isinstance(other, TwistOp):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(
            self.terms[k] == other.terms[k] for k in self.terms)

    def agrees_with(self, other: "TwistOp") -> bool:
        """Term-by-term equality up to each coefficient's precision."""
        return all(c.is_zero() for c in (self - other).terms.values()) if (self - other).terms else True

    def tau_degree(self, b: int | None = None) -> int:
        return max((g for g, bb in self.terms if b is None or bb == b), default=-1)

    def T_degree(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def coeff(self, g: int, b: int) -> PSeries:
        return self.terms.get((g, b), PSeries.zero(self.ctx))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (g, b), c in self.terms.items():
            mono = "·".join(s for s in (f"τ^{g}" if g else "", f"T^{b}" if b else "") if s)
            parts.append(f"({c})" + (f"·{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__

    def embed(self, big: FieldCtx) -> "TwistOp":
        """The same operator with coefficients moved into the larger field ``big``."""
        if big == self.ctx:
            return self
        return TwistOp(big, {k: c.embed(big) for k, c in self.terms.items()})

    def to_affine(self):
        return to_affine(self)


def op_mul(u: TwistOp, v: TwistOp) -> TwistOp:
    """Product ``u * v`` using ``tau**g * c = c**(q**g) * tau**g``."""
    if u.ctx != v.ctx:
        raise CtxMismatch("operators over different fields")
    out = []
    for (g1, b1), c1 in u.terms.items():
        for (g2, b2), c2 in v.terms.items():
            out.append(((g1 + g2, b1 + b2), c1 * c2.frob(g1)))
    return TwistOp(u.ctx, out)


def to_affine(op: TwistOp):
    """Read off the affine equation whose operator is ``op``."""
    from .affine.equation import AffineEq

    head_terms = {g: c for (g, b), c in op.terms.items() if b == 0}
    if not head_terms:
        raise NoHead("operator has no T**0 part")
    if 0 not in head_terms:
        raise NotSeparable("coefficient of tau**0 vanishes")
    r = max(head_terms)
    head = [head_terms.get(g, PSeries.zero(op.ctx)) for g in range(r + 1)]
    tail = {(b, g): c for (g, b), c in op.terms.items() if b > 0}
    return AffineEq(q=op.ctx.q, head=head, tail=tail)


def apply_to_Tseries(op: TwistOp, xs: list[PSeries], length: int | None = None) -> list[PSeries]:
    """Coefficients of ``op`` applied to ``sum x_i T**i`` (with ``x_j = 0`` for ``j < 0``)."""
    length = len(xs) if length is None else length
    if length > len(xs):
        raise ValueError("not enough coefficients supplied")
    ctx = xs[0].ctx if xs else op.ctx
    op = op.embed(ctx)
    out = []
    for i in range(length):
        acc = PSeries.zero(ctx)
        for (g, b), c in op.terms.items():
            if i - b >= 0:
                acc = acc + c * xs[i - b].frob(g)
        out.append(acc)
    return out
