"""Power series in ``T`` with :class:`PSeries` coefficients, truncated to a length.

A T-series is a plain list ``[x_0, x_1, ...]``; missing trailing entries are
unknown, not zero.
"""
from __future__ import annotations

from math import lcm
from typing import Sequence

from .ffield import FieldCtx, get_field
from .pseries import PSeries

REL_PREC = 64

__all__ = ["tmul", "tfrob", "tinverse", "common_field", "embed_all"]


def tmul(a: Sequence[PSeries], b: Sequence[PSeries], length: int | None = None) -> list[PSeries]:
    length = min(len(a), len(b)) if length is None else length
    ctx = a[0].ctx
    out = []
    for i in range(length):
        acc = PSeries.zero(ctx)
        for k in range(i + 1):
            acc = acc + a[k] * b[i - k]
        out.append(acc)
    return out


def tfrob(a: Sequence[PSeries], k: int) -> list[PSeries]:
    """Coefficient-wise Frobenius twist (``T`` is fixed)."""
    return [x.frob(k) for x in a]


def tinverse(a: Sequence[PSeries], length: int | None = None) -> list[PSeries]:
    """Inverse of a T-series with invertible constant term."""
    length = len(a) if length is None else length
    x0 = a[0]
    exact_sum = x0.is_exact() and len(x0.terms) > 1
    inv0 = x0.inverse(-x0.ord() + REL_PREC) if exact_sum else x0.inverse()
    out = [inv0]
    for i in range(1, length):
        acc = PSeries.zero(a[0].ctx)
        for k in range(1, i + 1):
            acc = acc + a[k] * out[i - k]
        out.append(-(acc * inv0))
    return out


def common_field(ctxs: Sequence[FieldCtx]) -> FieldCtx:
    ctxs = list(ctxs)
    q = ctxs[0].q
    if any(c.q != q for c in ctxs):
        raise ValueError("fields with different q")
    m = lcm(*[c.m for c in ctxs])
    return get_field(q, m)


def embed_all(series: Sequence[PSeries], big: FieldCtx) -> list[PSeries]:
    return [s if s.ctx == big else s.embed(big) for s in series]
