"""Reading and writing t-motive spec files.

A spec is a JSON object::

    {"family": "rank2", "q": 2, "p": 2, "n": 2, "epsilon": 0,
     "A": [[[[1, 1]], [[6, 1]]], [[[-2, 1]], []]]}

Every matrix entry (or standard1 parameter under ``"params"``) is an exact
Laurent sum ``sum c * theta^e`` written as a list of ``[e, c]`` pairs.
Exponents are integers or ``"num/den"`` strings, coefficients are integers
naming elements of ``F_q`` (base-``p`` digits for ``q = p^e``).  ``p`` is
optional and checked against ``q`` when present.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .ffield import get_field
from .pseries import PSeries
from .tmotive import RANK2, STANDARD1, STD1_PARAMS, SpecError, TMotiveSpec
from .valuation import fmt

__all__ = ["load_spec", "parse_spec", "spec_to_data", "series_to_data", "series_from_data"]


def _exponent(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SpecError(f"{where}: exponent must be an integer or a 'num/den' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"{where}: exponent {value!r} is not a rational number") from None


def series_from_data(ctx, data: Any, where: str) -> PSeries:
    """Exact Laurent sum from a list of ``[exponent, coefficient]`` pairs."""
    if not isinstance(data, list):
        raise SpecError(f"{where}: expected a list of [exponent, coefficient] pairs")
    terms = {}
    for k, pair in enumerate(data):
        here = f"{where}[{k}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SpecError(f"{here}: expected an [exponent, coefficient] pair")
        e = _exponent(pair[0], here)
        c = pair[1]
        if isinstance(c, bool) or not isinstance(c, int) or not 0 <= c < ctx.q:
            raise SpecError(f"{here}: coefficient must be an integer in [0, {ctx.q})")
        if e in terms:
            raise SpecError(f"{here}: exponent {fmt(e)} repeated")
        terms[e] = ctx.from_int(c)
    return PSeries.laurent(ctx, terms)


def series_to_data(s: PSeries) -> list:
    if not s.is_exact():
        raise SpecError("only exact series can be written to a spec")
    return [[fmt(-o), c.v] for o, c in reversed(s.terms)]


def _int_field(data: dict, key: str, default=None) -> int:
    if key not in data:
        if default is None:
            raise SpecError(f"missing field {key!r}")
        return default
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"field {key!r} must be an integer")
    return v


def parse_spec(data: Any) -> TMotiveSpec:
    """Validate a decoded JSON spec and build the :class:`TMotiveSpec`."""
    if not isinstance(data, dict):
        raise SpecError("a spec must be a JSON object")
    family = data.get("family", RANK2)
    q = _int_field(data, "q")
    try:
        ctx = get_field(q, 1)
    except (ValueError, ArithmeticError) as err:
        raise SpecError(f"field 'q': {err}") from None
    if "p" in data and _int_field(data, "p") != ctx.p:
        raise SpecError(f"field 'p': {data['p']} is not the characteristic of F_{q}")
    epsilon = _int_field(data, "epsilon", 0)
    if family == RANK2:
        A = data.get("A")
        if not isinstance(A, list) or not A or any(not isinstance(row, list) for row in A):
            raise SpecError("field 'A': expected a square matrix (list of rows)")
        n = _int_field(data, "n", len(A))
        if len(A) != n or any(len(row) != n for row in A):
            raise SpecError(f"field 'A': expected {n} rows of {n} entries")
        entries = [[series_from_data(ctx, A[i][j], f"A[{i}][{j}]") for j in range(n)] for i in range(n)]
        return TMotiveSpec.rank2(entries, epsilon)
    if family == STANDARD1:
        params = data.get("params")
        if not isinstance(params, dict):
            raise SpecError("field 'params': expected an object")
        missing = [k for k in STD1_PARAMS if k not in params]
        extra = [k for k in params if k not in STD1_PARAMS]
        if missing or extra:
            raise SpecError(f"field 'params': missing {missing}, unexpected {extra}")
        return TMotiveSpec.standard1(**{k: series_from_data(ctx, params[k], f"params.{k}") for k in STD1_PARAMS})
    raise SpecError(f"field 'family': unknown family {family!r}")


def load_spec(path: str | Path) -> TMotiveSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SpecError(f"{path}: line {err.lineno}, column {err.colno}: {err.msg}") from None
    try:
        return parse_spec(data)
    except SpecError as err:
        raise SpecError(f"{path}: {err}") from None


def spec_to_data(spec: TMotiveSpec) -> dict:
    out = {"family": spec.family, "q": spec.q, "p": spec.ctx.p, "n": spec.n, "epsilon": spec.epsilon}
    if spec.family == RANK2:
        out["A"] = [[series_to_data(x) for x in row] for row in spec.A]
    else:
        out["params"] = {k: series_to_data(v) for k, v in spec.params}
    return out
