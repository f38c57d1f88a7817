"""Command-line interface: ``tmotives {h1,polygon,chain,reproduce-paper,sweep}``.

Every command prints a human-readable report, or the machine report with
``--json``; ``--out`` also writes the machine report (JSON) to a file.  Files
are written atomically, so a failing run never leaves a partial file behind.

Exit codes: 0 decisive, 2 inconclusive, 1 error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .affine import AffineEq, SolverConfig, minimal_chain, s0_basis
from .affine.certificate import classify_chain
from .affine.solver import DEFAULT_FIELD_CAP, FieldTooSmall
from .ffield import NoSolutionInField
from .pseries import PrecisionExhausted, PSeries
from .reproduce import FAIL, UNKNOWN, run_rows
from .specio import load_spec, spec_to_data
from .tmotive import (
    RANK2, DualUnavailable, H1Result, SpecError, TMotiveSpec, check_quadruple, eliminate_n2, eliminate_std1,
    h1, homology, pairing_rank, random_specs, sweep_one,
)
from .valuation import INF, fmt, lower_hull

__all__ = ["main", "build_parser", "RunConfig", "ConfigError", "EXIT_OK", "EXIT_ERROR", "EXIT_UNKNOWN"]

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2
INCONCLUSIVE = (PrecisionExhausted, NoSolutionInField, FieldTooSmall)
DEFAULT_DEPTH = 24
DEFAULT_SWEEP_DEPTH = 12


class ConfigError(ValueError):
    """Invalid command-line configuration."""


# -- configuration ---------------------------------------------------------------------

def parse_precision(text: Optional[str]) -> Fraction | float:
    """Absolute precision: a positive rational (``"64"``, ``"129/2"``) or ``"inf"``."""
    if text is None or text.lower() == "inf":
        return INF
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--precision: {text!r} is not a rational number") from None
    if value <= 0:
        raise ConfigError("--precision must be positive")
    return value


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: Optional[str] = None
    depth: int = DEFAULT_DEPTH
    precision: Fraction | float = INF
    field_degree: int = DEFAULT_FIELD_CAP
    epsilon: Optional[int] = None
    out: Optional[str] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.depth < 1:
            raise ConfigError("--depth must be positive")
        if self.precision <= 0:
            raise ConfigError("--precision must be positive")
        if self.field_degree < 1:
            raise ConfigError("--field-degree must be positive")

    @property
    def solver(self) -> SolverConfig:
        return SolverConfig(prec=self.precision, field_cap=self.field_degree)

    def require_depth(self, n: int) -> None:
        if self.depth < n + 2:
            raise ConfigError(f"--depth {self.depth} is too small: the equation has n = {n}, need depth >= {n + 2}")

    def to_data(self) -> dict:
        return {
            "command": self.command, "spec": self.spec, "depth": self.depth,
            "precision": fmt(self.precision), "field_degree": self.field_degree,
            "epsilon": self.epsilon, "seed": self.seed,
        }


# -- output -----------------------------------------------------------------------------

def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _header(cfg: RunConfig) -> dict:
    return {"tool": "tmotives", "version": __version__, "config": cfg.to_data()}


# -- spec handling ----------------------------------------------------------------------

def _load(cfg: RunConfig) -> TMotiveSpec:
    if cfg.spec is None:
        raise ConfigError("--spec is required")
    spec = load_spec(cfg.spec)
    if cfg.epsilon is not None:
        if spec.family != RANK2:
            raise ConfigError("--epsilon applies to the rank2 family only")
        spec = dataclasses.replace(spec, epsilon=cfg.epsilon)
    return spec


def _eliminate(spec: TMotiveSpec) -> AffineEq:
    return eliminate_n2(spec) if spec.family == RANK2 else eliminate_std1(spec)


# -- report sections -------------------------------------------------------------------

def _series_text(s: PSeries, terms: int = 6) -> str:
    if len(s.terms) <= terms:
        return str(s)
    head = PSeries(s.ctx, s.terms[:terms])
    return f"{head} + ... ({len(s.terms) - terms} more terms)"


def equation_data(eq: AffineEq) -> dict:
    return {
        "q": eq.q, "r": eq.r, "n": eq.n,
        "head": [{"gamma": g, "ord": fmt(a.ord()), "value": _series_text(a)} for g, a in enumerate(eq.head)],
        "tail": [{"beta": b, "gamma": g, "ord": fmt(c.ord()), "value": _series_text(c)}
                 for (b, g), c in sorted(eq.tail.items())],
    }


def polygon_data(eq: AffineEq) -> dict:
    np = lower_hull(eq.head_points())
    return {
        "vertices": [[p.x, fmt(p.y)] for p in np.vertices],
        "segments": [{"left": [s.left.x, fmt(s.left.y)], "right": [s.right.x, fmt(s.right.y)],
                      "slope": fmt(s.slope), "root_ord": fmt(s.root_ord), "roots": s.x_span}
                     for s in np.segments],
    }


def dimension_section(res: H1Result) -> dict:
    dim = res.dim
    lo, hi = res.interval
    return {
        "interval": [lo, hi],
        "decisive": res.decisive,
        "label": dim.label,
        "equation": equation_data(res.eq),
        "polygon": polygon_data(res.eq),
        "s0_ords": [fmt(c.ords()[0]) if c.ords() else "?" for c in dim.chains],
        "chains": [
            {"ords": [fmt(o) for o in c.ords()], "exact_until": c.exact_until, "cutoff": c.cutoff,
             "note": c.note, "verdict": v.to_data()}
            for c, v in zip(dim.chains, dim.verdicts)
        ],
        "separation": dim.separation.to_data(),
        "residuals_ok": res.residual_ok,
        "solutions": [v.ord_table() for v in res.vectors],
    }


def _inconclusive(err: Exception) -> dict:
    return {"unknown": f"{type(err).__name__}: {err}", "decisive": False}


def _dim_text(name: str, section: dict, r: int) -> str:
    if "unavailable" in section:
        return f"{name} unavailable"
    if "unknown" in section:
        return f"{name} unknown ({section['unknown']})"
    lo, hi = section["interval"]
    if lo != hi:
        return f"{name} in [{lo}, {hi}] [unknown]"
    return f"{name} = {lo} = r: uniformizable" if lo == r else f"{name} = {lo} [certified]"


# -- commands ---------------------------------------------------------------------------

def cmd_h1(cfg: RunConfig) -> tuple[dict, int]:
    spec = _load(cfg)
    report = _header(cfg)
    report.update(spec=spec_to_data(spec), r=spec.r)
    cfg.require_depth(_eliminate(spec).n)
    up = down = None
    try:
        up = h1(spec, cfg.depth, cfg.solver)
        report["h1"] = dimension_section(up)
    except INCONCLUSIVE as err:
        report["h1"] = _inconclusive(err)
    try:
        down = homology(spec, cfg.depth, cfg.solver)
        report["h1_dual"] = dimension_section(down)
    except DualUnavailable as err:
        report["h1_dual"] = {"unavailable": str(err), "decisive": False}
    except INCONCLUSIVE as err:
        report["h1_dual"] = _inconclusive(err)
    report["pairing"] = None
    if up is not None and down is not None and up.decisive and down.decisive:
        report["pairing"] = pairing_rank(up.vectors, down.vectors).to_data()
    report["summary"] = ", ".join(
        _dim_text(k, report[k], spec.r) for k in ("h1", "h1_dual") if "unavailable" not in report[k])
    decisive = report["h1"]["decisive"] and (
        "unavailable" in report["h1_dual"] or report["h1_dual"]["decisive"])
    residuals = all(report[k].get("residuals_ok", True) for k in ("h1", "h1_dual"))
    if not residuals:
        report["summary"] += " (residual check failed)"
    report["decisive"] = decisive and residuals
    return report, EXIT_OK if report["decisive"] else EXIT_UNKNOWN


def cmd_polygon(cfg: RunConfig) -> tuple[dict, int]:
    spec = _load(cfg)
    eq = _eliminate(spec)
    report = _header(cfg)
    report.update(equation=equation_data(eq), polygon=polygon_data(eq))
    return report, EXIT_OK


def cmd_chain(cfg: RunConfig, index: int) -> tuple[dict, int]:
    spec = _load(cfg)
    eq = _eliminate(spec)
    cfg.require_depth(eq.n)
    basis = s0_basis(eq, cfg.solver)
    if not 0 <= index < len(basis):
        raise ConfigError(f"--index must lie in [0, {len(basis) - 1}]")
    rec = minimal_chain(eq, basis[index], cfg.depth, cfg.solver)
    verdict = classify_chain(rec)
    report = _header(cfg)
    report.update(index=index, x0=_series_text(basis[index]), chain=rec.to_data(), verdict=verdict.to_data())
    return report, EXIT_OK if verdict.decisive else EXIT_UNKNOWN


def cmd_reproduce(cfg: RunConfig) -> tuple[dict, int]:
    rows = run_rows(cfg.depth, cfg.solver)
    report = _header(cfg)
    report["rows"] = [r.to_data() for r in rows]
    statuses = {r.status for r in rows}
    code = EXIT_ERROR if FAIL in statuses else EXIT_UNKNOWN if UNKNOWN in statuses else EXIT_OK
    return report, code


def sweep_records(cfg: RunConfig, count: int, q: int, span: int, extra: list[str]):
    """Header, one record per sample, then the summary; deterministic given the config."""
    yield _header(cfg) | {"samples": {"count": count, "q": q, "span": span, "extra_specs": extra}}
    specs = [load_spec(p) for p in extra] + random_specs(cfg.seed or 0, count, q, span)
    quads: dict[tuple, int] = {}
    undecided = violations = 0
    for k, spec in enumerate(specs):
        rec = sweep_one(spec, cfg.depth, cfg.solver)
        rec["sample"] = k
        if rec.get("quadruple"):
            quad = tuple(rec["quadruple"])
            quads[quad] = quads.get(quad, 0) + 1
            violations += bool(rec["violations"])
        else:
            undecided += 1
        yield rec
    yield {"summary": {
        "samples": len(specs), "undecided": undecided, "violations": violations,
        "quadruples": [{"quadruple": list(qd), "count": n} for qd, n in sorted(quads.items())],
        "all_constraints_hold": all(not check_quadruple(qd) for qd in quads),
    }}


def cmd_sweep(cfg: RunConfig, count: int, q: int, span: int, extra: list[str]) -> tuple[dict, int]:
    for path in extra:  # validate every spec before anything is written
        load_spec(path)
    lines = []
    handle = None
    tmp = None
    if cfg.out:
        out = Path(cfg.out)
        fd, tmp = tempfile.mkstemp(dir=out.parent if str(out.parent) else ".", prefix=f".{out.name}.", suffix=".tmp")
        handle = os.fdopen(fd, "w", encoding="utf-8")
    try:
        for rec in sweep_records(cfg, count, q, span, extra):
            line = json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n"
            lines.append(rec)
            if handle is not None:
                handle.write(line)  # one complete record at a time
                handle.flush()
        if handle is not None:
            handle.close()
            os.replace(tmp, cfg.out)
    except BaseException:
        if handle is not None:
            handle.close()
            Path(tmp).unlink(missing_ok=True)
        raise
    summary = lines[-1]["summary"]
    report = lines[0] | {"records": lines[1:-1], "summary": summary}
    return report, EXIT_OK


# -- text rendering ---------------------------------------------------------------------

def _equation_text(eq: dict) -> list[str]:
    out = [f"  q = {eq['q']}, r = {eq['r']}, n = {eq['n']}"]
    out += [f"  a_{h['gamma']}: ord {h['ord']}   {h['value']}" for h in eq["head"]]
    out += [f"  b_({t['beta']},{t['gamma']}): ord {t['ord']}   {t['value']}" for t in eq["tail"]]
    return out


def _polygon_text(poly: dict) -> list[str]:
    out = ["  vertices: " + " ".join(f"({x}, {y})" for x, y in poly["vertices"])]
    out += [f"  segment ({s['left'][0]}, {s['left'][1]})-({s['right'][0]}, {s['right'][1]}): "
            f"root ord {s['root_ord']} x {s['roots']}" for s in poly["segments"]]
    return out


def _section_text(title: str, sec: dict) -> list[str]:
    out = [f"{title}:"]
    if "unavailable" in sec or "unknown" in sec:
        return out + [f"  {sec.get('unavailable') or sec.get('unknown')}"]
    out += ["  elimination:"] + ["  " + s for s in _equation_text(sec["equation"])]
    out += ["  head polygon:"] + ["  " + s for s in _polygon_text(sec["polygon"])]
    out.append("  S_0 ords: " + ", ".join(sec["s0_ords"]))
    for k, ch in enumerate(sec["chains"]):
        v = ch["verdict"]
        cert = v["certificate"]
        line = f"  chain {k}: {v['status']}"
        if cert and cert["fit"]:
            f = cert["fit"]
            t = "i" if f["rho"] == "1" else f"{f['rho']}^i"
            a = f["A"]
            sign, a = ("-", a[1:]) if a.startswith("-") else ("+", a)
            line += f" (ord x_i = {f['B']} {sign} {a}*{t}, induction from i = {cert['induction_start']})"
        elif v["reason"]:
            line += f" ({v['reason']})"
        out.append(line)
        out.append("    ords: " + " ".join(ch["ords"]))
        if ch["cutoff"]:
            out.append(f"    exact until i = {ch['exact_until']} ({ch['cutoff']}): {ch['note']}")
    sep = sec["separation"]
    if sep["failure"]:
        out.append(f"  separation: {sep['failure']}")
    out.append(f"  interval: [{sec['interval'][0]}, {sec['interval'][1]}]  ({sec['label']})")
    out.append(f"  residual check: {'ok' if sec['residuals_ok'] else 'FAILED'}")
    return out


def render_text(command: str, report: dict) -> str:
    if command == "h1":
        lines = [f"t-motive: family {report['spec']['family']}, q = {report['spec']['q']}, r = {report['r']}"]
        lines += _section_text("h1", report["h1"]) + _section_text("h1_dual (h_1)", report["h1_dual"])
        if report["pairing"]:
            p = report["pairing"]
            lines.append(f"pairing: rank in [{p['rank'][0]}, {p['rank'][1]}], "
                         f"rank at T=0 in [{p['rank_at_T0'][0]}, {p['rank_at_T0'][1]}]")
        lines.append(report["summary"])
    elif command == "polygon":
        lines = ["elimination:"] + _equation_text(report["equation"])
        lines += ["head polygon:"] + _polygon_text(report["polygon"])
    elif command == "chain":
        lines = [f"chain {report['index']} from x_0 = {report['x0']}",
                 f"{'i':>4}  {'ord':>14}  {'segment':<24} {'roots':>5}  {'simple':<6} exact"]
        for s in report["chain"]["steps"]:
            seg = "-" if s["segment"] is None else " ".join(f"({x},{y})" for x, y in s["segment"])
            lines.append(f"{s['i']:>4}  {s['ord']:>14}  {seg:<24} {s['roots']:>5}  {str(s['simple']):<6} {s['exact']}")
        if report["chain"]["cutoff"]:
            lines.append(f"exact until i = {report['chain']['exact_until']}: {report['chain']['note']}")
        v = report["verdict"]
        lines.append(f"verdict: {v['status']}" + (f" ({v['reason']})" if v["reason"] else ""))
    elif command == "reproduce-paper":
        width = max(len(r["key"]) for r in report["rows"])
        lines = [f"{r['key']:<{width}}  {r['status']:<7}  {r['detail']}" for r in report["rows"]]
    else:
        s = report["summary"]
        lines = [f"samples: {s['samples']}, undecided: {s['undecided']}, violations: {s['violations']}"]
        lines += [f"  quadruple {tuple(x['quadruple'])}: {x['count']}" for x in s["quadruples"]]
    return "\n".join(lines) + "\n"


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, help="chain depth (default 24; 12 for sweep)")
    common.add_argument("--precision", help="absolute precision bound: positive rational or 'inf' (default inf)")
    common.add_argument("--field-degree", type=int, default=DEFAULT_FIELD_CAP,
                        help=f"largest extension degree of F_q used for roots (default {DEFAULT_FIELD_CAP})")
    common.add_argument("--out", help="also write the machine report to this file")
    common.add_argument("--json", action="store_true", help="print the machine report instead of text")

    with_spec = argparse.ArgumentParser(add_help=False)
    with_spec.add_argument("--spec", required=True, help="spec file (JSON)")
    with_spec.add_argument("--epsilon", type=int, choices=(0, 1), help="override the nilpotent part")

    parser = argparse.ArgumentParser(prog="tmotives", description="h^1 and h_1 of Anderson t-motives.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("h1", parents=[common, with_spec], help="h^1, h_1 and the pairing of one t-motive")
    sub.add_parser("polygon", parents=[common, with_spec], help="elimination and head Newton polygon")
    chain = sub.add_parser("chain", parents=[common, with_spec], help="trace one minimal chain")
    chain.add_argument("--index", type=int, default=0, help="which S_0 basis element starts the chain")
    sub.add_parser("reproduce-paper", parents=[common], help="regression table over the built-in examples")
    sweep = sub.add_parser("sweep", parents=[common], help="random search for (r, h^1, h_1, rank) quadruples")
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--count", type=int, default=10, help="number of random samples")
    sweep.add_argument("--q", type=int, default=2)
    sweep.add_argument("--span", type=int, default=8, help="largest |exponent| of the random entries")
    sweep.add_argument("--spec", action="append", default=[], help="extra spec to include (repeatable)")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    depth = args.depth
    if depth is None:
        depth = DEFAULT_SWEEP_DEPTH if args.command == "sweep" else DEFAULT_DEPTH
    spec = getattr(args, "spec", None)
    return RunConfig(
        command=args.command, spec=spec if isinstance(spec, str) else None, depth=depth,
        precision=parse_precision(args.precision), field_degree=args.field_degree,
        epsilon=getattr(args, "epsilon", None), out=args.out, seed=getattr(args, "seed", None),
    )


def run(args: argparse.Namespace) -> tuple[dict, int]:
    cfg = _config(args)
    commands: dict[str, Callable[[], tuple[dict, int]]] = {
        "h1": lambda: cmd_h1(cfg),
        "polygon": lambda: cmd_polygon(cfg),
        "chain": lambda: cmd_chain(cfg, args.index),
        "reproduce-paper": lambda: cmd_reproduce(cfg),
        "sweep": lambda: cmd_sweep(cfg, args.count, args.q, args.span, args.spec),
    }
    return commands[args.command]()


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = run(args)
        if args.out and args.command != "sweep":
            write_atomic(args.out, render_json(report))
    except (ConfigError, SpecError, OSError, ValueError, ArithmeticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(render_json(report) if args.json else render_text(args.command, report))
    return code


if __name__ == "__main__":
    sys.exit(main())
