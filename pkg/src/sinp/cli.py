"""Command-line front end: ``sinp eval | table | check | bench``.

Exit codes: 0 success, 1 a check failed, 2 invalid arguments, 3 a method did
not converge, 4 the output could not be written.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

from .checks import run_checks
from .core import DEFAULT_NODES, make_context
from .errors import NonConvergenceError, QuadratureError, RootError
from .extension import PTrig, cos_p, sin_p
from .methods import DEFAULT_MAX_ITER, DEFAULT_TOL, METHODS, compare_methods, run_method

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NONCONVERGENCE, EXIT_OUTPUT = 0, 1, 2, 3, 4
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending option."""

    def __init__(self, field_name, message):
        super().__init__(f"invalid {field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RunConfig:
    p: tuple[float, ...]
    method: str = "inverse-power"
    n_nodes: int = DEFAULT_NODES
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    output_format: str = "csv"
    output_path: str | None = None
    repeats: int = 5
    xs: tuple[float, ...] = field(default=())

    def validate(self, command: str) -> RunConfig:
        if not self.p:
            raise ConfigError("p", "at least one --p is required")
        if command in ("eval", "table") and len(self.p) > 1:
            raise ConfigError("p", f"{command} takes a single --p")
        for p in self.p:
            if not math.isfinite(p) or p <= 1.0:
                raise ConfigError("p", f"must be finite and > 1, got {p!r}")
        if self.method not in METHODS + ("all",):
            raise ConfigError("method", f"must be one of {', '.join(METHODS + ('all',))}")
        if self.method == "all" and command in ("eval", "table"):
            raise ConfigError("method", f"'all' is only valid for check and bench, not {command}")
        if self.n_nodes < 3 or self.n_nodes % 2 == 0:
            raise ConfigError("nodes", f"must be odd and >= 3, got {self.n_nodes}")
        if not math.isfinite(self.tol) or self.tol <= 0.0:
            raise ConfigError("tol", f"must be finite and > 0, got {self.tol!r}")
        if self.max_iter < 1:
            raise ConfigError("max-iter", f"must be >= 1, got {self.max_iter}")
        if self.output_format not in FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")
        if self.repeats < 1:
            raise ConfigError("repeats", f"must be >= 1, got {self.repeats}")
        if command == "eval":
            if not self.xs:
                raise ConfigError("x", "at least one --x is required")
            if not all(math.isfinite(x) for x in self.xs):
                raise ConfigError("x", "values must be finite")
        return self


# --------------------------------------------------------------------------
# serialisation
# --------------------------------------------------------------------------

def _num(v):
    """Shortest round-trip text for a double."""
    return repr(float(v))


def _num17(v):
    return format(float(v), ".17g")


def render(meta: dict, columns: list[str], rows: list[list], fmt: str, number=_num) -> str:
    """CSV with ``# key=value`` metadata lines, or JSON ``{"meta", "rows"}``."""
    if fmt == "json":
        # NaN marks a failed method; JSON has no NaN, so it becomes null
        clean = [[None if isinstance(v, float) and math.isnan(v) else v for v in r] for r in rows]
        body = {"meta": meta, "rows": [dict(zip(columns, r)) for r in clean]}
        return json.dumps(body, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([number(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    # raises OSError, mapped to exit code 4 by the caller
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _table_for(cfg: RunConfig, p: float):
    ctx = make_context(p)
    return run_method(ctx, cfg.method, cfg.n_nodes, cfg.tol, cfg.max_iter)


def _meta(cfg: RunConfig, table) -> dict:
    ctx = table.ctx
    return {
        "p": ctx.p,
        "pi_p": ctx.pi_p,
        "m_p": ctx.m_p,
        "method": table.method,
        "nodes": cfg.n_nodes,
        "tol": cfg.tol,
        "iterations": table.iterations_or_steps,
        "max_residual": float(abs(table.pythagorean_residual()).max()),
    }


def cmd_eval(cfg: RunConfig) -> str:
    table = _table_for(cfg, cfg.p[0])
    trig = PTrig(table)
    rows = [[float(x), sin_p(trig, x), cos_p(trig, x)] for x in cfg.xs]
    # JSON numbers are shortest round-trip, which keeps the full double
    return render(_meta(cfg, table), ["x", "sin_p", "cos_p"], rows, cfg.output_format, _num17)


def cmd_table(cfg: RunConfig) -> str:
    table = _table_for(cfg, cfg.p[0])
    rows = [[float(x), float(s), float(d)]
            for x, s, d in zip(table.nodes, table.values, table.derivs)]
    return render(_meta(cfg, table), ["x", "sin_p", "cos_p"], rows, cfg.output_format)


def cmd_check(cfg: RunConfig):
    """Returns ``(rendered rows, summary text, failures)``."""
    rows, failures = [], []
    lines = [f"{'p':>6} {'m_p':>10} {'inverse-power':>14} {'ode':>10} {'zeta-inverse':>13} "
             f"{'iterations':>10} {'checks':>8}"]
    for p in cfg.p:
        ctx = make_context(p)
        report, results = run_checks(ctx, cfg.n_nodes, cfg.tol, cfg.max_iter)
        end = {m: float(report.tables[m].values[-1]) if m in report.tables else float("nan")
               for m in METHODS}
        n_it = report.counts.get("inverse-power", -1)
        bad = [r for r in results if not r.passed]
        failures += [f"p={p}: {r.line()}" for r in bad]
        status = "pass" if not bad else f"{len(bad)} fail"
        rows.append([ctx.p, ctx.m_p, end["inverse-power"], end["ode"], end["zeta-inverse"],
                     n_it, len(results) - len(bad), len(bad)])
        lines.append(f"{ctx.p:>6g} {ctx.m_p:>10.6f} {end['inverse-power']:>14.6f} {end['ode']:>10.6f} "
                     f"{end['zeta-inverse']:>13.6f} {n_it:>10d} {status:>8}")
    meta = {"nodes": cfg.n_nodes, "tol": cfg.tol, "max_iter": cfg.max_iter}
    columns = ["p", "m_p", "inverse-power", "ode", "zeta-inverse", "iterations", "passed", "failed"]
    return render(meta, columns, rows, cfg.output_format), "\n".join(lines) + "\n", failures


def cmd_bench(cfg: RunConfig) -> str:
    """Mean wall time per method over ``repeats`` runs and the ratio to the
    fastest method for the same ``p``. One row per ``(p, method)``."""
    rows = []
    for p in cfg.p:
        ctx = make_context(p)
        totals = {m: 0.0 for m in METHODS}
        failed = {}
        for _ in range(cfg.repeats):
            report = compare_methods(ctx, cfg.n_nodes, cfg.tol, cfg.max_iter)
            for m in METHODS:
                if m in report.failures:
                    failed[m] = report.failures[m]
                else:
                    totals[m] += report.seconds[m]
        means = {m: totals[m] / cfg.repeats for m in METHODS if m not in failed}
        fastest = min(means.values()) if means else float("nan")
        for m in METHODS:
            mean = means.get(m, float("nan"))
            rows.append([ctx.p, m, mean, mean / fastest, cfg.repeats, failed.get(m, "")])
    meta = {"nodes": cfg.n_nodes, "tol": cfg.tol, "repeats": cfg.repeats}
    return render(meta, ["p", "method", "mean_seconds", "ratio_to_fastest", "repeats", "error"],
                  rows, cfg.output_format)


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sinp", description="Generalised sine sin_p and its friends.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "evaluate sin_p and cos_p at the given --x values",
        "table": "write the half-period table",
        "check": "run all methods and the invariant suite",
        "bench": "relative timings of the three methods",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--p", type=float, action="append", default=[],
                        help="exponent p > 1 (repeatable for check and bench)")
        sp.add_argument("--method", default="all" if name in ("check", "bench") else "inverse-power",
                        help="inverse-power, ode, zeta-inverse or all (check and bench always run all three)")
        sp.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="odd grid size")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
        sp.add_argument("--format", default="csv", help="csv or json")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        if name == "bench":
            sp.add_argument("--repeats", type=int, default=5)
        if name == "eval":
            sp.add_argument("--x", type=float, action="append", default=[], help="argument (repeatable)")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        p=tuple(args.p),
        method=args.method,
        n_nodes=args.nodes,
        tol=args.tol,
        max_iter=args.max_iter,
        output_format=args.format,
        output_path=args.out,
        repeats=getattr(args, "repeats", 5),
        xs=tuple(getattr(args, "x", ())),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args).validate(args.command)
    except ConfigError as exc:
        print(f"sinp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    code = EXIT_OK
    try:
        if args.command == "eval":
            text = cmd_eval(cfg)
        elif args.command == "table":
            text = cmd_table(cfg)
        elif args.command == "check":
            text, summary, failures = cmd_check(cfg)
            if cfg.output_path is not None:
                sys.stdout.write(summary)
            else:
                text = summary
            for line in failures:
                print(line, file=sys.stderr)
            code = EXIT_CHECK if failures else EXIT_OK
        else:
            text = cmd_bench(cfg)
    except (NonConvergenceError, QuadratureError, RootError) as exc:
        print(f"sinp {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE

    try:
        emit(text, cfg.output_path)
    except OSError as exc:
        print(f"sinp {args.command}: cannot write {cfg.output_path!r}: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
