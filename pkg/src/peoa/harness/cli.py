"""Command-line interface.

Subcommands: ``run`` (benchmark campaigns), ``sweep-rho`` (territory
fraction sweep), ``list-functions``, ``verify-suite`` (registry optimum
checks), and ``run-external`` (optimize a subprocess objective).

Every flag can also be given in a flat ``key = value`` config file via
``--config``; explicit command-line flags override file values. The
default output directory comes from ``PEOA_OUT_DIR`` when set.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .. import benchmarks
from ..core import ConfigError, EvaluationAbort, OptimizerConfig, SearchSpace
from ..optimizer import run as run_optimizer
from .experiment import (DEFAULT_TOLERANCE, ExperimentPlan, budget_for_dimension,
                         rho_sweep, run_experiment)
from .external import ExternalObjective

ENV_OUT_DIR = "PEOA_OUT_DIR"
_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def _default_out() -> str:
    return os.environ.get(ENV_OUT_DIR, "peoa-results")


def _parse_dims(text: str) -> list:
    dims = [int(tok) for tok in text.split(",") if tok.strip()]
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"invalid dimension list {text!r}")
    return dims


def _parse_floats(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_values(text: str) -> list:
    """Sweep values: either a comma list or ``lo..hi`` / ``lo..hi:step``
    (inclusive range, default step 0.01)."""
    text = text.strip()
    if ".." not in text:
        values = _parse_floats(text)
        if not values:
            raise argparse.ArgumentTypeError(f"empty value list {text!r}")
        return values
    span, _, step_text = text.partition(":")
    lo_text, _, hi_text = span.partition("..")
    lo, hi = float(lo_text), float(hi_text)
    step = float(step_text) if step_text else 0.01
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid value range {text!r}")
    count = int(round((hi - lo) / step))
    values = [round(lo + k * step, 12) for k in range(count + 1)]
    return [v for v in values if v <= hi + 1e-12]


def _build_parser() -> tuple:
    parser = argparse.ArgumentParser(
        prog="peoa",
        description="Global optimization runs and experiment reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    subcommands = {}

    def common(p):
        p.add_argument("--config", metavar="FILE",
                       help="flat key = value file mirroring the flags")
        p.add_argument("--out", default=_default_out(),
                       help="output directory (default: $PEOA_OUT_DIR or ./peoa-results)")
        p.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
        p.add_argument("--jobs", type=int, default=None,
                       help="parallel workers (default: logical cores)")

    p_run = sub.add_parser("run", help="run benchmark functions and write reports")
    common(p_run)
    p_run.add_argument("--function", required=True,
                       help="function name, comma list, or 'all'")
    p_run.add_argument("--dim", type=_parse_dims, required=True,
                       help="dimension or comma list, e.g. 2 or 2,5,10,20")
    p_run.add_argument("--runs", type=int, default=30)
    p_run.add_argument("--max-evals", type=int, default=None,
                       help="evaluation budget (default: 10000*dim)")
    p_run.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p_run.add_argument("--rho", type=float, default=0.04,
                       help="territory fraction for the local phase")
    p_run.add_argument("--no-plots", dest="plots", action="store_false",
                       help="skip figure rendering")
    p_run.add_argument("--traces", action="store_true",
                       help="write per-run best-so-far trace files")
    p_run.set_defaults(handler=_cmd_run)
    subcommands["run"] = p_run

    p_sweep = sub.add_parser("sweep-rho", help="sweep the territory fraction")
    common(p_sweep)
    p_sweep.add_argument("--values", type=_parse_values, default="0.01..0.1",
                         help="comma list or lo..hi[:step], default 0.01..0.1")
    p_sweep.add_argument("--runs", type=int, default=20)
    p_sweep.add_argument("--dim", type=int, default=5)
    p_sweep.add_argument("--function", default="all",
                         help="function name, comma list, or 'all'")
    p_sweep.add_argument("--max-evals", type=int, default=None)
    p_sweep.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p_sweep.add_argument("--no-plots", dest="plots", action="store_false")
    p_sweep.set_defaults(handler=_cmd_sweep)
    subcommands["sweep-rho"] = p_sweep

    p_list = sub.add_parser("list-functions", help="list the benchmark registry")
    p_list.set_defaults(handler=_cmd_list)
    subcommands["list-functions"] = p_list

    p_verify = sub.add_parser("verify-suite",
                              help="check every deterministic function against its optimum")
    p_verify.add_argument("--dims", type=_parse_dims, default=[2, 5, 10, 20])
    p_verify.add_argument("--samples", type=int, default=100)
    p_verify.set_defaults(handler=_cmd_verify)
    subcommands["verify-suite"] = p_verify

    p_ext = sub.add_parser("run-external", help="optimize an external line-protocol objective")
    common(p_ext)
    p_ext.add_argument("--cmd", required=True, help="child command line")
    p_ext.add_argument("--dim", type=int, required=True)
    p_ext.add_argument("--lower", type=_parse_floats, required=True,
                       help="comma list: one value per dimension, or one value for all")
    p_ext.add_argument("--upper", type=_parse_floats, required=True)
    p_ext.add_argument("--max-evals", type=int, default=None)
    p_ext.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p_ext.add_argument("--f-true", type=float, default=None,
                       help="known optimum enabling tolerance termination")
    p_ext.add_argument("--rho", type=float, default=0.04)
    p_ext.add_argument("--timeout", type=float, default=30.0,
                       help="seconds to wait per evaluation")
    p_ext.set_defaults(handler=_cmd_external)
    subcommands["run-external"] = p_ext

    return parser, subcommands


def _read_config(path: str) -> dict:
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        entries[key.strip().lower().replace("_", "-")] = value.strip()
    return entries


def _config_tokens(entries: dict, subparser: argparse.ArgumentParser) -> list:
    """Turn config entries into argv tokens for one subcommand, warning
    about keys that do not name one of its flags."""
    actions = {}
    for action in subparser._actions:
        for option in action.option_strings:
            if option.startswith("--"):
                actions[option[2:]] = action
    tokens = []
    for key, value in entries.items():
        action = actions.get(key)
        if action is None or key == "config":
            print(f"warning: ignoring unknown config key {key!r}", file=sys.stderr)
            continue
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            word = value.lower()
            if word in _TRUE_WORDS:
                tokens.append("--" + key)
            elif word not in _FALSE_WORDS:
                raise ConfigError(f"config key {key!r} expects a boolean, got {value!r}")
        else:
            tokens.extend(["--" + key, value])
    return tokens


def _apply_config(argv: list, subcommands: dict) -> list:
    if not argv or argv[0] not in subcommands:
        return argv
    rest = argv[1:]
    path = None
    for i, token in enumerate(rest):
        if token == "--config" and i + 1 < len(rest):
            path = rest[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return argv
    tokens = _config_tokens(_read_config(path), subcommands[argv[0]])
    return [argv[0]] + tokens + rest


def _resolve_functions(text: str) -> list:
    if text.strip().lower() == "all":
        return benchmarks.names()
    return [tok for tok in text.split(",") if tok.strip()]


def _cmd_run(args) -> int:
    plan = ExperimentPlan(
        functions=_resolve_functions(args.function),
        dims=args.dim,
        out_dir=Path(args.out),
        runs=args.runs,
        base_seed=args.seed,
        max_evals=args.max_evals,
        tolerance=args.tolerance,
        territory_fraction=args.rho,
        jobs=args.jobs,
        plots=args.plots,
        traces=args.traces,
    )
    stats = run_experiment(plan)
    print(f"wrote {Path(args.out) / 'runs.csv'}")
    for s in stats:
        print(f"{s.function} D={s.dim}: mean {s.mean:.4e} best {s.best:.4e} "
              f"worst {s.worst:.4e} std {s.std:.4e} solved {s.solved}/{s.runs} "
              f"mean_evals {s.mean_evals:.0f}")
    if not stats:
        print("warning: empty plan, no runs executed", file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    functions = None if args.function.strip().lower() == "all" \
        else _resolve_functions(args.function)
    _, summary = rho_sweep(
        args.values if isinstance(args.values, list) else _parse_values(args.values),
        out_dir=Path(args.out), runs=args.runs, dim=args.dim, functions=functions,
        base_seed=args.seed, max_evals=args.max_evals, tolerance=args.tolerance,
        jobs=args.jobs, plots=args.plots)
    for rho, average, selected in summary:
        marker = "  <-- best" if selected else ""
        print(f"rho={rho:g}: average error {average:.4e}{marker}")
    return 0


def _cmd_list(_args) -> int:
    for spec in benchmarks.REGISTRY.values():
        lo, hi = spec.bounds
        extra = ", stochastic" if spec.stochastic else ""
        print(f"{spec.name:18s} {spec.family.value:24s} range [{lo:g}, {hi:g}] "
              f"optimum {spec.f_true:g}{extra}")
    return 0


def _cmd_verify(args) -> int:
    failures = 0
    for spec in benchmarks.REGISTRY.values():
        if spec.stochastic:
            print(f"SKIP {spec.name}: stochastic by definition")
            continue
        try:
            for dim in args.dims:
                benchmarks.verify_optimum(spec.name, dim, samples=args.samples)
            print(f"PASS {spec.name}: dims {','.join(map(str, args.dims))}")
        except benchmarks.TranscriptionMismatch as exc:
            failures += 1
            print(f"FAIL {spec.name}: {exc}")
    return 1 if failures else 0


def _cmd_external(args) -> int:
    lower = args.lower * args.dim if len(args.lower) == 1 else args.lower
    upper = args.upper * args.dim if len(args.upper) == 1 else args.upper
    if len(lower) != args.dim or len(upper) != args.dim:
        raise ConfigError("--lower/--upper need one value per dimension, or a single value")
    space = SearchSpace(np.array(lower), np.array(upper))
    config = OptimizerConfig.for_dimension(
        args.dim, seed=args.seed,
        max_evals=budget_for_dimension(args.dim) if args.max_evals is None else args.max_evals,
        territory_fraction=args.rho, target_tolerance=args.tolerance)
    with ExternalObjective(args.cmd, timeout=args.timeout) as ext:
        objective = ext.objective(known_optimum=args.f_true)
        try:
            record = run_optimizer(objective, space, config)
        except EvaluationAbort as exc:
            print(f"error: {exc}", file=sys.stderr)
            evals = getattr(exc, "evals_used", 0)
            best = getattr(exc, "best_value", None)
            print(f"aborted after {evals} evaluations, best value {best!r}",
                  file=sys.stderr)
            return 1
    print(f"best value {record.best_value!r} at {record.best_position.tolist()}")
    print(f"evaluations {record.evals_used}, terminated by {record.terminated_by.value}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "trace.csv", "w") as fh:
            fh.write("eval,best_so_far\n")
            for count, best in record.trace:
                fh.write(f"{count},{best!r}\n")
        print(f"wrote {out / 'trace.csv'}")
    return 0


def main(argv=None) -> int:
    parser, subcommands = _build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        argv = _apply_config(argv, subcommands)
        args = parser.parse_args(argv)
        return args.handler(args)
    except (ConfigError, benchmarks.UnknownFunctionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
