"""Command-line pipeline: design -> simulate -> analyze -> hmg, plus a cost helper.

Exit codes: 0 success, 1 runtime/I-O failure, 2 usage or validation error.
The environment variable SKILLSIM_THREADS overrides the default --parallel.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analytics, io
from .analytics import OMEGAS
from .design import DesignSpace, NumericRange, build_designs
from .engine import METRICS, BatchError, run_batch
from .model import ConfigError, CurveKind, InteractionKind, PolicyKind, SimulationConfig

__all__ = ["main"]


def _load_space(path: Path) -> tuple[DesignSpace, SimulationConfig]:
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a JSON object")

    kwargs = {}
    if "numeric" in doc:
        numeric = doc["numeric"]
        if not isinstance(numeric, dict):
            raise ConfigError("numeric: expected an object of name -> [lo, hi]")
        ranges = []
        for name, bounds in numeric.items():
            if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
                raise ConfigError(f"numeric.{name}: expected [lo, hi]")
            ranges.append(NumericRange(name, float(bounds[0]), float(bounds[1])))
        kwargs["numeric"] = tuple(ranges)
    if "interactions" in doc:
        kwargs["interactions"] = tuple(
            _enum(InteractionKind, v, f"interactions[{j}]") for j, v in enumerate(doc["interactions"])
        )
    if "curve_kinds" in doc:
        kwargs["curve_kinds"] = tuple(
            _enum(CurveKind, v, f"curve_kinds[{j}]") for j, v in enumerate(doc["curve_kinds"])
        )
    if "curve_params" in doc:
        params = {}
        for kind_name, p in doc["curve_params"].items():
            params[_enum(CurveKind, kind_name, "curve_params")] = {
                k: float(v) for k, v in p.items()
            }
        kwargs["curve_params"] = params
    space = DesignSpace(**kwargs)
    if "base" not in doc:
        raise ConfigError("base: missing (the design needs a base scenario template)")
    base = io.document_to_config(doc["base"], require_config_id=False)
    return space, base


def _enum(enum_cls, value, path: str):
    for member in enum_cls:
        if member.value == value:
            return member
    raise ConfigError(f"{path}: expected one of {[m.value for m in enum_cls]}, got {value!r}")


def cmd_design(args: argparse.Namespace) -> int:
    space, base = _load_space(Path(args.space))
    rng = np.random.default_rng(args.seed)
    configs = build_designs(
        space, args.n, args.method, base, rng, pool=args.pool
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for config in configs:
        io.write_config(config, out / f"{config.config_id}.json")
    print(f"wrote {len(configs)} configs to {out}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.config:
        configs = [io.read_config(args.config)]
    else:
        configs = io.read_configs_dir(args.configs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def progress(idx: int, config_id: str, n_records: int, seconds: float) -> None:
        print(f"{config_id}: {n_records} records in {seconds:.2f}s")

    try:
        frames = run_batch(configs, parallelism=args.parallel, progress=progress)
    except BatchError as exc:
        for idx, err in exc.failures:
            print(f"config {configs[idx].config_id}: {err}", file=sys.stderr)
        return 2
    for frame in frames:
        io.write_runs(frame, out / f"{frame.config_id}.csv")
    return 0


def _parse_csv_list(text: str, valid: Sequence[str], label: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    for item in items:
        if item not in valid:
            raise ConfigError(f"{label}: unknown value {item!r}; expected one of {list(valid)}")
    if not items:
        raise ConfigError(f"{label}: empty list")
    return items


def cmd_analyze(args: argparse.Namespace) -> int:
    runs_dir = Path(args.runs)
    files = sorted(runs_dir.glob("*.csv"))
    if not files:
        raise ConfigError(f"{runs_dir}: no *.csv runs files found")
    frames = [io.read_runs(f) for f in files]
    groups = _parse_csv_list(args.group, ("policy", "difficulty", "a"), "--group")
    stats = _parse_csv_list(args.stats, OMEGAS, "--stats")
    delta_by_config = None
    if args.configs:
        delta_by_config = {
            c.config_id: c.econ.delta[PolicyKind.HM] for c in io.read_configs_dir(args.configs)
        }
    rows = analytics.summary_rows(
        frames, groups=groups, stats=stats, metrics=METRICS, delta_by_config=delta_by_config
    )
    io.write_summary(rows, args.out)
    n_per_sim = sum(1 for r in rows if r.scope == "per_sim")
    n_agg = len(rows) - n_per_sim
    print(f"wrote {n_per_sim} per-simulation and {n_agg} aggregate rows to {args.out}")
    return 0


def cmd_hmg(args: argparse.Namespace) -> int:
    rows = io.read_summary(args.summary)
    if args.omega not in OMEGAS:
        raise ConfigError(f"--omega: unknown statistic {args.omega!r}")
    if args.metric not in METRICS:
        raise ConfigError(f"--metric: unknown metric {args.metric!r}")
    has_hm = any(r.scope == "per_sim" and r.policy is PolicyKind.HM for r in rows)
    has_base = any(
        r.scope == "per_sim" and r.policy in (PolicyKind.H, PolicyKind.M) for r in rows
    )
    if not has_hm or not has_base:
        raise ConfigError("summary must contain per-simulation HM and baseline (H or M) rows")
    edges = None
    if args.delta_bins:
        edges = [float(t) for t in args.delta_bins.split(",") if t.strip()]
    tables = analytics.hmg_entries_from_summary(rows, args.omega, args.metric, edges)
    io.write_hmg(tables, args.out)
    n = sum(len(entries) for _, entries in tables)
    print(f"wrote {n} gain rows ({len(tables)} bin{'s' if len(tables) != 1 else ''}) to {args.out}")
    return 0


def cmd_costs(args: argparse.Namespace) -> int:
    values = {
        "--avg-price": args.avg_price,
        "--n-sales": args.n_sales,
        "--cost-fraction": args.cost_fraction,
        "--mape": args.mape,
        "--dev": args.dev,
        "--ops": args.ops,
        "--periods": args.periods,
    }
    for name, v in values.items():
        if v < 0:
            raise ConfigError(f"{name}: must be nonnegative, got {v}")
    per_period = analytics.expected_error_cost(
        args.avg_price, args.n_sales, args.cost_fraction, args.mape
    )
    total = analytics.skill_cost_total(per_period, args.dev, args.ops, args.periods)
    print(f"error cost per period: {per_period:g}")
    print(f"total cost over {args.periods:g} periods: {total:g}")
    return 0


def _default_parallel() -> int:
    env = os.environ.get("SKILLSIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillsim",
        description="Simulate and analyze the economics of human/machine skill policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="sample scenario configs from a design space")
    p.add_argument("space", help="design-space JSON file (ranges, grids, base template)")
    p.add_argument("--n", type=int, required=True, help="number of numeric design points")
    p.add_argument("--method", choices=("lhs", "maximin"), default="maximin")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--pool", type=int, default=None, help="maximin candidate pool size (default 20*n)")
    p.add_argument("--out", required=True, help="output directory for config files")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="run configs and write runs files")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="one config JSON file")
    src.add_argument("--configs", help="directory of config JSON files")
    p.add_argument("--out", required=True, help="output directory for runs CSVs")
    p.add_argument("--parallel", type=int, default=_default_parallel())
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="summary statistics over runs files")
    p.add_argument("--runs", required=True, help="directory of runs CSVs")
    p.add_argument("--group", default="policy,difficulty,a", help="policy[,difficulty][,a]")
    p.add_argument("--stats", default=",".join(OMEGAS), help="comma-separated subset of mu,sigma,rho,iqr,sk")
    p.add_argument("--configs", default=None, help="config directory, to attach each scenario's delta_HM")
    p.add_argument("--out", required=True, help="output summary CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hmg", help="HM-gain table from a summary CSV")
    p.add_argument("--summary", required=True)
    p.add_argument("--omega", default="mu", help="statistic to compare (mu,sigma,rho,iqr,sk)")
    p.add_argument("--metric", default="u", help="metric to compare (theta,y,v,err,u)")
    p.add_argument("--delta-bins", default=None, help="comma-separated delta_HM bin edges")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hmg)

    p = sub.add_parser("costs", help="expected error cost and total skill cost")
    p.add_argument("--avg-price", type=float, required=True)
    p.add_argument("--n-sales", type=float, required=True)
    p.add_argument("--cost-fraction", type=float, required=True)
    p.add_argument("--mape", type=float, required=True)
    p.add_argument("--dev", type=float, default=0.0, help="one-off development cost")
    p.add_argument("--ops", type=float, default=0.0, help="operating cost per period")
    p.add_argument("--periods", type=float, default=1.0)
    p.set_defaults(func=cmd_costs)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
