#!/usr/bin/env python3
"""Run a full experiment: design a config batch, simulate it, summarize, rank gains.

Example:
    python scripts/run_experiment.py --out out/exp1 --n-numeric 16 --parallel 4
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

from skillsim.cli import main as skillsim
from skillsim.scenarios import (
    base_config,
    improving_human_schedule,
    space_document,
    strong_machine_schedule,
)

PROFILES = {
    "improving-human": improving_human_schedule,
    "strong-machine": strong_machine_schedule,
}


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True, help="experiment output directory")
    ap.add_argument("--n-numeric", type=int, default=16, help="sampled design points (x6 grid cells)")
    ap.add_argument("--method", choices=("lhs", "maximin"), default="maximin")
    ap.add_argument("--profile", choices=sorted(PROFILES), default="improving-human")
    ap.add_argument("--runs", type=int, default=1000, help="Monte Carlo replications per scenario")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--parallel", type=int, default=4)
    ap.add_argument(
        "--free-mc-hm",
        action="store_true",
        help="sample mc_HM in [0.1, 0.5] instead of deriving it from mc_H and mc_M",
    )
    return ap.parse_args()


def run(cmd: list[str]) -> None:
    code = skillsim(cmd)
    if code != 0:
        raise SystemExit(code)


def main() -> None:
    args = parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    base = base_config(
        n_firms=1,
        n_epochs=10,
        n_runs=args.runs,
        schedule=PROFILES[args.profile](),
        seed=args.seed,
    )
    space_path = out / "space.json"
    space_path.write_text(json.dumps(space_document(base, free_mc_hm=args.free_mc_hm), indent=2))

    cfgs, runs = out / "configs", out / "runs"
    run(["design", str(space_path), "--n", str(args.n_numeric), "--method", args.method,
         "--seed", str(args.seed), "--out", str(cfgs)])
    run(["simulate", "--configs", str(cfgs), "--out", str(runs),
         "--parallel", str(args.parallel)])
    run(["analyze", "--runs", str(runs), "--configs", str(cfgs),
         "--out", str(out / "summary.csv")])
    for metric in ("theta", "u"):
        run(["hmg", "--summary", str(out / "summary.csv"), "--omega", "mu",
             "--metric", metric, "--out", str(out / f"hmg_mu_{metric}.csv")])
    run(["hmg", "--summary", str(out / "summary.csv"), "--omega", "mu", "--metric", "u",
         "--delta-bins", "0.1,0.5,0.9", "--out", str(out / "hmg_mu_u_by_delta.csv")])
    print(f"experiment artifacts in {out}")


if __name__ == "__main__":
    main()
