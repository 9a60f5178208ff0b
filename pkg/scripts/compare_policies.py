#!/usr/bin/env python3
"""Compare H/HM/M skill policies on a small scenario set.

Seven scenarios around one decision problem: two margin-growth outlooks for
the dual-skill deployment (delta_HM 0.3 and 0.9) crossed with three
interaction modes, plus one extra scenario where difficult tasks dominate.
Prints a market view (means over all records) and a policy view (means per
policy), and optionally writes both as CSV.

Example:
    python scripts/compare_policies.py --runs 10000 --out out/small
"""
from __future__ import annotations

import argparse
from pathlib import Path

from skillsim.analytics import SubsetKey, subset
from skillsim.engine import METRICS, run_batch
from skillsim.model import InteractionKind, PolicyKind
from skillsim.scenarios import base_config

INTERACTIONS = (InteractionKind.MEAN, InteractionKind.COLLABORATE, InteractionKind.SUPERPOWER)


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=10_000, help="Monte Carlo replications per scenario")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--parallel", type=int, default=4)
    ap.add_argument("--out", default=None, help="directory for the two CSV tables")
    return ap.parse_args()


def build_scenarios(runs: int, seed: int):
    configs = []
    s = 1
    for delta_hm in (0.3, 0.9):
        for kind in INTERACTIONS:
            configs.append(
                base_config(
                    config_id=f"s{s}_{kind.value}_d{delta_hm}",
                    n_runs=runs,
                    interaction=kind,
                    delta_hm=delta_hm,
                    seed=seed,
                )
            )
            s += 1
    configs.append(
        base_config(
            config_id=f"s{s}_superpower_hard",
            n_runs=runs,
            interaction=InteractionKind.SUPERPOWER,
            delta_hm=0.9,
            p_difficulty=(0.1, 0.4, 0.5),
            seed=seed,
        )
    )
    return configs


def fmt_row(cells) -> str:
    return "  ".join(f"{c:>10}" for c in cells)


def main() -> None:
    args = parse_args()
    configs = build_scenarios(args.runs, args.seed)
    frames = run_batch(configs, parallelism=args.parallel)

    market_rows = []
    policy_rows = []
    for frame in frames:
        market_rows.append(
            [frame.config_id] + [f"{subset(frame, SubsetKey(m)).mean():.3f}" for m in METRICS]
        )
        for policy in PolicyKind:
            vals = [subset(frame, SubsetKey(m, policy)) for m in METRICS]
            if vals[0].size == 0:
                continue
            policy_rows.append(
                [frame.config_id, policy.value] + [f"{v.mean():.3f}" for v in vals]
            )

    print("\nmarket view: means over all records")
    print(fmt_row(["scenario"] + list(METRICS)))
    for row in market_rows:
        print(fmt_row(row))
    print("\npolicy view: means per skill policy")
    print(fmt_row(["scenario", "policy"] + list(METRICS)))
    for row in policy_rows:
        print(fmt_row(row))

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "market_view.csv").write_text(
            "\n".join([",".join(["scenario"] + list(METRICS))] + [",".join(r) for r in market_rows]) + "\n"
        )
        (out / "policy_view.csv").write_text(
            "\n".join([",".join(["scenario", "policy"] + list(METRICS))] + [",".join(r) for r in policy_rows]) + "\n"
        )
        print(f"\ntables written to {out}")


if __name__ == "__main__":
    main()
