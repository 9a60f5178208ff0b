"""Standalone introspection pipeline over simulation summary files.

Reads the summary CSV and config JSONs produced by the simulation toolchain,
builds per-target meta-datasets, and writes cross-validation reports,
importance rankings, Shapley attributions, and collinearity diagnostics.
Exit codes: 0 success, 1 I/O failure, 2 usage or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import pandas as pd

from .collinearity import adj_gvif
from .crossval import MODEL_KINDS, crossval_fit
from .dataset import TARGETS, build_meta_dataset
from .encoding import encode_features
from .importance import permutation_importance
from .shap_attrib import shap_summary

__all__ = ["main"]


def _read_dataset(path: str) -> pd.DataFrame:
    frame = pd.read_csv(path, keep_default_na=False)
    if "target" not in frame.columns:
        raise ValueError(f"{path}: not a meta-dataset (no 'target' column)")
    return frame


def cmd_dataset(args: argparse.Namespace) -> int:
    frame = build_meta_dataset(args.summary, args.configs, args.target)
    frame.to_csv(args.out, index=False)
    print(f"wrote {len(frame)} rows for {args.target} to {args.out}")
    return 0


def cmd_crossval(args: argparse.Namespace) -> int:
    frame = _read_dataset(args.dataset)
    fitted = crossval_fit(frame, args.model, folds=args.folds, seed=args.seed)
    Path(args.out).write_text(json.dumps(fitted.report.to_dict(), indent=2) + "\n")
    print(f"{args.model}: mse={fitted.report.mse:.6f} r2={fitted.report.r2:.4f} -> {args.out}")
    return 0


def cmd_importance(args: argparse.Namespace) -> int:
    frame = _read_dataset(args.dataset)
    fitted = crossval_fit(frame, args.model, folds=args.folds, seed=args.seed)
    entries = permutation_importance(fitted, repeats=args.repeats, seed=args.seed)
    lines = ["feature,mean_increase,sd_increase"]
    lines += [f"{e.feature},{e.mean_increase:.9g},{e.sd_increase:.9g}" for e in entries]
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote importance ranking ({entries[0].feature} first) to {args.out}")
    return 0


def cmd_shap(args: argparse.Namespace) -> int:
    frame = _read_dataset(args.dataset)
    from .crossval import make_model

    encoded = encode_features(frame)
    model = make_model(args.model, args.seed)
    model.fit(encoded.X, frame["target"].to_numpy(dtype=float))
    summary = shap_summary(
        model,
        encoded,
        max_background=args.background,
        max_instances=args.instances,
        seed=args.seed,
    )
    lines = ["feature,mean_abs_contribution"]
    lines += [f"{feature},{val:.9g}" for feature, val in summary.ranking]
    Path(args.out).write_text("\n".join(lines) + "\n")
    if args.per_instance:
        cols = ",".join(summary.features)
        rows = [f"{cols},prediction"]
        for contrib, pred in zip(summary.contributions, summary.predictions):
            rows.append(",".join(f"{c:.9g}" for c in contrib) + f",{pred:.9g}")
        Path(args.per_instance).write_text("\n".join(rows) + "\n")
    print(f"wrote attribution ranking ({summary.ranking[0][0]} first) to {args.out}")
    return 0


def cmd_gvif(args: argparse.Namespace) -> int:
    frame = _read_dataset(args.dataset)
    values = adj_gvif(frame)
    lines = ["feature,adj_gvif"]
    lines += [f"{name},{val:.6g}" for name, val in values.items()]
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote collinearity diagnostics to {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    targets = [t.strip() for t in args.targets.split(",") if t.strip()]
    meta = {"seed": args.seed, "folds": args.folds, "models": {}, "targets": {}}
    for kind in MODEL_KINDS:
        from .crossval import make_model

        meta["models"][kind] = make_model(kind, args.seed).get_params()
    for target in targets:
        frame = build_meta_dataset(args.summary, args.configs, target)
        frame.to_csv(out / f"{target.lower()}_dataset.csv", index=False)
        section = {"rows": len(frame)}
        for kind in MODEL_KINDS:
            fitted = crossval_fit(frame, kind, folds=args.folds, seed=args.seed)
            section[kind] = fitted.report.to_dict()
            entries = permutation_importance(fitted, repeats=args.repeats, seed=args.seed)
            lines = ["feature,mean_increase,sd_increase"]
            lines += [f"{e.feature},{e.mean_increase:.9g},{e.sd_increase:.9g}" for e in entries]
            (out / f"{target.lower()}_{kind}_importance.csv").write_text("\n".join(lines) + "\n")
        meta["targets"][target] = section
        print(
            f"{target}: rows={section['rows']} "
            + " ".join(f"{k} r2={section[k]['r2']:.4f}" for k in MODEL_KINDS)
        )
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, default=str) + "\n")
    print(f"report artifacts in {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillmeta",
        description="Surrogate-model introspection over simulation summaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dataset", help="build one target's meta-dataset CSV")
    p.add_argument("--summary", required=True, help="summary CSV from the simulation toolchain")
    p.add_argument("--configs", required=True, help="directory of scenario config JSONs")
    p.add_argument("--target", required=True, choices=sorted(TARGETS))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("crossval", help="k-fold CV report for one model kind")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", default="random_forest", choices=MODEL_KINDS)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("importance", help="grouped permutation importance")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", default="random_forest", choices=MODEL_KINDS)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("shap", help="exact Shapley attribution ranking")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", default="random_forest", choices=MODEL_KINDS)
    p.add_argument("--background", type=int, default=64)
    p.add_argument("--instances", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--per-instance", default=None, help="optional per-instance contribution CSV")
    p.set_defaults(func=cmd_shap)

    p = sub.add_parser("gvif", help="adjusted GVIF collinearity diagnostics")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gvif)

    p = sub.add_parser("report", help="datasets, CV reports and importances for all targets")
    p.add_argument("--summary", required=True)
    p.add_argument("--configs", required=True)
    p.add_argument("--targets", default="MM1,MM2,MM3,MM4")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
