"""Meta-dataset construction from simulation summary CSVs and config files.

Four surrogate targets are supported, each predicting a per-simulation mean
from design features:

    MM1: (c_a, d, gamma_hm)            -> mean performance per policy and difficulty
    MM2: (c_a, gamma_hm)               -> mean performance per policy
    MM3: (c_a, d, gamma_hm, curve_kind, mc_H, mc_HM, mc_M, delta_HM, t_err, c_err)
                                        -> mean utility per policy and difficulty
    MM4: as MM3 without d              -> mean utility per policy

``c_a`` merges the policy with its interaction mode (H_individual,
M_individual, HM_mean, HM_collaborate, HM_superpower), since the two raw
columns are structurally dependent. The H/M margin growth rates are omitted:
generated designs pin them to zero. One row is produced per
(simulation, group cell); duplicated rows (features and target alike) are
dropped.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

__all__ = ["TARGETS", "target_features", "build_meta_dataset", "read_config_features"]

_CONFIG_FEATURES = [
    "gamma_hm",
    "curve_kind",
    "mc_H",
    "mc_HM",
    "mc_M",
    "delta_HM",
    "t_err",
    "c_err",
]

TARGETS: dict[str, dict] = {
    "MM1": {"metric": "theta", "with_difficulty": True, "features": ["c_a", "d", "gamma_hm"]},
    "MM2": {"metric": "theta", "with_difficulty": False, "features": ["c_a", "gamma_hm"]},
    "MM3": {"metric": "u", "with_difficulty": True, "features": ["c_a", "d"] + _CONFIG_FEATURES},
    "MM4": {"metric": "u", "with_difficulty": False, "features": ["c_a"] + _CONFIG_FEATURES},
}


@dataclass(frozen=True)
class ConfigFeatures:
    config_id: str
    gamma_hm: float
    curve_kind: str
    mc_H: float
    mc_HM: float
    mc_M: float
    delta_HM: float
    t_err: float
    c_err: float


def read_config_features(configs_dir: str | Path) -> dict[str, ConfigFeatures]:
    """Design features of every config JSON in a directory, keyed by id."""
    out: dict[str, ConfigFeatures] = {}
    files = sorted(Path(configs_dir).glob("*.json"))
    if not files:
        raise ValueError(f"{configs_dir}: no *.json config files found")
    for path in files:
        doc = json.loads(path.read_text())
        cid = doc["config_id"]
        out[cid] = ConfigFeatures(
            config_id=cid,
            gamma_hm=float(doc["gamma_hm"]),
            curve_kind=str(doc["curve"]["kind"]),
            mc_H=float(doc["econ"]["mc"]["H"]),
            mc_HM=float(doc["econ"]["mc"]["HM"]),
            mc_M=float(doc["econ"]["mc"]["M"]),
            delta_HM=float(doc["econ"]["delta"]["HM"]),
            t_err=float(doc["econ"]["t_err"]),
            c_err=float(doc["econ"]["c_err"]),
        )
    return out


def target_features(target: str) -> list[str]:
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}")
    return list(TARGETS[target]["features"])


def build_meta_dataset(
    summary_path: str | Path,
    configs_dir: str | Path,
    target: str,
) -> pd.DataFrame:
    """One deduplicated row per (simulation, group cell) for the chosen target.

    The summary must carry per-simulation mean rows split by interaction
    (the analysis step's policy,difficulty,a grouping).
    """
    spec = TARGETS.get(target)
    if spec is None:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}")
    summary = pd.read_csv(summary_path, keep_default_na=False, low_memory=False)
    expected_cols = {"scope", "config_id", "policy", "difficulty", "interaction",
                     "metric", "stat", "value"}
    missing_cols = expected_cols - set(summary.columns)
    if missing_cols:
        raise ValueError(f"{summary_path}: summary is missing columns {sorted(missing_cols)}")

    rows = summary[
        (summary["scope"] == "per_sim")
        & (summary["stat"] == "mu")
        & (summary["metric"] == spec["metric"])
        & (summary["policy"] != "")
        & (summary["interaction"] != "")
    ]
    if spec["with_difficulty"]:
        rows = rows[rows["difficulty"] != ""]
    else:
        rows = rows[rows["difficulty"] == ""]
    if rows.empty:
        grouping = "policy,difficulty,a" if spec["with_difficulty"] else "policy,a"
        raise ValueError(
            f"summary has no per-simulation mean({spec['metric']}) rows for the "
            f"{grouping} grouping required by {target}"
        )

    features = read_config_features(configs_dir)
    unknown = sorted(set(rows["config_id"]) - set(features))
    if unknown:
        raise ValueError(f"summary references configs with no JSON file: {unknown[:5]}")

    records = []
    for r in rows.itertuples(index=False):
        cf = features[r.config_id]
        rec = {"c_a": f"{r.policy}_{r.interaction}"}
        if spec["with_difficulty"]:
            rec["d"] = r.difficulty
        for name in _CONFIG_FEATURES:
            rec[name] = getattr(cf, name)
        rec["target"] = float(r.value)
        records.append(rec)
    frame = pd.DataFrame.from_records(records)
    frame = frame[target_features(target) + ["target"]]
    frame = frame.drop_duplicates(ignore_index=True)
    return frame
