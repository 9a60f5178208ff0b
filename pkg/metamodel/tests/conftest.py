from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

# The simulation toolchain is consumed strictly through its command line and
# file formats; nothing from it is imported here.

SPACE_DOCUMENT = {
    "numeric": {
        "gamma_hm": [1.0, 2.0],
        "mc_H": [0.4, 0.6],
        "mc_M": [0.7, 0.9],
        "mc_HM": [0.1, 0.5],
        "delta_HM": [0.1, 0.9],
        "t_err": [0.0, 1.0],
        "c_err": [0.0, 1.0],
    },
    "interactions": ["mean", "collaborate", "superpower"],
    "curve_kinds": ["logistic", "inverse_logistic"],
    "curve_params": {"logistic": {"k": 5.0}, "inverse_logistic": {"k": 5.0}},
    "base": {
        "config_id": "base",
        "n_firms": 1,
        "n_epochs": 10,
        "n_runs": 1000,
        "p_policy": {"H": 1 / 3, "HM": 1 / 3, "M": 1 / 3},
        "p_difficulty": {"Low": 1 / 3, "Med": 1 / 3, "High": 1 / 3},
        "schedule": {
            "H": {
                "Low": {"start": [4.0, 4.0], "end": [6.0, 4.0]},
                "Med": {"start": [3.0, 5.0], "end": [5.0, 5.0]},
                "High": {"start": [3.6, 4.4], "end": [5.0, 3.0]},
            },
            "M": {
                "Low": {"start": [8.0, 2.0], "end": [8.0, 2.0]},
                "Med": {"start": [7.0, 3.0], "end": [7.0, 3.0]},
                "High": {"start": [2.0, 6.0], "end": [2.0, 6.0]},
            },
        },
        "interaction": "mean",
        "gamma_hm": 1.5,
        "curve": {"kind": "logistic", "params": {"k": 5.0}},
        "econ": {
            "mc": {"H": 0.5, "HM": 0.2, "M": 0.7},
            "delta": {"H": 0.0, "HM": 0.3, "M": 0.0},
            "t_err": 0.3,
            "c_err": 0.9,
        },
        "seed": 42,
    },
}


def run_simulation_cli(*args: str) -> None:
    result = subprocess.run(
        [sys.executable, "-m", "skillsim", *args], capture_output=True, text=True
    )
    if result.returncode != 0:
        raise RuntimeError(f"skillsim {' '.join(args)} failed:\n{result.stderr}")


@pytest.fixture(scope="session")
def experiment_dir(tmp_path_factory) -> Path:
    """A generated 96-simulation experiment: configs, runs, and summary CSV."""
    root = tmp_path_factory.mktemp("experiment")
    space = root / "space.json"
    space.write_text(json.dumps(SPACE_DOCUMENT))
    cfgs, runs = root / "configs", root / "runs"
    run_simulation_cli("design", str(space), "--n", "16", "--method", "maximin",
                       "--seed", "7", "--out", str(cfgs))
    assert len(list(cfgs.glob("*.json"))) == 96
    run_simulation_cli("simulate", "--configs", str(cfgs), "--out", str(runs),
                       "--parallel", "4")
    run_simulation_cli("analyze", "--runs", str(runs), "--configs", str(cfgs),
                       "--out", str(root / "summary.csv"))
    return root


def synthetic_dataset(n=300, seed=0, noise=0.0) -> pd.DataFrame:
    """A learnable synthetic meta-dataset: target is a clean feature function."""
    rng = np.random.default_rng(seed)
    frame = pd.DataFrame(
        {
            "c_a": rng.choice(
                ["H_individual", "M_individual", "HM_mean", "HM_collaborate", "HM_superpower"], n
            ),
            "d": rng.choice(["Low", "Med", "High"], n),
            "gamma_hm": rng.uniform(1.0, 2.0, n),
        }
    )
    base = frame["c_a"].map(
        {
            "H_individual": 0.5,
            "M_individual": 0.6,
            "HM_mean": 0.55,
            "HM_collaborate": 0.7,
            "HM_superpower": 0.85,
        }
    )
    dshift = frame["d"].map({"Low": 0.1, "Med": 0.0, "High": -0.2})
    frame["target"] = base + dshift + 0.05 * frame["gamma_hm"]
    if noise:
        frame["target"] += rng.normal(0.0, noise, n)
    return frame
