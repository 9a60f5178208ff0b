"""K-fold cross-validated surrogate fitting with out-of-fold scoring."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from sklearn.ensemble import GradientBoostingRegressor, RandomForestRegressor
from sklearn.metrics import mean_squared_error, r2_score
from sklearn.model_selection import KFold

from .encoding import EncodedMatrix, encode_features

__all__ = ["MODEL_KINDS", "CvReport", "FittedCv", "make_model", "crossval_fit"]

MODEL_KINDS = ("random_forest", "gradient_boosting")


def make_model(model_kind: str, seed: int):
    """Ecosystem-default regressor of the requested kind, seeded."""
    if model_kind == "random_forest":
        return RandomForestRegressor(random_state=seed)
    if model_kind == "gradient_boosting":
        return GradientBoostingRegressor(random_state=seed)
    raise ValueError(f"unknown model kind {model_kind!r}; expected one of {MODEL_KINDS}")


@dataclass(frozen=True)
class CvReport:
    """Out-of-fold MSE and R2 per fold; the aggregates are the fold means."""

    model_kind: str
    folds: int
    seed: int
    mse: float
    r2: float
    fold_mse: tuple[float, ...]
    fold_r2: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "model_kind": self.model_kind,
            "folds": self.folds,
            "seed": self.seed,
            "mse": self.mse,
            "r2": self.r2,
            "fold_mse": list(self.fold_mse),
            "fold_r2": list(self.fold_r2),
        }


@dataclass(frozen=True)
class FittedCv:
    """Report plus the per-fold fitted models and their validation splits."""

    report: CvReport
    models: tuple
    splits: tuple[tuple[np.ndarray, np.ndarray], ...]
    encoded: EncodedMatrix
    y: np.ndarray


def crossval_fit(
    frame: pd.DataFrame,
    model_kind: str,
    folds: int = 10,
    seed: int = 0,
) -> FittedCv:
    """Fit under shuffled K-fold CV; deterministic given the seed.

    The frame must carry the feature columns plus a ``target`` column.
    """
    if "target" not in frame.columns:
        raise ValueError("dataset has no 'target' column")
    if len(frame) < folds:
        raise ValueError(f"{len(frame)} rows cannot support {folds}-fold cross validation")
    encoded = encode_features(frame)
    y = frame["target"].to_numpy(dtype=float)
    kf = KFold(n_splits=folds, shuffle=True, random_state=seed)
    models = []
    splits = []
    fold_mse = []
    fold_r2 = []
    for train_idx, val_idx in kf.split(encoded.X):
        model = make_model(model_kind, seed)
        model.fit(encoded.X[train_idx], y[train_idx])
        pred = model.predict(encoded.X[val_idx])
        fold_mse.append(float(mean_squared_error(y[val_idx], pred)))
        fold_r2.append(float(r2_score(y[val_idx], pred)))
        models.append(model)
        splits.append((train_idx, val_idx))
    report = CvReport(
        model_kind=model_kind,
        folds=folds,
        seed=seed,
        mse=float(np.mean(fold_mse)),
        r2=float(np.mean(fold_r2)),
        fold_mse=tuple(fold_mse),
        fold_r2=tuple(fold_r2),
    )
    return FittedCv(report=report, models=tuple(models), splits=tuple(splits), encoded=encoded, y=y)
