"""Permutation importance over cross-validated models, grouped by source feature.

One-hot columns belonging to the same categorical are permuted jointly, so
the reported importance refers to the original feature. Each fold's model is
scored on its own validation split; the increase in MSE after permutation is
averaged over folds and repeats, with its standard deviation alongside.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.metrics import mean_squared_error

from .crossval import FittedCv

__all__ = ["ImportanceEntry", "permutation_importance"]


@dataclass(frozen=True)
class ImportanceEntry:
    feature: str
    mean_increase: float
    sd_increase: float


def permutation_importance(
    fitted: FittedCv, repeats: int = 10, seed: int = 0
) -> list[ImportanceEntry]:
    """Per-feature MSE increase after within-column permutation, ranked."""
    rng = np.random.default_rng(seed)
    encoded = fitted.encoded
    increases: dict[str, list[float]] = {f: [] for f in encoded.features}
    for model, (_, val_idx) in zip(fitted.models, fitted.splits):
        X_val = encoded.X[val_idx]
        y_val = fitted.y[val_idx]
        baseline = mean_squared_error(y_val, model.predict(X_val))
        for feature in encoded.features:
            cols = list(encoded.groups[feature])
            for _ in range(repeats):
                perm = rng.permutation(len(val_idx))
                X_perm = X_val.copy()
                X_perm[:, cols] = X_val[perm][:, cols]
                increases[feature].append(
                    float(mean_squared_error(y_val, model.predict(X_perm)) - baseline)
                )
    entries = [
        ImportanceEntry(
            feature=f,
            mean_increase=float(np.mean(vals)),
            sd_increase=float(np.std(vals)),
        )
        for f, vals in increases.items()
    ]
    entries.sort(key=lambda e: e.mean_increase, reverse=True)
    return entries
