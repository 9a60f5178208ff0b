"""Feature encoding shared by the fitting and introspection steps.

Categorical columns are one-hot encoded with a fixed, sorted category order
so runs are reproducible; the resulting columns stay grouped under their
source feature so permutation and attribution can treat each original
feature as one unit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

__all__ = ["EncodedMatrix", "encode_features"]

_CATEGORICAL = ("c_a", "d", "curve_kind")


@dataclass(frozen=True)
class EncodedMatrix:
    """Numeric design matrix plus the mapping from features to its columns."""

    X: np.ndarray
    columns: tuple[str, ...]
    groups: dict[str, tuple[int, ...]]  # feature name -> column indices
    features: tuple[str, ...]


def encode_features(
    frame: pd.DataFrame,
    features: list[str] | None = None,
    *,
    drop_first: bool = False,
) -> EncodedMatrix:
    """One-hot encode the categorical features of a meta-dataset.

    With ``drop_first`` each categorical contributes levels-1 columns (the
    contrast coding used for collinearity diagnostics); otherwise all levels
    are kept, which is fine for tree models.
    """
    if features is None:
        features = [c for c in frame.columns if c != "target"]
    blocks: list[np.ndarray] = []
    names: list[str] = []
    groups: dict[str, tuple[int, ...]] = {}
    col = 0
    for feat in features:
        if feat not in frame.columns:
            raise ValueError(f"feature {feat!r} not present in the dataset")
        series = frame[feat]
        if feat in _CATEGORICAL or series.dtype == object:
            levels = sorted(series.astype(str).unique())
            use = levels[1:] if drop_first else levels
            block = np.zeros((len(frame), len(use)))
            for j, level in enumerate(use):
                block[:, j] = (series.astype(str) == level).to_numpy(dtype=float)
            blocks.append(block)
            names.extend(f"{feat}={level}" for level in use)
            groups[feat] = tuple(range(col, col + len(use)))
            col += len(use)
        else:
            blocks.append(series.to_numpy(dtype=float).reshape(-1, 1))
            names.append(feat)
            groups[feat] = (col,)
            col += 1
    X = np.hstack(blocks) if blocks else np.empty((len(frame), 0))
    return EncodedMatrix(X=X, columns=tuple(names), groups=groups, features=tuple(features))
