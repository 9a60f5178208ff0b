"""Generalized variance-inflation diagnostics for the engineered feature set.

For each feature group (a categorical's contrast columns, or one numeric
column) the generalized VIF is det(R_gg) * det(R_hh) / det(R), where R is
the correlation matrix of all predictor columns and g/h partition it. The
reported value is adjusted to GVIF^(1/(2*df)) with df the group's column
count, making magnitudes comparable across groups; an independent design
yields values near 1. Categoricals are contrast-coded (first level dropped)
so a lone categorical is not self-collinear.
"""
from __future__ import annotations

import numpy as np
import pandas as pd

from .encoding import encode_features

__all__ = ["adj_gvif"]


def adj_gvif(frame: pd.DataFrame, features: list[str] | None = None) -> dict[str, float]:
    """Adjusted GVIF per feature; infinite for exactly collinear groups."""
    encoded = encode_features(frame, features, drop_first=True)
    if len(encoded.features) < 2:
        raise ValueError("collinearity diagnostics need at least 2 features")
    X = encoded.X
    stds = X.std(axis=0)
    for name, cols in encoded.groups.items():
        if len(cols) == 0 or any(stds[c] == 0.0 for c in cols):
            raise ValueError(f"feature {name!r} is constant; drop it before the diagnostic")
    R = np.corrcoef(X, rowvar=False)
    det_R = float(np.linalg.det(R))
    out: dict[str, float] = {}
    for name in encoded.features:
        cols = np.array(encoded.groups[name], dtype=int)
        others = np.array(
            [c for c in range(X.shape[1]) if c not in set(cols.tolist())], dtype=int
        )
        det_gg = float(np.linalg.det(R[np.ix_(cols, cols)]))
        det_hh = float(np.linalg.det(R[np.ix_(others, others)]))
        if det_R <= 1e-12 * det_gg * det_hh:
            out[name] = float("inf")
            continue
        gvif = det_gg * det_hh / det_R
        df = len(cols)
        out[name] = float(gvif ** (1.0 / (2.0 * df)))
    return out
