"""Exact Shapley attribution for fitted regressors over grouped features.

Treats each original feature (a group of one-hot columns, or a single
numeric column) as one player and enumerates all feature coalitions, so the
values are exact rather than sampled. A coalition's value is the model's
expected prediction with the coalition's columns taken from the instance and
the rest from a background sample. Exactness buys the additivity guarantee:
per instance, base value plus the sum of contributions equals the model
prediction up to floating-point summation.

Feasible because the surrogate feature sets are small (at most ten groups,
so at most 1024 coalitions).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .encoding import EncodedMatrix

__all__ = ["ShapSummary", "shap_summary"]


@dataclass(frozen=True)
class ShapSummary:
    """Per-instance contributions plus the global mean-|contribution| ranking."""

    features: tuple[str, ...]
    base_value: float
    contributions: np.ndarray  # shape (n_instances, n_features)
    predictions: np.ndarray  # model predictions of the explained instances
    ranking: tuple[tuple[str, float], ...]  # (feature, mean |contribution|), descending


def shap_summary(
    model,
    encoded: EncodedMatrix,
    *,
    max_background: int = 64,
    max_instances: int = 500,
    seed: int = 0,
) -> ShapSummary:
    """Exact per-feature Shapley contributions for up to ``max_instances`` rows."""
    rng = np.random.default_rng(seed)
    X = encoded.X
    n, _ = X.shape
    if n == 0:
        raise ValueError("cannot explain an empty matrix")
    bg_idx = rng.choice(n, size=min(max_background, n), replace=False)
    background = X[bg_idx]
    inst_idx = (
        np.arange(n) if n <= max_instances else rng.choice(n, size=max_instances, replace=False)
    )
    instances = X[inst_idx]

    g = len(encoded.features)
    group_cols = [np.array(encoded.groups[f], dtype=int) for f in encoded.features]
    n_coalitions = 1 << g
    n_bg = len(background)

    # Shapley kernel weights by coalition size, for coalitions excluding the player
    weight = [factorial(s) * factorial(g - 1 - s) / factorial(g) for s in range(g)]
    coalition_size = np.array([bin(mask).count("1") for mask in range(n_coalitions)])

    contributions = np.zeros((len(instances), g))
    predictions = np.empty(len(instances))
    for row, x in enumerate(instances):
        # every (coalition, background row) combination, batched per instance
        stacked = np.tile(background, (n_coalitions, 1))
        for j, cols in enumerate(group_cols):
            member = (np.arange(n_coalitions) >> j) & 1
            rows_in = np.repeat(member.astype(bool), n_bg)
            stacked[np.ix_(rows_in, cols)] = x[cols]
        values = model.predict(stacked).reshape(n_coalitions, n_bg).mean(axis=1)
        predictions[row] = values[-1]  # full coalition reproduces the instance
        for j in range(g):
            without = np.flatnonzero(((np.arange(n_coalitions) >> j) & 1) == 0)
            gains = values[without | (1 << j)] - values[without]
            contributions[row, j] = float(
                np.sum([weight[coalition_size[m]] * gain for m, gain in zip(without, gains)])
            )

    base_value = float(model.predict(background).mean())
    mean_abs = np.abs(contributions).mean(axis=0)
    order = np.argsort(-mean_abs)
    ranking = tuple((encoded.features[j], float(mean_abs[j])) for j in order)
    return ShapSummary(
        features=encoded.features,
        base_value=base_value,
        contributions=contributions,
        predictions=predictions,
        ranking=ranking,
    )
