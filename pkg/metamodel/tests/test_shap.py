from __future__ import annotations

import numpy as np
import pandas as pd
from sklearn.dummy import DummyRegressor
from sklearn.tree import DecisionTreeRegressor

from skillmeta.crossval import make_model
from skillmeta.encoding import encode_features
from skillmeta.shap_attrib import shap_summary

from conftest import synthetic_dataset


def fit_rf(frame, seed=0):
    encoded = encode_features(frame)
    model = make_model("random_forest", seed)
    model.fit(encoded.X, frame["target"].to_numpy(dtype=float))
    return model, encoded


def test_additivity_on_100_random_rows():
    frame = synthetic_dataset(n=100, seed=0, noise=0.02)
    model, encoded = fit_rf(frame)
    summary = shap_summary(model, encoded, max_background=32, seed=0)
    residual = np.abs(
        summary.base_value + summary.contributions.sum(axis=1) - summary.predictions
    )
    assert residual.max() <= 1e-6
    # explained predictions are the model's own outputs
    assert np.allclose(summary.predictions, model.predict(encoded.X), atol=1e-9)


def test_constant_model_has_zero_contributions():
    frame = synthetic_dataset(n=60, seed=1)
    encoded = encode_features(frame)
    model = DummyRegressor(strategy="constant", constant=0.7)
    model.fit(encoded.X, frame["target"])
    summary = shap_summary(model, encoded, max_background=16, seed=0)
    assert np.abs(summary.contributions).max() == 0.0
    assert summary.base_value == 0.7


def test_single_feature_stump_signs_match_split():
    rng = np.random.default_rng(2)
    frame = pd.DataFrame({"x": rng.uniform(0, 1, 200), "other": rng.uniform(0, 1, 200)})
    frame["target"] = (frame["x"] > 0.5).astype(float)
    encoded = encode_features(frame)
    stump = DecisionTreeRegressor(max_depth=1, random_state=0)
    stump.fit(encoded.X, frame["target"])
    summary = shap_summary(stump, encoded, max_background=64, seed=0)
    x_col = summary.features.index("x")
    above = frame["x"].to_numpy() > 0.5
    assert np.all(summary.contributions[above, x_col] > 0)
    assert np.all(summary.contributions[~above, x_col] < 0)
    # the irrelevant feature contributes nothing
    other_col = summary.features.index("other")
    assert np.abs(summary.contributions[:, other_col]).max() <= 1e-9


def test_ranking_orders_by_mean_abs_contribution():
    frame = synthetic_dataset(n=300, seed=3)
    model, encoded = fit_rf(frame)
    summary = shap_summary(model, encoded, max_background=32, max_instances=150, seed=0)
    values = [v for _, v in summary.ranking]
    assert values == sorted(values, reverse=True)
    assert {f for f, _ in summary.ranking} == {"c_a", "d", "gamma_hm"}


def test_same_seed_reproduces_summary():
    frame = synthetic_dataset(n=120, seed=4)
    model, encoded = fit_rf(frame)
    a = shap_summary(model, encoded, max_background=16, max_instances=50, seed=5)
    b = shap_summary(model, encoded, max_background=16, max_instances=50, seed=5)
    assert np.array_equal(a.contributions, b.contributions)
    assert a.ranking == b.ranking
