from __future__ import annotations

import math

import numpy as np
import pandas as pd
import pytest

from skillmeta.collinearity import adj_gvif


def test_orthogonal_features_near_one():
    rng = np.random.default_rng(0)
    n = 2000
    frame = pd.DataFrame(
        {
            "a": rng.normal(size=n),
            "b": rng.normal(size=n),
            "c": rng.choice(["x", "y", "z"], n),
            "target": rng.normal(size=n),
        }
    )
    values = adj_gvif(frame, ["a", "b", "c"])
    assert set(values) == {"a", "b", "c"}
    for v in values.values():
        assert 1.0 <= v <= 1.05


def test_duplicated_feature_diverges():
    rng = np.random.default_rng(1)
    frame = pd.DataFrame({"a": rng.normal(size=300)})
    frame["copy"] = frame["a"]
    frame["b"] = rng.normal(size=300)
    frame["target"] = 0.0
    values = adj_gvif(frame, ["a", "copy", "b"])
    assert values["a"] > 10 or math.isinf(values["a"])
    assert values["copy"] > 10 or math.isinf(values["copy"])


def test_uncorrelated_pair_is_one():
    rng = np.random.default_rng(2)
    frame = pd.DataFrame(
        {"a": rng.normal(size=5000), "b": rng.normal(size=5000), "target": 0.0}
    )
    values = adj_gvif(frame, ["a", "b"])
    assert values["a"] == pytest.approx(1.0, abs=0.01)
    assert values["b"] == pytest.approx(1.0, abs=0.01)


def test_constant_feature_is_an_error():
    frame = pd.DataFrame({"a": [1.0, 1.0, 1.0, 1.0], "b": [1, 2, 3, 4], "target": 0.0})
    with pytest.raises(ValueError, match="'a'"):
        adj_gvif(frame, ["a", "b"])


def test_single_feature_is_an_error():
    frame = pd.DataFrame({"a": [1.0, 2.0, 3.0], "target": 0.0})
    with pytest.raises(ValueError):
        adj_gvif(frame, ["a"])
