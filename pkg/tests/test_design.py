from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
import scipy.stats

from skillsim.design import (
    DesignPoint,
    DesignSpace,
    NumericRange,
    build_designs,
    derive_seed,
    lhs_sample,
    maximin_select,
)
from skillsim.model import CurveKind, InteractionKind, PolicyKind
from skillsim.scenarios import base_config


def unit_space(n_dims=1):
    return DesignSpace(numeric=tuple(NumericRange(f"x{j}", 0.0, 1.0) for j in range(n_dims)))


def points_1d(values):
    return [DesignPoint(numeric={"x0": v}) for v in values]


# ---------------------------------------------------------------------------
# lhs_sample


def test_lhs_single_point_in_range():
    pts = lhs_sample(unit_space(), 1, np.random.default_rng(0))
    assert len(pts) == 1
    assert 0.0 <= pts[0].numeric["x0"] <= 1.0


@pytest.mark.parametrize("n", [4, 16, 100])
def test_lhs_one_sample_per_stratum(n):
    space = DesignSpace()
    pts = lhs_sample(space, n, np.random.default_rng(3))
    for r in space.numeric:
        vals = np.array([p.numeric[r.name] for p in pts])
        strata = np.floor((vals - r.lo) / (r.hi - r.lo) * n).astype(int)
        assert sorted(strata.tolist()) == list(range(n))


def test_lhs_dimensions_independent():
    # Spearman rank correlation under the null has sd ~ 1/sqrt(n-1) ~= 0.1
    space = DesignSpace()
    pts = lhs_sample(space, 100, np.random.default_rng(8))
    gamma = [p.numeric["gamma_hm"] for p in pts]
    t_err = [p.numeric["t_err"] for p in pts]
    rho = scipy.stats.spearmanr(gamma, t_err).statistic
    assert abs(rho) < 0.3


def test_lhs_marginals_uniform_ks():
    space = DesignSpace()
    pts = lhs_sample(space, 500, np.random.default_rng(21))
    for r in space.numeric:
        vals = np.array([p.numeric[r.name] for p in pts])
        p_value = scipy.stats.kstest(vals, "uniform", args=(r.lo, r.hi - r.lo)).pvalue
        assert p_value > 0.01


# ---------------------------------------------------------------------------
# maximin_select


def test_maximin_farthest_pair():
    sel = maximin_select(points_1d([0.0, 0.5, 1.0]), 2, unit_space())
    assert {p.numeric["x0"] for p in sel} == {0.0, 1.0}


def brute_force_maximin(values, n):
    def min_pairwise(subset):
        return min(abs(a - b) for a, b in itertools.combinations(subset, 2))

    return max(itertools.combinations(values, n), key=min_pairwise)


def test_maximin_matches_brute_force_on_four_points():
    values = [0.0, 0.4, 0.5, 1.0]
    assert set(brute_force_maximin(values, 3)) == {0.0, 0.5, 1.0}
    sel = maximin_select(points_1d(values), 3, unit_space())
    assert {p.numeric["x0"] for p in sel} == {0.0, 0.5, 1.0}


def test_maximin_full_set_and_usage_error():
    pts = points_1d([0.1, 0.2, 0.9])
    assert maximin_select(pts, 3, unit_space()) == pts
    with pytest.raises(ValueError):
        maximin_select(pts, 4, unit_space())


def test_maximin_permutation_invariant_without_ties():
    rng = np.random.default_rng(4)
    values = sorted(rng.random(40).tolist())
    sel = {p.numeric["x0"] for p in maximin_select(points_1d(values), 8, unit_space())}
    shuffled = list(values)
    np.random.default_rng(9).shuffle(shuffled)
    sel2 = {p.numeric["x0"] for p in maximin_select(points_1d(shuffled), 8, unit_space())}
    assert sel == sel2


def test_maximin_beats_random_subsets():
    space = DesignSpace()
    rng = np.random.default_rng(12)
    pool = lhs_sample(space, 200, rng)
    chosen = maximin_select(pool, 10, space)

    def min_pairwise(points):
        coords = np.array(
            [
                [(p.numeric[r.name] - r.lo) / (r.hi - r.lo) for r in space.numeric]
                for p in points
            ]
        )
        dists = [
            np.linalg.norm(coords[a] - coords[b])
            for a, b in itertools.combinations(range(len(points)), 2)
        ]
        return min(dists)

    chosen_score = min_pairwise(chosen)
    pick = np.random.default_rng(13)
    for _ in range(20):
        idx = pick.choice(len(pool), size=10, replace=False)
        assert chosen_score >= min_pairwise([pool[j] for j in idx])


# ---------------------------------------------------------------------------
# build_designs


def test_build_designs_counts_and_invariants():
    base = base_config()
    configs = build_designs(DesignSpace(), 8, "lhs", base, np.random.default_rng(0))
    assert len(configs) == 48  # 8 points x 3 interactions x 2 curves
    assert len({c.config_id for c in configs}) == 48
    assert len({c.seed for c in configs}) == 48
    for c in configs:
        mc = c.econ.mc
        assert mc[PolicyKind.HM] == pytest.approx(
            mc[PolicyKind.H] + mc[PolicyKind.M] - 1.0, abs=1e-12
        )
        assert c.econ.delta[PolicyKind.H] == 0.0
        assert c.econ.delta[PolicyKind.M] == 0.0
        assert 0.1 <= c.econ.delta[PolicyKind.HM] <= 0.9
        assert 1.0 <= c.gamma_hm <= 2.0
    kinds = {(c.interaction, c.curve.kind) for c in configs}
    assert len(kinds) == 6


def test_build_designs_derived_margin_from_base():
    # space without margin dimensions falls back to the base margins
    space = DesignSpace(numeric=(NumericRange("gamma_hm", 1.0, 2.0),))
    base = base_config()  # mc_H = 0.5, mc_M = 0.7
    configs = build_designs(space, 2, "lhs", base, np.random.default_rng(1))
    for c in configs:
        assert c.econ.mc[PolicyKind.HM] == pytest.approx(0.2, abs=1e-12)


def test_build_designs_free_mc_hm_dimension():
    space = DesignSpace(
        numeric=DesignSpace().numeric + (NumericRange("mc_HM", 0.1, 0.5),)
    )
    configs = build_designs(space, 6, "lhs", base_config(), np.random.default_rng(2))
    derived = [
        abs(c.econ.mc[PolicyKind.HM] - (c.econ.mc[PolicyKind.H] + c.econ.mc[PolicyKind.M] - 1.0))
        for c in configs
    ]
    assert max(derived) > 1e-6  # sampled freely, no longer tied to mc_H + mc_M - 1


def test_build_designs_deterministic_given_seed():
    base = base_config()
    a = build_designs(DesignSpace(), 4, "maximin", base, np.random.default_rng(5))
    b = build_designs(DesignSpace(), 4, "maximin", base, np.random.default_rng(5))
    assert a == b


def test_build_designs_maximin_pool_guard():
    with pytest.raises(ValueError):
        build_designs(DesignSpace(), 8, "maximin", base_config(), np.random.default_rng(0), pool=4)
    with pytest.raises(ValueError):
        build_designs(DesignSpace(), 8, "nope", base_config(), np.random.default_rng(0))


def test_derive_seed_deterministic_and_distinct():
    seeds = [derive_seed(42, j) for j in range(100)]
    assert seeds == [derive_seed(42, j) for j in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= s < 2**64 for s in seeds)
