"""Space-filling experiment design: Latin Hypercube Sampling plus Maximin selection.

A design space crosses sampled numeric dimensions with categorical grids
(interaction rule, output-curve shape). The derived quantities follow the
cost structure of a dual-skill deployment: unless sampled explicitly, the HM
margin is mc_H + mc_M - 1 (both cost bases are incurred), and the H/M margin
growth rates are pinned to 0.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .model import (
    ConfigError,
    CurveKind,
    EconParams,
    InteractionKind,
    OutputCurve,
    PolicyKind,
    SimulationConfig,
)

__all__ = [
    "NumericRange",
    "DesignSpace",
    "DesignPoint",
    "lhs_sample",
    "maximin_select",
    "build_designs",
    "derive_seed",
]

DEFAULT_POOL_FACTOR = 20


@dataclass(frozen=True)
class NumericRange:
    """A named closed numeric interval with lo < hi."""

    name: str
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ConfigError(f"range {self.name!r}: need lo < hi, got [{self.lo}, {self.hi}]")


DEFAULT_NUMERIC_RANGES: tuple[NumericRange, ...] = (
    NumericRange("gamma_hm", 1.0, 2.0),
    NumericRange("mc_H", 0.4, 0.6),
    NumericRange("mc_M", 0.7, 0.9),
    NumericRange("delta_HM", 0.1, 0.9),
    NumericRange("t_err", 0.0, 1.0),
    NumericRange("c_err", 0.0, 1.0),
)

DEFAULT_INTERACTIONS: tuple[InteractionKind, ...] = (
    InteractionKind.MEAN,
    InteractionKind.COLLABORATE,
    InteractionKind.SUPERPOWER,
)

DEFAULT_CURVE_KINDS: tuple[CurveKind, ...] = (
    CurveKind.LOGISTIC,
    CurveKind.INVERSE_LOGISTIC,
)

DEFAULT_CURVE_PARAMS: dict[CurveKind, dict[str, float]] = {
    CurveKind.LOGISTIC: {"k": 5.0},
    CurveKind.INVERSE_LOGISTIC: {"k": 5.0},
}


@dataclass(frozen=True)
class DesignSpace:
    """Numeric ranges plus the categorical grids crossed with them."""

    numeric: tuple[NumericRange, ...] = DEFAULT_NUMERIC_RANGES
    interactions: tuple[InteractionKind, ...] = DEFAULT_INTERACTIONS
    curve_kinds: tuple[CurveKind, ...] = DEFAULT_CURVE_KINDS
    curve_params: Mapping[CurveKind, Mapping[str, float]] = field(
        default_factory=lambda: dict(DEFAULT_CURVE_PARAMS)
    )

    def __post_init__(self) -> None:
        names = [r.name for r in self.numeric]
        if len(set(names)) != len(names):
            raise ConfigError(f"numeric range names must be unique, got {names}")
        if not self.numeric:
            raise ConfigError("design space needs at least one numeric range")
        if not self.interactions or not self.curve_kinds:
            raise ConfigError("categorical grids must be non-empty")
        if InteractionKind.INDIVIDUAL in self.interactions:
            raise ConfigError("'individual' cannot be designed; it is a reporting label")

    def range(self, name: str) -> NumericRange:
        for r in self.numeric:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass(frozen=True)
class DesignPoint:
    """One sampled location: numeric values, optionally a categorical cell."""

    numeric: Mapping[str, float]
    interaction: InteractionKind | None = None
    curve_kind: CurveKind | None = None


def lhs_sample(
    space: DesignSpace, n: int, rng: np.random.Generator
) -> list[DesignPoint]:
    """Latin Hypercube sample of the numeric dimensions.

    Per dimension the n values occupy the n equal-width strata exactly once
    (uniform jitter inside the stratum); stratum assignment is an independent
    random permutation per dimension. Draw order: for each dimension in
    space order, one permutation then one jitter vector.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    columns: dict[str, np.ndarray] = {}
    for r in space.numeric:
        strata = rng.permutation(n)
        jitter = rng.random(n)
        columns[r.name] = r.lo + (r.hi - r.lo) * (strata + jitter) / n
    return [
        DesignPoint(numeric={name: float(col[j]) for name, col in columns.items()})
        for j in range(n)
    ]


def _coords(points: Sequence[DesignPoint], space: DesignSpace) -> np.ndarray:
    """Range-normalized coordinates so heterogeneous units weigh equally."""
    out = np.empty((len(points), len(space.numeric)))
    for col, r in enumerate(space.numeric):
        for row, pt in enumerate(points):
            out[row, col] = (pt.numeric[r.name] - r.lo) / (r.hi - r.lo)
    return out


def maximin_select(
    candidates: Sequence[DesignPoint], n: int, space: DesignSpace
) -> list[DesignPoint]:
    """Greedy subset maximizing the minimum pairwise distance.

    Starts from the two farthest-apart candidates, then repeatedly adds the
    candidate whose minimum distance to the selected set is largest.
    Distances are Euclidean on range-normalized coordinates. Ties break
    toward the lowest candidate index, so the result is permutation-invariant
    up to ties. Greedy, not exchange-optimal.
    """
    if n > len(candidates):
        raise ValueError(f"cannot select {n} from {len(candidates)} candidates")
    if n == len(candidates):
        return list(candidates)
    if n < 2:
        return list(candidates[:n])
    coords = _coords(candidates, space)
    p = len(candidates)
    best = (0, 1)
    best_dist = -1.0
    for row in range(p - 1):  # row-chunked farthest-pair scan, O(p) memory
        d = np.linalg.norm(coords[row + 1 :] - coords[row], axis=1)
        j = int(np.argmax(d))
        if d[j] > best_dist:
            best_dist = float(d[j])
            best = (row, row + 1 + j)
    selected = list(best)
    min_dist = np.minimum(
        np.linalg.norm(coords - coords[best[0]], axis=1),
        np.linalg.norm(coords - coords[best[1]], axis=1),
    )
    min_dist[selected] = -1.0
    while len(selected) < n:
        nxt = int(np.argmax(min_dist))  # first index wins ties
        selected.append(nxt)
        min_dist = np.minimum(min_dist, np.linalg.norm(coords - coords[nxt], axis=1))
        min_dist[nxt] = -1.0
    return [candidates[j] for j in selected]


def derive_seed(base_seed: int, index: int) -> int:
    """Deterministic 64-bit seed for the design point at ``index``."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _curve_for(
    kind: CurveKind, space: DesignSpace, base: SimulationConfig
) -> OutputCurve:
    if kind in space.curve_params:
        return OutputCurve(kind, dict(space.curve_params[kind]))
    if kind is base.curve.kind:
        return base.curve
    raise ConfigError(f"no parameters known for curve kind {kind.value!r}")


def build_designs(
    space: DesignSpace,
    n_numeric: int,
    method: str,
    base: SimulationConfig,
    rng: np.random.Generator,
    *,
    pool: int | None = None,
) -> list[SimulationConfig]:
    """Cross the categorical grid with n_numeric sampled points.

    ``method`` is "lhs" (plain Latin Hypercube) or "maximin" (Maximin
    selection over an LHS candidate pool, 20x the target size by default).
    The base config supplies sizes, probability distributions, the skill
    schedule, and fallback values for any dimension the space does not
    sample. Every emitted config gets a distinct deterministic seed derived
    from (base.seed, design index) and a unique config_id.
    """
    if method == "lhs":
        points = lhs_sample(space, n_numeric, rng)
    elif method == "maximin":
        pool_n = DEFAULT_POOL_FACTOR * n_numeric if pool is None else pool
        if pool_n < n_numeric:
            raise ValueError(f"maximin pool ({pool_n}) smaller than the target count ({n_numeric})")
        points = maximin_select(lhs_sample(space, pool_n, rng), n_numeric, space)
    else:
        raise ValueError(f"unknown design method {method!r}; expected 'lhs' or 'maximin'")

    sampled = {r.name for r in space.numeric}
    configs: list[SimulationConfig] = []
    for idx, (pt, interaction, curve_kind) in enumerate(
        itertools.product(points, space.interactions, space.curve_kinds)
    ):
        def got(name: str, fallback: float) -> float:
            return pt.numeric[name] if name in sampled else fallback

        mc_h = got("mc_H", base.econ.mc[PolicyKind.H])
        mc_m = got("mc_M", base.econ.mc[PolicyKind.M])
        mc_hm = got("mc_HM", mc_h + mc_m - 1.0)
        econ = EconParams(
            mc={PolicyKind.H: mc_h, PolicyKind.HM: mc_hm, PolicyKind.M: mc_m},
            delta={
                PolicyKind.H: 0.0,
                PolicyKind.HM: got("delta_HM", base.econ.delta[PolicyKind.HM]),
                PolicyKind.M: 0.0,
            },
            t_err=got("t_err", base.econ.t_err),
            c_err=got("c_err", base.econ.c_err),
        )
        configs.append(
            dataclasses.replace(
                base,
                config_id=f"d{idx:04d}_{interaction.value}_{curve_kind.value}",
                interaction=interaction,
                gamma_hm=got("gamma_hm", base.gamma_hm),
                curve=_curve_for(curve_kind, space, base),
                econ=econ,
                seed=derive_seed(base.seed, idx),
            )
        )
    return configs
