"""Summary statistics, HM-gain tables, and the back-of-envelope cost calculator.

All computations here are pure functions over immutable frames; per-frame
statistics may be evaluated in parallel since results never depend on
evaluation order.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .engine import METRICS, MetricFrame
from .model import (
    DIFFICULTIES,
    INTERACTIONS,
    POLICIES,
    Difficulty,
    InteractionKind,
    PolicyKind,
)

__all__ = [
    "OMEGAS",
    "SummaryStats",
    "SubsetKey",
    "PerSimulationStats",
    "HmgEntry",
    "DeltaBin",
    "SummaryRow",
    "subset",
    "summarize",
    "per_simulation_stats",
    "omega_values",
    "central_tendency",
    "hmg",
    "hmg_table",
    "hmg_by_delta",
    "summary_rows",
    "hmg_entries_from_summary",
    "expected_error_cost",
    "skill_cost_total",
]

log = logging.getLogger(__name__)

OMEGAS: tuple[str, ...] = ("mu", "sigma", "rho", "iqr", "sk")

HMG_BASELINES: tuple[PolicyKind, ...] = (PolicyKind.H, PolicyKind.M)
HMG_INTERACTIONS: tuple[InteractionKind, ...] = (
    InteractionKind.MEAN,
    InteractionKind.COLLABORATE,
    InteractionKind.SUPERPOWER,
)


@dataclass(frozen=True)
class SummaryStats:
    """The five descriptors of a value set.

    ``sigma`` is the population standard deviation (divisor n), ``rho`` the
    range max - min, ``iqr`` uses linear-interpolation quantiles, and ``sk``
    the adjusted Fisher-Pearson sample skewness, absent (None) when n < 3 or
    the variance is zero.
    """

    mu: float
    sigma: float
    rho: float
    iqr: float
    sk: float | None

    def get(self, omega: str) -> float | None:
        if omega not in OMEGAS:
            raise ValueError(f"unknown statistic {omega!r}; expected one of {OMEGAS}")
        return getattr(self, omega)


@dataclass(frozen=True)
class SubsetKey:
    """Selector for a metric over optionally policy/difficulty/interaction-filtered records."""

    metric: str
    policy: PolicyKind | None = None
    difficulty: Difficulty | None = None
    interaction: InteractionKind | None = None

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if self.difficulty is not None and self.policy is None:
            raise ValueError("a difficulty filter requires a policy filter")


def _as_frames(frames: MetricFrame | Iterable[MetricFrame]) -> list[MetricFrame]:
    if isinstance(frames, MetricFrame):
        return [frames]
    return list(frames)


def subset(frames: MetricFrame | Iterable[MetricFrame], key: SubsetKey) -> np.ndarray:
    """Values of the chosen metric from records matching all present filters.

    Order-stable: frames in input order, records in stored order.
    """
    parts = [
        f.values(key.metric, key.policy, key.difficulty, key.interaction)
        for f in _as_frames(frames)
    ]
    if not parts:
        return np.empty(0, dtype=np.float64)
    return np.concatenate(parts)


def summarize(values: Sequence[float] | np.ndarray) -> SummaryStats:
    """The five summary descriptors of a non-empty value list."""
    arr = np.asarray(values, dtype=np.float64)
    n = arr.size
    if n == 0:
        raise ValueError("summarize: empty value list")
    if arr.max() == arr.min():
        # exact-constant input: zero dispersion, not the mean's rounding noise
        return SummaryStats(mu=float(arr[0]), sigma=0.0, rho=0.0, iqr=0.0, sk=None)
    mu = float(arr.mean())
    centered = arr - mu
    m2 = float(np.mean(centered**2))
    sigma = math.sqrt(m2)
    rho = float(arr.max() - arr.min())
    q1, q3 = np.percentile(arr, [25.0, 75.0])  # linear interpolation between order stats
    iqr = float(q3 - q1)
    if n < 3 or m2 == 0.0:
        sk = None
    else:
        m3 = float(np.mean(centered**3))
        sk = math.sqrt(n * (n - 1)) / (n - 2) * m3 / m2**1.5
    return SummaryStats(mu=mu, sigma=sigma, rho=rho, iqr=iqr, sk=sk)


@dataclass(frozen=True)
class PerSimulationStats:
    """Per-frame summary stats for one subset key; frames with empty subsets are counted."""

    entries: tuple[tuple[str, SummaryStats], ...]
    skipped: int


def per_simulation_stats(
    frames: Iterable[MetricFrame], key: SubsetKey
) -> PerSimulationStats:
    """One SummaryStats per frame whose subset is non-empty."""
    frames = _as_frames(frames)
    if not frames:
        raise ValueError("per_simulation_stats: no frames given")
    entries: list[tuple[str, SummaryStats]] = []
    skipped = 0
    for frame in frames:
        vals = frame.values(key.metric, key.policy, key.difficulty, key.interaction)
        if vals.size == 0:
            skipped += 1
        else:
            entries.append((frame.config_id, summarize(vals)))
    return PerSimulationStats(entries=tuple(entries), skipped=skipped)


def omega_values(
    entries: Iterable[SummaryStats | tuple[str, SummaryStats]], omega: str
) -> list[float]:
    """The selected statistic across entries, keeping only defined values."""
    out: list[float] = []
    for entry in entries:
        stats = entry[1] if isinstance(entry, tuple) else entry
        v = stats.get(omega)
        if v is not None:
            out.append(v)
    return out


def central_tendency(
    entries: Iterable[SummaryStats | tuple[str, SummaryStats]], omega: str
) -> float:
    """Arithmetic mean of the selected statistic across simulations."""
    vals = omega_values(entries, omega)
    if not vals:
        raise ValueError(f"central_tendency: no defined values for {omega!r}")
    return math.fsum(vals) / len(vals)


def hmg(hm_bar: float, baseline_bar: float) -> float | None:
    """Relative gain (percent) of the HM central value over a baseline.

    Positive baselines use +(hm-base)/base*100, negative ones flip the sign
    so that an improvement always reads positive; a zero baseline leaves the
    gain undefined (None).
    """
    if baseline_bar > 0.0:
        return (hm_bar - baseline_bar) / baseline_bar * 100.0
    if baseline_bar < 0.0:
        return -((hm_bar - baseline_bar) / baseline_bar) * 100.0
    return None


@dataclass(frozen=True)
class HmgEntry:
    """Gain of policy HM under one interaction vs a baseline policy for one cell."""

    omega: str
    metric: str
    baseline: PolicyKind
    difficulty: Difficulty | None  # None pools all difficulties
    a0: InteractionKind
    hm_value: float
    baseline_value: float
    gain_pct: float | None


def hmg_table(
    frames: Iterable[MetricFrame], omega: str, metric: str
) -> list[HmgEntry]:
    """HM-gain entries for every (baseline, difficulty, interaction) cell.

    Cells whose HM or baseline subset is empty in every frame are omitted
    with a logged diagnostic.
    """
    frames = _as_frames(frames)
    hm_bars: dict[tuple[Difficulty | None, InteractionKind], float] = {}
    for d in (None, *DIFFICULTIES):
        for a0 in HMG_INTERACTIONS:
            stats = per_simulation_stats(
                frames, SubsetKey(metric, PolicyKind.HM, d, interaction=a0)
            )
            if stats.entries:
                hm_bars[(d, a0)] = central_tendency(stats.entries, omega)
            else:
                log.warning(
                    "hmg_table: no HM records for difficulty=%s a=%s; cell omitted",
                    "all" if d is None else d.value,
                    a0.value,
                )
    entries: list[HmgEntry] = []
    for c0 in HMG_BASELINES:
        for d in (None, *DIFFICULTIES):
            stats = per_simulation_stats(frames, SubsetKey(metric, c0, d))
            if not stats.entries:
                log.warning(
                    "hmg_table: no %s records for difficulty=%s; cells omitted",
                    c0.value,
                    "all" if d is None else d.value,
                )
                continue
            base_bar = central_tendency(stats.entries, omega)
            for a0 in HMG_INTERACTIONS:
                if (d, a0) not in hm_bars:
                    continue
                hm_bar = hm_bars[(d, a0)]
                entries.append(
                    HmgEntry(
                        omega=omega,
                        metric=metric,
                        baseline=c0,
                        difficulty=d,
                        a0=a0,
                        hm_value=hm_bar,
                        baseline_value=base_bar,
                        gain_pct=hmg(hm_bar, base_bar),
                    )
                )
    return entries


@dataclass(frozen=True)
class DeltaBin:
    """One HM-margin-growth bin with its gain table.

    Bins are left-closed, right-open, except the last which is closed on
    both sides.
    """

    lo: float
    hi: float
    closed_right: bool
    entries: tuple[HmgEntry, ...]

    @property
    def label(self) -> str:
        right = "]" if self.closed_right else ")"
        return f"[{self.lo:g}..{self.hi:g}{right}"


def _check_edges(edges: Sequence[float], label: str) -> list[float]:
    out = [float(x) for x in edges]
    if len(out) < 2 or any(a >= b for a, b in zip(out, out[1:])):
        raise ValueError(f"{label} must be ascending with >= 2 values, got {list(edges)}")
    return out


def _in_bin(x: float, lo: float, hi: float, closed_right: bool) -> bool:
    return lo <= x and (x <= hi if closed_right else x < hi)


def hmg_by_delta(
    frames: Iterable[MetricFrame],
    omega: str,
    metric: str,
    bin_edges: Sequence[float],
    delta_by_config: Mapping[str, float],
) -> list[DeltaBin]:
    """HM-gain tables split by each frame's configured HM margin growth.

    ``delta_by_config`` maps config_id to the scenario's delta_HM; frames
    whose value falls outside the edges are excluded.
    """
    edges = _check_edges(bin_edges, "bin_edges")
    frames = _as_frames(frames)
    for f in frames:
        if f.config_id not in delta_by_config:
            raise ValueError(f"no delta_HM known for config {f.config_id!r}")
    bins: list[DeltaBin] = []
    for j in range(len(edges) - 1):
        lo, hi = edges[j], edges[j + 1]
        closed_right = j == len(edges) - 2
        in_bin = [f for f in frames if _in_bin(delta_by_config[f.config_id], lo, hi, closed_right)]
        entries = hmg_table(in_bin, omega, metric) if in_bin else []
        bins.append(DeltaBin(lo=lo, hi=hi, closed_right=closed_right, entries=tuple(entries)))
    return bins


@dataclass(frozen=True)
class SummaryRow:
    """One long-format summary line: a statistic of one metric over one subset.

    ``scope`` is "per_sim" for a single simulation (config_id set) or
    "aggregate" for the equal-weight mean across simulations (n = number of
    simulations with a defined value). Absent filters are None.
    """

    scope: str
    config_id: str
    policy: PolicyKind | None
    difficulty: Difficulty | None
    interaction: InteractionKind | None
    metric: str
    stat: str
    value: float
    n: int
    delta_hm: float | None = None


def _group_cells(
    frame: MetricFrame, groups: Sequence[str]
) -> list[tuple[PolicyKind | None, Difficulty | None, InteractionKind | None]]:
    """The subset cells one frame contributes, from coarse to fine."""
    cells: list[tuple[PolicyKind | None, Difficulty | None, InteractionKind | None]] = [
        (None, None, None)
    ]
    if "policy" not in groups:
        return cells
    split_a = "a" in groups
    for j, c in enumerate(POLICIES):
        if not (frame.c == j).any():
            continue
        interactions: list[InteractionKind | None]
        if split_a:
            codes = np.unique(frame.a[frame.c == j])
            interactions = [INTERACTIONS[code] for code in codes]
        else:
            interactions = [None]
        for a in interactions:
            cells.append((c, None, a))
            if "difficulty" in groups:
                for d in DIFFICULTIES:
                    cells.append((c, d, a))
    return cells


def summary_rows(
    frames: Iterable[MetricFrame],
    groups: Sequence[str] = ("policy", "difficulty", "a"),
    stats: Sequence[str] = OMEGAS,
    metrics: Sequence[str] = METRICS,
    delta_by_config: Mapping[str, float] | None = None,
    *,
    round_to: int | None = 9,
) -> list[SummaryRow]:
    """Per-simulation and aggregate summary rows in long format.

    Grouping is hierarchical: the ungrouped row always appears; "policy"
    adds per-policy rows, "difficulty" per (policy, difficulty) rows, and
    "a" additionally splits the policy-level rows by interaction. Aggregates
    are equal-weight means of the per-simulation values; they are computed
    from the values rounded to ``round_to`` significant digits so that
    re-aggregating a parsed summary file reproduces them exactly.
    """
    for g in groups:
        if g not in ("policy", "difficulty", "a"):
            raise ValueError(f"unknown group {g!r}; expected policy, difficulty, a")
    if ("difficulty" in groups or "a" in groups) and "policy" not in groups:
        raise ValueError("difficulty/a grouping requires policy grouping")
    for s in stats:
        if s not in OMEGAS:
            raise ValueError(f"unknown statistic {s!r}; expected one of {OMEGAS}")
    for m in metrics:
        if m not in METRICS:
            raise ValueError(f"unknown metric {m!r}; expected one of {METRICS}")
    frames = _as_frames(frames)

    def _round(x: float) -> float:
        if round_to is None:
            return x
        return float(f"{x:.{round_to}g}")

    rows: list[SummaryRow] = []
    # cell -> (metric, stat) -> list of per-sim values
    agg: dict[tuple, dict[tuple[str, str], list[float]]] = {}
    for frame in frames:
        delta_hm = None if delta_by_config is None else delta_by_config.get(frame.config_id)
        for cell in _group_cells(frame, groups):
            c, d, a = cell
            mask = None if cell == (None, None, None) else frame.mask(c, d, a)
            if mask is not None and not mask.any():
                continue
            for metric in metrics:
                col = frame.metric(metric) if mask is None else frame.metric(metric)[mask]
                stats_out = summarize(col)
                for stat in stats:
                    v = stats_out.get(stat)
                    if v is None:
                        continue
                    v = _round(v)
                    rows.append(
                        SummaryRow(
                            scope="per_sim",
                            config_id=frame.config_id,
                            policy=c,
                            difficulty=d,
                            interaction=a,
                            metric=metric,
                            stat=stat,
                            value=v,
                            n=int(col.size),
                            delta_hm=delta_hm,
                        )
                    )
                    agg.setdefault(cell, {}).setdefault((metric, stat), []).append(v)
    for cell in sorted(
        agg,
        key=lambda t: (
            -1 if t[0] is None else POLICIES.index(t[0]),
            -1 if t[2] is None else INTERACTIONS.index(t[2]),
            -1 if t[1] is None else DIFFICULTIES.index(t[1]),
        ),
    ):
        c, d, a = cell
        for metric in metrics:
            for stat in stats:
                vals = agg[cell].get((metric, stat))
                if not vals:
                    continue
                rows.append(
                    SummaryRow(
                        scope="aggregate",
                        config_id="",
                        policy=c,
                        difficulty=d,
                        interaction=a,
                        metric=metric,
                        stat=stat,
                        value=_round(math.fsum(vals) / len(vals)),
                        n=len(vals),
                        delta_hm=None,
                    )
                )
    return rows


def hmg_entries_from_summary(
    rows: Iterable[SummaryRow],
    omega: str,
    metric: str,
    delta_edges: Sequence[float] | None = None,
) -> list[tuple[str, list[HmgEntry]]]:
    """HM-gain tables computed from per-simulation summary rows.

    Returns (bin_label, entries) pairs; without ``delta_edges`` there is a
    single "all" bin. Rows must include interaction-split per-sim values
    (produced with "a" grouping). When binning, every HM per-sim row must
    carry a delta_hm value.
    """
    per_sim = [
        r
        for r in rows
        if r.scope == "per_sim" and r.stat == omega and r.metric == metric and r.policy is not None
    ]
    if not per_sim:
        raise ValueError(f"summary contains no per-simulation rows for stat={omega!r} metric={metric!r}")

    def _table(selected: list[SummaryRow]) -> list[HmgEntry]:
        hm_bars: dict[tuple[Difficulty | None, InteractionKind], float] = {}
        for d in (None, *DIFFICULTIES):
            for a0 in HMG_INTERACTIONS:
                vals = [
                    r.value
                    for r in selected
                    if r.policy is PolicyKind.HM and r.difficulty == d and r.interaction is a0
                ]
                if vals:
                    hm_bars[(d, a0)] = math.fsum(vals) / len(vals)
        entries: list[HmgEntry] = []
        for c0 in HMG_BASELINES:
            for d in (None, *DIFFICULTIES):
                vals = [r.value for r in selected if r.policy is c0 and r.difficulty == d]
                if not vals:
                    continue
                base_bar = math.fsum(vals) / len(vals)
                for a0 in HMG_INTERACTIONS:
                    if (d, a0) not in hm_bars:
                        continue
                    hm_bar = hm_bars[(d, a0)]
                    entries.append(
                        HmgEntry(
                            omega=omega,
                            metric=metric,
                            baseline=c0,
                            difficulty=d,
                            a0=a0,
                            hm_value=hm_bar,
                            baseline_value=base_bar,
                            gain_pct=hmg(hm_bar, base_bar),
                        )
                    )
        return entries

    if delta_edges is None:
        return [("all", _table(per_sim))]
    edges = _check_edges(delta_edges, "delta edges")
    missing = sorted({r.config_id for r in per_sim if r.delta_hm is None})
    if missing:
        raise ValueError(
            "summary rows carry no delta_hm for configs "
            f"{missing[:5]}{'...' if len(missing) > 5 else ''}; "
            "re-run the analysis with the configs directory available"
        )
    out: list[tuple[str, list[HmgEntry]]] = []
    for j in range(len(edges) - 1):
        lo, hi = edges[j], edges[j + 1]
        closed_right = j == len(edges) - 2
        selected = [r for r in per_sim if _in_bin(r.delta_hm, lo, hi, closed_right)]
        label = f"[{lo:g}..{hi:g}{']' if closed_right else ')'}"
        out.append((label, _table(selected)))
    return out


def expected_error_cost(
    avg_price: float, n_sales: float, cost_fraction: float, mape: float
) -> float:
    """Expected per-period error cost: price x volume x cost fraction x MAPE."""
    return avg_price * n_sales * cost_fraction * mape


def skill_cost_total(
    error_cost_per_period: float,
    dev_cost: float,
    ops_cost_per_period: float,
    periods: float,
) -> float:
    """Total cost of a skill over the horizon, undiscounted."""
    return error_cost_per_period * periods + dev_cost + ops_cost_per_period * periods
