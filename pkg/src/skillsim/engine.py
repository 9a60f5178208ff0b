"""Monte Carlo engine running the (run, epoch, firm) loop of a scenario.

Seeding contract
----------------
The master seed deterministically derives one independent sub-stream per run
``k`` via ``SeedSequence(seed, spawn_key=(k,))``, so runs can be executed in
any order (or in parallel) without changing the output. Within one
(run, epoch, firm) step, draws occur in the fixed order
[difficulty, theta_H, theta_M]; both theta_H and theta_M are always drawn,
even for firms whose policy uses only one of them, which keeps the stream
position policy-independent and lets paired-seed scenarios share randomness.
Firm policies are re-drawn at the start of every run (one vectorized draw),
and stay fixed across the run's epochs.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import (
    DIFFICULTIES,
    INTERACTIONS,
    POLICIES,
    BetaParams,
    Difficulty,
    InteractionKind,
    PolicyKind,
    SimulationConfig,
    SkillSchedule,
    combine_skills,
    interpolate,
    margin_factor,
    quality_output,
    random_choice,
    validate_probs,
)

__all__ = [
    "MetricRecord",
    "MetricFrame",
    "BatchError",
    "METRICS",
    "assign_policies",
    "epoch_beta",
    "run_simulation",
    "run_batch",
]

METRICS: tuple[str, ...] = ("theta", "y", "v", "err", "u")

_POLICY_INDEX = {c: j for j, c in enumerate(POLICIES)}
_DIFFICULTY_INDEX = {d: j for j, d in enumerate(DIFFICULTIES)}
_INTERACTION_INDEX = {a: j for j, a in enumerate(INTERACTIONS)}
_INDIVIDUAL_CODE = _INTERACTION_INDEX[InteractionKind.INDIVIDUAL]
_DIFFICULTY_CODES = (0, 1, 2)


@dataclass(frozen=True, slots=True)
class MetricRecord:
    """One task execution: coordinates plus the five metric values."""

    i: int
    c: PolicyKind
    a: InteractionKind
    d: Difficulty
    e: int
    k: int
    theta: float
    y: float
    v: float
    err: float
    u: float


class MetricFrame:
    """Column-oriented store of one simulation's records, ordered (k, e, i).

    The ``theta_h``/``theta_m`` columns are only present when the engine ran
    in debug mode.
    """

    def __init__(
        self,
        config_id: str,
        *,
        i: np.ndarray,
        e: np.ndarray,
        k: np.ndarray,
        c: np.ndarray,
        a: np.ndarray,
        d: np.ndarray,
        theta: np.ndarray,
        y: np.ndarray,
        v: np.ndarray,
        err: np.ndarray,
        u: np.ndarray,
        theta_h: np.ndarray | None = None,
        theta_m: np.ndarray | None = None,
    ) -> None:
        self.config_id = config_id
        self.i = np.asarray(i, dtype=np.int32)
        self.e = np.asarray(e, dtype=np.int32)
        self.k = np.asarray(k, dtype=np.int32)
        self.c = np.asarray(c, dtype=np.int8)
        self.a = np.asarray(a, dtype=np.int8)
        self.d = np.asarray(d, dtype=np.int8)
        self.theta = np.asarray(theta, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        self.v = np.asarray(v, dtype=np.float64)
        self.err = np.asarray(err, dtype=np.float64)
        self.u = np.asarray(u, dtype=np.float64)
        self.theta_h = None if theta_h is None else np.asarray(theta_h, dtype=np.float64)
        self.theta_m = None if theta_m is None else np.asarray(theta_m, dtype=np.float64)
        n = len(self.theta)
        for name in ("i", "e", "k", "c", "a", "d", "y", "v", "err", "u"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name}: length mismatch")

    def __len__(self) -> int:
        return len(self.theta)

    def records(self) -> list[MetricRecord]:
        """Materialize the rows as record objects (ordered as stored)."""
        return [
            MetricRecord(
                i=int(self.i[j]),
                c=POLICIES[self.c[j]],
                a=INTERACTIONS[self.a[j]],
                d=DIFFICULTIES[self.d[j]],
                e=int(self.e[j]),
                k=int(self.k[j]),
                theta=float(self.theta[j]),
                y=float(self.y[j]),
                v=float(self.v[j]),
                err=float(self.err[j]),
                u=float(self.u[j]),
            )
            for j in range(len(self))
        ]

    def metric(self, name: str) -> np.ndarray:
        if name not in METRICS:
            raise ValueError(f"unknown metric {name!r}; expected one of {METRICS}")
        return getattr(self, name)

    def mask(
        self,
        policy: PolicyKind | None = None,
        difficulty: Difficulty | None = None,
        interaction: InteractionKind | None = None,
    ) -> np.ndarray:
        """Boolean mask of records matching all the given filters."""
        m = np.ones(len(self), dtype=bool)
        if policy is not None:
            m &= self.c == _POLICY_INDEX[policy]
        if difficulty is not None:
            m &= self.d == _DIFFICULTY_INDEX[difficulty]
        if interaction is not None:
            m &= self.a == _INTERACTION_INDEX[interaction]
        return m

    def values(
        self,
        metric: str,
        policy: PolicyKind | None = None,
        difficulty: Difficulty | None = None,
        interaction: InteractionKind | None = None,
    ) -> np.ndarray:
        """Metric values of the records matching the filters, order-stable."""
        if policy is None and difficulty is None and interaction is None:
            return self.metric(metric)
        return self.metric(metric)[self.mask(policy, difficulty, interaction)]


class BatchError(RuntimeError):
    """One or more configurations of a batch failed; carries (index, error) pairs."""

    def __init__(self, failures: list[tuple[int, Exception]]):
        self.failures = failures
        detail = "; ".join(f"config #{idx}: {exc}" for idx, exc in failures)
        super().__init__(f"{len(failures)} of the batch's configurations failed: {detail}")


def assign_policies(
    n_firms: int, p_policy: Sequence[float], rng: np.random.Generator
) -> list[PolicyKind]:
    """Draw one policy per firm (single vectorized draw from the stream)."""
    p = np.asarray(validate_probs(p_policy, "p_policy"))
    codes = rng.choice(len(POLICIES), size=n_firms, p=p / p.sum())
    return [POLICIES[j] for j in codes]


def epoch_beta(
    schedule: SkillSchedule,
    c: PolicyKind,
    d: Difficulty,
    e: int,
    n_epochs: int,
) -> BetaParams:
    """Beta parameters of (c, d) at epoch e, linearly interpolated per shape."""
    if c is PolicyKind.HM:
        raise ValueError("HM has no sampling schedule; its skill level is derived")
    ramp = schedule.cells[(c, d)]
    return BetaParams(
        interpolate(ramp.start.alpha, ramp.end.alpha, e, n_epochs),
        interpolate(ramp.start.beta, ramp.end.beta, e, n_epochs),
    )


def run_simulation(config: SimulationConfig, *, debug: bool = False) -> MetricFrame:
    """Execute one scenario and return its full metric frame.

    Deterministic: an identical config (seed included) yields a bit-identical
    frame. With ``debug=True`` the frame also carries the raw theta_H/theta_M
    draws per record.
    """
    n_firms, n_epochs, n_runs = config.n_firms, config.n_epochs, config.n_runs
    n_total = n_firms * n_epochs * n_runs

    # Epoch-indexed tables; interpolation consumes no randomness.
    beta_h = [
        [epoch_beta(config.schedule, PolicyKind.H, d, e, n_epochs) for d in DIFFICULTIES]
        for e in range(n_epochs)
    ]
    beta_m = [
        [epoch_beta(config.schedule, PolicyKind.M, d, e, n_epochs) for d in DIFFICULTIES]
        for e in range(n_epochs)
    ]
    margins = [
        [margin_factor(config.econ.delta[c], e, n_epochs) for e in range(n_epochs)]
        for c in POLICIES
    ]
    mc = [config.econ.mc[c] for c in POLICIES]
    t_err, c_err = config.econ.t_err, config.econ.c_err
    curve, interaction, gamma = config.curve, config.interaction, config.gamma_hm
    interaction_code = _INTERACTION_INDEX[interaction]
    p_difficulty = config.p_difficulty

    col_i = np.empty(n_total, dtype=np.int32)
    col_e = np.empty(n_total, dtype=np.int32)
    col_k = np.empty(n_total, dtype=np.int32)
    col_c = np.empty(n_total, dtype=np.int8)
    col_a = np.empty(n_total, dtype=np.int8)
    col_d = np.empty(n_total, dtype=np.int8)
    col_theta = np.empty(n_total, dtype=np.float64)
    col_y = np.empty(n_total, dtype=np.float64)
    col_v = np.empty(n_total, dtype=np.float64)
    col_err = np.empty(n_total, dtype=np.float64)
    col_u = np.empty(n_total, dtype=np.float64)
    col_th = np.empty(n_total, dtype=np.float64) if debug else None
    col_tm = np.empty(n_total, dtype=np.float64) if debug else None

    pos = 0
    for k in range(1, n_runs + 1):
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(k,)))
        policy_codes = [_POLICY_INDEX[c] for c in assign_policies(n_firms, config.p_policy, rng)]
        beta_sample = rng.beta
        for e in range(n_epochs):
            bh_row = beta_h[e]
            bm_row = beta_m[e]
            for i in range(n_firms):
                d_idx = random_choice(_DIFFICULTY_CODES, p_difficulty, rng)
                bh = bh_row[d_idx]
                bm = bm_row[d_idx]
                theta_h = float(beta_sample(bh.alpha, bh.beta))
                theta_m = float(beta_sample(bm.alpha, bm.beta))
                c_idx = policy_codes[i]
                if c_idx == 0:  # H
                    theta = theta_h
                    a_code = _INDIVIDUAL_CODE
                elif c_idx == 2:  # M
                    theta = theta_m
                    a_code = _INDIVIDUAL_CODE
                else:  # HM
                    theta = combine_skills(interaction, theta_h, theta_m, gamma)
                    a_code = interaction_code
                y = quality_output(curve, theta)
                v = max(0.0, min(1.0, y * mc[c_idx] * margins[c_idx][e]))
                shortfall = 1.0 - theta
                err = shortfall * c_err if shortfall >= t_err else 0.0
                u = v - err
                col_i[pos] = i
                col_e[pos] = e
                col_k[pos] = k
                col_c[pos] = c_idx
                col_a[pos] = a_code
                col_d[pos] = d_idx
                col_theta[pos] = theta
                col_y[pos] = y
                col_v[pos] = v
                col_err[pos] = err
                col_u[pos] = u
                if debug:
                    col_th[pos] = theta_h
                    col_tm[pos] = theta_m
                pos += 1

    return MetricFrame(
        config.config_id,
        i=col_i,
        e=col_e,
        k=col_k,
        c=col_c,
        a=col_a,
        d=col_d,
        theta=col_theta,
        y=col_y,
        v=col_v,
        err=col_err,
        u=col_u,
        theta_h=col_th,
        theta_m=col_tm,
    )


def _timed_run(config: SimulationConfig) -> tuple[MetricFrame, float]:
    t0 = time.perf_counter()
    frame = run_simulation(config)
    return frame, time.perf_counter() - t0


def run_batch(
    configs: Sequence[SimulationConfig],
    parallelism: int = 1,
    *,
    strict: bool = True,
    progress: Callable[[int, str, int, float], None] | None = None,
) -> list[MetricFrame]:
    """Run many scenarios; results match sequential execution, in config order.

    Each config uses only its own seed, so scheduling cannot change results.
    Failures are collected per config without aborting the rest; with
    ``strict`` (the default) a BatchError listing them is raised at the end,
    otherwise the failed configs are simply missing from the returned list.
    ``progress`` is called as (index, config_id, n_records, seconds) when a
    config completes.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    results: list[MetricFrame | None] = [None] * len(configs)
    failures: list[tuple[int, Exception]] = []

    def _note(idx: int, frame: MetricFrame, seconds: float) -> None:
        results[idx] = frame
        if progress is not None:
            progress(idx, frame.config_id, len(frame), seconds)

    if parallelism == 1 or len(configs) <= 1:
        for idx, cfg in enumerate(configs):
            try:
                frame, seconds = _timed_run(cfg)
            except Exception as exc:  # noqa: BLE001 - reported per config
                failures.append((idx, exc))
            else:
                _note(idx, frame, seconds)
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = {pool.submit(_timed_run, cfg): idx for idx, cfg in enumerate(configs)}
            for fut, idx in futures.items():
                try:
                    frame, seconds = fut.result()
                except Exception as exc:  # noqa: BLE001
                    failures.append((idx, exc))
                else:
                    _note(idx, frame, seconds)

    if failures and strict:
        raise BatchError(sorted(failures, key=lambda t: t[0]))
    return [frame for frame in results if frame is not None]
