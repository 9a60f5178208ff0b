"""Ready-made schedules and base configurations for experiments and scripts.

Two stylized technology stages are provided. In the "improving human"
stage, human skill distributions drift upward over epochs while machine
skills stay frozen between trainings: strong on low/medium-difficulty tasks,
weak where broad generalization is required. The "strong machine" stage
instead gives machine skills high static performance across all
difficulties, stress-testing conclusions drawn from the first stage.
"""
from __future__ import annotations

from typing import Any

from .model import (
    BetaParams,
    BetaRamp,
    CurveKind,
    Difficulty,
    EconParams,
    InteractionKind,
    OutputCurve,
    PolicyKind,
    SimulationConfig,
    SkillSchedule,
)

__all__ = [
    "improving_human_schedule",
    "strong_machine_schedule",
    "base_config",
    "space_document",
]

_H, _M = PolicyKind.H, PolicyKind.M
_LOW, _MED, _HIGH = Difficulty.LOW, Difficulty.MED, Difficulty.HIGH


def improving_human_schedule() -> SkillSchedule:
    """Human skills improve over epochs; machine skills static, weak on High.

    Machine Beta means stay at least 0.2 above the human ones on Low/Med at
    every epoch, and at least 0.2 below them on High.
    """
    return SkillSchedule(
        {
            (_H, _LOW): BetaRamp(BetaParams(4.0, 4.0), BetaParams(6.0, 4.0)),  # mean .50 -> .60
            (_H, _MED): BetaRamp(BetaParams(3.0, 5.0), BetaParams(5.0, 5.0)),  # mean .375 -> .50
            (_H, _HIGH): BetaRamp(BetaParams(3.6, 4.4), BetaParams(5.0, 3.0)),  # mean .45 -> .625
            (_M, _LOW): BetaRamp.static(8.0, 2.0),  # mean .80
            (_M, _MED): BetaRamp.static(7.0, 3.0),  # mean .70
            (_M, _HIGH): BetaRamp.static(2.0, 6.0),  # mean .25
        }
    )


def strong_machine_schedule() -> SkillSchedule:
    """Machine skills remarkably improved, especially on medium/high difficulty."""
    return SkillSchedule(
        {
            (_H, _LOW): BetaRamp(BetaParams(4.0, 4.0), BetaParams(6.0, 4.0)),
            (_H, _MED): BetaRamp(BetaParams(3.0, 5.0), BetaParams(5.0, 5.0)),
            (_H, _HIGH): BetaRamp(BetaParams(3.6, 4.4), BetaParams(5.0, 3.0)),
            (_M, _LOW): BetaRamp.static(9.0, 2.0),  # mean .818
            (_M, _MED): BetaRamp.static(8.0, 2.0),  # mean .80
            (_M, _HIGH): BetaRamp.static(7.0, 3.0),  # mean .70
        }
    )


def base_config(
    *,
    config_id: str = "base",
    n_firms: int = 1,
    n_epochs: int = 10,
    n_runs: int = 1000,
    schedule: SkillSchedule | None = None,
    interaction: InteractionKind = InteractionKind.MEAN,
    gamma_hm: float = 1.5,
    delta_hm: float = 0.3,
    p_difficulty: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3),
    seed: int = 42,
) -> SimulationConfig:
    """A small, fully-valid scenario: uniform policies, logistic output curve.

    Margins follow the worked setup mc_H = 0.5, mc_M = 0.7, and the derived
    dual-cost margin mc_HM = 0.2; errors cost 0.9 per unit beyond a 0.3
    performance-shortfall threshold.
    """
    return SimulationConfig(
        config_id=config_id,
        n_firms=n_firms,
        n_epochs=n_epochs,
        n_runs=n_runs,
        p_policy=(1 / 3, 1 / 3, 1 / 3),
        p_difficulty=p_difficulty,
        schedule=schedule if schedule is not None else improving_human_schedule(),
        interaction=interaction,
        gamma_hm=gamma_hm,
        curve=OutputCurve(CurveKind.LOGISTIC, {"k": 5.0}),
        econ=EconParams(
            mc={_H: 0.5, PolicyKind.HM: 0.2, _M: 0.7},
            delta={_H: 0.0, PolicyKind.HM: delta_hm, _M: 0.0},
            t_err=0.3,
            c_err=0.9,
        ),
        seed=seed,
    )


def space_document(base: SimulationConfig, *, free_mc_hm: bool = False) -> dict[str, Any]:
    """A design-space document around a base config, ready to serialize.

    With ``free_mc_hm`` the HM margin becomes its own sampled dimension in
    [0.1, 0.5] instead of being derived from mc_H and mc_M, which removes
    the exact linear dependence among the three margins (useful when the
    downstream analysis is sensitive to collinearity).
    """
    from .io import config_to_document  # local import to avoid a cycle

    numeric = {
        "gamma_hm": [1.0, 2.0],
        "mc_H": [0.4, 0.6],
        "mc_M": [0.7, 0.9],
        "delta_HM": [0.1, 0.9],
        "t_err": [0.0, 1.0],
        "c_err": [0.0, 1.0],
    }
    if free_mc_hm:
        numeric["mc_HM"] = [0.1, 0.5]
    return {
        "numeric": numeric,
        "interactions": ["mean", "collaborate", "superpower"],
        "curve_kinds": ["logistic", "inverse_logistic"],
        "curve_params": {"logistic": {"k": 5.0}, "inverse_logistic": {"k": 5.0}},
        "base": config_to_document(base),
    }
