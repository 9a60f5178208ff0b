"""Monte Carlo toolkit for the economics of human, machine, and human-machine skill policies."""

from .model import (
    BetaParams,
    BetaRamp,
    ConfigError,
    CurveKind,
    Difficulty,
    EconParams,
    InteractionKind,
    OutputCurve,
    PolicyKind,
    SimulationConfig,
    SkillSchedule,
)
from .engine import MetricFrame, MetricRecord, run_batch, run_simulation
from .design import DesignPoint, DesignSpace, NumericRange, build_designs, lhs_sample, maximin_select
from .analytics import HmgEntry, SubsetKey, SummaryStats, hmg, hmg_table, subset, summarize

__version__ = "0.1.0"

__all__ = [
    "BetaParams",
    "BetaRamp",
    "ConfigError",
    "CurveKind",
    "Difficulty",
    "EconParams",
    "InteractionKind",
    "OutputCurve",
    "PolicyKind",
    "SimulationConfig",
    "SkillSchedule",
    "MetricFrame",
    "MetricRecord",
    "run_batch",
    "run_simulation",
    "DesignPoint",
    "DesignSpace",
    "NumericRange",
    "build_designs",
    "lhs_sample",
    "maximin_select",
    "HmgEntry",
    "SubsetKey",
    "SummaryStats",
    "hmg",
    "hmg_table",
    "subset",
    "summarize",
]
