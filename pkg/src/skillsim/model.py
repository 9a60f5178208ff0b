"""Value types and pure functions of the skill-policy economics model.

Everything in this module is a pure function of its arguments plus, where
noted, an explicit ``numpy.random.Generator``. Nothing touches shared
state, so concurrent use is safe as long as each thread owns its generator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "ConfigError",
    "PolicyKind",
    "Difficulty",
    "InteractionKind",
    "CurveKind",
    "POLICIES",
    "DIFFICULTIES",
    "INTERACTIONS",
    "HM_INTERACTIONS",
    "BetaParams",
    "BetaRamp",
    "SkillSchedule",
    "OutputCurve",
    "EconParams",
    "SimulationConfig",
    "interpolate",
    "random_choice",
    "sample_beta",
    "combine_skills",
    "quality_output",
    "margin_factor",
    "value",
    "error_cost",
    "utility",
    "normalize_loss",
    "theta_from_loss",
]


class ConfigError(ValueError):
    """A configuration value violates its documented constraints."""


class PolicyKind(Enum):
    """Skill policy: human-exclusive, human-machine, or machine-exclusive."""

    H = "H"
    HM = "HM"
    M = "M"


class Difficulty(Enum):
    """Task generalization difficulty, ordered LOW < MED < HIGH."""

    LOW = "Low"
    MED = "Med"
    HIGH = "High"

    def __lt__(self, other: "Difficulty") -> bool:
        if not isinstance(other, Difficulty):
            return NotImplemented
        return DIFFICULTIES.index(self) < DIFFICULTIES.index(other)


class InteractionKind(Enum):
    """How human and machine skill levels combine for the HM policy.

    INDIVIDUAL is a reporting label for records whose policy is H or M;
    the other five select the combination rule.
    """

    MIN = "min"
    MAX = "max"
    MEAN = "mean"
    COLLABORATE = "collaborate"
    SUPERPOWER = "superpower"
    INDIVIDUAL = "individual"


class CurveKind(Enum):
    """Shape of the curve mapping skill level to quality-adjusted output."""

    LINEAR = "linear"
    LOGISTIC = "logistic"
    INVERSE_LOGISTIC = "inverse_logistic"
    EXPONENTIAL = "exponential"
    POWER = "power"
    LOGARITHMIC = "logarithmic"


POLICIES: tuple[PolicyKind, ...] = (PolicyKind.H, PolicyKind.HM, PolicyKind.M)
DIFFICULTIES: tuple[Difficulty, ...] = (Difficulty.LOW, Difficulty.MED, Difficulty.HIGH)
INTERACTIONS: tuple[InteractionKind, ...] = (
    InteractionKind.MIN,
    InteractionKind.MAX,
    InteractionKind.MEAN,
    InteractionKind.COLLABORATE,
    InteractionKind.SUPERPOWER,
    InteractionKind.INDIVIDUAL,
)
HM_INTERACTIONS: tuple[InteractionKind, ...] = INTERACTIONS[:5]

_PROB_TOL = 1e-9


def validate_probs(probs: Sequence[float], label: str) -> tuple[float, ...]:
    """Check a probability vector (nonnegative, sums to 1 within 1e-9)."""
    vec = tuple(float(p) for p in probs)
    for j, p in enumerate(vec):
        if not math.isfinite(p) or p < 0.0:
            raise ConfigError(f"{label}[{j}]: probabilities must be finite and >= 0, got {p}")
    total = math.fsum(vec)
    if abs(total - 1.0) > _PROB_TOL:
        raise ConfigError(f"{label}: probabilities must sum to 1 (got {total})")
    return vec


def _check_positive(x: float, label: str) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ConfigError(f"{label}: must be finite and > 0, got {x}")
    return x


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters of a Beta distribution; both must be positive."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        _check_positive(self.alpha, "alpha")
        _check_positive(self.beta, "beta")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class BetaRamp:
    """Start (first epoch) and end (last epoch) Beta parameters of one skill cell."""

    start: BetaParams
    end: BetaParams

    @classmethod
    def static(cls, alpha: float, beta: float) -> "BetaRamp":
        p = BetaParams(alpha, beta)
        return cls(p, p)


@dataclass(frozen=True)
class SkillSchedule:
    """Per (policy, difficulty) Beta ramps for the individually-sampled skills.

    Exactly the six (H|M) x (Low|Med|High) cells must be present; HM has no
    cell because its skill level is derived through the interaction rule.
    """

    cells: Mapping[tuple[PolicyKind, Difficulty], BetaRamp]

    def __post_init__(self) -> None:
        expected = {(c, d) for c in (PolicyKind.H, PolicyKind.M) for d in DIFFICULTIES}
        got = set(self.cells)
        if got != expected:
            missing = sorted(f"({c.value},{d.value})" for c, d in expected - got)
            extra = sorted(f"({c.value},{d.value})" for c, d in got - expected)
            raise ConfigError(
                "schedule must cover exactly the H/M x Low/Med/High cells"
                + (f"; missing {missing}" if missing else "")
                + (f"; unexpected {extra}" if extra else "")
            )
        object.__setattr__(self, "cells", dict(self.cells))


_CURVE_PARAM_NAMES: dict[CurveKind, tuple[str, ...]] = {
    CurveKind.LINEAR: ("slope", "intercept"),
    CurveKind.LOGISTIC: ("k",),
    CurveKind.INVERSE_LOGISTIC: ("k",),
    CurveKind.EXPONENTIAL: ("base",),
    CurveKind.POWER: ("exponent",),
    CurveKind.LOGARITHMIC: ("log_base",),
}

# Clamp applied to theta before the logit inside the inverse-logistic curve,
# keeping it total on the closed interval [0, 1].
_LOGIT_EPS = 1e-9


@dataclass(frozen=True)
class OutputCurve:
    """A parameterized skill-to-output curve; evaluation is clipped to [0, 1]."""

    kind: CurveKind
    params: Mapping[str, float]

    def __post_init__(self) -> None:
        names = _CURVE_PARAM_NAMES[self.kind]
        got = set(self.params)
        if got != set(names):
            raise ConfigError(
                f"curve '{self.kind.value}' takes params {sorted(names)}, got {sorted(got)}"
            )
        clean = {}
        for name in names:
            v = float(self.params[name])
            if not math.isfinite(v):
                raise ConfigError(f"curve param {name}: must be finite, got {v}")
            clean[name] = v
        if self.kind is CurveKind.EXPONENTIAL:
            if clean["base"] <= 0.0 or clean["base"] == 1.0:
                raise ConfigError(f"exponential curve requires base > 0 and != 1, got {clean['base']}")
        if self.kind is CurveKind.LOGARITHMIC and clean["log_base"] <= 1.0:
            raise ConfigError(f"logarithmic curve requires log_base > 1, got {clean['log_base']}")
        if self.kind is CurveKind.INVERSE_LOGISTIC and clean["k"] == 0.0:
            raise ConfigError("inverse_logistic curve requires k != 0")
        object.__setattr__(self, "params", clean)


@dataclass(frozen=True)
class EconParams:
    """Economic parameters: unit margins, margin growth rates, error shock."""

    mc: Mapping[PolicyKind, float]
    delta: Mapping[PolicyKind, float]
    t_err: float
    c_err: float

    def __post_init__(self) -> None:
        for name, table in (("mc", self.mc), ("delta", self.delta)):
            if set(table) != set(POLICIES):
                raise ConfigError(f"econ.{name}: must have exactly the keys H, HM, M")
        clean_mc = {}
        for c, v in self.mc.items():
            v = float(v)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"econ.mc.{c.value}: must lie in [0, 1], got {v}")
            clean_mc[c] = v
        clean_delta = {}
        for c, v in self.delta.items():
            v = float(v)
            if not math.isfinite(v) or v < -1.0:
                raise ConfigError(f"econ.delta.{c.value}: must be finite and >= -1, got {v}")
            clean_delta[c] = v
        for name in ("t_err", "c_err"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"econ.{name}: must lie in [0, 1], got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "mc", clean_mc)
        object.__setattr__(self, "delta", clean_delta)


_MAX_SEED = 2**64


@dataclass(frozen=True)
class SimulationConfig:
    """One fully-specified simulation scenario.

    ``p_policy`` is ordered (H, HM, M) and ``p_difficulty`` (Low, Med, High).
    ``seed`` is a 64-bit unsigned integer; together with the configuration it
    determines the output bit-for-bit.
    """

    config_id: str
    n_firms: int
    n_epochs: int
    n_runs: int
    p_policy: tuple[float, float, float]
    p_difficulty: tuple[float, float, float]
    schedule: SkillSchedule
    interaction: InteractionKind
    gamma_hm: float
    curve: OutputCurve
    econ: EconParams
    seed: int

    def __post_init__(self) -> None:
        for name in ("n_firms", "n_epochs", "n_runs"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name}: must be a positive integer, got {v!r}")
        object.__setattr__(self, "p_policy", validate_probs(self.p_policy, "p_policy"))
        object.__setattr__(self, "p_difficulty", validate_probs(self.p_difficulty, "p_difficulty"))
        if self.interaction is InteractionKind.INDIVIDUAL:
            raise ConfigError("interaction: 'individual' is a reporting label, not a combination rule")
        g = float(self.gamma_hm)
        if not math.isfinite(g) or g < 1.0:
            raise ConfigError(f"gamma_hm: must be finite and >= 1, got {g}")
        object.__setattr__(self, "gamma_hm", g)
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < _MAX_SEED:
            raise ConfigError(f"seed: must be an integer in [0, 2^64), got {self.seed!r}")


def interpolate(start: float, end: float, cur_step: int, tot_steps: int) -> float:
    """Linear interpolation over ``tot_steps`` discrete steps, endpoints exact.

    Returns ``start`` when ``tot_steps <= 1``; otherwise the value at
    ``cur_step`` on the straight line from ``start`` (step 0) to ``end``
    (step ``tot_steps - 1``).
    """
    if tot_steps <= 1 or cur_step == 0:
        return start
    if cur_step == tot_steps - 1:
        return end
    return start + (end - start) * cur_step / (tot_steps - 1)


def random_choice(items: Sequence, probs: Sequence[float], rng: np.random.Generator):
    """Draw one item, item j with probability probs[j]; consumes one uniform."""
    vec = validate_probs(probs, "probs")
    if len(vec) != len(items):
        raise ConfigError(f"probs: length {len(vec)} does not match {len(items)} items")
    r = rng.random()
    acc = 0.0
    for item, p in zip(items, vec):
        acc += p
        if r < acc:
            return item
    return items[-1]  # accumulated rounding can leave r just under 1


def sample_beta(p: BetaParams, rng: np.random.Generator) -> float:
    """One Beta(alpha, beta) draw in [0, 1], deterministic given the stream."""
    return float(rng.beta(p.alpha, p.beta))


def combine_skills(
    kind: InteractionKind, theta_h: float, theta_m: float, gamma: float = 1.0
) -> float:
    """Combined HM skill level for one task instance.

    ``gamma`` is the augmenting factor (>= 1), applied only by the
    collaborate and superpower rules, whose results are capped at 1.
    """
    if kind is InteractionKind.MIN:
        return min(theta_h, theta_m)
    if kind is InteractionKind.MAX:
        return max(theta_h, theta_m)
    if kind is InteractionKind.MEAN:
        return 0.5 * (theta_h + theta_m)
    if kind is InteractionKind.COLLABORATE:
        return min(1.0, 0.5 * (theta_h + theta_m) * gamma)
    if kind is InteractionKind.SUPERPOWER:
        return min(1.0, max(theta_h, theta_m) * gamma)
    raise ValueError("combine_skills: 'individual' is a reporting label, not a combination rule")


def quality_output(curve: OutputCurve, theta: float) -> float:
    """Quality-adjusted output for a skill level, clipped to [0, 1]."""
    p = curve.params
    kind = curve.kind
    if kind is CurveKind.LINEAR:
        y = p["slope"] * theta + p["intercept"]
    elif kind is CurveKind.LOGISTIC:
        z = -p["k"] * (2.0 * theta - 1.0)
        if z > 700.0:  # exp overflow guard for extreme steepness
            y = 0.0
        else:
            y = 1.0 / (1.0 + math.exp(z))
    elif kind is CurveKind.INVERSE_LOGISTIC:
        k = p["k"]
        t = min(max(theta, _LOGIT_EPS), 1.0 - _LOGIT_EPS)
        y = (k + math.log(t / (1.0 - t))) / (2.0 * k)
    elif kind is CurveKind.EXPONENTIAL:
        base = p["base"]
        y = (base**theta - 1.0) / (base - 1.0)
    elif kind is CurveKind.POWER:
        exp = p["exponent"]
        if theta == 0.0 and exp < 0.0:
            y = math.inf
        else:
            y = theta**exp
    else:  # CurveKind.LOGARITHMIC
        lb = p["log_base"]
        y = math.log1p(theta * (lb - 1.0)) / math.log(lb)
    return max(0.0, min(1.0, y))


def margin_factor(delta_c: float, e: int, n_epochs: int) -> float:
    """Margin multiplier at epoch ``e``: 1 at e=0, 1 + delta_c at e=E-1."""
    return interpolate(1.0, 1.0 + delta_c, e, n_epochs)


def value(y: float, mc: float, delta_ce: float) -> float:
    """Economic value of output: y * mc * margin factor, clipped to [0, 1]."""
    return max(0.0, min(1.0, y * mc * delta_ce))


def error_cost(theta: float, t_err: float, c_err: float) -> float:
    """Error shock: (1 - theta) * c_err when the shortfall reaches t_err.

    The trigger comparison is closed: a shortfall exactly equal to ``t_err``
    incurs the penalty.
    """
    shortfall = 1.0 - theta
    if shortfall >= t_err:
        return shortfall * c_err
    return 0.0


def utility(v: float, err: float) -> float:
    """Net utility: value minus error cost (may be negative)."""
    return v - err


def normalize_loss(loss: float, lo: float, hi: float) -> float:
    """Min-max normalization of a loss known to lie in [lo, hi]."""
    if not lo < hi:
        raise ConfigError(f"normalize_loss: need lo < hi, got lo={lo}, hi={hi}")
    return (loss - lo) / (hi - lo)


def theta_from_loss(normalized_loss: float) -> float:
    """Skill level as the complement of a normalized loss."""
    return 1.0 - normalized_loss
