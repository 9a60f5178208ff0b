"""File formats: config documents (JSON), runs files (CSV), summary and gain tables.

Conventions
-----------
Reals are serialized with 9 significant digits, which round-trips stably and
keeps files small while staying inside the suite's 1e-9 tolerances. Runs
files carry the exact header ``config_id,k,e,i,c,a,d,theta,y,v,err,u`` with
rows ordered (k, e, i). Config documents mirror SimulationConfig field for
field; a document that does not validate is rejected with a diagnostic
naming the offending key path.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from .analytics import SummaryRow, HmgEntry
from .engine import MetricFrame
from .model import (
    DIFFICULTIES,
    INTERACTIONS,
    POLICIES,
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

__all__ = [
    "RUNS_HEADER",
    "fmt",
    "config_to_document",
    "document_to_config",
    "write_config",
    "read_config",
    "read_configs_dir",
    "write_runs",
    "read_runs",
    "SUMMARY_HEADER",
    "write_summary",
    "read_summary",
    "HMG_HEADER",
    "write_hmg",
]

RUNS_HEADER = "config_id,k,e,i,c,a,d,theta,y,v,err,u"
SUMMARY_HEADER = "scope,config_id,policy,difficulty,interaction,metric,stat,value,n,delta_hm"
HMG_HEADER = "delta_bin,baseline,difficulty,a,omega,metric,hm_value,baseline_value,gain_pct"

_POLICY_BY_VALUE = {c.value: c for c in POLICIES}
_DIFFICULTY_BY_VALUE = {d.value: d for d in DIFFICULTIES}
_INTERACTION_BY_VALUE = {a.value: a for a in INTERACTIONS}
_CURVE_BY_VALUE = {k.value: k for k in CurveKind}

_POLICY_INDEX = {c: j for j, c in enumerate(POLICIES)}
_DIFFICULTY_INDEX = {d: j for j, d in enumerate(DIFFICULTIES)}
_INTERACTION_INDEX = {a: j for j, a in enumerate(INTERACTIONS)}


def fmt(x: float) -> str:
    """Serialize a real with 9 significant digits."""
    return f"{x:.9g}"


# --------------------------------------------------------------------------
# Config documents


def config_to_document(config: SimulationConfig) -> dict[str, Any]:
    """JSON-ready dict mirroring the config field for field."""
    schedule: dict[str, dict[str, dict[str, list[float]]]] = {}
    for c in (PolicyKind.H, PolicyKind.M):
        schedule[c.value] = {}
        for d in DIFFICULTIES:
            ramp = config.schedule.cells[(c, d)]
            schedule[c.value][d.value] = {
                "start": [ramp.start.alpha, ramp.start.beta],
                "end": [ramp.end.alpha, ramp.end.beta],
            }
    return {
        "config_id": config.config_id,
        "n_firms": config.n_firms,
        "n_epochs": config.n_epochs,
        "n_runs": config.n_runs,
        "p_policy": {c.value: config.p_policy[j] for j, c in enumerate(POLICIES)},
        "p_difficulty": {d.value: config.p_difficulty[j] for j, d in enumerate(DIFFICULTIES)},
        "schedule": schedule,
        "interaction": config.interaction.value,
        "gamma_hm": config.gamma_hm,
        "curve": {"kind": config.curve.kind.value, "params": dict(config.curve.params)},
        "econ": {
            "mc": {c.value: config.econ.mc[c] for c in POLICIES},
            "delta": {c.value: config.econ.delta[c] for c in POLICIES},
            "t_err": config.econ.t_err,
            "c_err": config.econ.c_err,
        },
        "seed": config.seed,
    }


def _need(doc: Mapping, key: str, path: str) -> Any:
    if not isinstance(doc, Mapping):
        raise ConfigError(f"{path or '(root)'}: expected an object")
    if key not in doc:
        raise ConfigError(f"{_join(path, key)}: missing")
    return doc[key]


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _enum_by_value(table: Mapping[str, Any], value: Any, path: str):
    if value not in table:
        raise ConfigError(f"{path}: expected one of {sorted(table)}, got {value!r}")
    return table[value]


def _parse_triple(doc: Any, keys: tuple[str, ...], path: str) -> tuple[float, ...]:
    return tuple(_as_number(_need(doc, k, path), _join(path, k)) for k in keys)


def _parse_beta_pair(value: Any, path: str) -> BetaParams:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{path}: expected a two-element [alpha, beta] list")
    try:
        return BetaParams(_as_number(value[0], f"{path}[0]"), _as_number(value[1], f"{path}[1]"))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_schedule(doc: Any, path: str) -> SkillSchedule:
    cells: dict[tuple[PolicyKind, Difficulty], BetaRamp] = {}
    for c in (PolicyKind.H, PolicyKind.M):
        c_doc = _need(doc, c.value, path)
        for d in DIFFICULTIES:
            cell_path = _join(_join(path, c.value), d.value)
            cell = _need(c_doc, d.value, _join(path, c.value))
            cells[(c, d)] = BetaRamp(
                start=_parse_beta_pair(_need(cell, "start", cell_path), _join(cell_path, "start")),
                end=_parse_beta_pair(_need(cell, "end", cell_path), _join(cell_path, "end")),
            )
    return SkillSchedule(cells)


def document_to_config(doc: Mapping[str, Any], *, require_config_id: bool = True) -> SimulationConfig:
    """Parse and validate a config document; diagnostics name the key path."""
    if not isinstance(doc, Mapping):
        raise ConfigError("(root): expected a JSON object")
    if require_config_id:
        config_id = _need(doc, "config_id", "")
        if not isinstance(config_id, str) or not config_id:
            raise ConfigError("config_id: expected a non-empty string")
    else:
        config_id = doc.get("config_id", "base")

    curve_doc = _need(doc, "curve", "")
    kind = _enum_by_value(_CURVE_BY_VALUE, _need(curve_doc, "kind", "curve"), "curve.kind")
    params_doc = _need(curve_doc, "params", "curve")
    if not isinstance(params_doc, Mapping):
        raise ConfigError("curve.params: expected an object")
    try:
        curve = OutputCurve(kind, {k: _as_number(v, f"curve.params.{k}") for k, v in params_doc.items()})
    except ConfigError as exc:
        raise ConfigError(f"curve: {exc}") from None

    econ_doc = _need(doc, "econ", "")
    mc_doc = _need(econ_doc, "mc", "econ")
    delta_doc = _need(econ_doc, "delta", "econ")
    try:
        econ = EconParams(
            mc={c: _as_number(_need(mc_doc, c.value, "econ.mc"), f"econ.mc.{c.value}") for c in POLICIES},
            delta={
                c: _as_number(_need(delta_doc, c.value, "econ.delta"), f"econ.delta.{c.value}")
                for c in POLICIES
            },
            t_err=_as_number(_need(econ_doc, "t_err", "econ"), "econ.t_err"),
            c_err=_as_number(_need(econ_doc, "c_err", "econ"), "econ.c_err"),
        )
    except ConfigError as exc:
        msg = str(exc)
        raise ConfigError(msg if msg.startswith("econ") else f"econ: {msg}") from None

    try:
        return SimulationConfig(
            config_id=config_id,
            n_firms=_as_int(_need(doc, "n_firms", ""), "n_firms"),
            n_epochs=_as_int(_need(doc, "n_epochs", ""), "n_epochs"),
            n_runs=_as_int(_need(doc, "n_runs", ""), "n_runs"),
            p_policy=_parse_triple(_need(doc, "p_policy", ""), ("H", "HM", "M"), "p_policy"),
            p_difficulty=_parse_triple(
                _need(doc, "p_difficulty", ""), ("Low", "Med", "High"), "p_difficulty"
            ),
            schedule=_parse_schedule(_need(doc, "schedule", ""), "schedule"),
            interaction=_enum_by_value(
                _INTERACTION_BY_VALUE, _need(doc, "interaction", ""), "interaction"
            ),
            gamma_hm=_as_number(_need(doc, "gamma_hm", ""), "gamma_hm"),
            curve=curve,
            econ=econ,
            seed=_as_int(_need(doc, "seed", ""), "seed"),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def write_config(config: SimulationConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config_to_document(config), indent=2) + "\n")


def read_config(path: str | Path) -> SimulationConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    try:
        return document_to_config(doc)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def read_configs_dir(path: str | Path) -> list[SimulationConfig]:
    """All *.json configs of a directory, sorted by file name."""
    files = sorted(Path(path).glob("*.json"))
    if not files:
        raise ConfigError(f"{path}: no *.json config files found")
    return [read_config(f) for f in files]


# --------------------------------------------------------------------------
# Runs files


def write_runs(frame: MetricFrame, path: str | Path) -> None:
    """Serialize a frame; reals carry 9 significant digits."""
    lines = [RUNS_HEADER]
    cid = frame.config_id
    for j in range(len(frame)):
        lines.append(
            f"{cid},{frame.k[j]},{frame.e[j]},{frame.i[j]},"
            f"{POLICIES[frame.c[j]].value},{INTERACTIONS[frame.a[j]].value},"
            f"{DIFFICULTIES[frame.d[j]].value},"
            f"{fmt(frame.theta[j])},{fmt(frame.y[j])},{fmt(frame.v[j])},"
            f"{fmt(frame.err[j])},{fmt(frame.u[j])}"
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_runs(path: str | Path) -> MetricFrame:
    """Parse a runs file back into a frame (one config per file)."""
    with open(path, newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != RUNS_HEADER:
            raise ValueError(f"{path}: bad runs header {header!r}")
        cols: list[list] = [[] for _ in range(12)]
        config_id: str | None = None
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(",")
            if len(parts) != 12:
                raise ValueError(f"{path}:{lineno}: expected 12 fields, got {len(parts)}")
            if config_id is None:
                config_id = parts[0]
            elif parts[0] != config_id:
                raise ValueError(f"{path}:{lineno}: mixed config_ids in one runs file")
            for col, part in zip(cols, parts):
                col.append(part)
    if config_id is None:
        raise ValueError(f"{path}: runs file has no data rows")
    try:
        c_codes = [_POLICY_INDEX[_POLICY_BY_VALUE[v]] for v in cols[4]]
        a_codes = [_INTERACTION_INDEX[_INTERACTION_BY_VALUE[v]] for v in cols[5]]
        d_codes = [_DIFFICULTY_INDEX[_DIFFICULTY_BY_VALUE[v]] for v in cols[6]]
    except KeyError as exc:
        raise ValueError(f"{path}: unknown category label {exc}") from None
    return MetricFrame(
        config_id,
        k=np.array(cols[1], dtype=np.int32),
        e=np.array(cols[2], dtype=np.int32),
        i=np.array(cols[3], dtype=np.int32),
        c=np.array(c_codes, dtype=np.int8),
        a=np.array(a_codes, dtype=np.int8),
        d=np.array(d_codes, dtype=np.int8),
        theta=np.array(cols[7], dtype=np.float64),
        y=np.array(cols[8], dtype=np.float64),
        v=np.array(cols[9], dtype=np.float64),
        err=np.array(cols[10], dtype=np.float64),
        u=np.array(cols[11], dtype=np.float64),
    )


# --------------------------------------------------------------------------
# Summary and gain tables


def write_summary(rows: Iterable[SummaryRow], path: str | Path) -> None:
    lines = [SUMMARY_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                (
                    r.scope,
                    r.config_id,
                    "" if r.policy is None else r.policy.value,
                    "" if r.difficulty is None else r.difficulty.value,
                    "" if r.interaction is None else r.interaction.value,
                    r.metric,
                    r.stat,
                    fmt(r.value),
                    str(r.n),
                    "" if r.delta_hm is None else fmt(r.delta_hm),
                )
            )
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_summary(path: str | Path) -> list[SummaryRow]:
    rows: list[SummaryRow] = []
    with open(path, newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != SUMMARY_HEADER:
            raise ValueError(f"{path}: bad summary header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(",")
            if len(parts) != 10:
                raise ValueError(f"{path}:{lineno}: expected 10 fields, got {len(parts)}")
            scope, cid, pol, dif, inter, metric, stat, value, n, delta = parts
            rows.append(
                SummaryRow(
                    scope=scope,
                    config_id=cid,
                    policy=None if not pol else _POLICY_BY_VALUE[pol],
                    difficulty=None if not dif else _DIFFICULTY_BY_VALUE[dif],
                    interaction=None if not inter else _INTERACTION_BY_VALUE[inter],
                    metric=metric,
                    stat=stat,
                    value=float(value),
                    n=int(n),
                    delta_hm=None if not delta else float(delta),
                )
            )
    return rows


def write_hmg(tables: Iterable[tuple[str, Iterable[HmgEntry]]], path: str | Path) -> None:
    """Serialize (bin_label, entries) gain tables; undefined gains become "ND"."""
    lines = [HMG_HEADER]
    for label, entries in tables:
        for e in entries:
            lines.append(
                ",".join(
                    (
                        label,
                        e.baseline.value,
                        "all" if e.difficulty is None else e.difficulty.value,
                        e.a0.value,
                        e.omega,
                        e.metric,
                        fmt(e.hm_value),
                        fmt(e.baseline_value),
                        "ND" if e.gain_pct is None else f"{e.gain_pct:+.9g}",
                    )
                )
            )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
