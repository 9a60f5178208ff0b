from __future__ import annotations

import json

import numpy as np
import pytest

from skillsim import io
from skillsim.analytics import SummaryRow, HmgEntry, summary_rows
from skillsim.engine import run_simulation
from skillsim.model import ConfigError, Difficulty, InteractionKind, PolicyKind
from skillsim.scenarios import base_config

from conftest import make_frame


# ---------------------------------------------------------------------------
# config documents


def test_config_document_roundtrip_identity():
    cfg = base_config(config_id="round")
    doc = io.config_to_document(cfg)
    again = io.document_to_config(doc)
    assert again == cfg
    # and through actual JSON text
    assert io.document_to_config(json.loads(json.dumps(doc))) == cfg


def test_config_file_roundtrip(tmp_path):
    cfg = base_config(config_id="file")
    path = tmp_path / "cfg.json"
    io.write_config(cfg, path)
    assert io.read_config(path) == cfg
    # byte-deterministic serialization
    text = path.read_text()
    io.write_config(cfg, path)
    assert path.read_text() == text


@pytest.mark.parametrize(
    "mutate,expected_path",
    [
        (lambda d: d.pop("seed"), "seed"),
        (lambda d: d["econ"]["mc"].pop("H"), "econ.mc.H"),
        (lambda d: d["schedule"]["M"].pop("High"), "schedule.M"),
        (lambda d: d["p_policy"].pop("HM"), "p_policy.HM"),
        (lambda d: d["curve"].update(kind="cubic"), "curve.kind"),
        (lambda d: d["econ"].update(t_err=2.0), "econ.t_err"),
        (lambda d: d.update(interaction="individual"), "interaction"),
    ],
)
def test_config_diagnostics_name_key_path(mutate, expected_path):
    doc = io.config_to_document(base_config(config_id="bad"))
    mutate(doc)
    with pytest.raises(ConfigError, match=expected_path.replace(".", r"\.")):
        io.document_to_config(doc)


def test_read_config_rejects_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        io.read_config(path)


def test_read_configs_dir_sorted(tmp_path):
    for name in ("b", "a", "c"):
        io.write_config(base_config(config_id=name), tmp_path / f"{name}.json")
    assert [c.config_id for c in io.read_configs_dir(tmp_path)] == ["a", "b", "c"]
    with pytest.raises(ConfigError):
        io.read_configs_dir(tmp_path / "empty")


# ---------------------------------------------------------------------------
# runs files


def test_runs_roundtrip_is_identity_at_9_digits(tmp_path):
    frame = run_simulation(base_config(config_id="rt", n_runs=50))
    path = tmp_path / "runs.csv"
    io.write_runs(frame, path)
    first = path.read_bytes()
    parsed = io.read_runs(path)
    assert parsed.config_id == "rt"
    assert len(parsed) == len(frame)
    assert np.array_equal(parsed.c, frame.c)
    assert np.array_equal(parsed.a, frame.a)
    assert np.array_equal(parsed.d, frame.d)
    io.write_runs(parsed, path)
    assert path.read_bytes() == first


def test_runs_header_and_order(tmp_path):
    frame = run_simulation(base_config(config_id="hdr", n_firms=2, n_epochs=2, n_runs=2))
    path = tmp_path / "runs.csv"
    io.write_runs(frame, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "config_id,k,e,i,c,a,d,theta,y,v,err,u"
    assert len(lines) == 1 + 8
    ks = [int(line.split(",")[1]) for line in lines[1:]]
    assert ks == sorted(ks)


def test_read_runs_rejects_bad_files(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n")
    with pytest.raises(ValueError, match="header"):
        io.read_runs(path)
    path.write_text(io.RUNS_HEADER + "\n")
    with pytest.raises(ValueError, match="no data rows"):
        io.read_runs(path)
    path.write_text(
        io.RUNS_HEADER + "\na,1,0,0,H,individual,Low,0.5,0.5,0.5,0,0.5\n"
        "b,1,0,0,H,individual,Low,0.5,0.5,0.5,0,0.5\n"
    )
    with pytest.raises(ValueError, match="mixed config_ids"):
        io.read_runs(path)


# ---------------------------------------------------------------------------
# summary and gain tables


def test_summary_roundtrip(tmp_path):
    frame = make_frame(
        "s",
        [
            (1, 0, 0, PolicyKind.H, InteractionKind.INDIVIDUAL, Difficulty.LOW, 0.5, 0.5, 0.2, 0.0, 0.2),
            (1, 0, 1, PolicyKind.HM, InteractionKind.MEAN, Difficulty.HIGH, 0.6, 0.6, 0.1, 0.0, 0.1),
        ],
    )
    rows = summary_rows([frame], delta_by_config={"s": 0.3})
    path = tmp_path / "summary.csv"
    io.write_summary(rows, path)
    parsed = io.read_summary(path)
    assert parsed == rows


def test_write_hmg_serializes_nd(tmp_path):
    entries = [
        HmgEntry("mu", "u", PolicyKind.H, None, InteractionKind.MEAN, 0.2, 0.1, 100.0),
        HmgEntry("mu", "u", PolicyKind.M, Difficulty.LOW, InteractionKind.MEAN, 0.2, 0.0, None),
    ]
    path = tmp_path / "hmg.csv"
    io.write_hmg([("all", entries)], path)
    lines = path.read_text().splitlines()
    assert lines[0] == io.HMG_HEADER
    assert lines[1].endswith("+100")
    assert lines[2].endswith("ND")
    assert lines[2].split(",")[2] == "Low"
