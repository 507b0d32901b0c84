"""Scenario loading, headless execution, and telemetry tests."""

from pathlib import Path

import pytest

from quadsim.config import ValidationError, load_config
from quadsim.controller import TeleopCommand
from quadsim.scenario import (
    CSV_COLUMNS,
    Scenario,
    load_scenario,
    run_scenario,
)

REPO = Path(__file__).resolve().parents[1]
CFG = load_config()


def test_empty_scenario_csv_shape(tmp_path):
    out = tmp_path / "idle.csv"
    summary = run_scenario(CFG, Scenario(keyframes=(), duration=1.0), out)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + int(CFG.controller.rate_hz * 1.0)
    assert summary.ticks == 100
    # idle robot: every joint column is constant
    first = lines[1].split(",")
    for line in lines[2:]:
        assert line.split(",")[1:25] == first[1:25]
    assert summary.distance_traveled == 0.0
    assert summary.ik_failures == 0


def test_shipped_trot_scenario_runs_clean(tmp_path):
    scenario = load_scenario(REPO / "scenarios" / "trot.toml")
    summary = run_scenario(CFG, scenario, tmp_path / "trot.csv")
    assert summary.ik_failures == 0
    assert summary.distance_traveled > 0.5  # it actually walks somewhere


def test_shipped_walk_scenario_statically_stable(tmp_path):
    scenario = load_scenario(REPO / "scenarios" / "walk.toml")
    summary = run_scenario(CFG, scenario, tmp_path / "walk.csv")
    assert summary.ik_failures == 0
    assert summary.min_com_margin is not None and summary.min_com_margin > 0.0


def test_replay_is_byte_identical(tmp_path):
    scenario = load_scenario(REPO / "scenarios" / "walk.toml")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_scenario(CFG, scenario, a)
    run_scenario(CFG, scenario, b)
    assert a.read_bytes() == b.read_bytes()


def test_command_at_holds_last_keyframe():
    scenario = Scenario(
        keyframes=(
            (0.0, TeleopCommand(start=True)),
            (2.0, TeleopCommand(start=True, walk=True)),
        ),
        duration=5.0,
    )
    assert scenario.command_at(0.0).walk is False
    assert scenario.command_at(1.99).walk is False
    assert scenario.command_at(2.0).walk is True
    assert scenario.command_at(5.0).walk is True
    # before any keyframe: neutral command
    assert scenario.command_at(-1.0) == TeleopCommand()


def test_keyframe_times_must_increase():
    with pytest.raises(ValidationError, match="strictly increasing"):
        Scenario(
            keyframes=((1.0, TeleopCommand()), (1.0, TeleopCommand())), duration=2.0
        )


def test_duration_must_cover_keyframes():
    with pytest.raises(ValidationError, match="duration"):
        Scenario(keyframes=((3.0, TeleopCommand()),), duration=2.0)


def test_unknown_keyframe_field_rejected(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text('duration = 1.0\n[[keyframes]]\ntime = 0.0\nspeed = 3.0\n')
    with pytest.raises(ValidationError, match="speed"):
        load_scenario(p)


def test_bad_pattern_value_rejected(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text('duration = 1.0\n[[keyframes]]\ntime = 0.0\npattern = "gallop"\n')
    with pytest.raises(ValidationError, match="gallop"):
        load_scenario(p)


def test_loads_shipped_scenarios():
    trot = load_scenario(REPO / "scenarios" / "trot.toml")
    assert trot.duration == 10.0
    assert trot.keyframes[1][1].step_length_x == 0.04
    walk = load_scenario(REPO / "scenarios" / "walk.toml")
    assert walk.keyframes[1][1].pattern.value == "walk"
