"""Wire protocol encode/decode tests, fuzzed with hypothesis."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadsim.controller import TeleopCommand
from quadsim.gait import GaitPattern, SideWalkMode
from quadsim.protocol import (
    PROTOCOL_VERSION,
    CmdMsg,
    ErrMsg,
    PingMsg,
    PongMsg,
    ProtocolError,
    StateMsg,
    decode,
    encode,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
seqs = st.integers(min_value=0, max_value=2**53)

cmd_msgs = st.builds(
    CmdMsg,
    seq=seqs,
    start=st.booleans(),
    walk=st.booleans(),
    pattern=st.sampled_from(["trot", "walk"]),
    step_length_x=finite,
    step_length_y=finite,
    swing_height=finite,
    stance_depth=finite,
    side_walk_mode=st.sampled_from(["linear", "rotation"]),
    cycle_period=finite,
    height=finite,
    roll=finite,
    pitch=finite,
    yaw=finite,
    timestamp=finite,
)

vec3 = st.tuples(finite, finite, finite)
state_msgs = st.builds(
    StateMsg,
    seq=seqs,
    mode=st.sampled_from(["idle", "standing", "walking"]),
    tick=seqs,
    time=finite,
    phase=finite,
    joints_commanded=st.tuples(*([finite] * 12)),
    joints=st.tuples(*([finite] * 12)),
    odometry=vec3,
    body_z=finite,
    feet=st.tuples(vec3, vec3, vec3, vec3),
    stance=st.tuples(st.booleans(), st.booleans(), st.booleans(), st.booleans()),
    com_margin=st.one_of(st.none(), finite),
    diagnostics=st.tuples(st.text(max_size=40)),
)


@settings(max_examples=300)
@given(cmd_msgs)
def test_cmd_round_trip(msg):
    assert decode(encode(msg)) == msg


@settings(max_examples=300)
@given(state_msgs)
def test_state_round_trip(msg):
    assert decode(encode(msg)) == msg


@given(st.one_of(st.builds(PingMsg, seq=seqs), st.builds(PongMsg, seq=seqs, echo=seqs),
                 st.builds(ErrMsg, seq=seqs, message=st.text(max_size=60))))
def test_control_messages_round_trip(msg):
    assert decode(encode(msg)) == msg


def test_messages_carry_version_and_type():
    payload = json.loads(encode(PingMsg(seq=7)))
    assert payload["version"] == PROTOCOL_VERSION
    assert payload["type"] == "ping"
    assert payload["seq"] == 7


def test_version_mismatch_rejected():
    payload = json.loads(encode(PingMsg(seq=1)))
    payload["version"] = "2"
    with pytest.raises(ProtocolError, match="version"):
        decode(json.dumps(payload))


def test_unknown_type_rejected():
    with pytest.raises(ProtocolError, match="unknown message type"):
        decode('{"type":"warp","version":"1","seq":1}')


def test_missing_required_field_rejected():
    with pytest.raises(ProtocolError, match="seq"):
        decode('{"type":"ping","version":"1"}')


def test_unknown_field_rejected():
    with pytest.raises(ProtocolError, match="turbo"):
        decode('{"type":"ping","version":"1","seq":1,"turbo":true}')


def test_invalid_json_rejected():
    with pytest.raises(ProtocolError, match="JSON"):
        decode("{nope")


def test_non_finite_numbers_rejected():
    with pytest.raises(ProtocolError, match="finite"):
        decode('{"type":"cmd","version":"1","seq":1,"height":NaN}')


def test_wrong_field_type_rejected():
    with pytest.raises(ProtocolError, match="seq"):
        decode('{"type":"ping","version":"1","seq":"first"}')


def test_cmd_defaults_fill_absent_fields():
    msg = decode('{"type":"cmd","version":"1","seq":3,"start":true}')
    assert msg == CmdMsg(seq=3, start=True)


def test_cmd_converts_to_teleop_command():
    msg = CmdMsg(seq=1, start=True, pattern="walk", side_walk_mode="rotation", height=0.2)
    cmd = msg.to_command()
    assert cmd == TeleopCommand(
        start=True,
        pattern=GaitPattern.WALK,
        side_walk_mode=SideWalkMode.ROTATION,
        height=0.2,
    )
    assert CmdMsg.from_command(1, cmd) == msg


def test_bad_enum_value_raises_on_conversion():
    with pytest.raises(ProtocolError):
        CmdMsg(seq=1, pattern="gallop").to_command()
