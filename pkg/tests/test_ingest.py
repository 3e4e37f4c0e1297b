import dataclasses
import json

import numpy as np
import pytest

import oracles
from motionpool import (
    Segment,
    SkeletonSequence,
    SyntheticSpec,
    motion_intensity,
    parse_csv,
    parse_json,
    parse_ntu_skeleton,
    synthesize,
    write_csv,
    write_json,
)
from motionpool.errors import (
    DimensionMismatch,
    DuplicateCell,
    InvalidSegment,
    JointCountMismatch,
    MalformedHeader,
    MalformedRow,
    MissingCell,
    NoValidFrames,
    RaggedChannelCount,
    SchemaViolation,
    TruncatedFrame,
)


def ntu_text(frames, declared=None):
    """Assemble a .skeleton file; frames is a list of [(body_id, (25, 3))]."""
    lines = [str(len(frames) if declared is None else declared)]
    for bodies in frames:
        lines.append(str(len(bodies)))
        for body_id, joints in bodies:
            lines.append(f"{body_id} 0 0 0 0 0 0 0 1 2")
            lines.append("25")
            for x, y, z in joints:
                lines.append(f"{x} {y} {z} 0 0 0 0 0 0 0 0 2")
    return "\n".join(lines) + "\n"


def body(scale=0.0, offset=0.0):
    return offset + scale * np.arange(75, dtype=float).reshape(25, 3)


def test_minimal_zero_file():
    text = ntu_text([[("1001", body())], [("1001", body())]])
    seq = parse_ntu_skeleton(text)
    assert (seq.channel_count, seq.frame_count, seq.joint_count) == (3, 2, 25)
    assert not seq.data.any()


def test_coordinates_land_in_channel_major_grid():
    frame1 = [("1001", body(scale=1.0))]
    frame2 = [("1001", body(scale=2.0))]
    seq = parse_ntu_skeleton(ntu_text([frame1, frame2]))
    # joint 3 (0-based 2) has x,y,z = 6,7,8 in frame 1 and 12,14,16 in frame 2
    assert seq.data[:, 0, 2].tolist() == [6.0, 7.0, 8.0]
    assert seq.data[:, 1, 2].tolist() == [12.0, 14.0, 16.0]


def test_truncated_file_names_the_frame():
    text = ntu_text([[("1", body())], [("1", body())]], declared=3)
    with pytest.raises(TruncatedFrame) as err:
        parse_ntu_skeleton(text)
    assert err.value.frame_index == 3


def test_truncation_inside_a_body_block():
    text = ntu_text([[("1", body())]], declared=2)
    text += "1\n7 0 0 0 0 0 0 0 1 2\n25\n1 2 3 0 0 0 0 0 0 0 0 2\n"
    with pytest.raises(TruncatedFrame) as err:
        parse_ntu_skeleton(text)
    assert err.value.frame_index == 2


def test_joint_count_mismatch():
    text = ntu_text([[("1", body())]]).replace("\n25\n", "\n24\n", 1)
    with pytest.raises(JointCountMismatch) as err:
        parse_ntu_skeleton(text)
    assert err.value.expected == 25
    assert err.value.actual == 24


def test_unreadable_frame_count():
    with pytest.raises(MalformedHeader):
        parse_ntu_skeleton("three\n")


def test_zero_body_frames_dropped_and_reindexed():
    moving = [("9", body(scale=0.1 * t)) for t in range(3)]
    frames = [[moving[0]], [], [moving[1]], [], [moving[2]]]
    seq = parse_ntu_skeleton(ntu_text(frames))
    assert seq.frame_count == 3


def test_all_frames_empty():
    with pytest.raises(NoValidFrames):
        parse_ntu_skeleton(ntu_text([[], [], []]))


def test_trailing_content_rejected():
    text = ntu_text([[("1", body())]]) + "leftover\n"
    with pytest.raises(MalformedRow):
        parse_ntu_skeleton(text)


def test_moving_body_wins():
    static = [("50", body(offset=5.0)) for _ in range(4)]
    mover = [("7", body(scale=0.5 * t)) for t in range(4)]
    frames = [[static[t], mover[t]] for t in range(4)]
    seq = parse_ntu_skeleton(ntu_text(frames))
    want = np.stack([joints for _, joints in mover]).transpose(2, 0, 1)
    assert np.array_equal(seq.data, want)
    # the winner really does carry the larger summed kinetic energy
    kin_static = sum(oracles.kinetic_energy(np.stack([j for _, j in static]).transpose(2, 0, 1).tolist()))
    kin_mover = sum(oracles.kinetic_energy(want.tolist()))
    assert kin_mover > kin_static


def test_body_selection_ignores_file_order():
    a = [("50", body(scale=0.2 * t)) for t in range(3)]
    b = [("7", body(scale=0.9 * t, offset=1.0)) for t in range(3)]
    one = parse_ntu_skeleton(ntu_text([[a[t], b[t]] for t in range(3)]))
    two = parse_ntu_skeleton(ntu_text([[b[t], a[t]] for t in range(3)]))
    assert np.array_equal(one.data, two.data)


def test_energy_tie_breaks_to_smallest_id():
    a = [("102", body(offset=1.0)) for _ in range(2)]
    b = [("99", body(offset=2.0)) for _ in range(2)]
    seq = parse_ntu_skeleton(ntu_text([[a[0], b[0]], [a[1], b[1]]]))
    assert seq.data[0, 0, 0] == 2.0  # body 99 < 102 numerically


def random_sequence(seed, shape=(3, 5, 4)):
    return SkeletonSequence(np.random.default_rng(seed).normal(size=shape))


def test_csv_round_trip_is_exact():
    seq = random_sequence(21)
    again = parse_csv(write_csv(seq))
    assert np.array_equal(again.data, seq.data)


def test_csv_row_order_is_irrelevant():
    seq = random_sequence(22)
    lines = write_csv(seq).strip().split("\n")
    shuffled = [lines[0]] + list(np.random.default_rng(0).permutation(lines[1:]))
    again = parse_csv("\n".join(shuffled))
    assert np.array_equal(again.data, seq.data)


def test_csv_duplicate_cell():
    text = "frame,joint,c1\n1,1,0\n1,2,0\n2,1,0\n2,2,0\n2,3,5\n2,3,6\n"
    with pytest.raises(DuplicateCell) as err:
        parse_csv(text)
    assert (err.value.frame, err.value.joint) == (2, 3)
    assert err.value.line == 7


def test_csv_missing_cell():
    text = "frame,joint,c1\n1,1,0\n2,1,0\n2,2,0\n"
    with pytest.raises(MissingCell) as err:
        parse_csv(text)
    assert (err.value.frame, err.value.joint) == (1, 2)


def test_csv_ragged_row():
    text = "frame,joint,c1,c2\n1,1,0,0\n1,2,0\n"
    with pytest.raises(RaggedChannelCount) as err:
        parse_csv(text)
    assert err.value.line == 3


def test_csv_header_must_match():
    with pytest.raises(MalformedHeader):
        parse_csv("t,v,x\n1,1,0\n")


def test_csv_rejects_unreadable_indices():
    with pytest.raises(MalformedRow):
        parse_csv("frame,joint,c1\none,1,0\n")


def test_csv_single_channel():
    seq = SkeletonSequence(np.arange(6, dtype=float).reshape(1, 3, 2))
    assert np.array_equal(parse_csv(write_csv(seq)).data, seq.data)


def test_json_round_trip_is_exact():
    seq = random_sequence(23, shape=(3, 2, 25))
    again = parse_json(write_json(seq))
    assert np.array_equal(again.data, seq.data)


def test_json_ragged_data():
    doc = {"channels": 1, "frames": 2, "joints": 2, "data": [[[0.0, 1.0], [2.0]]]}
    with pytest.raises(DimensionMismatch):
        parse_json(json.dumps(doc))


def test_json_missing_key():
    doc = {"channels": 1, "joints": 2, "data": []}
    with pytest.raises(SchemaViolation) as err:
        parse_json(json.dumps(doc))
    assert err.value.key == "frames"


def test_json_mistyped_count():
    doc = {"channels": 1, "frames": 2.5, "joints": 2, "data": []}
    with pytest.raises(SchemaViolation) as err:
        parse_json(json.dumps(doc))
    assert err.value.key == "frames"


def test_json_non_numeric_value():
    doc = {"channels": 1, "frames": 1, "joints": 1, "data": [[["x"]]]}
    with pytest.raises(SchemaViolation):
        parse_json(json.dumps(doc))


def test_cross_format_agreement():
    seq = random_sequence(24)
    via_csv = parse_csv(write_csv(seq))
    via_json = parse_json(write_json(seq))
    assert np.array_equal(via_csv.data, via_json.data)


def test_synthesize_without_segments_is_static():
    spec = SyntheticSpec(frame_count=12, joint_count=4, channel_count=3)
    seq = synthesize(spec)
    assert not seq.data.any()
    assert not motion_intensity(seq).any()


def test_linear_segment_moves_only_its_span():
    spec = SyntheticSpec(
        frame_count=30,
        joint_count=3,
        channel_count=2,
        segments=(Segment(10, 20, (1,), 1.0),),
    )
    seq = synthesize(spec)
    mi = motion_intensity(seq)
    want = np.array(oracles.motion_intensity(seq.data.tolist()))
    assert np.abs(mi - want).max() <= 1e-15
    moving = np.flatnonzero(mi[0]) + 1  # 1-based frames
    assert moving.tolist() == list(range(11, 21))
    assert not mi[1:].any()
    assert np.allclose(mi[0][10:20], 0.05, atol=1e-12)  # amplitude/span over 2 channels
    assert seq.data[0, -1, 0] == pytest.approx(1.0, abs=1e-15)  # holds after the ramp


def test_step_segment_jumps_at_the_midpoint():
    spec = SyntheticSpec(
        frame_count=10,
        joint_count=1,
        channel_count=1,
        segments=(Segment(3, 8, (1,), 2.0, "step"),),
    )
    x = synthesize(spec).data[0, :, 0]
    assert x.tolist() == [0, 0, 0, 0, 0, 2, 2, 2, 2, 2]


def test_one_frame_segment_is_a_step():
    spec = SyntheticSpec(
        frame_count=4,
        joint_count=1,
        channel_count=1,
        segments=(Segment(2, 2, (1,), 3.0),),
    )
    x = synthesize(spec).data[0, :, 0]
    assert x.tolist() == [0.0, 3.0, 3.0, 3.0]


def test_sinusoid_leaves_no_spike_after_the_segment():
    spec = SyntheticSpec(
        frame_count=20,
        joint_count=1,
        channel_count=1,
        segments=(Segment(4, 12, (1,), 1.5, "sinusoid"),),
    )
    mi = motion_intensity(synthesize(spec))[0]
    assert not mi[12:].any()
    assert mi[4:12].any()


def test_overlapping_segments_add():
    spec = SyntheticSpec(
        frame_count=6,
        joint_count=1,
        channel_count=1,
        segments=(
            Segment(1, 6, (1,), 1.0, "step"),
            Segment(1, 6, (1,), 0.5, "step"),
        ),
    )
    x = synthesize(spec).data[0, :, 0]
    assert x[-1] == pytest.approx(1.5, abs=1e-15)


def test_synthesis_is_bit_deterministic():
    spec = SyntheticSpec(
        frame_count=16,
        joint_count=5,
        segments=(Segment(2, 9, (1, 3), 1.0, "sinusoid"),),
        noise_sigma=0.2,
        seed=42,
    )
    a = synthesize(spec)
    b = synthesize(spec)
    assert np.array_equal(a.data, b.data)
    other = synthesize(dataclasses.replace(spec, seed=43))
    assert not np.array_equal(a.data, other.data)


def test_spec_json_round_trip():
    spec = SyntheticSpec(
        frame_count=8,
        joint_count=2,
        segments=(Segment(1, 8, (2,), 0.25, "step"),),
        noise_sigma=0.1,
        seed=9,
    )
    again = SyntheticSpec.from_json_dict(json.loads(json.dumps(spec.to_json_dict())))
    assert again == spec
    assert np.array_equal(synthesize(again).data, synthesize(spec).data)


@pytest.mark.parametrize(
    "segment",
    [
        Segment(0, 5, (1,), 1.0),
        Segment(3, 2, (1,), 1.0),
        Segment(1, 11, (1,), 1.0),
        Segment(1, 5, (), 1.0),
        Segment(1, 5, (4,), 1.0),
        Segment(1, 5, (1,), float("nan")),
        Segment(1, 5, (1,), 1.0, "sawtooth"),
    ],
)
def test_invalid_segments_named_by_index(segment):
    with pytest.raises(InvalidSegment) as err:
        SyntheticSpec(frame_count=10, joint_count=3, segments=(Segment(1, 2, (1,), 0.0), segment))
    assert err.value.index == 2


def test_spec_from_json_rejects_unknown_keys():
    with pytest.raises(SchemaViolation):
        SyntheticSpec.from_json_dict({"frame_count": 4, "joint_count": 1, "frames": 4})
