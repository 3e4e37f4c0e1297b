"""Sequence ingestion: NTU skeleton files, CSV, JSON, and synthesis.

All parsers reject malformed input instead of repairing it, and all
numeric output is locale-independent. Frame, joint, and channel indices
in the file formats and in error messages are 1-based.

Synthetic sequences are generated with numpy's Philox bit generator, a
named 64-bit counter-based algorithm, so an identical spec produces a
bit-identical grid across runs and platforms.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateCell,
    InvalidParameter,
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
from .model import SkeletonSequence

__all__ = [
    "Waveform",
    "Segment",
    "SyntheticSpec",
    "synthesize",
    "parse_ntu_skeleton",
    "parse_csv",
    "write_csv",
    "parse_json",
    "write_json",
]

NTU_JOINT_COUNT = 25
NTU_BODY_FIELDS = 10
NTU_JOINT_FIELDS = 12


class Waveform(str, enum.Enum):
    """Shape of a synthetic motion segment on the first channel."""

    LINEAR = "linear"
    SINUSOID = "sinusoid"
    STEP = "step"


@dataclass(frozen=True)
class Segment:
    """One motion burst: joints, a 1-based frame span, and a waveform.

    The waveform value holds after the segment ends (a linear ramp stays
    at its final amplitude, a full sinusoid period returns to rest), so a
    segment never injects a motion spike at its right edge.
    """

    start_frame: int
    end_frame: int
    joint_set: tuple[int, ...]
    amplitude: float
    waveform: Waveform = Waveform.LINEAR


@dataclass(frozen=True)
class SyntheticSpec:
    """Deterministic recipe for a test sequence.

    Attributes:
        frame_count, joint_count, channel_count: output grid dimensions.
        segments: motion bursts, applied additively on channel 1.
        noise_sigma: standard deviation of Gaussian noise added to every
            value (0 keeps the waveforms exact).
        seed: 64-bit key for the Philox generator.
    """

    frame_count: int
    joint_count: int
    channel_count: int = 3
    segments: tuple[Segment, ...] = ()
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("frame_count", "joint_count", "channel_count"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidParameter(name, f"must be a positive integer, got {value!r}")
        if not (
            isinstance(self.noise_sigma, (int, float))
            and math.isfinite(self.noise_sigma)
            and self.noise_sigma >= 0
        ):
            raise InvalidParameter(
                "noise_sigma", f"must be a finite number >= 0, got {self.noise_sigma!r}"
            )
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InvalidParameter("seed", f"must be a 64-bit unsigned integer, got {self.seed!r}")
        segments = []
        for index, seg in enumerate(self.segments, start=1):
            segments.append(self._checked_segment(index, seg))
        object.__setattr__(self, "segments", tuple(segments))

    def _checked_segment(self, index: int, seg: Segment) -> Segment:
        if not isinstance(seg, Segment):
            raise InvalidSegment(index, f"expected a Segment, got {type(seg).__name__}")
        if not (
            isinstance(seg.start_frame, int)
            and isinstance(seg.end_frame, int)
            and 1 <= seg.start_frame <= seg.end_frame <= self.frame_count
        ):
            raise InvalidSegment(
                index,
                f"frame span {seg.start_frame}..{seg.end_frame} must satisfy "
                f"1 <= start <= end <= {self.frame_count}",
            )
        joints = tuple(seg.joint_set)
        if not joints:
            raise InvalidSegment(index, "joint_set is empty")
        for v in joints:
            if not isinstance(v, int) or not 1 <= v <= self.joint_count:
                raise InvalidSegment(index, f"joint {v!r} outside 1..{self.joint_count}")
        if not (isinstance(seg.amplitude, (int, float)) and math.isfinite(seg.amplitude)):
            raise InvalidSegment(index, f"amplitude must be finite, got {seg.amplitude!r}")
        try:
            waveform = Waveform(seg.waveform)
        except ValueError:
            raise InvalidSegment(index, f"unknown waveform {seg.waveform!r}")
        return Segment(seg.start_frame, seg.end_frame, joints, float(seg.amplitude), waveform)

    def to_json_dict(self) -> dict:
        return {
            "frame_count": self.frame_count,
            "joint_count": self.joint_count,
            "channel_count": self.channel_count,
            "segments": [
                {
                    "start_frame": s.start_frame,
                    "end_frame": s.end_frame,
                    "joint_set": list(s.joint_set),
                    "amplitude": s.amplitude,
                    "waveform": s.waveform.value,
                }
                for s in self.segments
            ],
            "noise_sigma": self.noise_sigma,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SyntheticSpec":
        if not isinstance(obj, dict):
            raise SchemaViolation("root", "expected an object")
        known = {
            "frame_count",
            "joint_count",
            "channel_count",
            "segments",
            "noise_sigma",
            "seed",
        }
        for key in obj:
            if key not in known:
                raise SchemaViolation(key, "unknown key")
        for key in ("frame_count", "joint_count"):
            if key not in obj:
                raise SchemaViolation(key, "missing")
        segments = obj.get("segments", [])
        if not isinstance(segments, list):
            raise SchemaViolation("segments", "expected a list")
        parsed = []
        for i, raw in enumerate(segments, start=1):
            if not isinstance(raw, dict):
                raise InvalidSegment(i, "expected an object")
            try:
                parsed.append(
                    Segment(
                        start_frame=raw["start_frame"],
                        end_frame=raw["end_frame"],
                        joint_set=tuple(raw["joint_set"]),
                        amplitude=raw["amplitude"],
                        waveform=raw.get("waveform", "linear"),
                    )
                )
            except KeyError as exc:
                raise InvalidSegment(i, f"missing key {exc.args[0]!r}")
        return cls(
            frame_count=obj["frame_count"],
            joint_count=obj["joint_count"],
            channel_count=obj.get("channel_count", 3),
            segments=tuple(parsed),
            noise_sigma=obj.get("noise_sigma", 0.0),
            seed=obj.get("seed", 0),
        )


def _waveform_values(seg: Segment, frame_count: int) -> np.ndarray:
    """Per-frame channel-1 contribution of one segment, final value held."""
    t = np.arange(1, frame_count + 1, dtype=np.float64)
    span = seg.end_frame - seg.start_frame
    out = np.zeros(frame_count)
    inside = (t >= seg.start_frame) & (t <= seg.end_frame)
    rel = t[inside] - seg.start_frame
    if seg.waveform is Waveform.LINEAR:
        out[inside] = seg.amplitude * (rel / span if span else 1.0)
    elif seg.waveform is Waveform.SINUSOID:
        out[inside] = seg.amplitude * (np.sin(2.0 * np.pi * rel / span) if span else 0.0)
    else:
        midpoint = seg.start_frame + (span + 1) // 2
        out[inside] = seg.amplitude * (t[inside] >= midpoint)
    out[t > seg.end_frame] = out[seg.end_frame - 1]
    return out


def synthesize(spec: SyntheticSpec) -> SkeletonSequence:
    """Build the sequence a spec describes.

    Joints start at the origin and hold that position except where a
    segment drives their first-channel coordinate; segment contributions
    add where spans overlap. Noise, when requested, is drawn value by
    value from a Philox generator keyed by the spec's seed, making the
    result bit-identical for equal specs.
    """
    shape = (spec.channel_count, spec.frame_count, spec.joint_count)
    data = np.zeros(shape)
    for seg in spec.segments:
        values = _waveform_values(seg, spec.frame_count)
        for v in seg.joint_set:
            data[0, :, v - 1] += values
    if spec.noise_sigma > 0:
        rng = np.random.Generator(np.random.Philox(key=spec.seed))
        data += rng.normal(0.0, spec.noise_sigma, size=shape)
    digest = hashlib.sha256(
        json.dumps(spec.to_json_dict(), sort_keys=True).encode()
    ).hexdigest()[:12]
    return SkeletonSequence(data=data, source=f"synthetic:{digest}")


class _LineReader:
    """Sequential access to stripped lines with 1-based numbering."""

    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.cursor = 0

    @property
    def line_number(self) -> int:
        return min(self.cursor + 1, max(len(self.lines), 1))

    def next(self) -> str | None:
        if self.cursor >= len(self.lines):
            return None
        line = self.lines[self.cursor]
        self.cursor += 1
        return line.strip()


def _read_count(reader: _LineReader, what: str, frame_index: int | None) -> int:
    line = reader.next()
    if line is None:
        if frame_index is None:
            raise MalformedHeader("missing frame count", line=1)
        raise TruncatedFrame(frame_index, line=reader.line_number)
    try:
        value = int(line)
    except ValueError:
        raise MalformedHeader(f"expected {what}, got {line!r}", line=reader.cursor)
    if value < 0:
        raise MalformedHeader(f"{what} must be >= 0, got {value}", line=reader.cursor)
    return value


def parse_ntu_skeleton(text: str) -> SkeletonSequence:
    """Parse the NTU RGB+D ``.skeleton`` text layout.

    The layout is: a frame count; then per frame a body count and per body
    a 10-field info line, a joint count (25), and 25 twelve-value joint
    lines whose first three values are the x, y, z coordinates. Frames
    with no tracked body are dropped and the remainder re-indexed
    contiguously. When several bodies appear, the one with the largest
    total kinetic energy over its own frames is kept (ties go to the
    smallest body id), so the result is one (3, T, 25) sequence.

    Raises:
        MalformedHeader, MalformedRow, TruncatedFrame, JointCountMismatch,
        NoValidFrames.
    """
    reader = _LineReader(text)
    frame_count = _read_count(reader, "frame count", None)
    frames: list[dict[str, np.ndarray]] = []
    for f in range(1, frame_count + 1):
        body_count = _read_count(reader, "body count", f)
        bodies: dict[str, np.ndarray] = {}
        for _ in range(body_count):
            info = reader.next()
            if info is None:
                raise TruncatedFrame(f, line=reader.line_number)
            fields = info.split()
            if len(fields) != NTU_BODY_FIELDS:
                raise MalformedRow(
                    f"expected {NTU_BODY_FIELDS} body fields, got {len(fields)}",
                    line=reader.cursor,
                )
            body_id = fields[0]
            joint_line = reader.next()
            if joint_line is None:
                raise TruncatedFrame(f, line=reader.line_number)
            try:
                joint_count = int(joint_line)
            except ValueError:
                raise MalformedHeader(
                    f"expected joint count, got {joint_line!r}", line=reader.cursor
                )
            if joint_count != NTU_JOINT_COUNT:
                raise JointCountMismatch(NTU_JOINT_COUNT, joint_count, line=reader.cursor)
            joints = np.empty((NTU_JOINT_COUNT, 3))
            for j in range(NTU_JOINT_COUNT):
                row = reader.next()
                if row is None:
                    raise TruncatedFrame(f, line=reader.line_number)
                values = row.split()
                if len(values) != NTU_JOINT_FIELDS:
                    raise MalformedRow(
                        f"expected {NTU_JOINT_FIELDS} joint values, got {len(values)}",
                        line=reader.cursor,
                    )
                try:
                    joints[j] = [float(values[0]), float(values[1]), float(values[2])]
                except ValueError:
                    raise MalformedRow("unreadable joint coordinates", line=reader.cursor)
            bodies[body_id] = joints
        frames.append(bodies)
    for offset, line in enumerate(reader.lines[reader.cursor :]):
        if line.strip():
            raise MalformedRow(
                "content after the declared frames", line=reader.cursor + offset + 1
            )

    populated = [bodies for bodies in frames if bodies]
    if not populated:
        raise NoValidFrames()

    # Rank bodies by kinetic energy over each body's own frame timeline;
    # numeric-aware id order breaks ties independently of file order.
    totals: dict[str, float] = {}
    for body_id in {bid for bodies in populated for bid in bodies}:
        stack = np.stack([bodies[body_id] for bodies in populated if body_id in bodies])
        if stack.shape[0] > 1:
            steps = np.diff(stack, axis=0)
            totals[body_id] = float(np.square(steps).mean(axis=2).sum())
        else:
            totals[body_id] = 0.0
    selected = min(totals, key=lambda bid: (-totals[bid], len(bid), bid))

    kept = [bodies[selected] for bodies in populated if selected in bodies]
    data = np.stack(kept).transpose(2, 0, 1)  # (3, T, 25)
    return SkeletonSequence(data=data)


def _format_value(x: float) -> str:
    return format(x, ".17g")


def parse_csv(text: str) -> SkeletonSequence:
    """Parse the long CSV layout ``frame,joint,c1[,c2[,...]]``.

    Rows may arrive in any order but must cover every (frame, joint) cell
    of the grid exactly once; the grid size is the largest frame and joint
    index seen.

    Raises:
        MalformedHeader, MalformedRow, RaggedChannelCount, DuplicateCell,
        MissingCell.
    """
    rows = csv.reader(io.StringIO(text))
    try:
        header = next(rows)
    except StopIteration:
        raise MalformedHeader("empty input", line=1)
    header = [h.strip() for h in header]
    channel_count = len(header) - 2
    expected = ["frame", "joint"] + [f"c{i}" for i in range(1, channel_count + 1)]
    if channel_count < 1 or header != expected:
        raise MalformedHeader(
            f"expected header frame,joint,c1[,c2[,...]], got {','.join(header)!r}",
            line=1,
        )

    cells: dict[tuple[int, int], list[float]] = {}
    frame_max = 0
    joint_max = 0
    for line_number, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != channel_count + 2:
            raise RaggedChannelCount(channel_count, len(row) - 2, line=line_number)
        try:
            t = int(row[0])
            v = int(row[1])
        except ValueError:
            raise MalformedRow(f"unreadable frame/joint index in {row[:2]!r}", line=line_number)
        if t < 1 or v < 1:
            raise MalformedRow(f"indices must be >= 1, got frame {t}, joint {v}", line=line_number)
        try:
            values = [float(x) for x in row[2:]]
        except ValueError:
            raise MalformedRow("unreadable coordinate value", line=line_number)
        if (t, v) in cells:
            raise DuplicateCell(t, v, line=line_number)
        cells[(t, v)] = values
        frame_max = max(frame_max, t)
        joint_max = max(joint_max, v)

    if not cells:
        raise MalformedHeader("no data rows", line=1)
    for t in range(1, frame_max + 1):
        for v in range(1, joint_max + 1):
            if (t, v) not in cells:
                raise MissingCell(t, v)

    data = np.empty((channel_count, frame_max, joint_max))
    for (t, v), values in cells.items():
        data[:, t - 1, v - 1] = values
    return SkeletonSequence(data=data)


def write_csv(seq) -> str:
    """Serialize a (C, T, V) grid to the long CSV layout.

    Accepts anything exposing a (C, T, V) ``data`` array, so pooled
    outputs serialize the same way as inputs. Values carry 17 significant
    digits, enough to reproduce every double exactly on re-parse.
    """
    data = np.asarray(seq.data, dtype=np.float64)
    channel_count = data.shape[0]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["frame", "joint"] + [f"c{i}" for i in range(1, channel_count + 1)])
    for t in range(data.shape[1]):
        for v in range(data.shape[2]):
            writer.writerow(
                [t + 1, v + 1] + [_format_value(x) for x in data[:, t, v]]
            )
    return out.getvalue()


def parse_json(text: str) -> SkeletonSequence:
    """Parse the JSON layout with channels/frames/joints counts and data.

    Raises:
        SchemaViolation: missing or mistyped key, or unreadable document.
        DimensionMismatch: data nesting disagrees with the declared counts.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("root", f"unreadable JSON: {exc.msg}")
    if not isinstance(obj, dict):
        raise SchemaViolation("root", "expected an object")
    counts = {}
    for key in ("channels", "frames", "joints"):
        if key not in obj:
            raise SchemaViolation(key, "missing")
        value = obj[key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise SchemaViolation(key, f"expected a positive integer, got {value!r}")
        counts[key] = value
    if "data" not in obj:
        raise SchemaViolation("data", "missing")
    raw = obj["data"]
    expected = (counts["channels"], counts["frames"], counts["joints"])
    observed = _nested_shape(raw)
    if observed != expected:
        raise DimensionMismatch(expected, observed)
    data = np.empty(expected)
    for c, plane in enumerate(raw):
        for t, row in enumerate(plane):
            for v, value in enumerate(row):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise SchemaViolation("data", f"non-numeric value {value!r}")
                data[c, t, v] = value
    return SkeletonSequence(data=data)


def _nested_shape(raw) -> tuple:
    """Shape of a C x T x V nesting; ragged inner lists shorten the tuple."""
    if not isinstance(raw, list):
        return ()
    shape = [len(raw)]
    level = raw
    for _ in range(2):
        if not level or not all(isinstance(x, list) for x in level):
            break
        lengths = {len(x) for x in level}
        if len(lengths) != 1:
            break
        shape.append(lengths.pop())
        level = [y for x in level for y in x]
    return tuple(shape)


def write_json(seq) -> str:
    """Serialize a (C, T, V) grid to the JSON layout (exact round trip)."""
    data = np.asarray(seq.data, dtype=np.float64)
    return json.dumps(
        {
            "channels": data.shape[0],
            "frames": data.shape[1],
            "joints": data.shape[2],
            "data": data.tolist(),
        }
    )
