"""Exception types raised by the motionpool package.

Every error that points at a position in a sequence or a file reports it
in 1-based coordinates, matching the conventions of the on-disk formats.
"""

from __future__ import annotations


class SequenceError(Exception):
    """Base class for all motionpool errors."""


class DimensionMismatch(SequenceError):
    """Array shape does not match the declared (channels, frames, joints) grid."""

    def __init__(self, expected, actual):
        self.expected = tuple(expected)
        self.actual = tuple(actual)
        super().__init__(f"expected shape {self.expected}, got {self.actual}")


class TooShort(SequenceError):
    """Sequence has fewer than two frames, so no motion can be measured."""

    def __init__(self, frames: int):
        self.frames = frames
        super().__init__(f"sequence has {frames} frame(s), need at least 2")


class NonFiniteValue(SequenceError):
    """A NaN or infinity was found in sequence data.

    Coordinates are 1-based (channel, frame, joint) of the first offending
    entry in channel-major order.
    """

    def __init__(self, channel: int, frame: int, joint: int):
        self.channel = channel
        self.frame = frame
        self.joint = joint
        super().__init__(
            f"non-finite value at channel {channel}, frame {frame}, joint {joint}"
        )


class InvalidParameter(SequenceError):
    """A pooling parameter is outside its legal range."""

    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(f"{name}: {message}")


class NegativeInput(SequenceError):
    """An intensity signal contains a negative value (1-based frame index)."""

    def __init__(self, frame: int):
        self.frame = frame
        super().__init__(f"negative intensity at frame {frame}")


class TauTooLarge(SequenceError):
    """Requested output length exceeds the input length."""

    def __init__(self, tau: int, frames: int):
        self.tau = tau
        self.frames = frames
        super().__init__(f"output length {tau} exceeds input length {frames}")


class EmptyMask(SequenceError):
    """A joint mask selects no joints."""

    def __init__(self):
        super().__init__("joint mask selects no joints")


class DegenerateCurve(SequenceError):
    """A cumulative intensity curve carries no mass and cannot place windows."""

    def __init__(self):
        super().__init__("cumulative intensity curve is flat")


class PlanShapeMismatch(SequenceError):
    """A pooling plan was applied to a sequence it was not built for."""

    def __init__(self, message: str):
        super().__init__(message)


class InvalidSegment(SequenceError):
    """A synthetic motion segment is malformed (1-based segment index)."""

    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"segment {index}: {message}")


class ParseError(SequenceError):
    """Base class for file format errors.

    ``line`` is the 1-based line number where the problem was detected,
    or None when the error is not tied to a specific line.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeader(ParseError):
    """A file header field could not be read."""


class MalformedRow(ParseError):
    """A data row could not be read."""


class TruncatedFrame(ParseError):
    """A skeleton file ended in the middle of a frame block (1-based frame)."""

    def __init__(self, frame_index: int, line: int | None = None):
        self.frame_index = frame_index
        super().__init__(f"file truncated inside frame {frame_index}", line)


class JointCountMismatch(ParseError):
    """A body block declares a joint count other than the expected one."""

    def __init__(self, expected: int, actual: int, line: int | None = None):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected {expected} joints, got {actual}", line)


class NoValidFrames(ParseError):
    """Every frame in a skeleton file was empty."""

    def __init__(self):
        super().__init__("no frames with tracked bodies")


class DuplicateCell(ParseError):
    """A tabular file defines the same (frame, joint) cell twice (1-based)."""

    def __init__(self, frame: int, joint: int, line: int | None = None):
        self.frame = frame
        self.joint = joint
        super().__init__(f"duplicate cell for frame {frame}, joint {joint}", line)


class MissingCell(ParseError):
    """A tabular file leaves a (frame, joint) cell undefined (1-based)."""

    def __init__(self, frame: int, joint: int):
        self.frame = frame
        self.joint = joint
        super().__init__(f"missing cell for frame {frame}, joint {joint}")


class RaggedChannelCount(ParseError):
    """Rows of a tabular file disagree on the number of channels."""

    def __init__(self, expected: int, actual: int, line: int | None = None):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected {expected} channel value(s), got {actual}", line)


class SchemaViolation(ParseError):
    """A structured document is missing a key or holds the wrong type."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")
