"""Core data types for motion-adaptive temporal pooling.

A skeleton sequence is a dense grid of shape (channels, frames, joints):
channels are spatial coordinates (3 for 3D capture), frames are time steps,
joints are skeleton landmarks. All indices in documentation, file formats,
and error messages are 1-based; arrays are indexed the usual 0-based way
in code.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NonFiniteValue,
    TooShort,
)

__all__ = [
    "NormFn",
    "PoolingMode",
    "SkeletonSequence",
    "PoolingParams",
    "MotionProfile",
    "EnergyReport",
    "PoolingPlan",
    "PooledSequence",
    "validate_sequence",
]


class NormFn(str, enum.Enum):
    """Curvature function applied to intensity signals before normalization."""

    TANH = "tanh"
    IDENTITY = "identity"
    SOFTMAX = "softmax"
    SQRT = "sqrt"


class PoolingMode(str, enum.Enum):
    """One shared pooling matrix for all joints, or one matrix per joint."""

    FRAME_WISE = "frame_wise"
    JOINT_WISE = "joint_wise"


def _frozen(arr, dtype=np.float64) -> np.ndarray:
    out = np.array(arr, dtype=dtype, order="C", copy=True)
    out.setflags(write=False)
    return out


def _frozen_or_none(arr, dtype=np.float64):
    return None if arr is None else _frozen(arr, dtype)


@dataclass(frozen=True)
class SkeletonSequence:
    """An immutable (channels, frames, joints) coordinate grid.

    Args:
        data: array-like of shape (C, T, V), copied to a read-only float64
            array. Coordinates are meters for 3D capture, pixels for 2D.
        source: where the sequence came from (file path or synthesis tag).
        joint_labels: optional tuple of V joint names.
    """

    data: np.ndarray
    source: str | None = None
    joint_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise DimensionMismatch(("C", "T", "V"), arr.shape)
        object.__setattr__(self, "data", _frozen(arr))
        if self.joint_labels is not None:
            labels = tuple(str(x) for x in self.joint_labels)
            if len(labels) != arr.shape[2]:
                raise DimensionMismatch((arr.shape[2],), (len(labels),))
            object.__setattr__(self, "joint_labels", labels)

    @property
    def channel_count(self) -> int:
        return self.data.shape[0]

    @property
    def frame_count(self) -> int:
        return self.data.shape[1]

    @property
    def joint_count(self) -> int:
        return self.data.shape[2]


def validate_sequence(seq: SkeletonSequence) -> SkeletonSequence:
    """Check that a sequence can be pooled; return it unchanged if so.

    Raises:
        TooShort: fewer than two frames, so no frame pair exists.
        NonFiniteValue: a NaN or infinity anywhere in the grid; carries the
            1-based (channel, frame, joint) of the first offender in
            channel-major order.
    """
    if seq.frame_count < 2:
        raise TooShort(seq.frame_count)
    finite = np.isfinite(seq.data)
    if not finite.all():
        c, t, v = np.argwhere(~finite)[0]
        raise NonFiniteValue(int(c) + 1, int(t) + 1, int(v) + 1)
    return seq


def _check_number(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameter(name, f"must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameter(name, f"must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PoolingParams:
    """Knobs controlling how a pooling plan is built.

    Args:
        theta: temporal reduction factor; the output length is
            ceil(T / theta). Must be >= 1.
        gamma: window sharpness exponent; large values approach hard
            average pooling over each window. Must be > 0.
        alpha: slack in the active-joint threshold mean - alpha * std.
            Any finite value; negative values tighten the selection.
        epsilon2: stabilizer added to the intensity normalization
            denominator. Must be > 0.
        norm_fn: curvature function for intensity signals.
        mode: shared matrix across joints, or one matrix per joint.
        row_normalize: rescale each pooling-matrix row to sum to 1.
    """

    theta: float = 2.0
    gamma: float = 5.0
    alpha: float = 0.1
    epsilon2: float = 1e-6
    norm_fn: NormFn = NormFn.TANH
    mode: PoolingMode = PoolingMode.FRAME_WISE
    row_normalize: bool = True

    def __post_init__(self):
        theta = _check_number("theta", self.theta)
        if theta < 1:
            raise InvalidParameter("theta", f"must be >= 1, got {theta}")
        gamma = _check_number("gamma", self.gamma)
        if gamma <= 0:
            raise InvalidParameter("gamma", f"must be > 0, got {gamma}")
        alpha = _check_number("alpha", self.alpha)
        epsilon2 = _check_number("epsilon2", self.epsilon2)
        if epsilon2 <= 0:
            raise InvalidParameter("epsilon2", f"must be > 0, got {epsilon2}")
        for name, value in (
            ("theta", theta),
            ("gamma", gamma),
            ("alpha", alpha),
            ("epsilon2", epsilon2),
        ):
            object.__setattr__(self, name, value)
        try:
            object.__setattr__(self, "norm_fn", NormFn(self.norm_fn))
        except ValueError:
            raise InvalidParameter("norm_fn", f"unknown choice {self.norm_fn!r}")
        try:
            object.__setattr__(self, "mode", PoolingMode(self.mode))
        except ValueError:
            raise InvalidParameter("mode", f"unknown choice {self.mode!r}")
        object.__setattr__(self, "row_normalize", bool(self.row_normalize))

    def tau(self, frame_count: int) -> int:
        """Output length for an input with the given frame count."""
        return max(1, math.ceil(frame_count / self.theta))

    def to_json_dict(self) -> dict:
        return {
            "theta": self.theta,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "epsilon2": self.epsilon2,
            "norm_fn": self.norm_fn.value,
            "mode": self.mode.value,
            "row_normalize": self.row_normalize,
        }


@dataclass(frozen=True)
class MotionProfile:
    """Per-frame intensity signals derived from one sequence.

    Attributes:
        mi: (V, T) per-joint motion intensity; mi[:, 0] is 0 by convention.
        mi_norm: (V, T) normalized intensity, filled in joint-wise mode.
        ci: (V, T) cumulative intensity per joint, filled in joint-wise mode.
        frame_mi: (T,) masked joint-average intensity, frame-wise mode.
        frame_ci: (T,) cumulative curve of the normalized frame_mi,
            frame-wise mode.
        norm_fn: normalization used.
        epsilon2: stabilizer used.
    """

    mi: np.ndarray
    mi_norm: np.ndarray | None
    ci: np.ndarray | None
    frame_mi: np.ndarray | None
    frame_ci: np.ndarray | None
    norm_fn: NormFn
    epsilon2: float

    def __post_init__(self):
        object.__setattr__(self, "mi", _frozen(self.mi))
        for name in ("mi_norm", "ci", "frame_mi", "frame_ci"):
            object.__setattr__(self, name, _frozen_or_none(getattr(self, name)))
        object.__setattr__(self, "norm_fn", NormFn(self.norm_fn))

    def to_json_dict(self) -> dict:
        def listed(arr):
            return None if arr is None else arr.tolist()

        return {
            "mi": self.mi.tolist(),
            "mi_norm": listed(self.mi_norm),
            "ci": listed(self.ci),
            "frame_mi": listed(self.frame_mi),
            "frame_ci": listed(self.frame_ci),
            "norm_fn": self.norm_fn.value,
            "epsilon2": self.epsilon2,
        }


@dataclass(frozen=True)
class EnergyReport:
    """Joint energies and the active-set decision built from them.

    Attributes:
        kinetic: (V,) summed squared frame-to-frame displacement per joint.
        potential: (V,) net drift magnitude from the first frame per joint.
        kinetic_norm, potential_norm: each term scaled by its own maximum.
        total_norm: their sum scaled by its maximum, in [0, 1].
        mu: mean of total_norm.
        sigma: sample standard deviation of total_norm (0 when V = 1).
        alpha: slack used for the threshold.
        active_mask: (V,) boolean mask of selected joints.
        active_set: sorted 1-based indices of the selected joints.
    """

    kinetic: np.ndarray
    potential: np.ndarray
    kinetic_norm: np.ndarray
    potential_norm: np.ndarray
    total_norm: np.ndarray
    mu: float
    sigma: float
    alpha: float
    active_mask: np.ndarray
    active_set: tuple[int, ...]

    def __post_init__(self):
        for name in (
            "kinetic",
            "potential",
            "kinetic_norm",
            "potential_norm",
            "total_norm",
        ):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "active_mask", _frozen(self.active_mask, bool))
        object.__setattr__(self, "active_set", tuple(int(v) for v in self.active_set))

    @property
    def threshold(self) -> float:
        return self.mu - self.alpha * self.sigma

    def to_json_dict(self) -> dict:
        return {
            "kinetic": self.kinetic.tolist(),
            "potential": self.potential.tolist(),
            "kinetic_norm": self.kinetic_norm.tolist(),
            "potential_norm": self.potential_norm.tolist(),
            "total_norm": self.total_norm.tolist(),
            "mu": self.mu,
            "sigma": self.sigma,
            "alpha": self.alpha,
            "active_set": list(self.active_set),
        }


@dataclass(frozen=True)
class PoolingPlan:
    """Everything needed to pool one specific sequence.

    K curves drive the plan: K = 1 in frame-wise mode, K = V in joint-wise
    mode. ``matrices`` is (K, tau, T), stored row-normalized when the
    parameters ask for it. ``boundaries`` is (K, tau + 1) with
    boundaries[k, 0] = 0 and boundaries[k, tau] = T; window i covers
    1-based frames boundaries[k, i-1] + 1 .. boundaries[k, i].
    ``centers`` holds each window's target level on the cumulative curve
    and ``width`` each curve's level step.

    ``degenerate`` marks plans whose driving curves were all flat, in which
    case every matrix falls back to the uniform one.
    """

    params: PoolingParams
    tau: int
    frames: int
    boundaries: np.ndarray
    centers: np.ndarray
    width: np.ndarray
    matrices: np.ndarray
    degenerate: bool
    profile: MotionProfile | None = field(default=None, compare=False)
    energy: EnergyReport | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "boundaries", _frozen(self.boundaries, np.int64))
        for name in ("centers", "width", "matrices"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def to_json_dict(self, include_matrices: bool = False) -> dict:
        single = self.matrices.shape[0] == 1
        out = {
            "tau": self.tau,
            "boundaries": (
                self.boundaries[0].tolist() if single else self.boundaries.tolist()
            ),
            "centers": self.centers[0].tolist() if single else self.centers.tolist(),
            "width": float(self.width[0]) if single else self.width.tolist(),
            "degenerate": self.degenerate,
            "params": self.params.to_json_dict(),
        }
        if include_matrices:
            out["matrices"] = (
                self.matrices[0].tolist() if single else self.matrices.tolist()
            )
        return out


@dataclass(frozen=True)
class PooledSequence:
    """Result of applying a plan: a (channels, tau, joints) grid."""

    data: np.ndarray
    plan: PoolingPlan
    source: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "data", _frozen(self.data))

    @property
    def channel_count(self) -> int:
        return self.data.shape[0]

    @property
    def frame_count(self) -> int:
        return self.data.shape[1]

    @property
    def joint_count(self) -> int:
        return self.data.shape[2]
