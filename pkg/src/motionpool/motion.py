"""Motion intensity signals and cumulative intensity curves.

The pipeline here turns a sequence into the curve that drives window
placement: per-joint motion intensity, an optional masked aggregate across
joints, a normalization that rescales the signal to (roughly) unit mass,
and the running sum of the result.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyMask, InvalidParameter, NegativeInput
from .model import (
    MotionProfile,
    NormFn,
    PoolingParams,
    SkeletonSequence,
)

__all__ = [
    "motion_intensity",
    "frame_motion",
    "normalize_intensity",
    "cumulative_intensity",
    "build_motion_profile",
]


def motion_intensity(seq: SkeletonSequence) -> np.ndarray:
    """Channel-averaged absolute coordinate change per joint and frame.

    Args:
        seq: a validated sequence.

    Returns:
        (V, T) array; entry [v, t] is the mean over channels of
        |X[c, t, v] - X[c, t-1, v]|, and the first column is 0 because
        frame 1 has no predecessor.
    """
    steps = np.abs(np.diff(seq.data, axis=1)).mean(axis=0)  # (T-1, V)
    out = np.zeros((seq.joint_count, seq.frame_count))
    out[:, 1:] = steps.T
    return out


def frame_motion(mi: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Average the per-joint intensity grid over the masked joints.

    Args:
        mi: (V, T) intensity grid.
        mask: (V,) boolean or 0/1 selection of joints.

    Returns:
        (T,) masked mean across joints.

    Raises:
        EmptyMask: the mask selects no joints.
    """
    mi = np.asarray(mi, dtype=np.float64)
    mask = np.asarray(mask).astype(bool)
    if not mask.any():
        raise EmptyMask()
    return mi[mask].mean(axis=0)


def normalize_intensity(
    signal: np.ndarray,
    norm_fn: NormFn | str = NormFn.TANH,
    epsilon2: float = 1e-6,
) -> np.ndarray:
    """Rescale a nonnegative intensity signal to a near-unit mass.

    For tanh, identity, and sqrt the output is
    g(signal) / (sum(g(signal)) + epsilon2), so the total mass is slightly
    below 1 and an all-zero signal maps to an all-zero output. Softmax is
    self-normalizing: it is taken over frames 2..T only and uses no
    epsilon2, so its output sums to exactly 1. The first entry is 0 in
    every variant; frame 1 carries no motion by convention.

    Raises:
        NegativeInput: the signal has a negative entry (1-based frame).
        InvalidParameter: epsilon2 <= 0 or unknown norm_fn.
    """
    signal = np.asarray(signal, dtype=np.float64)
    try:
        norm_fn = NormFn(norm_fn)
    except ValueError:
        raise InvalidParameter("norm_fn", f"unknown choice {norm_fn!r}")
    if not epsilon2 > 0:
        raise InvalidParameter("epsilon2", f"must be > 0, got {epsilon2}")
    negative = np.flatnonzero(signal < 0)
    if negative.size:
        raise NegativeInput(int(negative[0]) + 1)

    out = np.zeros_like(signal)
    if signal.shape[0] < 2:
        return out
    tail = signal[1:]
    if norm_fn is NormFn.SOFTMAX:
        shifted = np.exp(tail - tail.max())
        out[1:] = shifted / shifted.sum()
        return out
    if norm_fn is NormFn.TANH:
        g = np.tanh(tail)
    elif norm_fn is NormFn.SQRT:
        g = np.sqrt(tail)
    else:
        g = tail
    out[1:] = g / (g.sum() + epsilon2)
    return out


def cumulative_intensity(mi_norm: np.ndarray) -> np.ndarray:
    """Running sum of a nonnegative normalized intensity signal."""
    mi_norm = np.asarray(mi_norm, dtype=np.float64)
    negative = np.flatnonzero(mi_norm < 0)
    if negative.size:
        raise NegativeInput(int(negative[0]) + 1)
    return np.cumsum(mi_norm)


def build_motion_profile(
    seq: SkeletonSequence,
    params: PoolingParams,
    mask: np.ndarray | None = None,
) -> MotionProfile:
    """Assemble the intensity signals a pooling plan is built from.

    In frame-wise mode the masked joint-average signal is normalized and
    accumulated into one shared curve (frame_mi, frame_ci). In joint-wise
    mode every joint gets its own normalized signal and curve (mi_norm,
    ci); the mask does not enter, since inactive joints are handled at
    matrix-construction time.

    Args:
        seq: a validated sequence.
        params: supplies norm_fn, epsilon2, and the mode.
        mask: active-joint mask for the frame-wise aggregate; all joints
            when omitted.
    """
    mi = motion_intensity(seq)
    if mask is None:
        mask = np.ones(seq.joint_count, dtype=bool)
    if params.mode.value == "frame_wise":
        frame_mi = frame_motion(mi, mask)
        frame_norm = normalize_intensity(frame_mi, params.norm_fn, params.epsilon2)
        frame_ci = cumulative_intensity(frame_norm)
        return MotionProfile(
            mi=mi,
            mi_norm=None,
            ci=None,
            frame_mi=frame_mi,
            frame_ci=frame_ci,
            norm_fn=params.norm_fn,
            epsilon2=params.epsilon2,
        )
    mi_norm = np.stack(
        [normalize_intensity(row, params.norm_fn, params.epsilon2) for row in mi]
    )
    ci = np.cumsum(mi_norm, axis=1)
    return MotionProfile(
        mi=mi,
        mi_norm=mi_norm,
        ci=ci,
        frame_mi=None,
        frame_ci=None,
        norm_fn=params.norm_fn,
        epsilon2=params.epsilon2,
    )
