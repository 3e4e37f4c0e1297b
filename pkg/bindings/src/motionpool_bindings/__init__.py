"""Array-in/array-out boundary for motion-adaptive temporal pooling.

Preprocessing pipelines want plain buffers at module seams, not library
dataclasses. This package maps a (channels, frames, joints) float64 array
to its temporally pooled counterpart and exposes the curves behind the
plan as a flat dict of arrays. No math lives here: every number is
produced by motionpool, and its errors propagate unchanged. Calls are
reentrant and share no state.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from motionpool import (
    PoolingMode,
    PoolingParams,
    SkeletonSequence,
    apply,
    plan_frame_wise,
    plan_joint_wise,
    validate_sequence,
)
from motionpool.errors import InvalidParameter

__version__ = "0.1.0"

__all__ = ["make_params", "pool", "analyze"]

_FIELDS = {f.name for f in dataclasses.fields(PoolingParams)}

_MODE_ALIASES = {
    "frame": PoolingMode.FRAME_WISE,
    "joint": PoolingMode.JOINT_WISE,
}

_PLANNERS = {
    PoolingMode.FRAME_WISE: plan_frame_wise,
    PoolingMode.JOINT_WISE: plan_joint_wise,
}


def make_params(**kwargs) -> PoolingParams:
    """Build a validated parameter set from keyword arguments.

    Accepts the PoolingParams fields (theta, gamma, alpha, epsilon2,
    norm_fn, mode, row_normalize) plus two conveniences: ``norm`` as a
    shorthand for ``norm_fn``, and the mode spellings ``"frame"`` and
    ``"joint"``.

    Raises:
        InvalidParameter: an unknown or out-of-range field, carrying the
            offending name.
    """
    if "norm" in kwargs and "norm_fn" not in kwargs:
        kwargs["norm_fn"] = kwargs.pop("norm")
    mode = kwargs.get("mode")
    if isinstance(mode, str) and mode in _MODE_ALIASES:
        kwargs["mode"] = _MODE_ALIASES[mode]
    for key in kwargs:
        if key not in _FIELDS:
            raise InvalidParameter(key, "unknown parameter")
    return PoolingParams(**kwargs)


def _checked(array) -> SkeletonSequence:
    # SkeletonSequence coerces to a contiguous float64 grid and rejects
    # anything that is not 3-D; validation adds the finiteness check.
    return validate_sequence(SkeletonSequence(array, source="array"))


def _buffer(arr, dtype=np.float64) -> np.ndarray:
    # Fresh writable C-order copy; the library's own arrays are frozen.
    return np.array(arr, dtype=dtype, order="C")


def pool(array, params: PoolingParams | None = None) -> np.ndarray:
    """Pool a (channels, frames, joints) array along time.

    Plans and applies in one call; the output is a fresh C-contiguous
    float64 array of shape (channels, tau, joints) with
    tau = ceil(frames / theta), identical to the library's
    plan-then-apply path.

    Raises:
        DimensionMismatch, TooShort, NonFiniteValue: bad input array.
        InvalidParameter, TauTooLarge: bad parameters.
    """
    seq = _checked(array)
    if params is None:
        params = PoolingParams()
    plan = _PLANNERS[params.mode](seq, params)
    return _buffer(apply(plan, seq).data)


def analyze(array, params: PoolingParams | None = None) -> dict:
    """Expose the curves behind a pooling plan as plain arrays.

    Returns a dict with:
        mi: (joints, frames) per-joint motion intensity.
        ci: the cumulative curve driving the windows, (frames,) in frame
            mode and (joints, frames) in joint mode.
        boundaries: int64 window edges into 1..frames, (tau + 1,) in
            frame mode and (joints, tau + 1) in joint mode.
        active_set: 1-based indices of the joints selected by the energy
            criterion, int64.
        tau: output length.
        degenerate: True when the driving curves were flat and the
            windows fell back to uniform.

    Errors mirror pool().
    """
    seq = _checked(array)
    if params is None:
        params = PoolingParams()
    plan = _PLANNERS[params.mode](seq, params)
    frame_wise = params.mode is PoolingMode.FRAME_WISE
    ci = plan.profile.frame_ci if frame_wise else plan.profile.ci
    boundaries = plan.boundaries[0] if frame_wise else plan.boundaries
    return {
        "mi": _buffer(plan.profile.mi),
        "ci": _buffer(ci),
        "boundaries": _buffer(boundaries, dtype=np.int64),
        "active_set": np.array(plan.energy.active_set, dtype=np.int64),
        "tau": plan.tau,
        "degenerate": plan.degenerate,
    }
