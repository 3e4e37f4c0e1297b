"""Adaptive window construction and the smooth rectangular pooling matrix.

A cumulative intensity curve is cut into tau equal-level segments; the
frames whose curve values fall in segment i form window i, so busy spans
get narrow windows and static spans get wide ones. Each window is realized
as one row of a smooth rectangular response

    P(i, j) = 1 / (((ci[j] - m_i) / (0.5 w))^(2 gamma) + 1)

centered on the segment midpoint m_i with level width w. The exponent is
even, so only the magnitude of the offset matters; gamma controls how fast
the response falls off, and in the large-gamma limit a row-normalized
matrix turns into plain averaging over the window.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .energy import active_joint_selection
from .errors import (
    DegenerateCurve,
    InvalidParameter,
    PlanShapeMismatch,
    TauTooLarge,
)
from .model import (
    PooledSequence,
    PoolingMode,
    PoolingParams,
    PoolingPlan,
    SkeletonSequence,
    validate_sequence,
)
from .motion import build_motion_profile

__all__ = [
    "window_boundaries",
    "uniform_boundaries",
    "pooling_matrix",
    "uniform_matrix",
    "gamma_gradient",
    "plan_frame_wise",
    "plan_joint_wise",
    "apply",
]


def _check_tau(tau: int, frame_count: int) -> int:
    tau = int(tau)
    if tau < 1:
        raise InvalidParameter("tau", f"must be >= 1, got {tau}")
    if tau > frame_count:
        raise TauTooLarge(tau, frame_count)
    return tau


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0:
        raise InvalidParameter("gamma", f"must be > 0, got {gamma}")
    return gamma


def uniform_boundaries(frame_count: int, tau: int) -> np.ndarray:
    """Equal-width window boundaries b_i = round(i * T / tau)."""
    tau = _check_tau(tau, frame_count)
    inner = np.rint(np.arange(1, tau) * frame_count / tau).astype(np.int64)
    return np.concatenate(([0], inner, [frame_count]))


def window_boundaries(ci: np.ndarray, tau: int) -> np.ndarray:
    """Cut a cumulative curve into tau nonempty contiguous frame windows.

    The curve's level range [0, ci[T]] is split into tau equal segments;
    boundary b_i counts the frames whose curve value lies strictly below
    level i * w, so window i holds the frames covering segment i. Plateaus
    can make several boundaries coincide; they are repaired by advancing
    each empty boundary one frame forward and then clamping from the right,
    which keeps the windows a partition of 1..T. A flat curve (no mass at
    all) falls back to uniform boundaries.

    Args:
        ci: (T,) nondecreasing curve, first value >= 0.
        tau: number of windows, 1 <= tau <= T.

    Returns:
        (tau + 1,) integer array with b_0 = 0 and b_tau = T; window i is
        the 1-based frame range b_{i-1} + 1 .. b_i.

    Raises:
        TauTooLarge: tau exceeds the frame count.
    """
    ci = np.asarray(ci, dtype=np.float64)
    frame_count = ci.shape[0]
    tau = _check_tau(tau, frame_count)
    total = float(ci[-1])
    if total <= 0:
        return uniform_boundaries(frame_count, tau)

    width = total / tau
    levels = width * np.arange(1, tau)
    inner = np.searchsorted(ci, levels, side="left").astype(np.int64)
    # Plateau repair: force strict increase left-to-right (the running
    # maximum of inner[j] + steps since j, floored at position + 1), then
    # clamp against the matching ceiling from the right. Both envelopes
    # rise by exactly 1 per step, so strictness survives the min.
    index = np.arange(inner.shape[0])
    inner = np.maximum(np.maximum.accumulate(inner - index) + index, index + 1)
    inner = np.minimum(inner, frame_count - inner.shape[0] + index)
    return np.concatenate(([0], inner, [frame_count]))


def _int_power(base: np.ndarray, exponent: float, consume: bool = False) -> np.ndarray:
    """base ** exponent, by repeated squaring when the exponent is a small int.

    With consume=True the base buffer is clobbered as scratch space.
    """
    if not (float(exponent).is_integer() and 0 < exponent <= 512):
        return np.power(base, exponent)
    n = int(exponent)
    acc = base if consume else base.copy()
    out = None
    while n:
        if n & 1:
            if out is None:
                out = acc
            else:
                np.multiply(out, acc, out=out)
        n >>= 1
        if n:
            # acc must not clobber a buffer the accumulator still aliases
            if acc is out:
                acc = acc * acc
            else:
                np.multiply(acc, acc, out=acc)
    return out


def _response(r: np.ndarray, gamma: float) -> np.ndarray:
    """Evaluate 1 / (r^(2 gamma) + 1) without overflow for large r.

    Both branches are expressed through p = min(r, 1/r)^(2 gamma), which
    stays in [0, 1]: the response is q = 1/(1+p) inside the window
    (r <= 1) and p/(1+p) = p q outside. Consumes the r buffer.
    """
    outside = r > 1.0
    np.divide(1.0, r, out=r, where=outside)
    p = _int_power(r, 2.0 * gamma, consume=True)
    q = p + 1.0
    np.divide(1.0, q, out=q)
    p *= q
    np.copyto(q, p, where=outside)
    return q


def _matrices_from_curves(curves: np.ndarray, totals: np.ndarray, tau: int, gamma: float):
    """Batched response matrices for K curves.

    Args:
        curves: (K, T) nondecreasing level curves.
        totals: (K,) level range of each curve (the last window's right
            edge), allowing a curve to be evaluated against a range wider
            than its final value.

    Returns:
        (matrices (K, tau, T), centers (K, tau), widths (K,)).
    """
    widths = totals / tau
    centers = (np.arange(1, tau + 1) - 0.5)[None, :] * widths[:, None]
    r = curves[:, None, :] - centers[:, :, None]
    np.abs(r, out=r)
    r /= (0.5 * widths)[:, None, None]
    return _response(r, gamma), centers, widths


def _midpoint_curve(frame_count: int) -> np.ndarray:
    """Evenly spread levels (t - 0.5) / T, staying clear of segment edges."""
    return (np.arange(1, frame_count + 1) - 0.5) / frame_count


def pooling_matrix(
    ci: np.ndarray, tau: int, gamma: float, total: float | None = None
) -> np.ndarray:
    """Raw (un-normalized) tau x T response matrix for one curve.

    Args:
        ci: (T,) nondecreasing cumulative curve.
        tau: number of output frames.
        gamma: sharpness exponent, > 0.
        total: level range to segment; defaults to ci[T].

    Raises:
        DegenerateCurve: the level range is 0, so no windows can be placed
            (use uniform_matrix for that case).
        TauTooLarge, InvalidParameter: propagated from validation.
    """
    ci = np.asarray(ci, dtype=np.float64)
    tau = _check_tau(tau, ci.shape[0])
    gamma = _check_gamma(gamma)
    total = float(ci[-1]) if total is None else float(total)
    if total <= 0:
        raise DegenerateCurve()
    matrices, _, _ = _matrices_from_curves(ci[None, :], np.array([total]), tau, gamma)
    return matrices[0]


def uniform_matrix(frame_count: int, tau: int, gamma: float) -> np.ndarray:
    """Response matrix reproducing conventional equal-window pooling.

    Equals pooling_matrix on the evenly spread curve (t - 0.5) / T with a
    level range of 1, which puts frame levels at window midpoints rather
    than on window edges, so the hard-gamma limit is exact equal-split
    averaging.
    """
    tau = _check_tau(tau, frame_count)
    gamma = _check_gamma(gamma)
    return pooling_matrix(_midpoint_curve(frame_count), tau, gamma, total=1.0)


def gamma_gradient(
    ci: np.ndarray, tau: int, gamma: float, total: float | None = None
) -> np.ndarray:
    """Entrywise derivative of pooling_matrix with respect to gamma.

    With r = |ci[j] - m_i| / (0.5 w) and p = min(r, 1/r)^(2 gamma), both
    the inside and outside branches of the response share the derivative
    -2 ln(r) p / (1 + p)^2, which vanishes at r = 0 and r = 1.
    """
    ci = np.asarray(ci, dtype=np.float64)
    tau = _check_tau(tau, ci.shape[0])
    gamma = _check_gamma(gamma)
    total = float(ci[-1]) if total is None else float(total)
    if total <= 0:
        raise DegenerateCurve()
    width = total / tau
    centers = (np.arange(1, tau + 1) - 0.5) * width
    r = np.abs(ci[None, :] - centers[:, None]) / (0.5 * width)
    inside = r <= 1.0
    s = np.where(inside, r, np.divide(1.0, r, out=np.ones_like(r), where=~inside))
    p = _int_power(s, 2.0 * gamma)
    log_r = np.log(r, out=np.zeros_like(r), where=r > 0)
    return -2.0 * log_r * p / np.square(1.0 + p)


def _normalize_rows(matrices: np.ndarray, curves: np.ndarray, centers: np.ndarray):
    """Scale each row to sum 1; an all-underflow row collapses to its
    nearest frame so the result stays a convex combination."""
    sums = matrices.sum(axis=2, keepdims=True)
    if np.any(sums == 0):
        for k, i in zip(*np.nonzero(sums[:, :, 0] == 0)):
            j = int(np.argmin(np.abs(curves[k] - centers[k, i])))
            matrices[k, i, j] = 1.0
        sums = matrices.sum(axis=2, keepdims=True)
    matrices *= np.reciprocal(sums)
    return matrices


def _build_plan(seq: SkeletonSequence, params: PoolingParams, mode: PoolingMode):
    seq = validate_sequence(seq)
    if params.mode is not mode:
        params = dataclasses.replace(params, mode=mode)
    frame_count = seq.frame_count
    tau = params.tau(frame_count)
    report = active_joint_selection(seq, params.alpha)
    profile = build_motion_profile(seq, params, report.active_mask)

    if mode is PoolingMode.FRAME_WISE:
        curves = profile.frame_ci[None, :]
        adaptive = np.array([True])
    else:
        curves = profile.ci
        adaptive = np.asarray(report.active_mask)

    totals = curves[:, -1].copy()
    flat = totals <= 0.0
    degenerate = bool(flat[adaptive].all())
    uniform = ~adaptive | flat

    eval_curves = np.where(uniform[:, None], _midpoint_curve(frame_count)[None, :], curves)
    eval_totals = np.where(uniform, 1.0, totals)
    matrices, centers, widths = _matrices_from_curves(
        eval_curves, eval_totals, tau, params.gamma
    )
    if params.row_normalize:
        matrices = _normalize_rows(matrices, eval_curves, centers)

    boundaries = np.empty((curves.shape[0], tau + 1), dtype=np.int64)
    shared_uniform = None
    for k in range(curves.shape[0]):
        if uniform[k]:
            if shared_uniform is None:
                shared_uniform = uniform_boundaries(frame_count, tau)
            boundaries[k] = shared_uniform
        else:
            boundaries[k] = window_boundaries(curves[k], tau)

    return PoolingPlan(
        params=params,
        tau=tau,
        frames=frame_count,
        boundaries=boundaries,
        centers=centers,
        width=widths,
        matrices=matrices,
        degenerate=degenerate,
        profile=profile,
        energy=report,
    )


def plan_frame_wise(seq: SkeletonSequence, params: PoolingParams) -> PoolingPlan:
    """Build one shared pooling matrix from the masked joint-average curve.

    The active joints vote into a single aggregate intensity signal; its
    cumulative curve drives one tau x T matrix applied to every channel
    and joint. A static sequence degrades to uniform pooling with the
    plan's degenerate flag set.
    """
    return _build_plan(seq, params, PoolingMode.FRAME_WISE)


def plan_joint_wise(seq: SkeletonSequence, params: PoolingParams) -> PoolingPlan:
    """Build one pooling matrix per joint.

    Active joints are pooled along their own cumulative curves; inactive
    joints (and joints with no motion at all) fall back to the uniform
    matrix. All matrices share the same tau, so the pooled output stays
    rectangular.
    """
    return _build_plan(seq, params, PoolingMode.JOINT_WISE)


def apply(plan: PoolingPlan, seq: SkeletonSequence) -> PooledSequence:
    """Pool a sequence with a plan built for its shape.

    Raises:
        PlanShapeMismatch: the plan was built for a different frame count,
            or its per-joint matrices do not match the joint count.
    """
    seq = validate_sequence(seq)
    if plan.frames != seq.frame_count:
        raise PlanShapeMismatch(
            f"plan built for {plan.frames} frames, sequence has {seq.frame_count}"
        )
    k = plan.matrices.shape[0]
    if k == 1:
        data = np.einsum("it,ctv->civ", plan.matrices[0], seq.data)
    else:
        if k != seq.joint_count:
            raise PlanShapeMismatch(
                f"plan holds {k} per-joint matrices, sequence has "
                f"{seq.joint_count} joints"
            )
        data = np.einsum("vit,ctv->civ", plan.matrices, seq.data)
    return PooledSequence(data=data, plan=plan, source=seq.source)
