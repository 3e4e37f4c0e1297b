"""Joint energies and active-joint selection.

Two energy terms rank how much each joint moves over a sequence: a kinetic
term summing squared frame-to-frame displacement, and a potential term
measuring net drift away from the first-frame pose. Both are normalized by
their own maxima, summed, normalized again, and thresholded to pick the
set of joints worth listening to when placing pooling windows.
"""

from __future__ import annotations

import numpy as np

from .model import EnergyReport, SkeletonSequence

__all__ = [
    "kinetic_energy",
    "potential_energy",
    "active_joint_selection",
]


def kinetic_energy(seq: SkeletonSequence) -> np.ndarray:
    """Per-joint sum over frames of the channel-mean squared displacement.

    Returns:
        (V,) nonnegative vector; a static joint scores 0.
    """
    steps = np.diff(seq.data, axis=1)  # (C, T-1, V)
    return np.square(steps).mean(axis=0).sum(axis=0)


def potential_energy(seq: SkeletonSequence) -> np.ndarray:
    """Per-joint magnitude of the summed drift from the first frame.

    The channel-mean displacement from frame 1 is summed over frames with
    its sign kept, and the absolute value is taken at the end, so motion
    symmetric around the starting pose cancels to 0.

    Returns:
        (V,) nonnegative vector.
    """
    drift = (seq.data - seq.data[:, :1, :]).mean(axis=0)  # (T, V)
    return np.abs(drift.sum(axis=0))


def _max_normalized(vec: np.ndarray) -> np.ndarray:
    peak = vec.max() if vec.size else 0.0
    if peak <= 0:
        return np.zeros_like(vec)
    return vec / peak


def active_joint_selection(seq: SkeletonSequence, alpha: float = 0.1) -> EnergyReport:
    """Select joints whose normalized total energy clears mean - alpha * std.

    Normalization is two-step: each energy term is divided by its own
    maximum, then their sum is divided by its maximum, so total_norm lies
    in [0, 1] with at least one entry equal to 1 unless everything is
    static. The standard deviation is the sample one (V - 1 denominator),
    defined as 0 when V = 1. Joints carrying the maximal total are always
    kept, so the selection is never empty; a fully static sequence keeps
    every joint.

    Returns:
        EnergyReport with the energies, statistics, and active set
        (1-based indices).
    """
    kinetic = kinetic_energy(seq)
    potential = potential_energy(seq)
    kinetic_norm = _max_normalized(kinetic)
    potential_norm = _max_normalized(potential)
    total_norm = _max_normalized(kinetic_norm + potential_norm)

    v = total_norm.size
    mu = float(total_norm.mean())
    sigma = float(total_norm.std(ddof=1)) if v > 1 else 0.0
    threshold = mu - alpha * sigma
    active_mask = total_norm >= threshold
    # A large negative alpha can push the threshold above every value;
    # the top-energy joints stay active regardless.
    active_mask |= total_norm >= total_norm.max()

    return EnergyReport(
        kinetic=kinetic,
        potential=potential,
        kinetic_norm=kinetic_norm,
        potential_norm=potential_norm,
        total_norm=total_norm,
        mu=mu,
        sigma=sigma,
        alpha=float(alpha),
        active_mask=active_mask,
        active_set=tuple(int(i) + 1 for i in np.flatnonzero(active_mask)),
    )
