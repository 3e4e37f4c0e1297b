import numpy as np
import pytest

import oracles
from motionpool import (
    SkeletonSequence,
    active_joint_selection,
    kinetic_energy,
    potential_energy,
)

# Frozen arithmetic for the five-joint selection example with
# total_norm [1.0, 0.9, 0.8, 0.2, 0.1]:
#   mu = 0.6, sigma = sqrt(0.70 / 4), threshold = mu - 0.1 * sigma.
EXAMPLE_TOTALS = (1.0, 0.9, 0.8, 0.2, 0.1)
EXAMPLE_MU = 0.6
EXAMPLE_SIGMA = 0.41833001326703778
EXAMPLE_THRESHOLD = 0.55816699867329621


def _seq(data):
    return SkeletonSequence(np.asarray(data, dtype=float))


def oscillating_fixture(weights, frames=5):
    """One joint per weight, oscillating around the origin.

    The drift cancels exactly over an even number of steps, so the
    potential term is 0 for every joint and total_norm reduces to the
    kinetic ratio a_v^2 / max(a^2). Amplitudes sqrt(w_v) therefore give
    total_norm == weights exactly (up to rounding).
    """
    amplitudes = np.sqrt(np.asarray(weights, dtype=float))
    data = np.zeros((1, frames, len(amplitudes)))
    signs = np.array([(-1) ** t for t in range(frames - 1)], dtype=float)
    data[0, 1:, :] = signs[:, None] * amplitudes[None, :]
    return _seq(data)


def test_static_joint_scores_zero():
    data = np.zeros((3, 6, 2))
    data[:, :, 1] = np.arange(6)
    kin = kinetic_energy(_seq(data))
    assert kin[0] == 0.0
    assert kin[1] > 0


def test_kinetic_direct_substitution():
    seq = _seq(np.array([0.0, 1.0, 3.0]).reshape(1, 3, 1))
    assert kinetic_energy(seq)[0] == pytest.approx(5.0, abs=1e-15)


def test_kinetic_reversal_invariant():
    rng = np.random.default_rng(12)
    data = rng.normal(size=(3, 9, 6))
    forward = kinetic_energy(_seq(data))
    backward = kinetic_energy(_seq(data[:, ::-1, :]))
    assert np.abs(forward - backward).max() <= 1e-12


def test_potential_direct_substitution():
    seq = _seq(np.array([0.0, 1.0, 0.0, 1.0]).reshape(1, 4, 1))
    assert potential_energy(seq)[0] == pytest.approx(2.0, abs=1e-15)


def test_potential_cancellation():
    seq = _seq(np.array([0.0, 1.0, -1.0]).reshape(1, 3, 1))
    assert potential_energy(seq)[0] == pytest.approx(0.0, abs=1e-15)


def test_energies_match_loop_oracle():
    rng = np.random.default_rng(13)
    data = rng.normal(size=(3, 14, 11))
    seq = _seq(data)
    assert np.abs(kinetic_energy(seq) - oracles.kinetic_energy(data.tolist())).max() <= 1e-12
    assert np.abs(potential_energy(seq) - oracles.potential_energy(data.tolist())).max() <= 1e-12


def test_five_joint_selection_example():
    report = active_joint_selection(oscillating_fixture(EXAMPLE_TOTALS), alpha=0.1)
    assert np.abs(report.total_norm - np.array(EXAMPLE_TOTALS)).max() <= 1e-12
    assert np.abs(report.potential).max() <= 1e-12
    assert report.mu == pytest.approx(EXAMPLE_MU, abs=1e-12)
    assert report.sigma == pytest.approx(EXAMPLE_SIGMA, abs=1e-12)
    assert report.threshold == pytest.approx(EXAMPLE_THRESHOLD, abs=1e-12)
    assert report.active_set == (1, 2, 3)
    assert report.active_mask.tolist() == [True, True, True, False, False]


def test_identical_joints_all_active():
    data = np.zeros((2, 7, 4))
    data[:, :, :] = np.arange(7)[None, :, None]
    report = active_joint_selection(_seq(data))
    assert report.sigma == 0.0
    assert (report.total_norm == 1.0).all()
    assert report.active_set == (1, 2, 3, 4)


def test_static_sequence_keeps_every_joint():
    report = active_joint_selection(_seq(np.ones((3, 5, 6))))
    assert not report.total_norm.any()
    assert report.mu == 0.0 and report.sigma == 0.0
    assert report.active_set == (1, 2, 3, 4, 5, 6)


def test_single_joint_sigma_defined_as_zero():
    rng = np.random.default_rng(14)
    report = active_joint_selection(_seq(rng.normal(size=(3, 6, 1))))
    assert report.sigma == 0.0
    assert report.active_set == (1,)


def test_scale_invariance_spot_check():
    rng = np.random.default_rng(15)
    data = rng.normal(size=(3, 20, 9))
    base = active_joint_selection(_seq(data))
    for s in (0.01, 100.0):
        scaled = active_joint_selection(_seq(s * data))
        assert scaled.active_set == base.active_set
        assert np.abs(scaled.total_norm - base.total_norm).max() <= 1e-9


def test_alpha_monotonicity():
    seq = oscillating_fixture((1.0, 0.7, 0.45, 0.2, 0.05))
    previous = set()
    for alpha in (-0.5, 0.0, 0.5, 1.0, 2.0):
        current = set(active_joint_selection(seq, alpha).active_set)
        assert previous.issubset(current)
        previous = current


def test_top_joint_survives_hostile_alpha():
    seq = oscillating_fixture((1.0, 0.5, 0.25))
    report = active_joint_selection(seq, alpha=-100.0)
    assert 1 in report.active_set


def test_report_serialization_keys():
    doc = active_joint_selection(oscillating_fixture((1.0, 0.5))).to_json_dict()
    assert set(doc) == {
        "kinetic",
        "potential",
        "kinetic_norm",
        "potential_norm",
        "total_norm",
        "mu",
        "sigma",
        "alpha",
        "active_set",
    }
    # for two distinct values the smaller always sits below mu - 0.1 sigma
    assert doc["active_set"] == [1]
