"""Motion-adaptive temporal pooling for skeleton action sequences.

The library compresses a (channels, frames, joints) coordinate grid along
time: per-joint motion intensity is measured, an energy criterion picks
the joints worth listening to, their cumulative intensity curve is cut
into equal-level segments, and a smooth rectangular matrix pools each
segment's frames into one output frame. Busy spans keep their temporal
resolution; static spans are compressed hard.
"""

from . import errors
from .energy import active_joint_selection, kinetic_energy, potential_energy
from .ingest import (
    Segment,
    SyntheticSpec,
    Waveform,
    parse_csv,
    parse_json,
    parse_ntu_skeleton,
    synthesize,
    write_csv,
    write_json,
)
from .model import (
    EnergyReport,
    MotionProfile,
    NormFn,
    PooledSequence,
    PoolingMode,
    PoolingParams,
    PoolingPlan,
    SkeletonSequence,
    validate_sequence,
)
from .motion import (
    build_motion_profile,
    cumulative_intensity,
    frame_motion,
    motion_intensity,
    normalize_intensity,
)
from .pooling import (
    apply,
    gamma_gradient,
    plan_frame_wise,
    plan_joint_wise,
    pooling_matrix,
    uniform_boundaries,
    uniform_matrix,
    window_boundaries,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "SkeletonSequence",
    "PoolingParams",
    "NormFn",
    "PoolingMode",
    "MotionProfile",
    "EnergyReport",
    "PoolingPlan",
    "PooledSequence",
    "validate_sequence",
    "motion_intensity",
    "frame_motion",
    "normalize_intensity",
    "cumulative_intensity",
    "build_motion_profile",
    "kinetic_energy",
    "potential_energy",
    "active_joint_selection",
    "window_boundaries",
    "uniform_boundaries",
    "pooling_matrix",
    "uniform_matrix",
    "gamma_gradient",
    "plan_frame_wise",
    "plan_joint_wise",
    "apply",
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
