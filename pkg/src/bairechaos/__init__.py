"""Distributional chaos on subshifts of the Baire space, checked exactly at finite scales."""

from .points import (
    ConstantPoint,
    DyadicDistance,
    PeriodicPoint,
    PointStream,
    PrefixPoint,
    Segment,
    cylinder_contains,
    lcp_length,
    metric_distance,
    shift,
)
from .subshift import (
    ForbiddenBasis,
    Gluing,
    SubshiftSpec,
    compute_safe_symbol_K,
    enumerate_allowed_words,
    is_allowed,
    prefix_in_shift,
    verify_gluing_instance,
)
from .schedule import Schedule, make_schedule
from .constructions import (
    SBTSeedData,
    checkpoint_indices,
    dense_family_point,
    disagreement_witness,
    hat_encode,
    sbt_scrambled_point,
    sbt_seed,
    sft_scrambled_point,
)
from .xi import XiQuery, XiTrajectory, xi_count, xi_ratio, xi_trajectory
from .verify import CheckpointReport, checkpoint_verify

__version__ = "0.1.0"
