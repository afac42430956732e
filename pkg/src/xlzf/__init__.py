"""Downlink precoding simulations for extra-large antenna arrays.

Exact spherical-wavefront LOS channels, classical zero-forcing, mean-angle ZF
with elevation-based user grouping, and tensor (Kronecker) ZF, plus a Monte
Carlo harness with CSV-emitting experiment presets.
"""

from .channel import (
    ChannelSet,
    exact_channel,
    mean_elevation,
    mean_horizontal_channel,
    planewave_factors,
    steering_vertical,
    subarray_channel,
)
from .config import SCHEMES, ConfigError, ScenarioParams, desk_params, params_from_file
from .geometry import (
    ArrayGeometry,
    DegenerateGeometryError,
    PropagationAngles,
    UserPlacement,
    build_array,
    cartesian_to_spherical,
    placement_from_cartesian,
    propagation_angles,
    sample_placement,
    spherical_to_cartesian,
)
from .grouping import (
    Grouping,
    InfeasibleGroupingError,
    InfeasiblePartitionError,
    assign_row_blocks,
    build_grouping,
    greedy_grouping,
    group_mean_elevations,
    partition_rows,
)
from .harness import GridPoint, TrialRecord, run_grid, run_trial, run_trials
from .metrics import MetricsRecord, ecdf, median, normalize_rate, sinr, sum_rate, to_db
from .numerics import (
    DEFAULT_TOL,
    ToleranceParams,
    kron,
    nullspace_project,
    pseudo_inverse,
    rowspace_projector,
)
from .precoders import (
    DegenerateUserError,
    InfeasibleScheduleError,
    PowerPolicy,
    PrecodeResult,
    mrt,
    mzf,
    schedule_orthogonal,
    tzf,
    tzf_direction_general,
    zf,
)

__version__ = "0.1.0"
