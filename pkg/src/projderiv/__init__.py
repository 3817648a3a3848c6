"""Metric projections onto closed balls and positive cones, their derivative
operators where those exist, and numerical certificates where they do not."""

from .vectors import (
    OrthoSplit,
    Vector,
    as_vector,
    inner,
    norm,
    norm_dir_derivative,
    ortho_split,
)
from .balls import (
    Ball,
    BallDeriv,
    BallDerivKind,
    BallRegion,
    BallRegionTag,
    ball_frechet_derivative,
    ball_gateaux_sphere,
    classify_ball,
    project_ball,
    sphere_tolerance,
)
from .orthant import (
    ConeDeriv,
    ConeDerivKind,
    ConeRefutation,
    ConeRegion,
    SignPartition,
    classify_cone,
    cone_frechet_derivative,
    cone_gateaux,
    cone_refute_frechet,
    guarded_fd_step,
    positive_homogeneity_check,
    project_cone,
    sign_partition,
    zero_tolerance,
)
from .sequences import (
    GeometricTail,
    L2Region,
    SeqVector,
    WitnessReport,
    classify_l2,
    diff_coords,
    distance,
    in_cone,
    interior_escape_witness,
    l2_gateaux,
    l2_nonfrechet_witness,
    project_cone_l2,
)
from .verify import (
    FDEstimate,
    OracleConvergenceError,
    ResidualScan,
    ScanMode,
    fd_directional,
    frechet_residual_scan,
    qp_projection_oracle,
    refutation_threshold,
    refute_linearity,
    strict_residual_scan,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallDeriv",
    "BallDerivKind",
    "BallRegion",
    "BallRegionTag",
    "ConeDeriv",
    "ConeDerivKind",
    "ConeRefutation",
    "ConeRegion",
    "FDEstimate",
    "GeometricTail",
    "L2Region",
    "OracleConvergenceError",
    "OrthoSplit",
    "ResidualScan",
    "ScanMode",
    "SeqVector",
    "SignPartition",
    "Vector",
    "WitnessReport",
    "as_vector",
    "ball_frechet_derivative",
    "ball_gateaux_sphere",
    "classify_ball",
    "classify_cone",
    "classify_l2",
    "cone_frechet_derivative",
    "cone_gateaux",
    "cone_refute_frechet",
    "diff_coords",
    "distance",
    "fd_directional",
    "frechet_residual_scan",
    "guarded_fd_step",
    "in_cone",
    "inner",
    "interior_escape_witness",
    "l2_gateaux",
    "l2_nonfrechet_witness",
    "norm",
    "norm_dir_derivative",
    "ortho_split",
    "positive_homogeneity_check",
    "project_ball",
    "project_cone",
    "project_cone_l2",
    "qp_projection_oracle",
    "refutation_threshold",
    "refute_linearity",
    "sign_partition",
    "sphere_tolerance",
    "strict_residual_scan",
    "zero_tolerance",
]
