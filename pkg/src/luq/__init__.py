"""Lagrangian uncertainty quantification and descriptor fields for 2-D transport.

Evaluate distance-to-target uncertainty measures and arc-length descriptors
over analytic flows, discrete maps, and gridded time-dependent velocity
data; sweep them across grids of initial conditions with a deterministic
parallel contract; and extract the minimal ridges where stable manifolds
of hyperbolic trajectories leave their imprint.
"""

__version__ = "0.1.0"

from ._backend import active_backend
from .diagnostics import (
    BlobSpec,
    LuqParams,
    Target,
    blob_error,
    centroid,
    displacement,
    luq_map,
    luq_pointwise,
    luq_trajectory,
    m_average,
    m_descriptor,
)
from .flows import (
    Duffing,
    GriddedFlow,
    LinearSaddle,
    PoleError,
    RotatedSaddle,
    RotatedSaddleMap,
    SaddleMap,
    SphericalWrapped,
    eval_spherical,
    eval_velocity,
    map_step,
)
from .gridded import (
    GridDomainError,
    GriddedField,
    ScalarField2D,
    VelgridDimensionError,
    VelgridError,
    VelgridParseError,
    VelgridValueError,
    export_scalar_field,
    interp_velocity,
    load_velocity_grid,
    read_scalar_field,
    sample_flow_to_grid,
    write_velocity_grid,
)
from .oracles import (
    AsymptoteValidityError,
    map_luq_asymptote,
    map_solutions,
    rotated_luq_asymptote,
    rotated_saddle_solution,
    saddle_luq_asymptote,
    saddle_solution,
)
from .sweep import (
    BlobField,
    DisplacementField,
    GridSpec,
    LuqField,
    LuqMapField,
    MField,
    RidgeResult,
    extract_minimal_ridge,
    sweep,
    write_ridge_csv,
)
from .trajectory import (
    IntegrationError,
    TimeWindow,
    Trajectory,
    integrate,
    iterate_map,
)

__all__ = [
    "__version__",
    "active_backend",
    # flows
    "LinearSaddle", "RotatedSaddle", "Duffing", "GriddedFlow", "SphericalWrapped",
    "SaddleMap", "RotatedSaddleMap",
    "eval_velocity", "eval_spherical", "map_step", "PoleError",
    # gridded data
    "GriddedField", "ScalarField2D", "load_velocity_grid", "write_velocity_grid",
    "sample_flow_to_grid", "interp_velocity", "export_scalar_field", "read_scalar_field",
    "VelgridError", "VelgridParseError", "VelgridDimensionError", "VelgridValueError",
    "GridDomainError",
    # trajectories
    "TimeWindow", "Trajectory", "integrate", "iterate_map", "IntegrationError",
    # diagnostics
    "Target", "LuqParams", "BlobSpec",
    "luq_pointwise", "luq_trajectory", "luq_map", "centroid", "blob_error",
    "m_descriptor", "m_average", "displacement",
    # sweeps and ridges
    "GridSpec", "LuqField", "LuqMapField", "MField", "BlobField", "DisplacementField",
    "sweep", "RidgeResult", "extract_minimal_ridge", "write_ridge_csv",
    # oracles
    "saddle_solution", "rotated_saddle_solution", "map_solutions",
    "saddle_luq_asymptote", "rotated_luq_asymptote", "map_luq_asymptote",
    "AsymptoteValidityError",
]
