"""Laguerre-Gaussian angular-radial non-separable states.

Builds LG mode fields (standard and size-matched "revised" waists),
evaluates fiber-weighted mode overlaps, scores CGLMP Bell expressions of
d-dimensional non-separable states, maps separability boundaries, encodes
phase-only holograms and propagates Poisson counting noise.
"""

from .bell import (
    MEASURED_BELL_VALUES,
    VISIBILITY_THRESHOLD,
    CglmpResult,
    ResolutionTooLow,
    SurfaceGrid,
    cglmp_from_tables,
    cglmp_s,
    mes_bound_scan,
    separability_surface,
)
from .holography import (
    AmplitudeOutOfRange,
    GratingUnresolvable,
    Hologram,
    OrderOverlap,
    encode,
    field_correlation,
    reconstruct,
    sinc_inverse,
)
from .lgmodes import (
    BeamGeometry,
    EmptyState,
    GridTooCoarse,
    ModeIndex,
    SampledField,
    beam_radius,
    default_extent,
    effective_waist,
    laguerre_poly,
    lg_field,
    rayleigh_range,
    render_field,
)
from .noise import NoiseConfig, estimate_sigma, poissonize, resample_quantity
from .overlap import (
    DEFAULT_QUADRATURE,
    OverlapMatrix,
    QuadratureConfig,
    QuadratureNotConverged,
    SmfWeight,
    angular_family,
    orthogonality_matrix,
    overlap,
    radial_family,
)
from .states import (
    MAX_DIMENSION,
    ArnsState,
    ConstraintViolated,
    DecompositionDensity,
    DimensionOutOfRange,
    JointProbabilityTable,
    analyzer_phase,
    family_decomposition,
    fringe_intensity,
    fringe_scan,
    fringe_visibility,
    joint_probability,
    make_eps_state,
    make_mes,
    modal_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "ArnsState",
    "AmplitudeOutOfRange",
    "BeamGeometry",
    "CglmpResult",
    "ConstraintViolated",
    "DecompositionDensity",
    "DimensionOutOfRange",
    "DEFAULT_QUADRATURE",
    "EmptyState",
    "GratingUnresolvable",
    "GridTooCoarse",
    "Hologram",
    "JointProbabilityTable",
    "MAX_DIMENSION",
    "MEASURED_BELL_VALUES",
    "ModeIndex",
    "NoiseConfig",
    "OrderOverlap",
    "OverlapMatrix",
    "QuadratureConfig",
    "QuadratureNotConverged",
    "ResolutionTooLow",
    "SampledField",
    "SmfWeight",
    "SurfaceGrid",
    "VISIBILITY_THRESHOLD",
    "analyzer_phase",
    "angular_family",
    "beam_radius",
    "cglmp_from_tables",
    "cglmp_s",
    "default_extent",
    "effective_waist",
    "encode",
    "estimate_sigma",
    "family_decomposition",
    "field_correlation",
    "fringe_intensity",
    "fringe_scan",
    "fringe_visibility",
    "joint_probability",
    "laguerre_poly",
    "lg_field",
    "make_eps_state",
    "make_mes",
    "mes_bound_scan",
    "modal_decomposition",
    "orthogonality_matrix",
    "overlap",
    "poissonize",
    "radial_family",
    "rayleigh_range",
    "reconstruct",
    "render_field",
    "resample_quantity",
    "separability_surface",
    "sinc_inverse",
]
