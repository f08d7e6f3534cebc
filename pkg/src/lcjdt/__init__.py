"""Linear canonical Jacobi-Dunkl transform: kernels, transforms, checks and evolution problems."""
from .jd_core import (
    JacobiParams,
    SampledFunction,
    SpectralFunction,
    SpectralGrid,
    TruncationError,
    jacobi_phi,
    jd_inverse,
    jd_kernel,
    jd_operator_apply,
    jd_transform,
    weight_A,
)
from .spectral import CalibrationRecord, SpatialGridSpec, SpectralGridSpec, calibrate
from .canonical import (
    CanonicalMatrix,
    LcjdtContext,
    convolve_spectral,
    lc_forward,
    lc_forward_grid,
    lc_inverse,
    lc_kernel,
    lc_operator_apply,
    relative_l2,
    uncertainty_ratio,
)
from .pde_app import HeatProblem, HeatSolution, heat_solve, nonhom_solve
from .report import CheckEntry, CheckReport

__version__ = "0.1.0"
