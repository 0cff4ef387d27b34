"""fracchemo: pseudo-spectral fractional Keller-Segel simulator and bound-audit harness."""

from .errors import (
    ConfigError,
    ContractionError,
    FracChemoError,
    NumericError,
    ParameterError,
)
from .grid import (
    Field,
    Grid,
    Spectrum,
    boundary_mass_fraction,
    field_from_function,
    field_from_values,
    forward,
    integrate,
    inverse,
    make_grid,
)
from .operators import (
    FlowSpec,
    ModelParams,
    chemo_identity_residual,
    frac_laplacian,
    grad_inv_laplacian,
    rhs,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ContractionError",
    "Field",
    "FlowSpec",
    "FracChemoError",
    "Grid",
    "ModelParams",
    "NumericError",
    "ParameterError",
    "Spectrum",
    "boundary_mass_fraction",
    "chemo_identity_residual",
    "field_from_function",
    "field_from_values",
    "forward",
    "frac_laplacian",
    "grad_inv_laplacian",
    "integrate",
    "inverse",
    "make_grid",
    "rhs",
    "__version__",
]
