"""Exact-in-time spectral schemes for Benjamin-Ono, Calogero-Sutherland DNLS and cubic Szego."""

from ._accel import USE_NUMBA, backend_name
from .errors import (
    AliasingError,
    ConfigError,
    DivergenceError,
    KindMismatchError,
    LaxSpecError,
    MassGateError,
    NonConvergenceError,
)
from .hermitian import (
    EigenFactorization,
    HermitianMatrix,
    UnitaryPropagator,
    apply,
    eigendecompose,
    propagator,
)
from .problems import (
    RandomDataSpec,
    TravelingWave,
    hardy_random_data,
    random_initial_data,
    szego_constant_solution,
    traveling_wave_coeffs,
)
from .rk4 import Rk4Config, rhs, rk4_evolve
from .scheme import (
    Equation,
    SchemeMatrices,
    build_matrices,
    conserved_quantities,
    evolve_exact,
    mean_mode_identity,
)
from .spectral import (
    Kind,
    SpectralCoeffs,
    fft_forward,
    fft_inverse,
    from_grid,
    project_truncate,
    sobolev_error,
    sobolev_norm,
    to_grid,
)

__version__ = "0.1.0"
