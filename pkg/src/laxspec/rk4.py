"""Fourier pseudo-spectral RK4 comparator.

The state is the same ``K``-mode coefficient vector used by the exact
scheme. Linear terms are diagonal multipliers; nonlinear products are
formed on a uniform grid and projected back onto modes ``0..K-1``.
With ``dealias`` on, the grid is the smallest power of two on which that
projection is exact; otherwise it is the plain ``2K``-point collocation grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DivergenceError
from .scheme import Equation, check_kind
from .spectral import Kind, SpectralCoeffs

BLOWUP = 1e8

_CODES = {
    Equation.BO: kernels.EQ_BO,
    Equation.CS_FOCUSING: kernels.EQ_CS,
    Equation.CS_DEFOCUSING: kernels.EQ_CS,
    Equation.SZEGO: kernels.EQ_SZEGO,
}


def _next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def grid_size(eq: Equation, K: int, dealias: bool = True) -> int:
    """Number of collocation points used for the nonlinear term."""
    if not dealias:
        return _next_pow2(2 * K)
    if eq is Equation.BO:
        # u^2 spans |k| <= 2K-2; aliases must miss 0..K-1
        return _next_pow2(3 * K - 2)
    # |u|^2 u, u dx Pi|u|^2 and |u|^2 all alias cleanly once N >= 2K-1
    return _next_pow2(2 * K - 1)


def linear_multiplier(eq: Equation, K: int) -> np.ndarray:
    k = np.arange(K, dtype=np.float64)
    if eq is Equation.BO:
        return 1j * k * np.abs(k)
    if eq.is_cs:
        return -1j * k * k
    return np.zeros(K, dtype=np.complex128)


@dataclass(frozen=True)
class Rk4Config:
    """Step-size policy: ``tau = C h^2`` (BO, CS) or ``tau = C h`` (Szego).

    ``h = pi / K`` is the spacing of the ``2K``-point grid that carries
    modes ``|k| <= K-1``. The step is then shrunk so that ``T / tau`` is an
    integer.
    """

    K: int
    T: float
    cfl_C: float = 0.25
    dealias: bool = True

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be positive, got {self.K}")
        if not self.T >= 0:
            raise ValueError(f"final time must be non-negative, got {self.T}")
        if not self.cfl_C > 0:
            raise ValueError(f"CFL constant must be positive, got {self.cfl_C}")

    @property
    def h(self) -> float:
        return np.pi / self.K

    def max_step(self, eq: Equation) -> float:
        if eq is Equation.SZEGO:
            return self.cfl_C * self.h
        return self.cfl_C * self.h ** 2

    def steps(self, eq: Equation) -> tuple[int, float]:
        """``(n_steps, tau)`` with ``n_steps * tau == T``."""
        if self.T == 0:
            return 0, 0.0
        n = int(np.ceil(self.T / self.max_step(eq) - 1e-9))
        return n, self.T / n


def rhs(eq, u: SpectralCoeffs, dealias: bool = True, nonlinear: bool = True) -> SpectralCoeffs:
    """Time derivative of ``u`` in Fourier space, truncated to ``u.K`` modes."""
    eq = Equation.parse(eq)
    check_kind(eq, u)
    n = grid_size(eq, u.K, dealias)
    out = kernels.rhs(_CODES[eq], np.array(u.amps), linear_multiplier(eq, u.K),
                      n, float(eq.cs_sign), nonlinear)
    if eq is Equation.BO:
        return SpectralCoeffs.real_valued(out)
    return SpectralCoeffs(Kind.HARDY, out)


def dealiased_product(a: SpectralCoeffs, b: SpectralCoeffs) -> SpectralCoeffs:
    """Modes ``0..K-1`` of the pointwise product ``a b`` (both real-valued)."""
    if a.kind is not Kind.REAL or b.kind is not Kind.REAL:
        raise ValueError("dealiased_product expects real-valued inputs")
    K = max(a.K, b.K)
    n = grid_size(Equation.BO, K, True)
    ga = np.zeros(n, dtype=np.complex128)
    gb = np.zeros(n, dtype=np.complex128)
    for g, f in ((ga, a), (gb, b)):
        g[:f.K] = f.amps
        g[n - f.K + 1:] = np.conj(f.amps[1:][::-1])
    prod = kernels.fft(kernels.fft(ga, 1).real * kernels.fft(gb, 1).real + 0j, -1) / n
    return SpectralCoeffs.real_valued(prod[:K])


def rk4_evolve(eq, u0: SpectralCoeffs, cfg: Rk4Config, nonlinear: bool = True) -> SpectralCoeffs:
    """Integrate from 0 to ``cfg.T`` with classical RK4.

    ``nonlinear=False`` drops the nonlinear term (testing hook).

    Raises
    ------
    DivergenceError
        If some coefficient exceeds 1e8 in modulus.
    """
    eq = Equation.parse(eq)
    check_kind(eq, u0)
    if u0.K != cfg.K:
        raise ValueError(f"data has {u0.K} modes but config asks for {cfg.K}")
    nsteps, tau = cfg.steps(eq)
    if nsteps == 0:
        return u0
    n = grid_size(eq, cfg.K, cfg.dealias)
    u, failed = kernels.rk4(_CODES[eq], np.array(u0.amps), linear_multiplier(eq, cfg.K),
                            n, float(eq.cs_sign), nonlinear, tau, nsteps, BLOWUP)
    if failed >= 0:
        raise DivergenceError(failed, f"RK4 diverged at step {failed} of {nsteps} (tau={tau:.3e})")
    if eq is Equation.BO:
        return SpectralCoeffs.real_valued(u)
    return SpectralCoeffs(Kind.HARDY, u)
