"""Initial data and closed-form solutions used for validation and benchmarks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import Kind, SpectralCoeffs

DEFAULT_THETA = 0.6


@dataclass(frozen=True)
class TravelingWave:
    """Periodic BO soliton ``1 / (c - sqrt(c^2 - 1) cos(x - c t))``."""

    c: float

    def __post_init__(self):
        if not self.c > 1.0:
            raise ValueError(f"traveling wave needs c > 1, got {self.c}")

    @property
    def rho(self) -> float:
        """Geometric decay rate of the Fourier coefficients."""
        return (self.c - 1.0) / np.sqrt(self.c * self.c - 1.0)

    def __call__(self, t, x):
        c = self.c
        return 1.0 / (c - np.sqrt(c * c - 1.0) * np.cos(x - c * t))

    def coeffs(self, t: float, K: int) -> SpectralCoeffs:
        k = np.arange(K)
        return SpectralCoeffs.real_valued(self.rho ** k * np.exp(-1j * k * self.c * t))

    def modes_needed(self, tol: float = 1e-25) -> int:
        """Smallest K whose neglected tail has amplitude below ``tol``."""
        return int(np.ceil(np.log(tol) / np.log(self.rho))) + 1


def traveling_wave_coeffs(c: float, t: float, K: int) -> SpectralCoeffs:
    """``u*hat(t, k) = rho^|k| exp(-i k c t)`` with ``rho = (c-1)/sqrt(c^2-1)``."""
    return TravelingWave(c).coeffs(t, K)


@dataclass(frozen=True)
class RandomDataSpec:
    seed: int
    s: float
    K_ref: int
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if not self.theta > 0.5:
            raise ValueError(f"theta must exceed 1/2, got {self.theta}")
        if self.K_ref < 1:
            raise ValueError(f"K_ref must be positive, got {self.K_ref}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def gaussian_draws(seed: int, K: int) -> np.ndarray:
    """Standard complex draws ``U_k`` for ``k = 0..K-1``.

    Mode ``k`` reads two uniforms from a Philox stream keyed by ``(seed, k)``
    and turns them into a Gaussian pair by Box-Muller, so each mode's draw
    depends only on the seed and its own index. ``U_0 ~ N(0, 1)`` is real and
    ``U_k ~ N(0, 1/2) + i N(0, 1/2)`` otherwise.
    """
    out = np.empty(K, dtype=np.complex128)
    for k in range(K):
        bits = np.random.Philox(key=np.array([seed, k], dtype=np.uint64))
        u1, u2 = np.random.Generator(bits).random(2)
        radius = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 in (0, 1]
        z1 = radius * np.cos(2.0 * np.pi * u2)
        z2 = radius * np.sin(2.0 * np.pi * u2)
        out[k] = z1 if k == 0 else (z1 + 1j * z2) / np.sqrt(2.0)
    return out


def _weighted_draws(spec: RandomDataSpec) -> np.ndarray:
    k = np.arange(spec.K_ref)
    return (1.0 + k) ** (-(spec.s + spec.theta)) * gaussian_draws(spec.seed, spec.K_ref)


def random_initial_data(spec: RandomDataSpec) -> SpectralCoeffs:
    """Real-valued random data of regularity ``s``, unit L2 norm over ``|k| < K_ref``."""
    a = _weighted_draws(spec)
    norm = np.sqrt(abs(a[0]) ** 2 + 2.0 * np.sum(np.abs(a[1:]) ** 2))
    return SpectralCoeffs.real_valued(a / norm)


def hardy_random_data(spec: RandomDataSpec) -> SpectralCoeffs:
    """Hardy-space analogue of :func:`random_initial_data` (no mirrored modes)."""
    a = _weighted_draws(spec)
    return SpectralCoeffs(Kind.HARDY, a / np.linalg.norm(a))


def szego_constant_solution(a: complex, t: float) -> SpectralCoeffs:
    """Constant data solve ``i u' = |u|^2 u``: ``u(t) = a exp(-i t |a|^2)``."""
    a = complex(a)
    return SpectralCoeffs(Kind.HARDY, [a * np.exp(-1j * t * abs(a) ** 2)])
