"""Exact-in-time spectral schemes for Benjamin-Ono, Calogero-Sutherland DNLS and cubic Szego.

All three are evaluated through

    u_K(t, k) = e0 . (exp(-itM) exp(itA) S*)^k exp(-itM) u0,   k = 0..K-1,

with K x K Hermitian matrices ``A`` and ``M`` built from the first K Fourier
modes of the initial datum. The cost is one (BO, CS) or two (Szego)
eigendecompositions followed by K shift/propagate steps, so O(K^3)
regardless of ``t``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import KindMismatchError, MassGateError
from .hermitian import HermitianMatrix, eigendecompose, propagator
from .spectral import Kind, SpectralCoeffs, project_truncate, sobolev_norm

MASS_GATE_SLACK = 1e-12


class Equation(enum.Enum):
    BO = "BO"
    CS_FOCUSING = "CS-focusing"
    CS_DEFOCUSING = "CS-defocusing"
    SZEGO = "Szego"

    @property
    def is_cs(self) -> bool:
        return self in (Equation.CS_FOCUSING, Equation.CS_DEFOCUSING)

    @property
    def cs_sign(self) -> int:
        """+1 focusing, -1 defocusing; 0 for non-CS equations."""
        if self is Equation.CS_FOCUSING:
            return 1
        if self is Equation.CS_DEFOCUSING:
            return -1
        return 0

    @property
    def kind(self) -> Kind:
        return Kind.REAL if self is Equation.BO else Kind.HARDY

    @classmethod
    def parse(cls, name) -> "Equation":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-").replace("ő", "o")
        aliases = {
            "bo": cls.BO,
            "benjamin-ono": cls.BO,
            "cs-focusing": cls.CS_FOCUSING,
            "cs+": cls.CS_FOCUSING,
            "cs-defocusing": cls.CS_DEFOCUSING,
            "cs-": cls.CS_DEFOCUSING,
            "szego": cls.SZEGO,
            "s": cls.SZEGO,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown equation {name!r}") from None


@dataclass(frozen=True, eq=False)
class SchemeMatrices:
    equation: Equation
    A: HermitianMatrix
    M: HermitianMatrix


def check_kind(eq: Equation, u0: SpectralCoeffs) -> None:
    if u0.kind is not eq.kind:
        raise KindMismatchError(
            f"{eq.value} needs {eq.kind.value} data, got {u0.kind.value}"
        )


def toeplitz(u0: SpectralCoeffs, K: int) -> np.ndarray:
    """``T[k, l] = u0hat(k - l)``; negative arguments by conjugation (real) or zero (Hardy)."""
    a = project_truncate(u0, K).amps
    diff = np.subtract.outer(np.arange(K), np.arange(K))
    T = np.where(diff >= 0, a[np.abs(diff)], 0.0)
    if u0.kind is Kind.REAL:
        T = T + np.where(diff < 0, np.conj(a[np.abs(diff)]), 0.0)
    return T


def hankel(u0: SpectralCoeffs, K: int) -> np.ndarray:
    """``H[k, l] = u0hat(k + l)``, zero once ``k + l >= K``."""
    a = project_truncate(u0, K).amps
    total = np.add.outer(np.arange(K), np.arange(K))
    padded = np.concatenate([a, np.zeros(K, dtype=np.complex128)])
    return padded[total]


def build_matrices(eq, u0: SpectralCoeffs, K: int) -> SchemeMatrices:
    eq = Equation.parse(eq)
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    check_kind(eq, u0)
    D = np.diag(np.arange(K, dtype=np.float64))
    eye = np.eye(K)
    if eq is Equation.BO:
        A = eye + 2.0 * D - 2.0 * toeplitz(u0, K)
        M = None
    elif eq.is_cs:
        T = toeplitz(u0, K)
        A = -eye - 2.0 * D + 2.0 * eq.cs_sign * (T @ T.conj().T)
        M = None
    else:
        H = hankel(u0, K)
        u = project_truncate(u0, K).amps
        M = H @ H.conj().T
        A = M - np.outer(u, u.conj())
    A = HermitianMatrix(A)
    M = HermitianMatrix.zeros(K) if M is None else HermitianMatrix(M)
    return SchemeMatrices(eq, A, M)


def check_mass(eq: Equation, u0: SpectralCoeffs) -> None:
    if eq is Equation.CS_FOCUSING:
        mass = sobolev_norm(u0, 0.0)
        if mass >= 1.0 - MASS_GATE_SLACK:
            raise MassGateError(
                f"focusing CS is only solved for ||u0||_L2 < 1 "
                f"(global well-posedness regime); got {mass:.15g}"
            )


def evolution_operator(mats: SchemeMatrices, t: float, backend=None):
    """Return ``(G, PM)`` with ``G = exp(-itM) exp(itA)`` and ``PM = exp(-itM)``.

    ``PM`` is ``None`` when ``M = 0``.
    """
    PA = propagator(eigendecompose(mats.A, backend), t, +1).matrix()
    if mats.M.is_zero():
        return PA, None
    PM = propagator(eigendecompose(mats.M, backend), t, -1).matrix()
    return PM @ PA, PM


def evolve_exact(eq, u0: SpectralCoeffs, K: int, t: float, backend=None) -> SpectralCoeffs:
    """Solution at time ``t`` from the first ``K`` modes of ``u0``.

    Output kind follows the equation: real-valued for BO, Hardy for CS and
    Szego.

    Raises
    ------
    KindMismatchError
        Data kind does not match the equation.
    MassGateError
        Focusing CS with ``||u0||_L2 >= 1``.
    """
    eq = Equation.parse(eq)
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    check_kind(eq, u0)
    check_mass(eq, u0)
    w0 = project_truncate(u0, K).amps.copy()
    if t == 0.0:
        return SpectralCoeffs(u0.kind, w0)
    mats = build_matrices(eq, u0, K)
    G, PM = evolution_operator(mats, t, backend)
    if PM is not None:
        w0 = PM @ w0
    out, worst = kernels.shift_propagate(np.ascontiguousarray(G), w0)
    # S* is a contraction and G is unitary
    assert worst <= 1.0 + 1e-10, f"norm grew along the iteration (ratio {worst})"
    if eq is Equation.BO:
        return SpectralCoeffs.real_valued(out)
    return SpectralCoeffs(Kind.HARDY, out)


def mean_mode_identity(u0: SpectralCoeffs, K: int, t: float) -> complex:
    """BO diagnostic: mode 0 of the scheme, which must equal ``u0hat(0)``."""
    return complex(evolve_exact(Equation.BO, u0, K, t).amps[0])


def conserved_quantities(u: SpectralCoeffs, K: int | None = None, orders=(0, 1, 2)) -> list[float]:
    """BO discrete invariants ``<(D - T_u)^n Pi u, Pi u>`` on ``K`` modes."""
    if u.kind is not Kind.REAL:
        raise KindMismatchError("BO invariants need real-valued data")
    K = u.K if K is None else K
    L = np.diag(np.arange(K, dtype=np.float64)) - toeplitz(u, K)
    v = project_truncate(u, K).amps
    out = []
    for n in orders:
        w = np.linalg.matrix_power(L, n) @ v
        out.append(float(np.vdot(v, w).real))
    return out
