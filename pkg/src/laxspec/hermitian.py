"""Dense Hermitian eigendecomposition and unitary propagators.

The default backend reduces the matrix to complex tridiagonal form with
Householder reflections, rotates the off-diagonal to be real with a diagonal
phase matrix, and finishes with implicit QL (Wilkinson shifts). A LAPACK
backend (``numpy.linalg.eigh``) can be plugged in through
:func:`register_backend` / ``LAXSPEC_EIG_BACKEND``; both must satisfy the same
residual and orthonormality contract.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import NonConvergenceError


class HermitianMatrix:
    """A K x K Hermitian matrix, exact by construction.

    Only the lower triangle (and the real part of the diagonal) of the input
    is read; the upper triangle is its mirror.
    """

    __slots__ = ("_lower",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        low = np.tril(a, -1)
        low[np.diag_indices_from(low)] = a.diagonal().real
        low.flags.writeable = False
        self._lower = low

    @classmethod
    def zeros(cls, K: int) -> "HermitianMatrix":
        return cls(np.zeros((K, K)))

    @property
    def K(self) -> int:
        return self._lower.shape[0]

    def dense(self) -> np.ndarray:
        low = self._lower
        return low + np.tril(low, -1).conj().T

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.dense()))

    def is_zero(self) -> bool:
        return not np.any(self._lower)

    def __getitem__(self, idx):
        i, j = idx
        return self._lower[i, j] if i >= j else np.conj(self._lower[j, i])

    def __repr__(self):
        return f"HermitianMatrix(K={self.K})"


@dataclass(frozen=True, eq=False)
class EigenFactorization:
    """``H = U diag(lambdas) U^H`` with ``lambdas`` ascending."""

    lambdas: np.ndarray
    U: np.ndarray

    @property
    def K(self) -> int:
        return self.lambdas.shape[0]

    def residual(self, H: HermitianMatrix) -> float:
        h = H.dense()
        return float(np.linalg.norm(h @ self.U - self.U * self.lambdas))

    def orthonormality(self) -> float:
        return float(np.linalg.norm(self.U.conj().T @ self.U - np.eye(self.K)))


def _householder_ql(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = h.shape[0]
    diag, sub, q = kernels.tridiagonalize(np.ascontiguousarray(h))
    # diagonal phases making the subdiagonal real and non-negative
    phase = np.ones(n, dtype=np.complex128)
    e = np.zeros(n)
    for k in range(n - 1):
        mag = abs(sub[k])
        e[k] = mag
        phase[k + 1] = phase[k] * (sub[k] / mag if mag > 0.0 else 1.0)
    d = diag.copy()
    zt = np.eye(n)
    failed = kernels.tql(d, e, zt, kernels.QL_MAX_SWEEPS)
    if failed >= 0:
        raise NonConvergenceError(n, float(np.max(np.abs(e))))
    U = (q * phase) @ zt.T
    return d, U


def _lapack(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.linalg.eigh(h)


_BACKENDS: dict[str, Callable] = {
    "householder-ql": _householder_ql,
    "lapack": _lapack,
}


def register_backend(name: str, solver: Callable) -> None:
    """Add an eigensolver ``solver(dense_hermitian) -> (lambdas, U)``."""
    _BACKENDS[name] = solver


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def default_backend() -> str:
    return os.environ.get("LAXSPEC_EIG_BACKEND", "householder-ql")


def eigendecompose(H: HermitianMatrix, backend: str | None = None) -> EigenFactorization:
    """Eigenvalues (ascending) and orthonormal eigenvectors of ``H``.

    Raises
    ------
    NonConvergenceError
        If some eigenvalue needs more than 50 QL sweeps.
    """
    if H.K < 1:
        raise ValueError("empty matrix")
    name = backend or default_backend()
    try:
        solver = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown eigensolver backend {name!r}") from None
    lam, U = solver(H.dense())
    lam = np.asarray(lam, dtype=np.float64)
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    U = np.ascontiguousarray(np.asarray(U, dtype=np.complex128)[:, order])
    lam.flags.writeable = False
    U.flags.writeable = False
    return EigenFactorization(lam, U)


@dataclass(frozen=True, eq=False)
class UnitaryPropagator:
    """Lazy ``exp(sign * i * t * H) = U diag(exp(sign*i*t*lambda)) U^H``."""

    factorization: EigenFactorization
    t: float
    sign: int
    phases: np.ndarray

    @property
    def K(self) -> int:
        return self.factorization.K

    def matrix(self) -> np.ndarray:
        """Materialize the K x K unitary (one O(K^3) product)."""
        U = self.factorization.U
        return (U * self.phases) @ U.conj().T


def propagator(fac: EigenFactorization, t: float, sign: int = 1) -> UnitaryPropagator:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    phases = np.exp(sign * 1j * float(t) * fac.lambdas)
    phases.flags.writeable = False
    return UnitaryPropagator(fac, float(t), sign, phases)


def apply(p: UnitaryPropagator, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (p.K,):
        raise ValueError(f"vector of shape {v.shape} does not match propagator of size {p.K}")
    U = p.factorization.U
    return U @ (p.phases * (U.conj().T @ v))
