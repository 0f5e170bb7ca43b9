"""Fourier-side state, projections, Sobolev norms and grid transforms.

Coefficients follow the convention

    f(x) = sum_k  fhat(k) exp(i k x),     fhat(k) = (1/2pi) int f(x) exp(-i k x) dx,

so Parseval reads ``||f||^2 = sum_k |fhat(k)|^2`` with no weights. Only the
non-negative modes ``k = 0..K-1`` are ever stored; for real-valued functions
the negative ones are implied by ``fhat(-k) = conj(fhat(k))`` and for Hardy
functions they vanish.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import AliasingError, KindMismatchError


class Kind(enum.Enum):
    REAL = "RealValued"
    HARDY = "Hardy"


@dataclass(frozen=True, eq=False)
class SpectralCoeffs:
    """Modes ``0..K-1`` of a periodic function with a declared symmetry class.

    The amplitude array is copied and made read-only on construction.
    """

    kind: Kind
    amps: np.ndarray

    def __post_init__(self):
        kind = Kind(self.kind)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size == 0:
            raise ValueError("need at least one mode")
        if not np.all(np.isfinite(amps)):
            raise ValueError("coefficients must be finite")
        if kind is Kind.REAL and amps[0].imag != 0.0:
            raise KindMismatchError(
                "mean mode of a real-valued function must be real "
                f"(got imaginary part {amps[0].imag!r})"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def real_valued(cls, amps) -> "SpectralCoeffs":
        """Build a real-valued state, discarding any imaginary part of mode 0."""
        amps = np.array(amps, dtype=np.complex128).reshape(-1)
        amps[0] = amps[0].real
        return cls(Kind.REAL, amps)

    @classmethod
    def hardy(cls, amps) -> "SpectralCoeffs":
        return cls(Kind.HARDY, amps)

    @classmethod
    def zeros(cls, kind, K: int) -> "SpectralCoeffs":
        return cls(Kind(kind), np.zeros(K, dtype=np.complex128))

    @property
    def K(self) -> int:
        return self.amps.shape[0]

    def with_amps(self, amps) -> "SpectralCoeffs":
        if self.kind is Kind.REAL:
            return SpectralCoeffs.real_valued(amps)
        return SpectralCoeffs(self.kind, amps)

    def scaled(self, factor: float) -> "SpectralCoeffs":
        if self.kind is Kind.REAL and np.iscomplexobj(factor) and np.imag(factor) != 0:
            raise KindMismatchError("complex scaling does not preserve real-valuedness")
        return self.with_amps(self.amps * factor)

    def full_spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(k, fhat(k))`` over every non-zero-by-symmetry mode."""
        if self.kind is Kind.HARDY:
            return np.arange(self.K), self.amps.copy()
        k = np.arange(-(self.K - 1), self.K)
        vals = np.concatenate([np.conj(self.amps[1:][::-1]), self.amps])
        return k, vals

    def __repr__(self):
        return f"SpectralCoeffs(kind={self.kind.value}, K={self.K})"


def _weighted_sq(kind: Kind, amps: np.ndarray, r: float) -> float:
    k = np.arange(amps.shape[0], dtype=np.float64)
    terms = (1.0 + k * k) ** r * np.abs(amps) ** 2
    if kind is Kind.REAL:
        return float(terms[0] + 2.0 * terms[1:].sum())
    return float(terms.sum())


def _check_r(r: float) -> float:
    r = float(r)
    if not r >= 0.0:
        raise ValueError(f"Sobolev index must be non-negative, got {r}")
    return r


def project_truncate(f: SpectralCoeffs, K: int) -> SpectralCoeffs:
    """Keep modes ``0..K-1`` of ``f``; zero-pad if ``K > f.K``."""
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    out = np.zeros(K, dtype=np.complex128)
    n = min(K, f.K)
    out[:n] = f.amps[:n]
    return SpectralCoeffs(f.kind, out)


def sobolev_norm(f: SpectralCoeffs, r: float = 0.0) -> float:
    """``(sum_{k in Z} (1+k^2)^r |fhat(k)|^2)^(1/2)``, negative modes included."""
    return float(np.sqrt(_weighted_sq(f.kind, f.amps, _check_r(r))))


def sobolev_error(a: SpectralCoeffs, b: SpectralCoeffs, r: float = 0.0) -> float:
    """H^r distance between two states of the same kind, zero-padding the shorter."""
    if a.kind is not b.kind:
        raise KindMismatchError(
            f"cannot compare {a.kind.value} and {b.kind.value} coefficients"
        )
    n = max(a.K, b.K)
    diff = np.zeros(n, dtype=np.complex128)
    diff[:a.K] += a.amps
    diff[:b.K] -= b.amps
    return float(np.sqrt(_weighted_sq(a.kind, diff, _check_r(r))))


def _check_pow2(n: int):
    if not kernels.is_power_of_two(n):
        raise AliasingError(f"transform length must be a power of two, got {n}")


def fft_forward(values) -> np.ndarray:
    """``fhat(k) = (1/N) sum_j f_j exp(-i k x_j)`` on ``x_j = 2 pi j / N``.

    Index ``k`` holds frequency ``k`` for ``k < N/2`` and ``k - N`` above.
    """
    values = np.asarray(values, dtype=np.complex128)
    n = values.shape[-1]
    _check_pow2(n)
    return kernels.fft(values, -1) / n


def fft_inverse(coeffs) -> np.ndarray:
    """Inverse of :func:`fft_forward`: ``f_j = sum_k fhat(k) exp(i k x_j)``."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    _check_pow2(coeffs.shape[-1])
    return kernels.fft(coeffs, +1)


def grid(N: int) -> np.ndarray:
    """Uniform grid ``x_j = -pi + 2 pi j / N``."""
    return -np.pi + 2.0 * np.pi * np.arange(N) / N


def _check_grid(K: int, N: int):
    _check_pow2(N)
    if N < 2 * K:
        raise AliasingError(f"grid of {N} points aliases {K} modes (need N >= {2 * K})")


def to_grid(f: SpectralCoeffs, N: int) -> np.ndarray:
    """Samples of ``f`` on :func:`grid` ``(N)``; real array for real-valued ``f``."""
    _check_grid(f.K, N)
    k = np.arange(f.K)
    # grid starts at -pi: shift by exp(-i k pi) = (-1)^k
    shifted = f.amps * np.where(k % 2 == 0, 1.0, -1.0)
    spec = np.zeros(N, dtype=np.complex128)
    spec[:f.K] = shifted
    if f.kind is Kind.REAL:
        spec[N - f.K + 1:] = np.conj(shifted[1:][::-1])
        return fft_inverse(spec).real
    return fft_inverse(spec)


def from_grid(samples, kind, K: int) -> SpectralCoeffs:
    """Recover modes ``0..K-1`` from samples on :func:`grid` ``(N)``."""
    samples = np.asarray(samples)
    N = samples.shape[0]
    _check_grid(K, N)
    spec = fft_forward(samples)[:K]
    k = np.arange(K)
    spec *= np.where(k % 2 == 0, 1.0, -1.0)
    kind = Kind(kind)
    if kind is Kind.REAL:
        return SpectralCoeffs.real_valued(spec)
    return SpectralCoeffs(kind, spec)


# --------------------------------------------------------------------------
# coefficient files
# --------------------------------------------------------------------------

def dumps_coeffs(f: SpectralCoeffs) -> str:
    buf = io.StringIO()
    buf.write(f"# kind={f.kind.value} K={f.K}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "re", "im"])
    for k, a in enumerate(f.amps):
        w.writerow([k, format(a.real, ".17g"), format(a.imag, ".17g")])
    return buf.getvalue()


def loads_coeffs(text: str) -> SpectralCoeffs:
    kind = None
    K = None
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "kind":
                    kind = Kind(val)
                elif key == "K":
                    K = int(val)
            continue
        rows.append(line)
    if kind is None or K is None:
        raise ValueError("coefficient file lacks '# kind=... K=...' metadata line")
    reader = csv.DictReader(rows)
    if reader.fieldnames != ["k", "re", "im"]:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    amps = np.zeros(K, dtype=np.complex128)
    seen = set()
    for row in reader:
        k = int(row["k"])
        if not 0 <= k < K:
            raise ValueError(f"mode {k} outside 0..{K - 1}")
        amps[k] = complex(float(row["re"]), float(row["im"]))
        seen.add(k)
    if len(seen) != K:
        raise ValueError(f"expected {K} rows, got {len(seen)}")
    return SpectralCoeffs(kind, amps)


def save_coeffs(f: SpectralCoeffs, path) -> None:
    Path(path).write_text(dumps_coeffs(f))


def load_coeffs(path) -> SpectralCoeffs:
    return loads_coeffs(Path(path).read_text())
