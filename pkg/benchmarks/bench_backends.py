"""Compare the numba kernels with their pure-numpy fallbacks.

Both variants live side by side in ``laxspec.kernels`` (``*_nb`` and
``*_np``), so one process can time them on identical inputs. Each kernel
is run once to trigger compilation, then timed as the best of several
repeats.

    python3 benchmarks/bench_backends.py [--K 64 256] [--repeats 5]
"""

import argparse
import time

import numpy as np

from laxspec import kernels
from laxspec.problems import traveling_wave_coeffs
from laxspec.rk4 import Rk4Config, grid_size, linear_multiplier
from laxspec.scheme import Equation


def best_of(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(K, rng):
    a = rng.normal(size=(K, K)) + 1j * rng.normal(size=(K, K))
    h = np.ascontiguousarray((a + a.conj().T) / 2)
    d, e, _ = kernels.tridiagonalize_np(h)
    e_real = np.append(np.abs(e), 0.0)
    q, _ = np.linalg.qr(a)
    w0 = rng.normal(size=K) + 1j * rng.normal(size=K)
    u0 = traveling_wave_coeffs(15 / (4 * np.pi), 0.0, K).amps.copy()
    lin = linear_multiplier(Equation.BO, K)
    n = grid_size(Equation.BO, K)
    tau = Rk4Config(K=K, T=1.0).max_step(Equation.BO)
    x = rng.normal(size=4 * K) + 0j

    def run(suffix):
        fft = getattr(kernels, "fft_" + suffix)
        tri = getattr(kernels, "tridiagonalize_" + suffix)
        tql = getattr(kernels, "tql_" + suffix)
        shift = getattr(kernels, "shift_propagate_" + suffix)
        rk4 = getattr(kernels, "rk4_" + suffix)
        return {
            "fft": lambda: fft(x, -1),
            "tridiagonalize": lambda: tri(h),
            "tql": lambda: tql(d.copy(), e_real.copy(), np.eye(K), kernels.QL_MAX_SWEEPS),
            "shift_propagate": lambda: shift(q, w0),
            "rk4 (100 steps)": lambda: rk4(kernels.EQ_BO, u0, lin, n, 0.0, True, tau, 100, 1e8),
        }

    return run("nb"), run("np")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--K", type=int, nargs="+", default=[32, 128, 256])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'K':>6}{'numba [ms]':>14}{'numpy [ms]':>14}{'speedup':>10}")
    for K in args.K:
        nb, npy = cases(K, rng)
        for name in nb:
            t_nb = best_of(nb[name], args.repeats)
            t_np = best_of(npy[name], args.repeats)
            print(f"{name:<18}{K:>6}{t_nb * 1e3:>14.3f}{t_np * 1e3:>14.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
