"""Hot numerical kernels.

Every kernel exists twice: a numba version (``*_nb``) written with explicit
loops, and a numpy version (``*_np``) vectorized over the inner dimension.
The public names at the bottom of the module pick one according to
:data:`laxspec._accel.USE_NUMBA`. Both versions are importable directly so
they can be compared against each other (see ``benchmarks/``).
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# Equation codes shared by the RK4 kernels.
EQ_BO = 0
EQ_CS = 1
EQ_SZEGO = 2

QL_MAX_SWEEPS = 50


# --------------------------------------------------------------------------
# radix-2 FFT
# --------------------------------------------------------------------------

def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def twiddles(n: int, sign: int) -> np.ndarray:
    return np.exp(sign * 2j * np.pi * np.arange(n // 2) / n)


@njit
def _fft_inplace_nb(x, tw, rev):
    n = x.shape[0]
    for i in range(n):
        j = rev[i]
        if i < j:
            tmp = x[i]
            x[i] = x[j]
            x[j] = tmp
    m = 1
    while m < n:
        stride = n // (2 * m)
        for start in range(0, n, 2 * m):
            for k in range(m):
                w = tw[k * stride]
                a = x[start + k]
                b = x[start + k + m] * w
                x[start + k] = a + b
                x[start + k + m] = a - b
        m *= 2


@njit
def fft_nb(x, sign):
    """Unnormalized DFT ``sum_j x_j exp(sign*2*pi*i*j*k/n)``."""
    n = x.shape[0]
    out = x.astype(np.complex128)
    tw = np.exp(sign * 2j * np.pi * np.arange(n // 2) / n)
    rev = np.zeros(n, dtype=np.int64)
    bits = 0
    while (1 << bits) < n:
        bits += 1
    for i in range(n):
        r = 0
        v = i
        for _ in range(bits):
            r = (r << 1) | (v & 1)
            v >>= 1
        rev[i] = r
    _fft_inplace_nb(out, tw, rev)
    return out


def fft_np(x, sign):
    """Unnormalized DFT along the last axis, vectorized radix-2."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    lead = x.shape[:-1]
    out = x[..., bit_reversal(n)]
    m = 1
    while m < n:
        w = np.exp(sign * 1j * np.pi * np.arange(m) / m)
        out = out.reshape(lead + (n // (2 * m), 2 * m))
        even = out[..., :m]
        odd = out[..., m:] * w
        out = np.concatenate([even + odd, even - odd], axis=-1)
        m *= 2
    return out.reshape(lead + (n,))


# --------------------------------------------------------------------------
# Hermitian eigensolver: Householder tridiagonalization + implicit QL
# --------------------------------------------------------------------------

@njit
def tridiagonalize_nb(h):
    """Reduce Hermitian ``h`` to tridiagonal form, ``h = Q T Q^H``.

    Returns ``(diag, sub, Q)`` where ``sub[k] = T[k+1, k]`` (complex).
    """
    n = h.shape[0]
    a = h.copy()
    q = np.eye(n, dtype=np.complex128)
    sub = np.zeros(max(n - 1, 0), dtype=np.complex128)
    v = np.zeros(n, dtype=np.complex128)
    w = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        tail = 0.0
        for i in range(k + 2, n):
            tail += a[i, k].real ** 2 + a[i, k].imag ** 2
        x0 = a[k + 1, k]
        if tail == 0.0:
            sub[k] = x0
            continue
        xnorm = np.sqrt(tail + x0.real ** 2 + x0.imag ** 2)
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        alpha = -phase * xnorm
        v[k + 1] = x0 - alpha
        for i in range(k + 2, n):
            v[i] = a[i, k]
        vn = 0.0
        for i in range(k + 1, n):
            vn += v[i].real ** 2 + v[i].imag ** 2
        vn = np.sqrt(vn)
        for i in range(k + 1, n):
            v[i] /= vn
        # w = A v on the trailing block
        for i in range(k + 1, n):
            s = 0.0j
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            w[i] = s
        beta = 0.0
        for i in range(k + 1, n):
            beta += (v[i].conjugate() * w[i]).real
        for i in range(k + 1, n):
            w[i] -= beta * v[i]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i, j] -= 2.0 * (v[i] * w[j].conjugate() + w[i] * v[j].conjugate())
        sub[k] = alpha
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha.conjugate()
        for i in range(k + 2, n):
            a[i, k] = 0.0
            a[k, i] = 0.0
        # Q <- Q (I - 2 v v^H)
        for r in range(n):
            s = 0.0j
            for j in range(k + 1, n):
                s += q[r, j] * v[j]
            for j in range(k + 1, n):
                q[r, j] -= 2.0 * s * v[j].conjugate()
    if n >= 2:
        sub[n - 2] = a[n - 1, n - 2]
    diag = np.empty(n)
    for i in range(n):
        diag[i] = a[i, i].real
    return diag, sub, q


def tridiagonalize_np(h):
    n = h.shape[0]
    a = np.array(h, dtype=np.complex128)
    q = np.eye(n, dtype=np.complex128)
    sub = np.zeros(max(n - 1, 0), dtype=np.complex128)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        tail = np.vdot(x[1:], x[1:]).real
        if tail == 0.0:
            sub[k] = x[0]
            continue
        xnorm = np.sqrt(tail + abs(x[0]) ** 2)
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
        alpha = -phase * xnorm
        v = x
        v[0] -= alpha
        v /= np.linalg.norm(v)
        blk = a[k + 1:, k + 1:]
        w = blk @ v
        beta = np.vdot(v, w).real
        w -= beta * v
        blk -= 2.0 * (np.outer(v, w.conj()) + np.outer(w, v.conj()))
        sub[k] = alpha
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = alpha
        a[k, k + 1] = np.conj(alpha)
        qb = q[:, k + 1:]
        qb -= 2.0 * np.outer(qb @ v, v.conj())
    if n >= 2:
        sub[n - 2] = a[n - 1, n - 2]
    return a.diagonal().real.copy(), sub, q


@njit
def tql_nb(d, e, zt, max_sweeps):
    """Implicit QL with Wilkinson shifts on a real symmetric tridiagonal.

    ``d`` (diagonal) and ``e`` (``e[i]`` couples ``i`` and ``i+1``, length n
    with ``e[n-1] = 0``) are overwritten. Rotations are accumulated into the
    rows of ``zt``. Returns ``-1`` on success, otherwise the index of the
    eigenvalue that failed to converge.
    """
    n = d.shape[0]
    eps = np.finfo(np.float64).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    zf = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * zf
                    zt[i, k] = c * zt[i, k] - s * zf
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def tql_np(d, e, zt, max_sweeps):
    n = d.shape[0]
    eps = np.finfo(np.float64).eps
    hypot = np.hypot
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = zt[i].copy()
                zt[i] = c * zi - s * zt[i + 1]
                zt[i + 1] = s * zi + c * zt[i + 1]
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


# --------------------------------------------------------------------------
# exact scheme: repeated shift + propagate
# --------------------------------------------------------------------------

@njit
def shift_propagate_nb(g, w0):
    """Return ``(out, worst)`` with ``out[k] = (G S*)^k w0 [0]``.

    ``worst`` is the largest ratio ``|w_{k+1}| / |w_k|`` seen along the way.
    """
    n = w0.shape[0]
    out = np.empty(n, dtype=np.complex128)
    w = w0.copy()
    nxt = np.empty(n, dtype=np.complex128)
    out[0] = w[0]
    prev = 0.0
    for i in range(n):
        prev += w[i].real ** 2 + w[i].imag ** 2
    worst = 0.0
    for k in range(1, n):
        for i in range(n):
            s = 0.0j
            for j in range(n - 1):
                s += g[i, j] * w[j + 1]
            nxt[i] = s
        tmp = w
        w = nxt
        nxt = tmp
        out[k] = w[0]
        cur = 0.0
        for i in range(n):
            cur += w[i].real ** 2 + w[i].imag ** 2
        if prev > 0.0:
            ratio = np.sqrt(cur / prev)
            if ratio > worst:
                worst = ratio
        prev = cur
    return out, worst


def shift_propagate_np(g, w0):
    n = w0.shape[0]
    out = np.empty(n, dtype=np.complex128)
    w = np.array(w0, dtype=np.complex128)
    out[0] = w[0]
    gs = np.ascontiguousarray(g[:, :-1])
    prev = np.vdot(w, w).real
    worst = 0.0
    for k in range(1, n):
        w = gs @ w[1:]
        out[k] = w[0]
        cur = np.vdot(w, w).real
        if prev > 0.0:
            worst = max(worst, np.sqrt(cur / prev))
        prev = cur
    return out, worst


# --------------------------------------------------------------------------
# pseudo-spectral right-hand sides and RK4
# --------------------------------------------------------------------------

@njit
def _rhs_nb(eq, u, lin, n, sign, nonlinear, twf, twb, rev):
    kk = u.shape[0]
    out = lin * u
    if not nonlinear:
        return out
    f = np.zeros(n, dtype=np.complex128)
    for k in range(kk):
        f[k] = u[k]
    if eq == EQ_BO:
        for k in range(1, kk):
            f[n - k] = u[k].conjugate()
    _fft_inplace_nb(f, twb, rev)
    if eq == EQ_BO:
        for j in range(n):
            f[j] = f[j].real * f[j].real
        _fft_inplace_nb(f, twf, rev)
        for k in range(kk):
            out[k] += -1j * k * f[k] / n
    elif eq == EQ_SZEGO:
        for j in range(n):
            g = f[j]
            f[j] = (g.real * g.real + g.imag * g.imag) * g
        _fft_inplace_nb(f, twf, rev)
        for k in range(kk):
            out[k] += -1j * f[k] / n
    else:
        m = np.empty(n, dtype=np.complex128)
        for j in range(n):
            g = f[j]
            m[j] = g.real * g.real + g.imag * g.imag
        _fft_inplace_nb(m, twf, rev)
        q = np.zeros(n, dtype=np.complex128)
        for k in range(kk):
            q[k] = 1j * k * m[k] / n
        _fft_inplace_nb(q, twb, rev)
        for j in range(n):
            f[j] = f[j] * q[j]
        _fft_inplace_nb(f, twf, rev)
        for k in range(kk):
            out[k] += 2.0 * sign * f[k] / n
    return out


@njit
def rk4_nb(eq, u0, lin, n, sign, nonlinear, tau, nsteps, blowup):
    """Classical RK4. Returns ``(u, failed_step)``; ``failed_step = -1`` if fine."""
    twf = np.exp(-2j * np.pi * np.arange(n // 2) / n)
    twb = np.exp(2j * np.pi * np.arange(n // 2) / n)
    rev = np.zeros(n, dtype=np.int64)
    bits = 0
    while (1 << bits) < n:
        bits += 1
    for i in range(n):
        r = 0
        v = i
        for _ in range(bits):
            r = (r << 1) | (v & 1)
            v >>= 1
        rev[i] = r
    u = u0.copy()
    half = 0.5 * tau
    for step in range(nsteps):
        k1 = _rhs_nb(eq, u, lin, n, sign, nonlinear, twf, twb, rev)
        k2 = _rhs_nb(eq, u + half * k1, lin, n, sign, nonlinear, twf, twb, rev)
        k3 = _rhs_nb(eq, u + half * k2, lin, n, sign, nonlinear, twf, twb, rev)
        k4 = _rhs_nb(eq, u + tau * k3, lin, n, sign, nonlinear, twf, twb, rev)
        u = u + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if eq == EQ_BO:
            u[0] = u[0].real
        for k in range(u.shape[0]):
            if not abs(u[k]) <= blowup:
                return u, step
    return u, -1


def rhs_np(eq, u, lin, n, sign, nonlinear):
    kk = u.shape[0]
    out = lin * u
    if not nonlinear:
        return out
    f = np.zeros(n, dtype=np.complex128)
    f[:kk] = u
    if eq == EQ_BO:
        f[n - kk + 1:] = np.conj(u[1:][::-1])
    g = fft_np(f, +1)
    ks = np.arange(kk)
    if eq == EQ_BO:
        prod = fft_np(g.real ** 2, -1)[:kk] / n
        out += -1j * ks * prod
    elif eq == EQ_SZEGO:
        prod = fft_np(np.abs(g) ** 2 * g, -1)[:kk] / n
        out += -1j * prod
    else:
        m = fft_np(np.abs(g) ** 2, -1) / n
        q = np.zeros(n, dtype=np.complex128)
        q[:kk] = 1j * ks * m[:kk]
        prod = fft_np(g * fft_np(q, +1), -1)[:kk] / n
        out += 2.0 * sign * prod
    return out


def rk4_np(eq, u0, lin, n, sign, nonlinear, tau, nsteps, blowup):
    u = np.array(u0, dtype=np.complex128)
    half = 0.5 * tau
    for step in range(nsteps):
        k1 = rhs_np(eq, u, lin, n, sign, nonlinear)
        k2 = rhs_np(eq, u + half * k1, lin, n, sign, nonlinear)
        k3 = rhs_np(eq, u + half * k2, lin, n, sign, nonlinear)
        k4 = rhs_np(eq, u + tau * k3, lin, n, sign, nonlinear)
        u = u + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if eq == EQ_BO:
            u[0] = u[0].real
        if not np.all(np.abs(u) <= blowup):
            return u, step
    return u, -1


def rhs_nb(eq, u, lin, n, sign, nonlinear):
    return _rhs_nb(eq, u, lin, n, sign, nonlinear,
                   twiddles(n, -1), twiddles(n, +1), bit_reversal(n))


if USE_NUMBA:
    fft = fft_nb
    tridiagonalize = tridiagonalize_nb
    tql = tql_nb
    # one BLAS matvec per step beats the compiled loop beyond K ~ 64
    shift_propagate = shift_propagate_np
    rhs = rhs_nb
    rk4 = rk4_nb
else:
    fft = fft_np
    tridiagonalize = tridiagonalize_np
    tql = tql_np
    shift_propagate = shift_propagate_np
    rhs = rhs_np
    rk4 = rk4_np
