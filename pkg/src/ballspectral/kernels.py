"""Hot evaluation kernels for the disk and ball bases.

Every kernel exists twice: a loop-per-point version compiled with numba
(``*_jit``) and a version vectorized over points in plain numpy
(``*_numpy``). ``ridge_basis`` and ``ball_basis`` dispatch according to
``ballspectral._accel.USE_JIT``. Both paths implement the same recurrences
and must agree to roundoff; the test-suite checks this.
"""

import math

import numpy as np

from ._accel import USE_JIT, njit

# ---------------------------------------------------------------------------
# Disk: ridge polynomials  U_m(x cos a + y sin a) / sqrt(pi)
# ---------------------------------------------------------------------------

_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def ridge_tables(n):
    """Degree and direction cosines of every ridge member of Pi_n, in basis order."""
    deg, cs, sn = [], [], []
    for m in range(n + 1):
        h = math.pi / (m + 1)
        for k in range(m + 1):
            deg.append(m)
            cs.append(math.cos(k * h))
            sn.append(math.sin(k * h))
    return np.array(deg, dtype=np.int64), np.array(cs), np.array(sn)


@njit
def _ridge_jit(pts, deg, cs, sn):
    npts = pts.shape[0]
    nb = deg.shape[0]
    vals = np.empty((npts, nb))
    grads = np.empty((npts, nb, 2))
    for p in range(npts):
        x = pts[p, 0]
        y = pts[p, 1]
        for b in range(nb):
            m = deg[b]
            t = x * cs[b] + y * sn[b]
            u_prev, u = 0.0, 1.0
            du_prev, du = 0.0, 0.0
            for _ in range(m):
                u_next = 2.0 * t * u - u_prev
                du_next = 2.0 * u + 2.0 * t * du - du_prev
                u_prev, u = u, u_next
                du_prev, du = du, du_next
            vals[p, b] = u * _INV_SQRT_PI
            g = du * _INV_SQRT_PI
            grads[p, b, 0] = g * cs[b]
            grads[p, b, 1] = g * sn[b]
    return vals, grads


def _ridge_numpy(pts, deg, cs, sn):
    pts = np.asarray(pts, dtype=float)
    npts = pts.shape[0]
    nb = deg.shape[0]
    vals = np.empty((npts, nb))
    grads = np.empty((npts, nb, 2))
    start = 0
    m = 0
    while start < nb:
        stop = start + m + 1
        c, s = cs[start:stop], sn[start:stop]
        t = pts[:, :1] * c + pts[:, 1:2] * s
        u_prev = np.zeros_like(t)
        u = np.ones_like(t)
        du_prev = np.zeros_like(t)
        du = np.zeros_like(t)
        for _ in range(m):
            u_next = 2.0 * t * u - u_prev
            du_next = 2.0 * u + 2.0 * t * du - du_prev
            u_prev, u = u, u_next
            du_prev, du = du, du_next
        vals[:, start:stop] = u * _INV_SQRT_PI
        grads[:, start:stop, 0] = du * (c * _INV_SQRT_PI)
        grads[:, start:stop, 1] = du * (s * _INV_SQRT_PI)
        start = stop
        m += 1
    return vals, grads


# ---------------------------------------------------------------------------
# Ball: c_l * p_j^{(0, l+1/2)}(2|x|^2 - 1) * Y_{l,beta}(x)
#
# Y_{l,beta} are real solid harmonics |x|^l S_{beta,l}(x/|x|), built in
# Cartesian form so that values and gradients are polynomial (no x/|x|).
# Slot beta within degree l: 0 -> order 0, 1..l -> cos(order*phi),
# l+1..2l -> sin((beta-l)*phi). Flat slot offset of degree l is l*l.
# ---------------------------------------------------------------------------


def solid_harmonic_norms(L):
    """Orthonormalizing factors N[l, m] for the Condon-Shortley-free real basis."""
    norms = np.zeros((L + 1, L + 1))
    for l in range(L + 1):
        for m in range(l + 1):
            logf = math.lgamma(l - m + 1) - math.lgamma(l + m + 1)
            val = math.sqrt((2 * l + 1) / (4.0 * math.pi) * math.exp(logf))
            norms[l, m] = val * (math.sqrt(2.0) if m > 0 else 1.0)
    return norms


def jacobi_norms(n):
    """1/sqrt(h_j) for P_j^{(0, l+1/2)}, indexed [l, j], all l + 2j <= n."""
    # with alpha = 0 the gamma ratios cancel: h_j = 2^{b+1} / (2j + b + 1)
    out = np.zeros((n + 1, n // 2 + 1))
    for l in range(n + 1):
        b = l + 0.5
        for j in range((n - l) // 2 + 1):
            out[l, j] = math.sqrt((2 * j + b + 1.0) / 2.0 ** (b + 1.0))
    return out


def ball_tables(n):
    """Per-member (l, j, flat harmonic slot) arrays in basis order."""
    ls, js, slots = [], [], []
    for m in range(n + 1):
        for j in range(m // 2 + 1):
            l = m - 2 * j
            for beta in range(2 * l + 1):
                ls.append(l)
                js.append(j)
                slots.append(l * l + beta)
    return (
        np.array(ls, dtype=np.int64),
        np.array(js, dtype=np.int64),
        np.array(slots, dtype=np.int64),
    )


@njit
def _double_factorial_odd(m):
    # (2m-1)!!, with (-1)!! = 1
    out = 1.0
    for i in range(1, m + 1):
        out *= 2.0 * i - 1.0
    return out


@njit
def _solid_harmonics_point(x, y, z, L, shn, Y, dY, A, dA, C, S):
    r2 = x * x + y * y + z * z
    C[0] = 1.0
    S[0] = 0.0
    for m in range(1, L + 1):
        C[m] = x * C[m - 1] - y * S[m - 1]
        S[m] = x * S[m - 1] + y * C[m - 1]
    for m in range(L + 1):
        A[m, m] = _double_factorial_odd(m)
        dA[m, m, 0] = 0.0
        dA[m, m, 1] = 0.0
        dA[m, m, 2] = 0.0
        if m + 1 <= L:
            A[m + 1, m] = (2 * m + 1) * z * A[m, m]
            dA[m + 1, m, 0] = 0.0
            dA[m + 1, m, 1] = 0.0
            dA[m + 1, m, 2] = (2 * m + 1) * A[m, m]
        for l in range(m + 2, L + 1):
            c1 = 2.0 * l - 1.0
            c2 = l + m - 1.0
            inv = 1.0 / (l - m)
            A[l, m] = (c1 * z * A[l - 1, m] - c2 * r2 * A[l - 2, m]) * inv
            dA[l, m, 0] = (c1 * z * dA[l - 1, m, 0] - c2 * (2.0 * x * A[l - 2, m] + r2 * dA[l - 2, m, 0])) * inv
            dA[l, m, 1] = (c1 * z * dA[l - 1, m, 1] - c2 * (2.0 * y * A[l - 2, m] + r2 * dA[l - 2, m, 1])) * inv
            dA[l, m, 2] = (c1 * (A[l - 1, m] + z * dA[l - 1, m, 2]) - c2 * (2.0 * z * A[l - 2, m] + r2 * dA[l - 2, m, 2])) * inv
    for l in range(L + 1):
        base = l * l
        nrm = shn[l, 0]
        Y[base] = nrm * A[l, 0]
        dY[base, 0] = nrm * dA[l, 0, 0]
        dY[base, 1] = nrm * dA[l, 0, 1]
        dY[base, 2] = nrm * dA[l, 0, 2]
        for m in range(1, l + 1):
            nrm = shn[l, m]
            a = A[l, m]
            # d/dx (x+iy)^m = m (x+iy)^{m-1}, d/dy = i m (x+iy)^{m-1}
            cx = m * C[m - 1]
            cy = -m * S[m - 1]
            sx = m * S[m - 1]
            sy = m * C[m - 1]
            ic = base + m
            Y[ic] = nrm * a * C[m]
            dY[ic, 0] = nrm * (dA[l, m, 0] * C[m] + a * cx)
            dY[ic, 1] = nrm * (dA[l, m, 1] * C[m] + a * cy)
            dY[ic, 2] = nrm * dA[l, m, 2] * C[m]
            js = base + l + m
            Y[js] = nrm * a * S[m]
            dY[js, 0] = nrm * (dA[l, m, 0] * S[m] + a * sx)
            dY[js, 1] = nrm * (dA[l, m, 1] * S[m] + a * sy)
            dY[js, 2] = nrm * dA[l, m, 2] * S[m]


@njit
def _jacobi_point(t, n, jn, Pj, dPj):
    # Normalized P_j^{(0, l+1/2)}(t) and d/dt, for all l + 2j <= n.
    for l in range(n + 1):
        b = l + 0.5
        jmax = (n - l) // 2
        p_prev, p = 0.0, 1.0
        dp_prev, dp = 0.0, 0.0
        Pj[l, 0] = jn[l, 0]
        dPj[l, 0] = 0.0
        if jmax >= 1:
            p_prev, p = p, 1.0 + (b + 2.0) * (t - 1.0) * 0.5
            dp_prev, dp = dp, (b + 2.0) * 0.5
            Pj[l, 1] = p * jn[l, 1]
            dPj[l, 1] = dp * jn[l, 1]
        for j in range(2, jmax + 1):
            s = 2.0 * j + b
            a1 = 2.0 * j * (j + b) * (s - 2.0)
            a2 = -(s - 1.0) * b * b
            a3 = (s - 1.0) * s * (s - 2.0)
            a4 = 2.0 * (j - 1.0) * (j + b - 1.0) * s
            p_next = ((a2 + a3 * t) * p - a4 * p_prev) / a1
            dp_next = (a3 * p + (a2 + a3 * t) * dp - a4 * dp_prev) / a1
            p_prev, p = p, p_next
            dp_prev, dp = dp, dp_next
            Pj[l, j] = p * jn[l, j]
            dPj[l, j] = dp * jn[l, j]


@njit
def _ball_jit(pts, n, ls, js, slots, shn, jn, cl):
    npts = pts.shape[0]
    nb = ls.shape[0]
    vals = np.empty((npts, nb))
    grads = np.empty((npts, nb, 3))
    nh = (n + 1) * (n + 1)
    Y = np.empty(nh)
    dY = np.empty((nh, 3))
    A = np.zeros((n + 1, n + 1))
    dA = np.zeros((n + 1, n + 1, 3))
    C = np.empty(n + 1)
    S = np.empty(n + 1)
    Pj = np.zeros((n + 1, n // 2 + 1))
    dPj = np.zeros((n + 1, n // 2 + 1))
    for p in range(npts):
        x = pts[p, 0]
        y = pts[p, 1]
        z = pts[p, 2]
        _solid_harmonics_point(x, y, z, n, shn, Y, dY, A, dA, C, S)
        t = 2.0 * (x * x + y * y + z * z) - 1.0
        _jacobi_point(t, n, jn, Pj, dPj)
        for b in range(nb):
            l = ls[b]
            j = js[b]
            k = slots[b]
            c = cl[l]
            pv = Pj[l, j]
            dpv = 4.0 * dPj[l, j]
            yv = Y[k]
            vals[p, b] = c * pv * yv
            grads[p, b, 0] = c * (dpv * x * yv + pv * dY[k, 0])
            grads[p, b, 1] = c * (dpv * y * yv + pv * dY[k, 1])
            grads[p, b, 2] = c * (dpv * z * yv + pv * dY[k, 2])
    return vals, grads


def _solid_harmonics_numpy(pts, L, shn):
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    npts = pts.shape[0]
    r2 = x * x + y * y + z * z
    zero = np.zeros(npts)
    C = [np.ones(npts)]
    S = [zero.copy()]
    for m in range(1, L + 1):
        C.append(x * C[m - 1] - y * S[m - 1])
        S.append(x * S[m - 1] + y * C[m - 1])
    e = np.eye(3)
    Y = np.empty((npts, (L + 1) ** 2))
    dY = np.empty((npts, (L + 1) ** 2, 3))
    for m in range(L + 1):
        # column m of the A table, as lists over l = m..L
        A = {m: np.full(npts, _double_factorial_odd_py(m))}
        dA = {m: np.zeros((npts, 3))}
        if m + 1 <= L:
            A[m + 1] = (2 * m + 1) * z * A[m]
            dA[m + 1] = np.outer(A[m], (2 * m + 1) * e[2])
        for l in range(m + 2, L + 1):
            c1, c2, inv = 2.0 * l - 1.0, l + m - 1.0, 1.0 / (l - m)
            A[l] = (c1 * z * A[l - 1] - c2 * r2 * A[l - 2]) * inv
            dA[l] = (
                c1 * (np.outer(A[l - 1], e[2]) + z[:, None] * dA[l - 1])
                - c2 * (2.0 * pts * A[l - 2][:, None] + r2[:, None] * dA[l - 2])
            ) * inv
        for l in range(m, L + 1):
            nrm = shn[l, m]
            base = l * l
            if m == 0:
                Y[:, base] = nrm * A[l]
                dY[:, base] = nrm * dA[l]
                continue
            dC = np.stack([m * C[m - 1], -m * S[m - 1], zero], axis=1)
            dS = np.stack([m * S[m - 1], m * C[m - 1], zero], axis=1)
            Y[:, base + m] = nrm * A[l] * C[m]
            dY[:, base + m] = nrm * (dA[l] * C[m][:, None] + A[l][:, None] * dC)
            Y[:, base + l + m] = nrm * A[l] * S[m]
            dY[:, base + l + m] = nrm * (dA[l] * S[m][:, None] + A[l][:, None] * dS)
    return Y, dY


def _double_factorial_odd_py(m):
    out = 1.0
    for i in range(1, m + 1):
        out *= 2.0 * i - 1.0
    return out


def _jacobi_numpy(t, n, jn):
    npts = t.shape[0]
    Pj = np.zeros((npts, n + 1, n // 2 + 1))
    dPj = np.zeros_like(Pj)
    for l in range(n + 1):
        b = l + 0.5
        jmax = (n - l) // 2
        p_prev, p = np.zeros(npts), np.ones(npts)
        dp_prev, dp = np.zeros(npts), np.zeros(npts)
        Pj[:, l, 0] = jn[l, 0]
        if jmax >= 1:
            p_prev, p = p, 1.0 + (b + 2.0) * (t - 1.0) * 0.5
            dp_prev, dp = dp, np.full(npts, (b + 2.0) * 0.5)
            Pj[:, l, 1] = p * jn[l, 1]
            dPj[:, l, 1] = dp * jn[l, 1]
        for j in range(2, jmax + 1):
            s = 2.0 * j + b
            a1 = 2.0 * j * (j + b) * (s - 2.0)
            a2 = -(s - 1.0) * b * b
            a3 = (s - 1.0) * s * (s - 2.0)
            a4 = 2.0 * (j - 1.0) * (j + b - 1.0) * s
            p_next = ((a2 + a3 * t) * p - a4 * p_prev) / a1
            dp_next = (a3 * p + (a2 + a3 * t) * dp - a4 * dp_prev) / a1
            p_prev, p = p, p_next
            dp_prev, dp = dp, dp_next
            Pj[:, l, j] = p * jn[l, j]
            dPj[:, l, j] = dp * jn[l, j]
    return Pj, dPj


def _ball_numpy(pts, n, ls, js, slots, shn, jn, cl):
    pts = np.asarray(pts, dtype=float)
    Y, dY = _solid_harmonics_numpy(pts, n, shn)
    t = 2.0 * np.einsum("pi,pi->p", pts, pts) - 1.0
    Pj, dPj = _jacobi_numpy(t, n, jn)
    c = cl[ls]
    pv = Pj[:, ls, js] * c
    dpv = 4.0 * dPj[:, ls, js] * c
    yv = Y[:, slots]
    vals = pv * yv
    grads = (dpv * yv)[:, :, None] * pts[:, None, :] + pv[:, :, None] * dY[:, slots, :]
    return vals, grads


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def ridge_basis(pts, n, use_jit=None):
    """Values (P, N) and gradients (P, N, 2) of the ridge basis of Pi_n."""
    deg, cs, sn = ridge_tables(n)
    pts = np.ascontiguousarray(pts, dtype=float).reshape(-1, 2)
    if USE_JIT if use_jit is None else use_jit:
        return _ridge_jit(pts, deg, cs, sn)
    return _ridge_numpy(pts, deg, cs, sn)


def ball_basis(pts, n, use_jit=None):
    """Values (P, N) and gradients (P, N, 3) of the ball basis of Pi_n."""
    ls, js, slots = ball_tables(n)
    shn = solid_harmonic_norms(n)
    jn = jacobi_norms(n)
    cl = 2.0 ** (1.25 + 0.5 * np.arange(n + 1))
    pts = np.ascontiguousarray(pts, dtype=float).reshape(-1, 3)
    if USE_JIT if use_jit is None else use_jit:
        return _ball_jit(pts, n, ls, js, slots, shn, jn, cl)
    return _ball_numpy(pts, n, ls, js, slots, shn, jn, cl)
