"""Hot loops in two flavours: numba-compiled and vectorised numpy.

The public entry points (``sor_solve``, ``wolf_rk4``, ``rk4_lines``) dispatch
on :data:`harmap._accel.NUMBA_ENABLED`; the ``*_numba`` and ``*_numpy``
variants stay importable so tests and benchmarks can compare them.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit

# ---------------------------------------------------------------------------
# Red-black SOR for a 5-point stencil with variable coefficients
# ---------------------------------------------------------------------------
# Interior node (j, i) of R (shape ny x nx) satisfies
#   cE R[j,i+1] + cW R[j,i-1] + cN R[j+1,i] + cS R[j-1,i] = diag R[j,i]
# with coefficient arrays of interior shape (ny-2, nx-2).


@njit
def _sor_numba(R, cE, cW, cN, cS, diag, relax, tol, max_iter, check_every):
    ny, nx = R.shape
    it = 0
    res = np.inf
    while it < max_iter:
        for color in range(2):
            for j in range(1, ny - 1):
                start = 1 + ((1 + j + color) % 2)
                for i in range(start, nx - 1, 2):
                    a = j - 1
                    b = i - 1
                    nb = (cE[a, b] * R[j, i + 1] + cW[a, b] * R[j, i - 1]
                          + cN[a, b] * R[j + 1, i] + cS[a, b] * R[j - 1, i])
                    R[j, i] = R[j, i] + relax * (nb / diag[a, b] - R[j, i])
        it += 1
        if it % check_every == 0 or it == max_iter:
            res = 0.0
            for j in range(1, ny - 1):
                for i in range(1, nx - 1):
                    a = j - 1
                    b = i - 1
                    nb = (cE[a, b] * R[j, i + 1] + cW[a, b] * R[j, i - 1]
                          + cN[a, b] * R[j + 1, i] + cS[a, b] * R[j - 1, i])
                    r = abs(nb / diag[a, b] - R[j, i])
                    if r > res:
                        res = r
            if res <= tol:
                break
    return it, res


def _sor_numpy(R, cE, cW, cN, cS, diag, relax, tol, max_iter, check_every):
    ny, nx = R.shape
    jj, ii = np.meshgrid(np.arange(1, ny - 1), np.arange(1, nx - 1), indexing="ij")
    colors = [((ii + jj) % 2) == c for c in range(2)]
    inner = R[1:-1, 1:-1]  # view
    it = 0
    res = np.inf

    def neighbours():
        return (cE * R[1:-1, 2:] + cW * R[1:-1, :-2]) + cN * R[2:, 1:-1] + cS * R[:-2, 1:-1]

    while it < max_iter:
        for mask in colors:
            upd = inner + relax * (neighbours() / diag - inner)
            np.copyto(inner, upd, where=mask)
        it += 1
        if it % check_every == 0 or it == max_iter:
            res = float(np.max(np.abs(neighbours() / diag - inner)))
            if res <= tol:
                break
    return it, res


def sor_solve(R, cE, cW, cN, cS, diag, relax=1.9, tol=1e-10, max_iter=200_000, check_every=10):
    """Run red-black SOR in place on ``R``; return (iterations, scaled residual)."""
    args = (R, cE, cW, cN, cS, diag, float(relax), float(tol), int(max_iter), int(check_every))
    if NUMBA_ENABLED:
        it, res = _sor_numba(*args)
    else:
        it, res = _sor_numpy(*args)
    return int(it), float(res)


# ---------------------------------------------------------------------------
# RK4 for u'' = sinh(2u) / (2 t^2) on [0, 1]
# ---------------------------------------------------------------------------


@njit
def _wolf_rk4_numba(du0, t, n_steps):
    h = 1.0 / n_steps
    k = 1.0 / (2.0 * t * t)
    u = np.empty(n_steps + 1)
    v = np.empty(n_steps + 1)
    u[0] = 0.0
    v[0] = du0
    for n in range(n_steps):
        y, p = u[n], v[n]
        k1y, k1p = p, k * math.sinh(2.0 * y)
        k2y, k2p = p + 0.5 * h * k1p, k * math.sinh(2.0 * (y + 0.5 * h * k1y))
        k3y, k3p = p + 0.5 * h * k2p, k * math.sinh(2.0 * (y + 0.5 * h * k2y))
        k4y, k4p = p + h * k3p, k * math.sinh(2.0 * (y + h * k3y))
        u[n + 1] = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v[n + 1] = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    return u, v


def _wolf_rk4_numpy(du0, t, n_steps):
    # sequential by nature: plain Python floats, arrays only for storage
    h = 1.0 / n_steps
    k = 1.0 / (2.0 * t * t)
    u = np.empty(n_steps + 1)
    v = np.empty(n_steps + 1)
    y, p = 0.0, float(du0)
    u[0], v[0] = y, p
    sinh = math.sinh
    for n in range(n_steps):
        k1y, k1p = p, k * sinh(2.0 * y)
        k2y, k2p = p + 0.5 * h * k1p, k * sinh(2.0 * (y + 0.5 * h * k1y))
        k3y, k3p = p + 0.5 * h * k2p, k * sinh(2.0 * (y + 0.5 * h * k2y))
        k4y, k4p = p + h * k3p, k * sinh(2.0 * (y + h * k3y))
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        u[n + 1], v[n + 1] = y, p
    return u, v


def wolf_rk4(du0, t, n_steps):
    """Trajectory (u, u') of u'' = sinh(2u)/(2t^2), u(0) = 0, u'(0) = du0."""
    if NUMBA_ENABLED:
        return _wolf_rk4_numba(float(du0), float(t), int(n_steps))
    return _wolf_rk4_numpy(float(du0), float(t), int(n_steps))


# ---------------------------------------------------------------------------
# RK4 along many parallel grid lines for w' = a - 2 b g(w), g = sinh or cosh
# ---------------------------------------------------------------------------


@njit
def _rk4_lines_numba(w0, a_node, a_mid, b_node, b_mid, h, use_cosh):
    n, width = a_node.shape
    out = np.empty((n, width))
    for col in range(width):
        out[0, col] = w0[col]
    for k in range(n - 1):
        for col in range(width):
            w = out[k, col]
            if use_cosh:
                k1 = a_node[k, col] - 2.0 * b_node[k, col] * math.cosh(w)
                k2 = a_mid[k, col] - 2.0 * b_mid[k, col] * math.cosh(w + 0.5 * h * k1)
                k3 = a_mid[k, col] - 2.0 * b_mid[k, col] * math.cosh(w + 0.5 * h * k2)
                k4 = a_node[k + 1, col] - 2.0 * b_node[k + 1, col] * math.cosh(w + h * k3)
            else:
                k1 = a_node[k, col] - 2.0 * b_node[k, col] * math.sinh(w)
                k2 = a_mid[k, col] - 2.0 * b_mid[k, col] * math.sinh(w + 0.5 * h * k1)
                k3 = a_mid[k, col] - 2.0 * b_mid[k, col] * math.sinh(w + 0.5 * h * k2)
                k4 = a_node[k + 1, col] - 2.0 * b_node[k + 1, col] * math.sinh(w + h * k3)
            out[k + 1, col] = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out


def _rk4_lines_numpy(w0, a_node, a_mid, b_node, b_mid, h, use_cosh):
    g = np.cosh if use_cosh else np.sinh
    n = a_node.shape[0]
    out = np.empty(a_node.shape)
    out[0] = w0
    for k in range(n - 1):
        w = out[k]
        k1 = a_node[k] - 2.0 * b_node[k] * g(w)
        k2 = a_mid[k] - 2.0 * b_mid[k] * g(w + 0.5 * h * k1)
        k3 = a_mid[k] - 2.0 * b_mid[k] * g(w + 0.5 * h * k2)
        k4 = a_node[k + 1] - 2.0 * b_node[k + 1] * g(w + h * k3)
        out[k + 1] = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out


def rk4_lines(w0, a_node, a_mid, b_node, b_mid, h, use_cosh):
    """Integrate w' = a - 2 b g(w) along axis 0 for every column at once.

    ``a_node``/``b_node`` have shape (n, width); ``a_mid``/``b_mid`` hold the
    midpoint samples, shape (n - 1, width).  ``h`` may be negative.
    """
    args = (
        np.ascontiguousarray(w0, dtype=float),
        np.ascontiguousarray(a_node, dtype=float),
        np.ascontiguousarray(a_mid, dtype=float),
        np.ascontiguousarray(b_node, dtype=float),
        np.ascontiguousarray(b_mid, dtype=float),
        float(h),
        bool(use_cosh),
    )
    if NUMBA_ENABLED:
        return _rk4_lines_numba(*args)
    return _rk4_lines_numpy(*args)
