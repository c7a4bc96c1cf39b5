"""Backlund transform between elliptic sine-Gordon and sinh-Gordon solutions.

For the half-plane target the pair (theta, omega) is related by

    omega_xi  - theta_eta = -2 sinh(omega) sin(theta)
    omega_eta + theta_xi  = -2 cosh(omega) cos(theta)

with theta_{zeta zetabar} = -(1/2) sin 2 theta and
omega_{zeta zetabar} = (1/2) sinh 2 omega.  For a general target metric the
right-hand sides are (1/2) tanh(omega) F_xi and (1/2) coth(omega) F_eta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import verify
from ._kernels import rk4_lines
from .grid import FieldGrid

__all__ = [
    "BacklundPair",
    "IntegrationResult",
    "BranchChoice",
    "kink_theta",
    "omega_branch_A",
    "omega_branch_B",
    "sine_gordon_residual",
    "sinh_gordon_residual",
    "backlund_residual_hyperbolic",
    "backlund_residual_general",
    "select_branch",
    "backlund_integrate",
    "constant_theta_omega",
    "backlund_example_map",
    "example_domain_mask",
    "map_theta_omega",
]


@dataclass(frozen=True)
class BacklundPair:
    theta: FieldGrid
    omega: FieldGrid
    r1: FieldGrid
    r2: FieldGrid


@dataclass(frozen=True)
class IntegrationResult:
    omega: FieldGrid
    path_consistency: float
    sinh_gordon: float


@dataclass(frozen=True)
class BranchChoice:
    name: str               # "A" or "B"
    theta_sign: int         # +1 or -1: sign of the kink paired with omega
    residuals: dict         # every candidate's sinh-Gordon and pair residuals


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def kink_theta(xi, sign: int = 1):
    """theta = sign * arcsin(tanh 2 xi)."""
    return sign * np.arcsin(np.tanh(2.0 * np.asarray(xi, dtype=float)))


def omega_branch_A(xi, eta):
    """2 artanh(cosh 2xi / (2 eta)), real where eta > cosh(2 xi) / 2."""
    arg = np.cosh(2.0 * np.asarray(xi, dtype=float)) / (2.0 * np.asarray(eta, dtype=float))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(np.abs(arg) < 1.0, 2.0 * np.arctanh(arg), np.nan)


def omega_branch_B(xi, eta):
    """2 artanh(2 eta / cosh 2xi), real where |eta| < cosh(2 xi) / 2."""
    arg = 2.0 * np.asarray(eta, dtype=float) / np.cosh(2.0 * np.asarray(xi, dtype=float))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(np.abs(arg) < 1.0, 2.0 * np.arctanh(arg), np.nan)


def example_domain_mask(xi, eta):
    """eta > cosh(2 xi) / 2."""
    return np.asarray(eta) > 0.5 * np.cosh(2.0 * np.asarray(xi))


def backlund_example_map(grid: FieldGrid) -> FieldGrid:
    """u = (eta^2 tanh 2xi + xi/2) + i (eta^2 / cosh 2xi - cosh(2xi)/4)."""
    xi, eta = grid.mesh()
    ok = example_domain_mask(xi, eta)
    if not np.all(ok):
        raise ValueError("grid leaves the domain eta > cosh(2 xi) / 2")
    c = np.cosh(2.0 * xi)
    R = eta**2 * np.tanh(2.0 * xi) + 0.5 * xi
    S = eta**2 / c - 0.25 * c
    return grid.with_values(R + 1j * S)


def constant_theta_omega(xi, omega0: float, xi0: float = 0.0):
    """Solution of omega_xi = -2 sinh(omega): tanh(omega/2) = tanh(omega0/2) e^{-2(xi - xi0)}."""
    q = np.tanh(0.5 * omega0) * np.exp(-2.0 * (np.asarray(xi, dtype=float) - xi0))
    return 2.0 * np.arctanh(q)


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------


def _interior(g: FieldGrid, margin: int = 1):
    return verify.interior_mask(g.mask, margin)


def _lap(f: FieldGrid, order: int) -> FieldGrid:
    if order == 2:
        return verify.laplacian(f)
    if order == 4:
        return verify.laplacian4(f)
    raise ValueError("order must be 2 or 4")


def _gradient(f: FieldGrid, order: int):
    if order == 4:
        return verify.d4(f.values, f.hx, 1), verify.d4(f.values, f.hy, 0)
    return verify._grad(f.values, f)


def sine_gordon_residual(theta: FieldGrid, order: int = 2) -> float:
    """Max |(1/4) lap theta + (1/2) sin 2 theta| over interior nodes."""
    lap = _lap(theta, order)
    return verify._max_abs(0.25 * lap.values + 0.5 * np.sin(2.0 * theta.values), lap.mask)


def sinh_gordon_residual(omega: FieldGrid, order: int = 2) -> float:
    """Max |(1/4) lap omega - (1/2) sinh 2 omega| over interior nodes."""
    lap = _lap(omega, order)
    return verify._max_abs(0.25 * lap.values - 0.5 * np.sinh(2.0 * omega.values), lap.mask)


def _pair_fields(theta: FieldGrid, omega: FieldGrid, rhs1, rhs2, order: int = 2) -> BacklundPair:
    verify._require_same(theta, omega)
    tx, ty = _gradient(theta, order)
    wx, wy = _gradient(omega, order)
    mask = theta.mask & omega.mask
    r1 = wx - ty - rhs1
    r2 = wy + tx - rhs2
    return BacklundPair(theta, omega, theta.with_values(r1, mask), theta.with_values(r2, mask))


def backlund_residual_hyperbolic(theta: FieldGrid, omega: FieldGrid, order: int = 2) -> tuple[float, float]:
    """(max |r1|, max |r2|) for the half-plane pair relations, central differences."""
    w, t = omega.values, theta.values
    pair = _pair_fields(theta, omega, -2.0 * np.sinh(w) * np.sin(t), -2.0 * np.cosh(w) * np.cos(t), order)
    m = verify.interior_mask(pair.r1.mask, 1)
    return verify._max_abs(pair.r1.values, m), verify._max_abs(pair.r2.values, m)


def backlund_residual_general(theta: FieldGrid, omega: FieldGrid, F: FieldGrid) -> tuple[float, float]:
    """Residuals of omega_xi - theta_eta = tanh(omega) F_xi / 2 and
    omega_eta + theta_xi = coth(omega) F_eta / 2, with F = log e^F sampled
    along the map on the same grid."""
    verify._require_same(theta, F)
    Fx, Fy = verify._grad(F.values, F)
    w = omega.values
    pair = _pair_fields(theta, omega, 0.5 * np.tanh(w) * Fx, 0.5 / np.tanh(w) * Fy)
    m = verify.interior_mask(pair.r1.mask & F.mask, 1)
    return verify._max_abs(pair.r1.values, m), verify._max_abs(pair.r2.values, m)


def select_branch(grid: FieldGrid) -> BranchChoice:
    """Pick the real omega branch that pairs with the kink on ``grid``.

    Each branch is scored by its sinh-Gordon residual and by the pair
    residuals against theta = +kink and -kink; the branch and sign with the
    smallest worst-case residual win.
    """
    xi, eta = grid.mesh()
    scores = {}
    best = None
    for name, fn in (("A", omega_branch_A), ("B", omega_branch_B)):
        w = grid.with_values(fn(xi, eta))
        if verify.interior_mask(w.mask, 1).sum() == 0:
            scores[name] = {"defined": False}
            continue
        sg = sinh_gordon_residual(w)
        entry = {"defined": True, "sinh_gordon": sg}
        for sign in (1, -1):
            th = grid.with_values(kink_theta(xi, sign), w.mask)
            r1, r2 = backlund_residual_hyperbolic(th, w)
            entry[f"pair{sign:+d}"] = [r1, r2]
            worst = max(sg, r1, r2)
            if best is None or worst < best[0]:
                best = (worst, name, sign)
        scores[name] = entry
    if best is None:
        raise ValueError("no omega branch is real on this grid")
    return BranchChoice(name=best[1], theta_sign=best[2], residuals=scores)


def map_theta_omega(u: FieldGrid, metric: verify.MetricSpec) -> tuple[FieldGrid, FieldGrid]:
    """(theta, omega) of a map in specific coordinates.

    e^{2 i theta} = e^F u_zeta u_zetabar and |u_zetabar / u_zeta| = e^{-2 omega}.
    """
    uz, uzb = verify.wirtinger(u)
    e2it = metric.eF(u.values) * uz.values * uzb.values
    theta = 0.5 * verify._unwrap(np.angle(e2it))
    omega = -0.5 * np.log(np.abs(uzb.values / uz.values))
    return u.with_values(theta), u.with_values(omega)


# ---------------------------------------------------------------------------
# Integration from a seed
# ---------------------------------------------------------------------------


def _midpoints(f: np.ndarray) -> np.ndarray:
    """Cubic interpolation to midpoints along axis 0 (quadratic at the ends)."""
    n = f.shape[0]
    mid = np.empty((n - 1,) + f.shape[1:])
    if n >= 4:
        mid[1:-1] = (-f[:-3] + 9.0 * f[1:-2] + 9.0 * f[2:-1] - f[3:]) / 16.0
        mid[0] = (3.0 * f[0] + 6.0 * f[1] - f[2]) / 8.0
        mid[-1] = (3.0 * f[-1] + 6.0 * f[-2] - f[-3]) / 8.0
    else:
        mid[:] = 0.5 * (f[1:] + f[:-1])
    return mid


def _sweep(w0, a, b, h, use_cosh, start):
    """Integrate along axis 0 from index ``start`` in both directions."""
    n = a.shape[0]
    out = np.empty(a.shape)
    out[start] = w0
    if start < n - 1:
        seg_a, seg_b = a[start:], b[start:]
        out[start:] = rk4_lines(w0, seg_a, _midpoints(seg_a), seg_b, _midpoints(seg_b), h, use_cosh)
    if start > 0:
        seg_a, seg_b = a[start::-1], b[start::-1]
        out[start::-1] = rk4_lines(w0, seg_a, _midpoints(seg_a), seg_b, _midpoints(seg_b), -h, use_cosh)
    return out


def _slopes(theta: FieldGrid, theta_derivs):
    if theta_derivs is None:
        # fourth order: the slopes feed an RK4 integration, so second-order
        # differences would dominate its error
        tx, ty = verify.d4(theta.values, theta.hx, 1), verify.d4(theta.values, theta.hy, 0)
    else:
        tx, ty = (np.asarray(d, dtype=float) for d in theta_derivs)
    t = theta.values
    # omega_xi = theta_eta - 2 sin(theta) sinh(omega)
    # omega_eta = -theta_xi - 2 cos(theta) cosh(omega)
    return (ty, np.sin(t)), (-tx, np.cos(t))


def _rows_then_columns(seed_val, j0, i0, xi_coef, eta_coef, hx, hy):
    (ax, bx), (ay, by) = xi_coef, eta_coef
    row = _sweep(np.array([seed_val]), ax[j0][:, None], bx[j0][:, None], hx, False, i0)[:, 0]
    return _sweep(row, ay, by, hy, True, j0)


def _columns_then_rows(seed_val, j0, i0, xi_coef, eta_coef, hx, hy):
    (ax, bx), (ay, by) = xi_coef, eta_coef
    col = _sweep(np.array([seed_val]), ay[:, i0][:, None], by[:, i0][:, None], hy, True, j0)[:, 0]
    return _sweep(col, ax.T, bx.T, hx, False, i0).T


def backlund_integrate(theta: FieldGrid, seed, theta_derivs=None) -> IntegrationResult:
    """omega from theta and a seed ((j, i), omega value) by RK4 along grid lines.

    Integrates along the seed row (xi) and then along every column (eta).
    The column-then-row result is computed only to report the
    path-consistency residual.  ``theta_derivs`` optionally supplies exact
    (theta_xi, theta_eta) arrays instead of finite differences.
    """
    (j0, i0), w0 = seed
    xi_coef, eta_coef = _slopes(theta, theta_derivs)
    w = _rows_then_columns(float(w0), j0, i0, xi_coef, eta_coef, theta.hx, theta.hy)
    w_alt = _columns_then_rows(float(w0), j0, i0, xi_coef, eta_coef, theta.hx, theta.hy)
    mask = theta.mask & np.isfinite(w)
    omega = theta.with_values(w, mask)
    return IntegrationResult(
        omega=omega,
        path_consistency=verify._max_abs(w - w_alt, mask & np.isfinite(w_alt)),
        sinh_gordon=sinh_gordon_residual(omega),
    )
