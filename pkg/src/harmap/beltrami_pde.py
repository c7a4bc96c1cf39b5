"""Grid solver for the real Beltrami system with coefficient e^{-2 omega}.

With mu = e^{-2 omega} real, u = R + iS solves u_zbar = mu u_z iff

    S_eta = tanh(omega) R_xi,   S_xi = -coth(omega) R_eta,

and eliminating S leaves the divergence-form elliptic equation

    (tanh(omega) R_xi)_xi + (coth(omega) R_eta)_eta = 0.

R is found from Dirichlet data with a conservative 5-point stencil
(coefficients averaged to half-nodes), S by path integration of the
first-order system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import verify
from ._kernels import sor_solve
from .grid import BoundaryData, FieldGrid

__all__ = [
    "CoefficientSingularityError",
    "BeltramiSolution",
    "SReconstruction",
    "stencil_coefficients",
    "operator_residual",
    "solve_R",
    "reconstruct_S",
    "compatibility_residual",
    "beltrami_residual",
]

OMEGA_FLOOR = 1e-3


class CoefficientSingularityError(ValueError):
    """omega comes too close to 0, where coth(omega) blows up (mu = 1)."""


@dataclass(frozen=True)
class BeltramiSolution:
    R: FieldGrid
    converged: bool
    iterations: int
    residual: float
    backend: str


@dataclass(frozen=True)
class SReconstruction:
    S: FieldGrid
    compatibility: float


def _check_omega(omega: FieldGrid, floor: float) -> float:
    w = omega.values
    if not np.all(omega.mask):
        raise CoefficientSingularityError("omega has masked or non-finite nodes")
    if np.min(np.abs(w)) < floor:
        j, i = np.unravel_index(int(np.argmin(np.abs(w))), w.shape)
        raise CoefficientSingularityError(
            f"|omega| = {abs(w[j, i]):.3e} < {floor:.1e} at node (j={j}, i={i}); coth(omega) is singular"
        )
    if np.any(np.sign(w) != np.sign(w.flat[0])):
        raise CoefficientSingularityError("omega changes sign on the grid; the operator loses ellipticity")
    return float(np.sign(w.flat[0]))


def stencil_coefficients(omega: FieldGrid):
    """(cE, cW, cN, cS, diag) on interior nodes, each of shape (ny-2, nx-2).

    a = tanh(omega) along xi, b = coth(omega) along eta, averaged to half-nodes.
    """
    w = omega.values
    a = np.tanh(w)
    b = 1.0 / a
    a_half = 0.5 * (a[:, 1:] + a[:, :-1])    # (ny, nx-1), between i and i+1
    b_half = 0.5 * (b[1:, :] + b[:-1, :])    # (ny-1, nx), between j and j+1
    hx2, hy2 = omega.hx**2, omega.hy**2
    cE = a_half[1:-1, 1:] / hx2
    cW = a_half[1:-1, :-1] / hx2
    cN = b_half[1:, 1:-1] / hy2
    cS = b_half[:-1, 1:-1] / hy2
    diag = cE + cW + cN + cS
    return cE, cW, cN, cS, diag


def operator_residual(R: np.ndarray, coeffs) -> np.ndarray:
    """Discrete flux-form operator applied to R on interior nodes."""
    cE, cW, cN, cS, diag = coeffs
    return (
        cE * R[1:-1, 2:] + cW * R[1:-1, :-2] + cN * R[2:, 1:-1] + cS * R[:-2, 1:-1]
        - diag * R[1:-1, 1:-1]
    )


def _initial_guess(bc: BoundaryData, ny: int, nx: int) -> np.ndarray:
    R = np.zeros((ny, nx))
    R[0, :] = bc.bottom
    R[-1, :] = bc.top
    R[:, 0] = bc.left
    R[:, -1] = bc.right
    # transfinite (Coons) blend of the edges
    s = np.linspace(0.0, 1.0, nx)[None, :]
    t = np.linspace(0.0, 1.0, ny)[:, None]
    blend = (
        (1 - t) * R[0:1, :] + t * R[-1:, :] + (1 - s) * R[:, 0:1] + s * R[:, -1:]
        - ((1 - s) * (1 - t) * R[0, 0] + s * (1 - t) * R[0, -1]
           + (1 - s) * t * R[-1, 0] + s * t * R[-1, -1])
    )
    R[1:-1, 1:-1] = blend[1:-1, 1:-1]
    return R


def _direct(R: np.ndarray, coeffs) -> None:
    cE, cW, cN, cS, diag = coeffs
    ny, nx = R.shape
    my, mx = ny - 2, nx - 2
    n = mx * my
    idx = np.arange(n).reshape(my, mx)
    rows, cols, vals = [idx.ravel()], [idx.ravel()], [-diag.ravel()]
    rhs = np.zeros((my, mx))
    for c, dj, di in ((cE, 0, 1), (cW, 0, -1), (cN, 1, 0), (cS, -1, 0)):
        jj, ii = np.meshgrid(np.arange(my) + dj, np.arange(mx) + di, indexing="ij")
        inside = (jj >= 0) & (jj < my) & (ii >= 0) & (ii < mx)
        rows.append(idx[inside])
        cols.append(idx[jj[inside], ii[inside]])
        vals.append(c[inside])
        # neighbours on the boundary move to the right-hand side
        rhs[~inside] -= c[~inside] * R[jj[~inside] + 1, ii[~inside] + 1]
    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    R[1:-1, 1:-1] = spla.spsolve(A.tocsc(), rhs.ravel()).reshape(my, mx)


def solve_R(
    omega: FieldGrid,
    bc: BoundaryData,
    tol: float = 1e-10,
    max_iter: int = 200_000,
    *,
    relax: float = 1.9,
    omega_floor: float = OMEGA_FLOOR,
    backend: str = "sor",
) -> BeltramiSolution:
    """Solve (tanh w R_xi)_xi + (coth w R_eta)_eta = 0 with Dirichlet data.

    ``residual`` is max |(neighbour sum)/diag - R| over interior nodes, the
    update size of one Jacobi sweep; it is what ``tol`` bounds.
    """
    bc.check(omega)
    _check_omega(omega, omega_floor)
    if not 0.0 < relax < 2.0:
        raise ValueError("relaxation factor must lie in (0, 2)")
    coeffs = stencil_coefficients(omega)
    R = _initial_guess(bc, omega.ny, omega.nx)
    if backend == "sor":
        it, res = sor_solve(R, *coeffs, relax=relax, tol=tol, max_iter=max_iter)
    elif backend == "direct":
        _direct(R, coeffs)
        it = 1
        res = float(np.max(np.abs(operator_residual(R, coeffs) / coeffs[4])))
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return BeltramiSolution(
        R=omega.with_values(R), converged=bool(res <= tol), iterations=it, residual=res, backend=backend
    )


def _first_order_rhs(R: FieldGrid, omega: FieldGrid):
    Rx, Ry = verify._grad(R.values, R)
    t = np.tanh(omega.values)
    return -Ry / t, t * Rx  # (S_xi, S_eta)


def _cumtrapz(f: np.ndarray, h: float, start: int, axis: int) -> np.ndarray:
    """Trapezoid integral of f along ``axis`` measured from index ``start``."""
    f = np.moveaxis(f, axis, 0)
    steps = 0.5 * h * (f[1:] + f[:-1])
    acc = np.zeros_like(f)
    acc[1:] = np.cumsum(steps, axis=0)
    acc = acc - acc[start]
    return np.moveaxis(acc, 0, axis)


def compatibility_residual(R: FieldGrid, omega: FieldGrid) -> float:
    """Max |(S_xi)_eta - (S_eta)_xi| for the slopes implied by R and omega."""
    Sx, Sy = _first_order_rhs(R, omega)
    _, Sx_y = verify._grad(Sx, R)
    Sy_x, _ = verify._grad(Sy, R)
    inner = verify.interior_mask(R.mask & omega.mask, 2)
    return verify._max_abs(Sx_y - Sy_x, inner)


def reconstruct_S(R: FieldGrid, omega: FieldGrid, anchor=((0, 0), 0.0)) -> SReconstruction:
    """Integrate S_xi along the anchor row, then S_eta up and down each column."""
    verify._require_same(R, omega)
    (j0, i0), s0 = anchor
    Sx, Sy = _first_order_rhs(R, omega)
    row = _cumtrapz(Sx[j0], R.hx, i0, axis=0)
    S = s0 + row[None, :] + _cumtrapz(Sy, R.hy, j0, axis=0)
    return SReconstruction(S=R.with_values(S), compatibility=compatibility_residual(R, omega))


def beltrami_residual(u: FieldGrid, omega: FieldGrid) -> float:
    """Max |e^{omega} u_zbar - e^{-omega} u_z| with central Wirtinger differences."""
    return verify.beltrami_residual(u, omega)
