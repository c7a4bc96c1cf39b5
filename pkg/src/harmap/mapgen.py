"""Closed-form one-soliton harmonic maps u = R + iS and their target metrics.

In rotated coordinates Z = X + iY = rho e^{-i tau} zeta the map is
R = alpha X + (function of Y), S = function of Y, with

    u_Y = i alpha tanh(omega + i tau),
    R_Y = -alpha sin(tau) cos(tau) / P,   S_Y = alpha sinh(omega) cosh(omega) / P,
    P = cos^2(tau) + sinh^2(omega),

and target density e^F = 4 P / (alpha^2 rho^2), a metric of constant
curvature K_N written as a function of S alone.  The quantity
D = C M satisfies D - omega'^2 = K_N (4/rho^2) P along the trajectory,
which fixes which inverse-hyperbolic form S takes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import soliton as sol
from .elliptic import complete_K, ellint_Pi, ellint_Pi_excess
from .grid import FieldGrid
from .soliton import SolitonParams

__all__ = [
    "MapParams",
    "MapSample",
    "MapBranchError",
    "P_factor",
    "dR_dY",
    "dS_dY",
    "map_S",
    "map_R",
    "map_R_alt",
    "metric_density",
    "metric_density_omega",
    "metric_dF_dS",
    "phi_relation_residual",
    "dS_quadratic_residual",
    "specific_coords",
    "inverse_specific_coords",
    "map_sample",
    "evaluate_map",
]

_DEGENERATE_TRIG = 1e-15  # |sin tau cos tau| below this: R is linear in X


class MapBranchError(ValueError):
    """The closed form leaves its real branch (arctanh argument reaches 1)."""


@dataclass(frozen=True)
class MapParams:
    soliton: SolitonParams
    alpha: float
    X0: float = 0.0
    R0: float = 0.0
    S0: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha == 0.0:
            raise ValueError("alpha must be finite and nonzero")

    @property
    def D(self) -> float:
        p = self.soliton
        return p.C + p.A * p.kN * math.cos(p.tau) ** 2

    @property
    def sincos(self) -> float:
        return math.sin(self.soliton.tau) * math.cos(self.soliton.tau)

    @property
    def sigma0(self) -> float:
        """Sigma at S = S0 (K_N = +1 normalisation of the metric)."""
        p = self.soliton
        return math.atanh(p.domega0 / math.sqrt(self.D))


@dataclass(frozen=True)
class MapSample:
    """Map value, first partials in (xi, eta), and target density at a node."""

    xi: float
    eta: float
    R: float
    S: float
    dR: tuple[float, float]
    dS: tuple[float, float]
    eF: float

    @property
    def jacobian(self) -> float:
        return self.dR[0] * self.dS[1] - self.dR[1] * self.dS[0]


def _out(a):
    return a[()] if np.ndim(a) == 0 else a


# ---------------------------------------------------------------------------
# Y-derivatives
# ---------------------------------------------------------------------------


def P_factor(Y, mp: MapParams):
    """P = cos^2 tau + sinh^2 omega."""
    sh, _ = sol.sinh_cosh_omega(Y, mp.soliton)
    return _out(math.cos(mp.soliton.tau) ** 2 + sh * sh)


def dS_dY(Y, mp: MapParams, form: str = "omega_prime"):
    """dS/dY; ``form`` is 'omega_prime' (-alpha omega'' / (D - omega'^2)) or 'trig'."""
    p = mp.soliton
    sh, ch = sol.sinh_cosh_omega(Y, p)
    if form == "trig" or p.kN == 0:
        return _out(mp.alpha * sh * ch / (math.cos(p.tau) ** 2 + sh * sh))
    if form != "omega_prime":
        raise ValueError(f"unknown form {form!r}")
    d = sol.omega_prime(Y, p)
    d2 = -(2.0 * p.kN / p.rho**2) * 2.0 * sh * ch
    return _out(-mp.alpha * d2 / (mp.D - d * d))


def dR_dY(Y, mp: MapParams, form: str = "omega_prime"):
    """dR/dY; ``form`` is 'omega_prime' or 'trig' (-alpha sin cos / P)."""
    p = mp.soliton
    if form == "trig" or p.kN == 0:
        return _out(-mp.alpha * mp.sincos / P_factor(Y, mp))
    if form != "omega_prime":
        raise ValueError(f"unknown form {form!r}")
    d = sol.omega_prime(Y, p)
    return _out(-p.A * p.kN * mp.alpha * mp.sincos / (mp.D - d * d))


def phi_relation_residual(Y, mp: MapParams):
    """Phi dR/dY + 4 sin(tau) cos(tau) / (alpha rho^2), with Phi = e^F."""
    p = mp.soliton
    phi = metric_density_omega(Y, mp)
    return _out(phi * dR_dY(Y, mp) + 4.0 * mp.sincos / (mp.alpha * p.rho**2))


def dS_quadratic_residual(Y, mp: MapParams):
    """(S_Y)^2 - [alpha^2 - cos(2 tau) 4 / (rho^2 Phi) - 16 s^2 c^2 / (alpha^2 rho^4 Phi^2)].

    This is the quadratic relation in 1/Phi with tan(tau) eliminated
    (tan^2 / (1 + tan^2)^2 = sin^2 cos^2, (tan^2 - 1)/(1 + tan^2) = -cos 2 tau).
    """
    p = mp.soliton
    phi = metric_density_omega(Y, mp)
    c2 = math.cos(2.0 * p.tau)
    rhs = (
        mp.alpha**2
        - 4.0 * c2 / (p.rho**2 * phi)
        - 16.0 * mp.sincos**2 / (mp.alpha**2 * p.rho**4 * phi * phi)
    )
    return _out(dS_dY(Y, mp) ** 2 - rhs)


# ---------------------------------------------------------------------------
# S and the target metric
# ---------------------------------------------------------------------------


def _s_potential(Y, mp: MapParams):
    """G(Y) with S = S0 + G(Y) - G(Y0)."""
    p = mp.soliton
    D = mp.D
    if p.kN == 0:
        return mp.alpha / (2.0 * p.scale) * np.log(P_factor(Y, mp))
    d = np.asarray(sol.omega_prime(Y, p))
    if D > 0:
        # atanh(omega'/sqrt D) (K_N = +1) or acoth (K_N = -1): both equal
        # sign(omega') * 0.5 * log((sqrt D + |omega'|)^2 / (A P)) and the
        # denominator is evaluated without cancellation.
        rD = math.sqrt(D)
        P = np.asarray(P_factor(Y, mp))
        with np.errstate(divide="ignore"):
            H = np.sign(d) * 0.5 * np.log((rD + np.abs(d)) ** 2 / (p.A * P))
        return -mp.alpha / rD * H
    if D < 0:
        rD = math.sqrt(-D)
        return mp.alpha / rD * np.arctan(d / rD)
    with np.errstate(divide="ignore"):
        return -mp.alpha / d


def map_S(Y, mp: MapParams):
    """Imaginary part S(Y); NaN off the regular branch, inf at a branch point."""
    Y = np.asarray(Y, dtype=float)
    g = _s_potential(Y, mp)
    g0 = _s_potential(mp.soliton.Y0, mp)
    return _out(mp.S0 + (g - g0))


def metric_density(S, mp: MapParams):
    """Target conformal factor e^F as a function of S (constant curvature K_N)."""
    S = np.asarray(S, dtype=float)
    p = mp.soliton
    a = mp.alpha
    dS = S - mp.S0
    D = mp.D
    if p.kN == 0:
        P0 = math.cos(p.tau) ** 2 + math.sinh(p.omega0) ** 2
        return _out(p.A * P0 / a**2 * np.exp(2.0 * p.scale * dS / a))
    d0 = p.domega0
    if p.kN == 1:
        sigma = mp.sigma0 - math.sqrt(D) / a * dS
        # same value as 4M / (kappa alpha^2 rho^2 cosh^2 Sigma)
        return _out(4.0 * p.M / (p.kappa * a**2 * p.rho**2 * np.cosh(sigma) ** 2))
    if D > 0:
        rD = math.sqrt(D)
        sig = math.atanh(rD / d0) - rD / a * dS
        return _out(D / (a**2 * np.sinh(sig) ** 2))
    if D < 0:
        rD = math.sqrt(-D)
        theta = math.atan(d0 / rD) + rD / a * dS
        return _out(-D / (a**2 * np.cos(theta) ** 2))
    s_star = mp.S0 + a / d0
    return _out(1.0 / (S - s_star) ** 2)


def metric_dF_dS(S, mp: MapParams):
    """dF/dS of the target metric (F = log e^F)."""
    S = np.asarray(S, dtype=float)
    p = mp.soliton
    a = mp.alpha
    dS = S - mp.S0
    D = mp.D
    if p.kN == 0:
        return _out(np.full(S.shape, 2.0 * p.scale / a))
    d0 = p.domega0
    if p.kN == 1:
        rD = math.sqrt(D)
        return _out(2.0 * rD / a * np.tanh(mp.sigma0 - rD / a * dS))
    if D > 0:
        rD = math.sqrt(D)
        return _out(2.0 * rD / a / np.tanh(math.atanh(rD / d0) - rD / a * dS))
    if D < 0:
        rD = math.sqrt(-D)
        return _out(2.0 * rD / a * np.tan(math.atan(d0 / rD) + rD / a * dS))
    return _out(-2.0 / (S - (mp.S0 + a / d0)))


def metric_density_omega(Y, mp: MapParams):
    """e^F = (4 / (alpha^2 rho^2)) (cos^2 tau cosh^2 omega + sin^2 tau sinh^2 omega)."""
    p = mp.soliton
    sh, ch = sol.sinh_cosh_omega(Y, p)
    c, s = math.cos(p.tau), math.sin(p.tau)
    return _out(4.0 / (mp.alpha**2 * p.rho**2) * (c * c * ch * ch + s * s * sh * sh))


# ---------------------------------------------------------------------------
# R
# ---------------------------------------------------------------------------


def _r_profile(Y, mp: MapParams):
    """int_{Y0}^{Y} R_Y dY from the third-kind closed forms."""
    p = mp.soliton
    Y = np.asarray(Y, dtype=float)
    if abs(mp.sincos) < _DEGENERATE_TRIG:
        return np.zeros(Y.shape)
    a, sc = mp.alpha, mp.sincos
    ok = sol.regular_mask(Y, p)
    Ys = np.where(ok, Y, p.Y0)
    if p.branch == "linear":
        t = math.tan(p.tau)
        out = -a / p.scale * (np.arctan(t * np.tanh(sol.omega(Ys, p))) - math.atan(t * math.tanh(p.omega0)))
    elif p.branch == "sn" and p.m > 1.0:
        out = _r_sigma_form(Ys, mp)
    elif p.branch in ("sn", "sc"):
        out = _r_x_form(Ys, mp)
    else:
        c2 = math.cos(p.tau) ** 2
        denom = c2 + p.s_star**2
        n = c2 / denom
        w = sol._phase(Ys, p)
        w0 = p.v0
        jw = ellint_Pi_excess(n, w, p.param) - ellint_Pi_excess(n, w0, p.param)
        out = -a * sc / (denom * p.scale) * ((w - w0) - (1.0 - n) * jw)
    return np.where(ok, out, np.nan)


def _r_sigma_form(Y, mp: MapParams):
    # R - R0 - alpha (X - X0) =
    #   -(kappa alpha sin cos / M) (eps / sqrt(C m)) [Pi(1/M; v + K | 1/m)]_{v0}^{v}
    p = mp.soliton
    quarter = float(complete_K(p.param))
    v = sol._phase(Y, p)
    n = 1.0 / p.M
    diff = ellint_Pi(n, v + quarter, p.param) - ellint_Pi(n, p.v0 + quarter, p.param)
    return -(p.kappa * mp.alpha * mp.sincos / p.M) * diff / p.scale


def _r_x_form(Y, mp: MapParams):
    # tanh omega = sn(x | m), x = eps sqrt(C) (Y - Y0) + x0:
    #   R_Y = -alpha sin cos (1 - sn^2) / (cos^2 + sin^2 sn^2)
    #   int dx (1 - sn^2)/(1 - n sn^2) = x - (1 - n) J(n; x | m),  n = -tan^2 tau
    p = mp.soliton
    tt = math.tan(p.tau)
    n = -tt * tt
    xscale = p.scale / (math.copysign(1.0, p.scale) * math.sqrt(p.C))
    x = sol._phase(Y, p) / xscale
    x0 = p.v0 / xscale
    rate = p.scale / xscale  # dx/dY = eps sqrt(C)
    jx = ellint_Pi_excess(n, x, p.m) - ellint_Pi_excess(n, x0, p.m)
    return -mp.alpha * tt / rate * ((x - x0) - (1.0 - n) * jx)


def map_R(X, Y, mp: MapParams):
    """Real part R(X, Y) = R0 + alpha (X - X0) + profile(Y)."""
    X = np.asarray(X, dtype=float)
    return _out(mp.R0 + mp.alpha * (X - mp.X0) + _r_profile(Y, mp))


def map_R_alt(X, Y, mp: MapParams):
    """R via the tanh omega = sn(x | m) form for every C > 0 branch.

    For m > 1 this is an independent closed form of the same integral as
    :func:`map_R`; used as a cross-check.
    """
    p = mp.soliton
    if p.branch not in ("sn", "sc"):
        raise ValueError("alternative form needs C > 0 and K_N != 0")
    Y = np.asarray(Y, dtype=float)
    X = np.asarray(X, dtype=float)
    if abs(mp.sincos) < _DEGENERATE_TRIG:
        prof = np.zeros(np.broadcast(X, Y).shape)
    else:
        ok = sol.regular_mask(Y, p)
        prof = np.where(ok, _r_x_form(np.where(ok, Y, p.Y0), mp), np.nan)
    return _out(mp.R0 + mp.alpha * (X - mp.X0) + prof)


# ---------------------------------------------------------------------------
# Coordinates and grids
# ---------------------------------------------------------------------------


def specific_coords(z, lam):
    """zeta = e^{-lambda/2} z for constant lambda."""
    return np.exp(-complex(lam) / 2.0) * np.asarray(z, dtype=complex)


def inverse_specific_coords(zeta, lam):
    return np.exp(complex(lam) / 2.0) * np.asarray(zeta, dtype=complex)


def _xy(xi, eta, p: SolitonParams):
    Z = sol.rotate_coords(np.asarray(xi) + 1j * np.asarray(eta), p)
    return Z.real, Z.imag


def map_sample(xi: float, eta: float, mp: MapParams) -> MapSample:
    """Value, partials and target density at one node (xi, eta)."""
    p = mp.soliton
    X, Y = _xy(xi, eta, p)
    R = float(map_R(X, Y, mp))
    S = float(map_S(Y, mp))
    rY, sY = float(dR_dY(Y, mp, "trig")), float(dS_dY(Y, mp, "trig"))
    c, s = math.cos(p.tau), math.sin(p.tau)
    # X_xi = rho c, X_eta = rho s, Y_xi = -rho s, Y_eta = rho c
    dR = (p.rho * (mp.alpha * c - rY * s), p.rho * (mp.alpha * s + rY * c))
    dS = (-p.rho * s * sY, p.rho * c * sY)
    return MapSample(float(xi), float(eta), R, S, dR, dS, float(metric_density(S, mp)))


@dataclass(frozen=True)
class MapGrid:
    """A sampled map with its companion fields on one grid."""

    u: FieldGrid
    omega: FieldGrid
    eF: FieldGrid


def evaluate_map(mp: MapParams, grid: FieldGrid) -> MapGrid:
    """Sample u = R + iS, omega and e^F on the (xi, eta) nodes of ``grid``."""
    p = mp.soliton
    xi, eta = grid.mesh()
    X, Y = _xy(xi, eta, p)
    ok = sol.regular_mask(Y, p)
    R = np.asarray(map_R(X, Y, mp))
    S = np.asarray(map_S(Y, mp))
    w = np.asarray(sol.omega(Y, p))
    eF = np.asarray(metric_density_omega(Y, mp))
    ok = ok & np.isfinite(R) & np.isfinite(S) & np.isfinite(w)
    u = grid.with_values(np.where(ok, R + 1j * S, np.nan), ok)
    return MapGrid(u=u, omega=grid.with_values(np.where(ok, w, np.nan), ok),
                   eF=grid.with_values(np.where(ok, eF, np.nan), ok))
