"""Explicit harmonic-map families with independent construction paths.

* Wolf cylinders: a two-point BVP solved by RK4 shooting, and the same map
  rebuilt from a one-soliton.
* Half-infinite cylinder family u = x + i v_c(y).
* Strip maps parameterised by (alpha, a, b), with b fixed by a quarter-period
  condition, S from an arccot/cs closed form and R through an elliptic
  integral of the third kind.
* Half-plane family u = x + (i/a) sinh(a y) and its specific-coordinate form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from ._kernels import wolf_rk4
from .elliptic import complete_K, ellint_Pi_excess, jacobi_sn_cn_dn
from .grid import FieldGrid
from .mapgen import MapParams, evaluate_map
from .soliton import SolitonParams
from .soliton import omega as soliton_omega

__all__ = [
    "CatalogParameterError",
    "WolfSolution",
    "wolf_solve",
    "wolf_map",
    "wolf_hopf_constant",
    "wolf_specific_scale",
    "wolf_as_soliton",
    "wolf_soliton_map",
    "wolf_omega",
    "HalfCylinderParams",
    "half_cylinder_v",
    "half_cylinder_map",
    "half_cylinder_ode_residual",
    "STWParams",
    "stw_quarter_period_condition",
    "stw_solve_b",
    "stw_S",
    "stw_dS_dy",
    "stw_dR_dy",
    "stw_h",
    "stw_tanh_omega",
    "stw_dS_quadratic_residual",
    "stw_hopf_constant",
    "stw_map",
    "litam_map",
    "litam_omega",
    "litam_limit_deviation",
]


class CatalogParameterError(ValueError):
    """Parameters outside the admissible range of a catalog family."""


# ---------------------------------------------------------------------------
# Wolf cylinders:  U'' = sinh(2U) / (2 t^2),  U(0) = 0,  U(1) = arccosh t
# ---------------------------------------------------------------------------

WOLF_STEPS = 10_000  # RK4 step 1e-4 on [0, 1]


@dataclass(frozen=True)
class WolfSolution:
    t: float
    dU0: float          # shooting slope U'(0)
    c0: float           # (t U')^2 - sinh^2 U - 1/2, constant along the orbit
    x: np.ndarray
    U: np.ndarray
    dU: np.ndarray
    boundary_error: float
    first_integral_drift: float
    shots: int

    def __call__(self, x):
        """U(x) for |x| <= 1 (odd extension to negative x)."""
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > 1.0 + 1e-12):
            raise CatalogParameterError("U is defined on [-1, 1]")
        spline = CubicHermiteSpline(self.x, self.U, self.dU)
        return np.sign(x) * spline(np.abs(x))


def wolf_solve(t: float, n_steps: int = WOLF_STEPS, tol: float = 1e-12, max_shots: int = 100) -> WolfSolution:
    """Shoot on U'(0) with a bracketed secant iteration.

    U is convex while U >= 0, so U(1) >= U'(0) and the root lies in
    (0, arccosh t]; a secant step leaving the bracket is replaced by bisection.
    """
    if not t > 1.0:
        raise CatalogParameterError("Wolf cylinders need t > 1")
    target = math.acosh(t)

    def miss(s):
        u, _ = wolf_rk4(s, t, n_steps)
        return float(u[-1]) - target

    lo, hi = 0.0, target
    f_lo, f_hi = -target, miss(hi)
    if not (f_lo < 0.0 <= f_hi) or not math.isfinite(f_hi):
        raise CatalogParameterError("shooting bracket does not contain the boundary value")
    s0, f0, s1, f1 = lo, f_lo, hi, f_hi
    shots = 1
    while shots < max_shots:
        s = s1 - f1 * (s1 - s0) / (f1 - f0) if f1 != f0 else 0.5 * (lo + hi)
        if not lo < s < hi:
            s = 0.5 * (lo + hi)
        f = miss(s)
        shots += 1
        if f < 0:
            lo, f_lo = s, f
        else:
            hi, f_hi = s, f
        s0, f0, s1, f1 = s1, f1, s, f
        if abs(f) < tol:
            break
    else:
        raise CatalogParameterError("shooting did not converge")
    u, v = wolf_rk4(s1, t, n_steps)
    integral = (t * v) ** 2 - np.sinh(u) ** 2 - 0.5
    c0 = float(integral[0])
    return WolfSolution(
        t=float(t),
        dU0=float(s1),
        c0=c0,
        x=np.linspace(0.0, 1.0, n_steps + 1),
        U=u,
        dU=v,
        boundary_error=abs(float(u[-1]) - target),
        first_integral_drift=float(np.max(np.abs(integral - c0))),
        shots=shots,
    )


def wolf_map(sol: WolfSolution, grid: FieldGrid) -> FieldGrid:
    """u(x, y) = y + i t arctan(sinh U(x)) on a grid with x in [-1, 1]."""
    x, y = grid.mesh()
    return grid.with_values(y + 1j * sol.t * np.arctan(np.sinh(sol(x))))


def wolf_hopf_constant(t: float, c0: float) -> float:
    return (c0 - 0.5) / (4.0 * t * t)


def wolf_specific_scale(t: float, c0: float) -> float:
    """s with zeta = s z normalising the Hopf differential to 1."""
    return math.sqrt(c0 - 0.5) / (2.0 * t)


def wolf_as_soliton(t: float, c0: float) -> MapParams:
    """One-soliton data reproducing the Wolf map in zeta = s z.

    X = -eta, Y = xi (rho = 1, tau = -pi/2); R = alpha X with alpha = -1/s,
    omega' = 0 at the centre, where sinh^2 omega0 = 1 / (c0 - 1/2).
    """
    if not c0 > 0.5:
        raise CatalogParameterError("need c0 > 1/2")
    s = wolf_specific_scale(t, c0)
    omega0 = -math.asinh(1.0 / math.sqrt(c0 - 0.5))
    soliton = SolitonParams(kN=-1, rho=1.0, tau=-0.5 * math.pi, Y0=0.0, omega0=omega0, domega0=0.0)
    return MapParams(soliton, alpha=-1.0 / s)


def _wolf_soliton_sample(t: float, c0: float, grid: FieldGrid):
    s = wolf_specific_scale(t, c0)
    zgrid = FieldGrid(s * grid.x, s * grid.y, np.zeros(grid.shape))
    return evaluate_map(wolf_as_soliton(t, c0), zgrid)


def wolf_soliton_map(t: float, c0: float, grid: FieldGrid) -> FieldGrid:
    """The soliton-path map sampled at the (x, y) nodes of ``grid``."""
    return grid.with_values(_wolf_soliton_sample(t, c0, grid).u.values)


def wolf_omega(t: float, c0: float, grid: FieldGrid) -> FieldGrid:
    """omega of the Wolf map; |mu| is unchanged by the real rescaling zeta = s z."""
    return grid.with_values(_wolf_soliton_sample(t, c0, grid).omega.values)


# ---------------------------------------------------------------------------
# Half-infinite cylinder family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfCylinderParams:
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise CatalogParameterError("c must be positive")

    @property
    def hopf_constant(self) -> float:
        return -self.c / 4.0

    @property
    def lam(self) -> complex:
        """lambda with Hopf differential e^{-lambda} dz^2."""
        return -complex(np.log(complex(self.hopf_constant)))


def half_cylinder_v(y, c: float):
    """(v_c, v_c', v_c'') with v_c(y) = sinh(sqrt(c)(y - 1) + asinh sqrt(c)) / sqrt(c)."""
    r = math.sqrt(c)
    arg = r * (np.asarray(y, dtype=float) - 1.0) + math.asinh(r)
    return np.sinh(arg) / r, np.cosh(arg), r * np.sinh(arg)


def half_cylinder_ode_residual(y, c: float):
    """v v'' - v'^2 + 1 along the closed form."""
    v, dv, d2v = half_cylinder_v(y, c)
    return v * d2v - dv * dv + 1.0


def half_cylinder_map(params: HalfCylinderParams, grid: FieldGrid) -> tuple[FieldGrid, FieldGrid]:
    """u = x + i v_c(y) and omega with mu = (1 - v')/(1 + v') = -e^{-2 omega}."""
    x, y = grid.mesh()
    v, dv, _ = half_cylinder_v(y, params.c)
    omega = -0.5 * np.log(np.abs((1.0 - dv) / (1.0 + dv)))
    return grid.with_values(x + 1j * v), grid.with_values(omega)


# ---------------------------------------------------------------------------
# Strip maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class STWParams:
    """Boundary-derivative parameters and derived quartic roots."""

    alpha: float
    a: float
    b: float
    c2: float = field(init=False)
    w1: float = field(init=False)
    w2: float = field(init=False)
    m: float = field(init=False)   # elliptic parameter 1 - w1^2 / w2^2

    def __post_init__(self):
        if not (self.alpha > 0 and self.a > 0 and self.b > 0):
            raise CatalogParameterError("alpha, a, b must be positive")
        al, b = float(self.alpha), float(self.b)
        c2 = al * al + b * b + self.a**4
        disc = math.sqrt(max(c2 * c2 - 4.0 * al * al * b * b, 0.0))
        w1 = math.sqrt(0.5 * (c2 - disc)) / al
        w2 = math.sqrt(0.5 * (c2 + disc)) / al
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)
        object.__setattr__(self, "m", 1.0 - (w1 / w2) ** 2)

    # soliton-equivalent constants (C < 0 regime)
    @property
    def rho(self) -> float:
        return 2.0 / (self.alpha * math.sqrt(self.w2**2 - self.w1**2))

    @property
    def tan_tau(self) -> float:
        return -math.sqrt((self.w2**2 - 1.0) / (1.0 - self.w1**2))

    @property
    def C(self) -> float:
        return -(self.alpha * self.w1) ** 2

    @property
    def M(self) -> float:
        return 1.0 / self.w1**2

    @property
    def soliton_m(self) -> float:
        return (self.w2 / self.w1) ** 2

    def vieta_residuals(self) -> tuple[float, float, float]:
        """(w1 w2 - b/alpha, w1^2 + w2^2 - c^2/alpha^2, sqrt((w2^2-1)(1-w1^2)) - a^2/alpha)."""
        al = self.alpha
        return (
            self.w1 * self.w2 - self.b / al,
            self.w1**2 + self.w2**2 - self.c2 / al**2,
            math.sqrt(max((self.w2**2 - 1.0) * (1.0 - self.w1**2), 0.0)) - self.a**2 / al,
        )


def stw_quarter_period_condition(alpha: float, a: float, b: float, literal: bool = False) -> float:
    """K(1 - w1^2/w2^2) - alpha w2 pi/2.

    ``literal=True`` evaluates K(w1^2/w2^2) instead, which has no root for
    the parameters of interest (kept for comparison).
    """
    p = STWParams(alpha, a, b)
    m = 1.0 - p.m if literal else p.m
    return float(complete_K(m)) - p.alpha * p.w2 * 0.5 * math.pi


def stw_solve_b(alpha: float, a: float, b_max: float = 50.0, n_scan: int = 400, xtol: float = 1e-14) -> float:
    """Root in b of the quarter-period condition (scan for a sign change, then brentq)."""
    bs = np.geomspace(1e-6, b_max, n_scan)
    vals = np.array([stw_quarter_period_condition(alpha, a, b) for b in bs])
    sign_change = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if sign_change.size == 0:
        raise CatalogParameterError("quarter-period condition has no root in the search bracket")
    k = int(sign_change[0])
    return float(brentq(lambda b: stw_quarter_period_condition(alpha, a, b), bs[k], bs[k + 1],
                        xtol=xtol, rtol=4 * np.finfo(float).eps))


def _stw_phase(y, p: STWParams):
    return p.alpha * p.w2 * np.asarray(y, dtype=float)


def stw_S(y, p: STWParams):
    """S = arccot(w2 cs(alpha w2 y | m)), with arccot valued in (0, pi)."""
    ev = jacobi_sn_cn_dn(_stw_phase(y, p), p.m)
    # arccot(w2 cn/sn) = atan2(sn, w2 cn) while sn > 0
    return np.arctan2(ev.sn, p.w2 * ev.cn)


def stw_dS_dy(y, p: STWParams):
    """alpha w2^2 dn / (w2^2 + (1 - w2^2) sn^2)."""
    ev = jacobi_sn_cn_dn(_stw_phase(y, p), p.m)
    return p.alpha * p.w2**2 * ev.dn / (p.w2**2 + (1.0 - p.w2**2) * ev.sn**2)


def stw_dR_dy(y, p: STWParams):
    """a^2 sn^2 / (w2^2 + (1 - w2^2) sn^2)  (= a^2 sin^2 S)."""
    ev = jacobi_sn_cn_dn(_stw_phase(y, p), p.m)
    return p.a**2 * ev.sn**2 / (p.w2**2 + (1.0 - p.w2**2) * ev.sn**2)


def stw_h(y, p: STWParams):
    """h(y) - h(0) = a^2 / (alpha w2^3) * J(1 - 1/w2^2; alpha w2 y | m),

    J(n; u | m) = int_0^u sn^2 / (1 - n sn^2), the excess of Pi over u.
    """
    n = 1.0 - 1.0 / p.w2**2
    return p.a**2 / (p.alpha * p.w2**3) * ellint_Pi_excess(n, _stw_phase(y, p), p.m)


def stw_tanh_omega(y, p: STWParams):
    return jacobi_sn_cn_dn(_stw_phase(y, p), p.m).dn


def stw_dS_quadratic_residual(y, p: STWParams):
    """S_y^2 - (alpha^2 + (b^2 + a^4 - alpha^2) sin^2 S - a^4 sin^4 S)."""
    s2 = np.sin(stw_S(y, p)) ** 2
    rhs = p.alpha**2 + (p.b**2 + p.a**4 - p.alpha**2) * s2 - p.a**4 * s2 * s2
    return stw_dS_dy(y, p) ** 2 - rhs


def stw_hopf_constant(p: STWParams) -> complex:
    """e^F u_z conj(u_zbar) for R = alpha x + h(y), S = S(y), e^F = 1/sin^2 S."""
    return complex(-(p.b**2 + p.a**4 - p.alpha**2) / 4.0, -p.alpha * p.a**2 / 2.0)


def stw_map(p: STWParams, grid: FieldGrid) -> FieldGrid:
    """u = alpha x + h(y) + i S(y) on a grid with y inside (0, pi)."""
    if grid.y[0] <= 0.0 or grid.y[-1] >= math.pi:
        raise CatalogParameterError("the strip map needs y in the open interval (0, pi)")
    x, _ = grid.mesh()
    h = np.asarray(stw_h(grid.y, p))
    S = np.asarray(stw_S(grid.y, p))
    return grid.with_values(p.alpha * x + h[:, None] + 1j * S[:, None])


# ---------------------------------------------------------------------------
# Half-plane family
# ---------------------------------------------------------------------------


def litam_omega(xi):
    """omega = -log tanh(xi), a solution of lap omega = 2 sinh(2 omega)."""
    return -np.log(np.tanh(np.asarray(xi, dtype=float)))


def litam_map(a: float, grid: FieldGrid, form: str = "z") -> FieldGrid:
    """``form='z'``: u = x + (i/a) sinh(a y), y > 0.
    ``form='zeta'``: u = 2 eta / a - (i/a) sinh(2 xi), xi > 0 (specific coordinates).
    """
    if not a > 0:
        raise CatalogParameterError("a must be positive")
    x, y = grid.mesh()
    if form == "z":
        if grid.y[0] <= 0:
            raise CatalogParameterError("the z-form needs y > 0")
        return grid.with_values(x + 1j * np.sinh(a * y) / a)
    if form == "zeta":
        if grid.x[0] <= 0:
            raise CatalogParameterError("the zeta-form needs xi > 0")
        return grid.with_values(2.0 * y / a - 1j * np.sinh(2.0 * x) / a)
    raise ValueError("form must be 'z' or 'zeta'")


def litam_limit_deviation(C: float, y0: float = 0.5, span: float = 1.0, n: int = 401) -> float:
    """Sup |omega_C - (-log tanh Y)| over [y0, y0 + span] for the K_N = -1, rho = 1
    one-soliton through omega0 = -log tanh y0 whose first-integral constant is C.

    C = 0 needs omega0' = -2 / sinh(2 y0); C > 0 steepens the slope.  The
    deviation should shrink as C -> 0 (a diagnostic, not a guarantee).
    """
    if not (C > 0 and y0 > 0):
        raise CatalogParameterError("need C > 0 and y0 > 0")
    w0 = float(litam_omega(y0))
    dw0 = -math.sqrt(4.0 * math.sinh(w0) ** 2 + C)
    p = SolitonParams(-1, 1.0, -0.5 * math.pi, y0, w0, dw0)
    Y = np.linspace(y0, y0 + span, n)
    return float(np.nanmax(np.abs(soliton_omega(Y, p) - litam_omega(Y))))
