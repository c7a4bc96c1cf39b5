"""One-soliton solutions omega(Y) of omega'' = -(2 K_N / rho^2) sinh(2 omega).

Every trajectory obeys the first integral

    (omega' / sqrt(C))^2 + (m - 1) sinh^2(omega) = 1,
    C = omega0'^2 + (4 K_N / rho^2) sinh^2(omega0),  m = 1 + 4 K_N / (C rho^2),

and is expressed through real Jacobi functions.  Four real branches occur:

``linear``  K_N = 0: omega = omega0 + eps sqrt(C) (Y - Y0).
``sn``      C > 0, m > 0: tanh omega = sn(v | 1/m) / sqrt(m),
            v = eps sqrt(C m) (Y - Y0) + v0,  v0 = sd^-1(sqrt(m) sinh omega0 | 1/m).
``sc``      C > 0, m < 0: sinh omega = sc(w | q) / sqrt(1 - m), q = -m / (1 - m).
``nc``      C < 0: sinh omega = sign(omega0) s nc(w | q), s^2 = -C rho^2 / 4,
            q = 1 - 1/m.

Outside the regular interval containing Y0 the functions return NaN, so
grid sweeps can mask singular nodes instead of catching exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import complete_K, inverse_jacobi, jacobi_sn_cn_dn

__all__ = [
    "SolitonParams",
    "SolitonParameterError",
    "DegenerateParameterError",
    "rotate_coords",
    "unrotate_coords",
    "omega",
    "omega_prime",
    "omega_prime_shifted",
    "sinh_cosh_omega",
    "regular_mask",
    "first_integral_residual",
    "sinh_gordon_residual",
]


class SolitonParameterError(ValueError):
    """Parameters do not describe a real one-soliton trajectory."""


class DegenerateParameterError(SolitonParameterError):
    """m = 0: the closed forms divide by sqrt(m)."""


@dataclass(frozen=True)
class SolitonParams:
    """Initial data of a one-soliton plus its derived constants.

    ``eps`` is the sign of dv/dY.  It is forced by the sign of ``domega0``
    when that is nonzero; passing a contradicting value raises.  With
    ``domega0 == 0`` the given value (default +1) picks the direction.
    """

    kN: int
    rho: float
    tau: float
    Y0: float
    omega0: float
    domega0: float
    eps: int | None = None

    C: float = field(init=False)
    m: float = field(init=False)
    M: float = field(init=False)
    kappa: float = field(init=False)
    branch: str = field(init=False)
    v0: float = field(init=False)
    param: float = field(init=False)   # elliptic parameter of the branch formula
    scale: float = field(init=False)   # d(phase)/dY, sign included
    sigma: float = field(init=False)   # sign(omega0) on the nc branch
    s_star: float = field(init=False)  # nc branch amplitude
    half_width: float = field(init=False)  # regular phase interval |phase| < half_width

    def __post_init__(self):
        kN = int(self.kN)
        if kN not in (-1, 0, 1):
            raise SolitonParameterError("kN must be -1, 0 or +1")
        vals = (self.rho, self.tau, self.Y0, self.omega0, self.domega0)
        if not all(math.isfinite(float(v)) for v in vals):
            raise SolitonParameterError("soliton parameters must be finite")
        if self.rho <= 0:
            raise SolitonParameterError("rho must be positive")
        if self.eps not in (None, 1, -1):
            raise SolitonParameterError("eps must be +1 or -1")
        rho2 = self.rho**2
        w0, dw0 = float(self.omega0), float(self.domega0)
        C = dw0 * dw0 + 4.0 * kN / rho2 * math.sinh(w0) ** 2
        if C == 0.0:
            raise SolitonParameterError("C = 0: no one-soliton branch (constant or separatrix solution)")
        kappa = 4.0 * kN / (C * rho2)
        m = 1.0 + kappa
        if kN != 0 and m == 0.0:
            raise DegenerateParameterError("m = 0 is a degenerate boundary case")
        M = 1.0 + kappa * math.cos(self.tau) ** 2

        sign_d = (dw0 > 0) - (dw0 < 0)
        sigma = 1.0
        s_star = math.nan
        v0 = math.nan
        if kN == 0:
            branch, param = "linear", 1.0
            dir_sign = sign_d
        elif C > 0 and m > 0:
            branch, param = "sn", 1.0 / m
            dir_sign = sign_d
            v0 = float(inverse_jacobi("sd", math.sqrt(m) * math.sinh(w0), param))
        elif C > 0:
            branch, param = "sc", -m / (1.0 - m)
            dir_sign = sign_d
        else:
            branch, param = "nc", 1.0 - 1.0 / m
            sigma = 1.0 if w0 > 0 else -1.0
            s_star = math.sqrt(-C * rho2 / 4.0)
            dir_sign = int(sigma) * sign_d
        if branch in ("sc", "nc") and not param < 1.0:
            # |C| so small that the elliptic parameter rounds to 1 (separatrix limit)
            raise SolitonParameterError("C too close to 0: elliptic parameter rounds to 1")

        if dir_sign != 0:
            if self.eps is not None and self.eps != dir_sign:
                raise SolitonParameterError("eps contradicts the sign of omega0'")
            eps = dir_sign
        else:
            eps = 1 if self.eps is None else int(self.eps)

        if branch == "linear":
            scale, phase0, half = eps * math.sqrt(C), w0, math.inf
        elif branch == "sn":
            scale, phase0 = eps * math.sqrt(C * m), v0
            # dn(v | 1/m) > 0 is automatic for m > 1; for m < 1 it holds on
            # |v| < sqrt(m) K(m).
            half = math.inf if m >= 1.0 else math.sqrt(m) * float(complete_K(m))
        elif branch == "sc":
            k = 1.0 - m
            scale = eps * math.sqrt(C * k)
            phase0 = float(inverse_jacobi("sc", math.sqrt(k) * math.sinh(w0), param))
            half = float(complete_K(param))
        else:
            scale = eps * math.sqrt(-C * m)
            ratio = min(1.0, s_star / abs(math.sinh(w0)))
            phase0 = float(inverse_jacobi("cn", ratio, param))
            half = float(complete_K(param))

        for name, value in (
            ("kN", kN), ("eps", eps), ("C", C), ("m", m), ("M", M), ("kappa", kappa),
            ("branch", branch), ("v0", phase0 if branch != "linear" else math.nan),
            ("param", param), ("scale", scale), ("sigma", sigma), ("s_star", s_star),
            ("half_width", half),
        ):
            object.__setattr__(self, name, value)

    @property
    def A(self) -> float:
        """4 / rho^2, the coefficient of sinh^2 in the first integral."""
        return 4.0 / self.rho**2


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------


def rotate_coords(zeta, params: SolitonParams):
    """Z = rho e^{-i tau} zeta, so that X = Re Z and Y = Im Z."""
    return params.rho * np.exp(-1j * params.tau) * np.asarray(zeta, dtype=complex)


def unrotate_coords(Z, params: SolitonParams):
    return np.exp(1j * params.tau) * np.asarray(Z, dtype=complex) / params.rho


# ---------------------------------------------------------------------------
# Trajectory
# ---------------------------------------------------------------------------


def _phase(Y, p: SolitonParams):
    return p.scale * (np.asarray(Y, dtype=float) - p.Y0) + p.v0


def regular_mask(Y, p: SolitonParams):
    """True where Y lies in the regular interval of the branch through Y0."""
    Y = np.asarray(Y, dtype=float)
    if p.branch == "linear":
        return np.isfinite(Y)
    return np.abs(_phase(Y, p)) < p.half_width


def _out(a):
    return a[()] if np.ndim(a) == 0 else a


def sinh_cosh_omega(Y, p: SolitonParams):
    """(sinh omega, cosh omega) from Jacobi quotients; NaN off the regular set."""
    Y = np.asarray(Y, dtype=float)
    if p.branch == "linear":
        w = p.omega0 + p.scale * (Y - p.Y0)
        return _out(np.sinh(w)), _out(np.cosh(w))
    ev = jacobi_sn_cn_dn(_phase(Y, p), p.param)
    ok = regular_mask(Y, p)
    if p.branch == "sn":
        sh = ev.pq("s", "d") / math.sqrt(p.m)
        ch = ev.pq("n", "d")
    elif p.branch == "sc":
        sh = ev.pq("s", "c") / math.sqrt(1.0 - p.m)
        ch = ev.pq("d", "c")
    else:
        sh = p.sigma * p.s_star * ev.pq("n", "c")
        ch = ev.pq("d", "c") / math.sqrt(p.param)
    sh = np.where(ok, sh, np.nan)
    ch = np.where(ok, ch, np.nan)
    return _out(sh), _out(ch)


def omega(Y, p: SolitonParams):
    """omega(Y) on the regular branch, NaN elsewhere."""
    if p.branch == "linear":
        Y = np.asarray(Y, dtype=float)
        return _out(p.omega0 + p.scale * (Y - p.Y0))
    sh, _ = sinh_cosh_omega(Y, p)
    return _out(np.arcsinh(sh))


def omega_prime(Y, p: SolitonParams):
    """omega'(Y) from the cd / nc / sc closed forms."""
    Y = np.asarray(Y, dtype=float)
    if p.branch == "linear":
        return _out(np.full(Y.shape, p.scale))
    ev = jacobi_sn_cn_dn(_phase(Y, p), p.param)
    eps = 1.0 if p.scale > 0 else -1.0
    if p.branch == "sn":
        d = eps * math.sqrt(p.C) * ev.pq("c", "d")
    elif p.branch == "sc":
        d = eps * math.sqrt(p.C) * ev.pq("n", "c")
    else:
        d = p.sigma * eps * math.sqrt(-p.C) * ev.pq("s", "c")
    return _out(np.where(regular_mask(Y, p), d, np.nan))


def omega_prime_shifted(Y, p: SolitonParams):
    """Alternative form eps sqrt(C) sn(v + K(1/m) | 1/m), valid for m >= 1."""
    if p.branch != "sn" or p.m < 1.0:
        raise SolitonParameterError("shifted form needs the sn branch with m >= 1")
    eps = 1.0 if p.scale > 0 else -1.0
    quarter = float(complete_K(p.param)) if p.param < 1.0 else math.inf
    return _out(eps * math.sqrt(p.C) * jacobi_sn_cn_dn(_phase(Y, p) + quarter, p.param).sn)


def first_integral_residual(Y, p: SolitonParams):
    """omega'^2 / C + (m - 1) sinh^2 omega - 1 along the closed form."""
    sh, _ = sinh_cosh_omega(Y, p)
    d = omega_prime(Y, p)
    return _out(d * d / p.C + (p.m - 1.0) * sh * sh - 1.0)


def sinh_gordon_residual(p: SolitonParams, Ys, h: float = 1e-4) -> float:
    """max |omega''_FD + (2 K_N / rho^2) sinh 2 omega| over the samples."""
    Ys = np.asarray(Ys, dtype=float)
    w = omega(Ys, p)
    d2 = (omega(Ys + h, p) - 2.0 * w + omega(Ys - h, p)) / (h * h)
    r = np.abs(d2 + 2.0 * p.kN / p.rho**2 * np.sinh(2.0 * w))
    return float(np.nanmax(r)) if np.any(np.isfinite(r)) else math.nan
