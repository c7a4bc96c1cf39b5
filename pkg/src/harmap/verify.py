"""Finite-difference checks of harmonic-map identities on sampled grids.

Conventions: ``u`` is a complex :class:`FieldGrid` with values R + iS;
Wirtinger derivatives are d_z = (d_x - i d_y)/2, d_zbar = (d_x + i d_y)/2;
``F`` denotes log of the target conformal factor e^F.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .grid import FieldGrid

__all__ = [
    "MetricDomainError",
    "CriticalPointError",
    "PhiNotHarmonicError",
    "MetricSpec",
    "ConstantCurvature",
    "ClosedFormMetric",
    "SampledMetric",
    "strip_metric",
    "wolf_metric",
    "soliton_metric",
    "default_tolerance",
    "wirtinger",
    "laplacian",
    "interior_mask",
    "harmonic_residual_field",
    "harmonic_residual",
    "HopfResult",
    "hopf_field",
    "DecompositionResult",
    "beltrami_decompose",
    "d4",
    "wirtinger4",
    "laplacian4",
    "beltrami_residual",
    "beltrami_residual_field",
    "curvature_from_metric",
    "curvature_pullback",
    "ReconstructionResult",
    "reconstruct_metric",
    "jacobian_and_norms",
    "sinh_relation_residual",
    "orthogonality_residual",
    "VerificationReport",
    "verify_map",
]


class MetricDomainError(ValueError):
    """Map values leave the domain of the target metric."""

    def __init__(self, message, nodes=()):
        super().__init__(message)
        self.nodes = list(nodes)


class CriticalPointError(ValueError):
    """u_z vanishes, so the Beltrami coefficient is undefined."""


class PhiNotHarmonicError(ValueError):
    """arg(mu) is not harmonic: the map cannot be harmonic for any metric."""


MU_DEGENERATE = 1e-12  # |mu| at roundoff level: u is conformal there


def default_tolerance(h: float) -> float:
    """Grid-aware tolerance max(1e-8, 10 h^2) for smooth closed forms."""
    return max(1e-8, 10.0 * h * h)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


class MetricSpec:
    """Target metric e^F |du|^2 evaluated along map values."""

    def eF(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def F_u(self, u: np.ndarray) -> np.ndarray:
        """dF/du = (F_R - i F_S) / 2."""
        raise NotImplementedError

    def domain_ok(self, u: np.ndarray) -> np.ndarray:
        return np.isfinite(self.eF(u))

    def describe(self) -> str:
        name = getattr(self, "name", "")
        return f"{self.kind}:{name}" if name else self.kind


@dataclass(frozen=True)
class ConstantCurvature(MetricSpec):
    """Model metrics: upper half-plane (-1), flat (0), round sphere (+1)."""

    kN: int

    def __post_init__(self):
        if self.kN not in (-1, 0, 1):
            raise ValueError("kN must be -1, 0 or +1")

    @property
    def kind(self):
        return "constant-curvature"

    @property
    def name(self):
        return {-1: "half-plane", 0: "flat", 1: "sphere"}[self.kN]

    def eF(self, u):
        u = np.asarray(u, dtype=complex)
        if self.kN == -1:
            with np.errstate(divide="ignore"):
                return 1.0 / u.imag**2
        if self.kN == 0:
            return np.ones(u.shape)
        return 4.0 / (1.0 + np.abs(u) ** 2) ** 2

    def F_u(self, u):
        u = np.asarray(u, dtype=complex)
        if self.kN == -1:
            return 1j / u.imag
        if self.kN == 0:
            return np.zeros(u.shape, dtype=complex)
        return -2.0 * np.conj(u) / (1.0 + np.abs(u) ** 2)

    def domain_ok(self, u):
        u = np.asarray(u, dtype=complex)
        if self.kN == -1:
            # either half-plane carries the metric 1/S^2
            return u.imag != 0
        return np.isfinite(u)


@dataclass(frozen=True)
class ClosedFormMetric(MetricSpec):
    """e^F and its gradient given as functions of (R, S)."""

    name: str
    eF_fn: Callable
    dF_dR: Callable
    dF_dS: Callable
    domain: Callable | None = None

    @property
    def kind(self):
        return "closed-form"

    def eF(self, u):
        u = np.asarray(u, dtype=complex)
        return np.asarray(self.eF_fn(u.real, u.imag), dtype=float)

    def F_u(self, u):
        u = np.asarray(u, dtype=complex)
        return 0.5 * (self.dF_dR(u.real, u.imag) - 1j * self.dF_dS(u.real, u.imag))

    def domain_ok(self, u):
        u = np.asarray(u, dtype=complex)
        if self.domain is not None:
            return np.asarray(self.domain(u.real, u.imag), dtype=bool)
        return np.isfinite(self.eF(u)) & (self.eF(u) > 0)


def strip_metric() -> ClosedFormMetric:
    """e^F = 1 / sin^2 S on 0 < S < pi."""
    return ClosedFormMetric(
        "strip",
        lambda R, S: 1.0 / np.sin(S) ** 2,
        lambda R, S: np.zeros_like(R),
        lambda R, S: -2.0 / np.tan(S),
        lambda R, S: (S > 0) & (S < np.pi),
    )


def wolf_metric(t: float) -> ClosedFormMetric:
    """e^F = 1 / (t^2 cos^2(S/t)) on |S| < t pi / 2."""
    return ClosedFormMetric(
        f"wolf(t={t!r})",
        lambda R, S: 1.0 / (t * t * np.cos(S / t) ** 2),
        lambda R, S: np.zeros_like(R),
        lambda R, S: 2.0 * np.tan(S / t) / t,
        lambda R, S: np.abs(S) < 0.5 * np.pi * t,
    )


def soliton_metric(mp) -> ClosedFormMetric:
    """The constant-curvature metric written in S for a one-soliton map."""
    from . import mapgen

    return ClosedFormMetric(
        "soliton",
        lambda R, S: mapgen.metric_density(S, mp),
        lambda R, S: np.zeros_like(R),
        lambda R, S: mapgen.metric_dF_dS(S, mp),
    )


@dataclass(frozen=True)
class SampledMetric(MetricSpec):
    """log e^F sampled on the domain grid (already pulled back along u)."""

    F: FieldGrid

    @property
    def kind(self):
        return "sampled"

    @property
    def name(self):
        return ""

    def eF(self, u):
        return np.exp(self.F.values)

    def F_u(self, u):  # needs the map's derivatives; see _pullback_gradient
        raise TypeError("sampled metrics are differentiated through the map")

    def domain_ok(self, u):
        return self.F.mask


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


def _grad(values: np.ndarray, grid: FieldGrid):
    """(d/dxi, d/deta), central in the interior, one-sided second order at edges."""
    d_eta, d_xi = np.gradient(values, grid.hy, grid.hx, edge_order=2)
    return d_xi, d_eta


def wirtinger(fieldgrid: FieldGrid) -> tuple[FieldGrid, FieldGrid]:
    """(d_z f, d_zbar f) on the same grid."""
    v = np.asarray(fieldgrid.values, dtype=complex)
    fx, fy = _grad(v, fieldgrid)
    dz = 0.5 * (fx - 1j * fy)
    dzb = 0.5 * (fx + 1j * fy)
    return fieldgrid.with_values(dz), fieldgrid.with_values(dzb)


def d4(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order first derivative along ``axis`` (one-sided near the ends)."""
    f = np.moveaxis(np.asarray(f), axis, 0)
    n = f.shape[0]
    if n < 5:
        return np.moveaxis(np.gradient(f, h, axis=0, edge_order=2), 0, axis)
    d = np.empty(f.shape, dtype=np.result_type(f, 1.0))
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = -(-25.0 * f[-1] + 48.0 * f[-2] - 36.0 * f[-3] + 16.0 * f[-4] - 3.0 * f[-5]) / (12.0 * h)
    d[-2] = -(-3.0 * f[-1] - 10.0 * f[-2] + 18.0 * f[-3] - 6.0 * f[-4] + f[-5]) / (12.0 * h)
    return np.moveaxis(d, 0, axis)


def wirtinger4(fieldgrid: FieldGrid) -> tuple[FieldGrid, FieldGrid]:
    """Fourth-order variant of ``wirtinger``."""
    v = np.asarray(fieldgrid.values, dtype=complex)
    fx, fy = d4(v, fieldgrid.hx, 1), d4(v, fieldgrid.hy, 0)
    return fieldgrid.with_values(0.5 * (fx - 1j * fy)), fieldgrid.with_values(0.5 * (fx + 1j * fy))


def laplacian(fieldgrid: FieldGrid) -> FieldGrid:
    """5-point Laplacian on interior nodes; edge nodes are NaN and masked."""
    v = np.asarray(fieldgrid.values)
    out = np.full(v.shape, np.nan, dtype=v.dtype if np.iscomplexobj(v) else float)
    hx2, hy2 = fieldgrid.hx**2, fieldgrid.hy**2
    out[1:-1, 1:-1] = (
        (v[1:-1, 2:] - 2.0 * v[1:-1, 1:-1] + v[1:-1, :-2]) / hx2
        + (v[2:, 1:-1] - 2.0 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / hy2
    )
    return fieldgrid.with_values(out, interior_mask(fieldgrid.mask, 1))


def interior_mask(mask: np.ndarray, margin: int) -> np.ndarray:
    """Regular nodes at least ``margin`` steps from the edge and from masked nodes."""
    out = np.asarray(mask, dtype=bool).copy()
    for _ in range(margin):
        grown = out.copy()
        grown[0, :] = grown[-1, :] = False
        grown[:, 0] = grown[:, -1] = False
        grown[1:, :] &= out[:-1, :]
        grown[:-1, :] &= out[1:, :]
        grown[:, 1:] &= out[:, :-1]
        grown[:, :-1] &= out[:, 1:]
        out = grown
    return out


def _max_abs(values: np.ndarray, mask: np.ndarray) -> float:
    a = np.abs(np.asarray(values))[mask]
    a = a[np.isfinite(a)]
    return float(a.max()) if a.size else math.nan


def _require_same(*grids: FieldGrid):
    for g in grids[1:]:
        if not grids[0].same_geometry(g):
            raise ValueError("fields live on different grids")


def _check_domain(u: FieldGrid, metric: MetricSpec):
    ok = np.asarray(metric.domain_ok(u.values), dtype=bool)
    bad = u.mask & ~ok
    if np.any(bad):
        nodes = [tuple(int(k) for k in ij) for ij in np.argwhere(bad)[:20]]
        raise MetricDomainError(
            f"{int(bad.sum())} map values outside the domain of {metric.describe()}", nodes
        )


def _pullback_gradient(F: np.ndarray, u: FieldGrid, uz: np.ndarray, uzb: np.ndarray, order: int = 2):
    """Solve for (G_u, G_ubar) from (G_z, G_zbar) via the chain rule.

    G_z = G_u u_z + G_ubar conj(u_zbar),  G_zbar = G_u u_zbar + G_ubar conj(u_z).
    """
    G = u.with_values(F)
    Gz, Gzb = (wirtinger4 if order == 4 else wirtinger)(G)
    det = np.abs(uz) ** 2 - np.abs(uzb) ** 2
    Gu = (np.conj(uz) * Gz.values - np.conj(uzb) * Gzb.values) / det
    Gub = (uz * Gzb.values - uzb * Gz.values) / det
    return Gu, Gub


# ---------------------------------------------------------------------------
# Harmonicity and Hopf differential
# ---------------------------------------------------------------------------


def _F_u(u: FieldGrid, metric: MetricSpec, uz, uzb, order: int = 2):
    if isinstance(metric, SampledMetric):
        _require_same(u, metric.F)
        Fu, _ = _pullback_gradient(metric.F.values, u, uz, uzb, order)
        return Fu
    return metric.F_u(u.values)


def _derivs(u: FieldGrid, order: int):
    if order == 2:
        return wirtinger(u), laplacian(u), 1
    if order == 4:
        return wirtinger4(u), laplacian4(u), 2
    raise ValueError("order must be 2 or 4")


def harmonic_residual_field(u: FieldGrid, metric: MetricSpec, order: int = 2) -> FieldGrid:
    """u_zzbar + F_u u_z u_zbar, with u_zzbar = (Laplacian) / 4.

    ``order`` 2 uses central differences and the 5-point Laplacian, 4 the
    fourth-order stencils.
    """
    _check_domain(u, metric)
    (uz, uzb), lap, margin = _derivs(u, order)
    r = 0.25 * lap.values + _F_u(u, metric, uz.values, uzb.values, order) * uz.values * uzb.values
    if isinstance(metric, SampledMetric):
        margin += 1
    return u.with_values(r, interior_mask(u.mask, margin))


def harmonic_residual(u: FieldGrid, metric: MetricSpec, order: int = 2) -> float:
    """Max |u_zzbar + F_u u_z u_zbar| over regular interior nodes."""
    r = harmonic_residual_field(u, metric, order)
    return _max_abs(r.values, r.mask)


@dataclass(frozen=True)
class HopfResult:
    field: FieldGrid
    holomorphy_max: float
    std: float
    mean: complex
    min_abs: float
    dev_from_one: float


def hopf_field(u: FieldGrid, metric: MetricSpec, order: int = 2) -> HopfResult:
    """Lambda = e^F u_z conj(u_zbar) and its d_zbar-residual."""
    _check_domain(u, metric)
    diff = wirtinger4 if order == 4 else wirtinger
    uz, uzb = diff(u)
    lam = metric.eF(u.values) * uz.values * np.conj(uzb.values)
    lam_grid = u.with_values(lam)
    _, dzb = diff(lam_grid)
    inner = interior_mask(u.mask, 2)
    vals = lam[inner & np.isfinite(lam)]
    mean = complex(vals.mean()) if vals.size else complex("nan")
    std = float(np.sqrt(np.mean(np.abs(vals - mean) ** 2))) if vals.size else math.nan
    return HopfResult(
        field=lam_grid,
        holomorphy_max=_max_abs(dzb.values, inner),
        std=std,
        mean=mean,
        min_abs=float(np.min(np.abs(vals))) if vals.size else math.nan,
        dev_from_one=_max_abs(lam - 1.0, inner),
    )


def laplacian4(fieldgrid: FieldGrid) -> FieldGrid:
    """Fourth-order 9-point (cross) Laplacian; nodes within 2 of an edge are masked."""
    v = np.asarray(fieldgrid.values)
    out = np.full(v.shape, np.nan, dtype=v.dtype if np.iscomplexobj(v) else float)
    hx2, hy2 = 12.0 * fieldgrid.hx**2, 12.0 * fieldgrid.hy**2
    c = v[2:-2, 2:-2]
    out[2:-2, 2:-2] = (
        (-v[2:-2, 4:] + 16.0 * v[2:-2, 3:-1] - 30.0 * c + 16.0 * v[2:-2, 1:-3] - v[2:-2, :-4]) / hx2
        + (-v[4:, 2:-2] + 16.0 * v[3:-1, 2:-2] - 30.0 * c + 16.0 * v[1:-3, 2:-2] - v[:-4, 2:-2]) / hy2
    )
    return fieldgrid.with_values(out, interior_mask(fieldgrid.mask, 2))


# ---------------------------------------------------------------------------
# Beltrami decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionResult:
    omega: FieldGrid
    phi: FieldGrid
    phi_harmonicity: float
    degenerate_nodes: int


def _unwrap(angle: np.ndarray) -> np.ndarray:
    # rows first, then a seam pass down the first column
    phi = np.unwrap(angle, axis=1)
    seam = np.unwrap(phi[:, 0])
    return phi + (seam - phi[:, 0])[:, None]


def beltrami_decompose(u: FieldGrid) -> DecompositionResult:
    """mu = u_zbar / u_z = e^{-2 omega + i phi}; returns omega, phi and max |lap phi|.

    Derivatives and the Laplacian are fourth order: for a harmonic phi the
    second-order error terms dominate the check otherwise.
    """
    uz, uzb = wirtinger4(u)
    if np.any(np.abs(uz.values[u.mask]) == 0.0):
        raise CriticalPointError("u_z vanishes at a regular node")
    mu = uzb.values / uz.values
    mod = np.abs(mu)
    degenerate = u.mask & (mod <= MU_DEGENERATE)
    ok = u.mask & ~degenerate & np.isfinite(mod)
    with np.errstate(divide="ignore"):
        omega = -0.5 * np.log(mod)
    angle = np.where(ok, np.angle(mu), 0.0)
    phi = _unwrap(angle)
    phi_grid = u.with_values(np.where(ok, phi, np.nan), ok)
    lap = laplacian4(phi_grid)
    # rows 0-1 of the derivatives are one-sided; keep the Laplacian off them
    inner = interior_mask(ok, 4)
    return DecompositionResult(
        omega=u.with_values(np.where(ok, omega, np.nan), ok),
        phi=phi_grid,
        phi_harmonicity=_max_abs(lap.values, inner),
        degenerate_nodes=int(degenerate.sum()),
    )


def beltrami_residual_field(u: FieldGrid, omega: FieldGrid, phase=0.0, order: int = 2) -> FieldGrid:
    """e^{omega} u_zbar - e^{-omega} e^{i phase} u_z on interior nodes."""
    _require_same(u, omega)
    uz, uzb = (wirtinger4 if order == 4 else wirtinger)(u)
    w = omega.values
    r = np.exp(w) * uzb.values - np.exp(-w) * np.exp(1j * np.asarray(phase)) * uz.values
    return u.with_values(r, interior_mask(u.mask & omega.mask, 1))


def beltrami_residual(u: FieldGrid, omega: FieldGrid, phase=0.0, order: int = 2) -> float:
    """Max |e^{omega} u_zbar - e^{-omega} e^{i phase} u_z| (phase = Im lambda, 0 in specific coordinates)."""
    r = beltrami_residual_field(u, omega, phase, order)
    return _max_abs(r.values, r.mask)


# ---------------------------------------------------------------------------
# Curvature and the reconstructed metric
# ---------------------------------------------------------------------------


def curvature_from_metric(F: FieldGrid) -> FieldGrid:
    """K = -(1/2) e^{-F} lap F, F = log of the conformal factor."""
    lap = laplacian(F)
    return lap.with_values(-0.5 * np.exp(-F.values) * lap.values, lap.mask)


def curvature_pullback(F: FieldGrid, u: FieldGrid, margin: int = 2) -> FieldGrid:
    """Curvature of e^F |du|^2 when F is sampled at domain nodes along u.

    Uses K = -2 F_{u ubar} e^{-F}, each target derivative obtained from
    domain derivatives by the 2x2 chain-rule solve.
    """
    _require_same(F, u)
    uz, uzb = wirtinger(u)
    Fu, _ = _pullback_gradient(F.values, u, uz.values, uzb.values)
    _, Fuub = _pullback_gradient(Fu, u, uz.values, uzb.values)
    K = -2.0 * np.real(Fuub) * np.exp(-F.values)
    return u.with_values(K, interior_mask(u.mask & F.mask, margin))


@dataclass(frozen=True)
class ReconstructionResult:
    eF: FieldGrid
    curvature_theorem: FieldGrid
    curvature_direct: FieldGrid
    harmonic_max: float
    phi_harmonicity: float


def reconstruct_metric(u: FieldGrid, lam: complex = 0.0, phi_tol: float | None = None) -> ReconstructionResult:
    """Target metric rebuilt from the map alone.

    e^{F} = e^{-psi} / (|u_z| |u_zbar|), psi = Re(lam), where lam is the
    constant with Hopf differential e^{-lam} dz^2 (so lam = 0 in specific
    coordinates).  Curvature from K = -(2 omega_zzbar / sinh 2 omega) e^{psi}
    and, independently, from the pulled-back metric.
    """
    dec = beltrami_decompose(u)
    if dec.degenerate_nodes:
        raise CriticalPointError("Beltrami coefficient vanishes: conformal map, no reconstruction")
    tol = default_tolerance(min(u.hx, u.hy)) if phi_tol is None else phi_tol
    if not dec.phi_harmonicity <= tol:
        raise PhiNotHarmonicError(
            f"arg(mu) not harmonic: max |lap phi| = {dec.phi_harmonicity:.3e} > {tol:.1e}"
        )
    psi = float(np.real(lam))
    uz, uzb = wirtinger4(u)
    eF = math.exp(-psi) / (np.abs(uz.values) * np.abs(uzb.values))
    F = u.with_values(np.log(eF), interior_mask(dec.omega.mask, 2))
    w = dec.omega
    lapw = laplacian(w)
    K_thm = -(0.5 * lapw.values / np.sinh(2.0 * w.values)) * math.exp(psi)
    # F and omega are themselves difference quotients, so one more layer of
    # edge nodes is dropped than for sampled closed forms
    K_thm_grid = w.with_values(K_thm, interior_mask(w.mask, 3))
    K_dir = curvature_pullback(F, u, margin=3)
    return ReconstructionResult(
        eF=u.with_values(eF, F.mask),
        curvature_theorem=K_thm_grid,
        curvature_direct=K_dir,
        harmonic_max=harmonic_residual(u.with_values(u.values, F.mask), SampledMetric(F), order=4),
        phi_harmonicity=dec.phi_harmonicity,
    )


# ---------------------------------------------------------------------------
# Jacobian, orthogonality
# ---------------------------------------------------------------------------


def jacobian_and_norms(u: FieldGrid, metric: MetricSpec, f: FieldGrid | None = None, order: int = 2) -> FieldGrid:
    """J = e^{F - f} (|u_z|^2 - |u_zbar|^2); f = 0 gives the Euclidean domain."""
    uz, uzb = (wirtinger4 if order == 4 else wirtinger)(u)
    e = metric.eF(u.values) if not isinstance(metric, SampledMetric) else np.exp(metric.F.values)
    if f is not None:
        _require_same(u, f)
        e = e * np.exp(-f.values)
    return u.with_values(e * (np.abs(uz.values) ** 2 - np.abs(uzb.values) ** 2))


def sinh_relation_residual(u: FieldGrid, metric: MetricSpec, lam: complex = 0.0) -> float:
    """Max |sinh 2 omega - (e^{F + Re lam} / 2)(|u_z|^2 - |u_zbar|^2)|."""
    dec = beltrami_decompose(u)
    J = jacobian_and_norms(u, metric, order=4)
    r = np.sinh(2.0 * dec.omega.values) - 0.5 * math.exp(float(np.real(lam))) * J.values
    return _max_abs(r, interior_mask(dec.omega.mask, 2))


def orthogonality_residual(u: FieldGrid) -> float:
    """Max |R_xi R_eta + S_xi S_eta| (coordinate lines map to orthogonal curves)."""
    v = np.asarray(u.values, dtype=complex)
    Rx, Ry = _grad(v.real, u)
    Sx, Sy = _grad(v.imag, u)
    return _max_abs(Rx * Ry + Sx * Sy, u.mask)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

REPORT_FIELDS = (
    "harmonic_max",
    "beltrami_max",
    "hopf_holomorphy_max",
    "hopf_std",
    "curvature_dev_max",
    "jacobian_min",
    "orthogonality_max",
    "phi_harmonicity_max",
)


@dataclass
class VerificationReport:
    """Named residuals with the tolerances and verdicts that produced them.

    A residual of None means the check does not apply to this map.
    """

    harmonic_max: float | None = None
    beltrami_max: float | None = None
    hopf_holomorphy_max: float | None = None
    hopf_std: float | None = None
    curvature_dev_max: float | None = None
    jacobian_min: float | None = None
    orthogonality_max: float | None = None
    phi_harmonicity_max: float | None = None
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def judge(self) -> "VerificationReport":
        """Fill ``passed`` from the residuals and tolerances."""
        for name in REPORT_FIELDS:
            val = getattr(self, name)
            if val is None:
                continue
            if not (isinstance(val, float) and math.isfinite(val)):
                self.flags.append(f"{name}: non-finite")
                self.passed[name] = False
                continue
            tol = self.tolerances.get(name)
            if tol is None:
                continue
            self.passed[name] = val > tol if name == "jacobian_min" else val <= tol
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        for name in REPORT_FIELDS:
            v = d[name]
            if v is not None and not math.isfinite(v):
                d[name] = None
        d["ok"] = self.ok
        return d


def _grid_meta(u: FieldGrid) -> dict:
    return {
        "nx": u.nx,
        "ny": u.ny,
        "x_range": [float(u.x[0]), float(u.x[-1])],
        "y_range": [float(u.y[0]), float(u.y[-1])],
        "hx": u.hx,
        "hy": u.hy,
        "regular_nodes": int(u.mask.sum()),
    }


def verify_map(
    u: FieldGrid,
    metric: MetricSpec,
    *,
    omega_ref: FieldGrid | None = None,
    lam: complex = 0.0,
    expected_K: float | None = None,
    hopf_constant: complex | None = None,
    orthogonal: bool = False,
    tol: float | None = None,
    curvature_tol: float = 1e-3,
    reconstruct: bool = True,
    order: int = 2,
) -> VerificationReport:
    """Run every applicable identity check on a sampled map.

    ``omega_ref`` enables the Beltrami residual against a known omega;
    ``hopf_constant`` enables the constancy check of Lambda;
    ``expected_K`` enables the curvature checks of the reconstructed metric;
    ``orthogonal`` enables the orthogonality check (phi = 0 maps);
    ``order`` (2 or 4) selects the stencils of the harmonic, Hopf and Beltrami checks.
    """
    h = min(u.hx, u.hy)
    t = default_tolerance(h) if tol is None else float(tol)
    rep = VerificationReport(grid=_grid_meta(u))
    rep.extra["metric"] = metric.describe()
    rep.extra["stencil_order"] = order

    rep.harmonic_max = harmonic_residual(u, metric, order)
    hopf = hopf_field(u, metric, order)
    rep.hopf_holomorphy_max = hopf.holomorphy_max
    rep.extra["hopf_mean"] = [hopf.mean.real, hopf.mean.imag]
    rep.extra["hopf_min_abs"] = hopf.min_abs
    if hopf.min_abs == 0.0:
        rep.flags.append("Hopf differential vanishes at a node")
    if hopf_constant is not None:
        rep.hopf_std = hopf.std
        rep.extra["hopf_constant_dev"] = abs(hopf.mean - complex(hopf_constant))

    dec = beltrami_decompose(u)
    rep.phi_harmonicity_max = dec.phi_harmonicity
    if omega_ref is not None:
        rep.beltrami_max = beltrami_residual(u, omega_ref, phase=float(np.imag(lam)), order=order)

    J = jacobian_and_norms(u, metric)
    jv = J.values[J.mask]
    rep.jacobian_min = float(np.min(np.abs(jv))) if jv.size else math.nan
    signs = np.unique(np.sign(jv))
    rep.extra["jacobian_sign"] = int(signs[0]) if signs.size == 1 else 0
    if signs.size != 1:
        rep.flags.append("Jacobian changes sign")

    if orthogonal:
        rep.orthogonality_max = orthogonality_residual(u)

    rep.tolerances = {
        "harmonic_max": t,
        "beltrami_max": t,
        "hopf_holomorphy_max": t,
        "hopf_std": t,
        "phi_harmonicity_max": t,
        "orthogonality_max": t,
        "jacobian_min": 0.0,
    }

    if expected_K is not None and reconstruct and dec.degenerate_nodes == 0:
        try:
            rec = reconstruct_metric(u, lam, phi_tol=max(t, dec.phi_harmonicity))
        except (PhiNotHarmonicError, CriticalPointError) as exc:
            rep.flags.append(str(exc))
        else:
            dev_t = _max_abs(rec.curvature_theorem.values - expected_K, rec.curvature_theorem.mask)
            dev_d = _max_abs(rec.curvature_direct.values - expected_K, rec.curvature_direct.mask)
            rep.curvature_dev_max = max(dev_t, dev_d)
            rep.tolerances["curvature_dev_max"] = curvature_tol
            rep.extra["curvature_dev_theorem"] = dev_t
            rep.extra["curvature_dev_direct"] = dev_d
            rep.extra["reconstructed_harmonic_max"] = rec.harmonic_max
            em = rec.eF.mask & u.mask
            rel = np.abs(rec.eF.values - metric.eF(u.values)) / np.abs(metric.eF(u.values))
            rep.extra["reconstructed_factor_rel_dev"] = _max_abs(rel, interior_mask(em, 1))
    if signs.size != 1:
        rep.passed["jacobian_sign"] = False
    return rep.judge()
