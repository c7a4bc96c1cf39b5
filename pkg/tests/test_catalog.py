import math

import numpy as np
import pytest
from scipy.integrate import quad

from harmap import catalog as cat
from harmap import elliptic, verify
from harmap.grid import FieldGrid

HALF_PLANE = verify.ConstantCurvature(-1)


@pytest.fixture(scope="module")
def wolf():
    return cat.wolf_solve(2.0)


@pytest.fixture(scope="module")
def stw():
    return cat.STWParams(1.0, 1.0, cat.stw_solve_b(1.0, 1.0))


# --- Wolf cylinders ----------------------------------------------------------------------


def test_wolf_boundary_values(wolf):
    assert wolf.U[0] == 0.0
    assert wolf.boundary_error < 1e-10
    assert abs(wolf.U[-1] - math.acosh(2.0)) < 1e-10


def test_wolf_first_integral(wolf):
    assert wolf.first_integral_drift < 1e-9
    assert wolf.c0 > 0.5


def test_wolf_rejects_t_le_one():
    with pytest.raises(cat.CatalogParameterError):
        cat.wolf_solve(1.0)


def test_wolf_odd_extension(wolf):
    x = np.array([0.2, 0.7])
    assert np.max(np.abs(wolf(-x) + wolf(x))) == 0.0


def test_wolf_harmonic(wolf):
    g = FieldGrid.uniform((-1.0, 1.0), (0.0, 1.0), 401, 101)
    assert verify.harmonic_residual(cat.wolf_map(wolf, g), verify.wolf_metric(2.0)) < 1e-5


def test_wolf_soliton_path_agrees(wolf):
    g = FieldGrid.uniform((-1.0, 1.0), (0.0, 1.0), 201, 101)
    a = cat.wolf_map(wolf, g).values
    b = cat.wolf_soliton_map(2.0, wolf.c0, g).values
    assert np.max(np.abs(a - b)) < 1e-6


def test_wolf_soliton_constants(wolf):
    # first integral normalised as (t U')^2 = sinh^2 U + 1/2 + c0
    mp = cat.wolf_as_soliton(2.0, wolf.c0)
    assert abs(mp.alpha + 2.0 * 2.0 / math.sqrt(wolf.c0 - 0.5)) < 1e-12
    assert mp.soliton.tau == -0.5 * math.pi
    assert abs(mp.soliton.M - 1.0) < 1e-12
    assert abs(mp.soliton.m - (wolf.c0 + 0.5)) < 1e-12


def test_wolf_S_component(wolf):
    g = FieldGrid.uniform((-1.0, 1.0), (0.0, 1.0), 101, 11)
    x, _ = g.mesh()
    S = cat.wolf_soliton_map(2.0, wolf.c0, g).values.imag
    assert np.max(np.abs(S - 2.0 * np.arctan(np.sinh(wolf(x))))) < 1e-6


def test_wolf_hopf_constant(wolf):
    g = FieldGrid.uniform((-1.0, 1.0), (0.0, 1.0), 201, 101)
    h = verify.hopf_field(cat.wolf_map(wolf, g), verify.wolf_metric(2.0), order=4)
    assert abs(h.mean - (wolf.c0 - 0.5) / 16.0) < 1e-8


# --- half-cylinder ---------------------------------------------------------------------------


def test_half_cylinder_boundary():
    for c in (0.1, 1.0, 3.0):
        assert abs(cat.half_cylinder_v(1.0, c)[0] - 1.0) < 1e-15


def test_half_cylinder_ode():
    y = np.linspace(1.0, 3.0, 101)
    for c in (0.1, 0.25, 2.0):
        assert np.max(np.abs(cat.half_cylinder_ode_residual(y, c))) < 1e-10


def test_half_cylinder_small_c_limit():
    y = np.linspace(1.0, 3.0, 21)
    assert np.max(np.abs(cat.half_cylinder_v(y, 1e-8)[0] - y)) < 1e-6


def test_half_cylinder_harmonic_and_hopf():
    p = cat.HalfCylinderParams(0.25)
    g = FieldGrid.uniform((0.0, 1.0), (1.0, 3.0), 201, 401)
    u, w = cat.half_cylinder_map(p, g)
    assert verify.harmonic_residual(u, HALF_PLANE) < 1e-6
    h = verify.hopf_field(u, HALF_PLANE, order=4)
    assert abs(h.mean - p.hopf_constant) < 1e-8 and h.std < 1e-8


def test_half_cylinder_omega():
    p = cat.HalfCylinderParams(0.25)
    g = FieldGrid.uniform((0.0, 1.0), (1.0, 3.0), 201, 401)
    u, w = cat.half_cylinder_map(p, g)
    assert verify.beltrami_residual(u, w, phase=float(np.imag(p.lam))) < 1e-5


def test_half_cylinder_rejects_c():
    with pytest.raises(cat.CatalogParameterError):
        cat.HalfCylinderParams(0.0)


# --- STW strip maps -----------------------------------------------------------------------------


def test_stw_vieta(stw):
    r1, r2, r3 = stw.vieta_residuals()
    assert abs(r1) < 1e-12 and abs(r2) < 1e-12 and abs(r3) < 1e-10
    assert stw.w1 <= stw.w2


def test_stw_condition_at_root(stw):
    assert abs(cat.stw_quarter_period_condition(1.0, 1.0, stw.b)) < 1e-8


def test_stw_condition_monotone_scan():
    bs = np.geomspace(1e-3, 50.0, 200)
    v = np.array([cat.stw_quarter_period_condition(1.0, 1.0, b) for b in bs])
    d = np.diff(v)
    assert np.all(d < 0) or np.all(d > 0)


def test_stw_literal_condition_has_no_root():
    bs = np.geomspace(1e-3, 50.0, 200)
    v = np.array([cat.stw_quarter_period_condition(1.0, 1.0, b, literal=True) for b in bs])
    assert np.all(v < 0) or np.all(v > 0)


def test_stw_cd_at_quarter_period(stw):
    m = 1.0 / stw.soliton_m
    assert abs(elliptic.jacobi_pq("c", "d", elliptic.complete_K(m), m)) < 1e-12


def test_stw_identities(stw):
    y = np.linspace(0.0, math.pi, 102)[1:-1]
    S = cat.stw_S(y, stw)
    assert np.max(np.abs(cat.stw_dR_dy(y, stw) - np.sin(S) ** 2)) < 1e-8
    assert np.max(np.abs(cat.stw_dS_quadratic_residual(y, stw))) < 1e-8


def test_stw_S_by_quadrature_inversion(stw):
    al, a, b = stw.alpha, stw.a, stw.b

    def rate(s):
        q = math.sin(s) ** 2
        return 1.0 / math.sqrt(al**2 + (b * b + a**4 - al**2) * q - a**4 * q * q)

    for y in (0.3, 1.1, 2.0, 2.9):
        yy, _ = quad(rate, 0.0, float(cat.stw_S(y, stw)), epsabs=1e-13, epsrel=1e-13)
        assert abs(yy - y) < 1e-8


def test_stw_h_by_quadrature(stw):
    for y in (0.4, 1.5, 3.0):
        ref, _ = quad(lambda s: float(cat.stw_dR_dy(s, stw)), 0.0, y, epsabs=1e-13, epsrel=1e-13)
        assert abs(cat.stw_h(y, stw) - ref) < 1e-8


def test_stw_dS_fd(stw):
    y = np.linspace(0.2, 2.9, 50)
    h = 1e-5
    fd = (cat.stw_S(y + h, stw) - cat.stw_S(y - h, stw)) / (2 * h)
    assert np.max(np.abs(fd - cat.stw_dS_dy(y, stw))) < 1e-8


def test_stw_map_harmonic_and_omega(stw):
    g = FieldGrid.uniform((0.0, 1.0), (0.8, math.pi - 0.8), 101, 801)
    u = cat.stw_map(stw, g)
    assert verify.harmonic_residual(u, verify.strip_metric()) < 1e-5
    dec = verify.beltrami_decompose(u)
    _, y = g.mesh()
    w = np.arctanh(cat.stw_tanh_omega(y, stw))
    ok = dec.omega.mask
    assert np.max(np.abs(dec.omega.values - w)[ok]) < 1e-6


def test_stw_hopf_constant(stw):
    g = FieldGrid.uniform((0.0, 1.0), (0.8, math.pi - 0.8), 101, 801)
    h = verify.hopf_field(cat.stw_map(stw, g), verify.strip_metric(), order=4)
    assert abs(h.mean - cat.stw_hopf_constant(stw)) < 1e-6


def test_stw_open_interval():
    p = cat.STWParams(1.0, 1.0, 1.0)
    with pytest.raises(cat.CatalogParameterError):
        cat.stw_map(p, FieldGrid.uniform((0.0, 1.0), (0.0, 1.0), 5, 5))


# --- Li-Tam ------------------------------------------------------------------------------------


def test_litam_point_value():
    g = FieldGrid.uniform((0.0, 1.0), (1.0, 2.0), 3, 3)
    assert abs(cat.litam_map(1.0, g, "z").values[0, 0] - 1j * math.sinh(1.0)) < 1e-15


def test_litam_omega_solves_sinh_gordon():
    g = FieldGrid.uniform((0.5, 1.5), (0.0, 1.0), 401, 401)
    xi, _ = g.mesh()
    w = g.with_values(cat.litam_omega(xi))
    # the 5-point stencil leaves ~5e-5 of truncation near xi = 0.5 at this h
    lap4 = verify.laplacian4(w)
    assert np.max(np.abs((lap4.values - 2.0 * np.sinh(2.0 * w.values))[lap4.mask])) < 1e-6


def test_litam_mu_is_tanh_squared():
    rng = np.random.default_rng(0)
    a = 1.3
    xi, eta = rng.uniform(0.1, 2.0, 100), rng.uniform(-1, 1, 100)
    u_xi = -2j * np.cosh(2 * xi) / a
    u_eta = 2.0 / a + 0 * eta
    mu = (u_xi + 1j * u_eta) / (u_xi - 1j * u_eta)
    assert np.max(np.abs(mu - np.tanh(xi) ** 2)) < 1e-10


def test_litam_zeta_map_consistency():
    g = FieldGrid.uniform((0.5, 1.5), (0.0, 1.0), 201, 201)
    u = cat.litam_map(2.0, g, "zeta")
    dec = verify.beltrami_decompose(u)
    xi, _ = g.mesh()
    ok = dec.omega.mask
    assert np.max(np.abs(np.exp(-2 * dec.omega.values) - np.tanh(xi) ** 2)[ok]) < 1e-8


def test_litam_bad_input():
    with pytest.raises(cat.CatalogParameterError):
        cat.litam_map(0.0, FieldGrid.uniform((0, 1), (1, 2), 3, 3))
    with pytest.raises(cat.CatalogParameterError):
        cat.litam_map(1.0, FieldGrid.uniform((0, 1), (0, 1), 3, 3), "z")


def test_litam_limit_from_soliton():
    # first-order perturbation in C: deviation / C stays roughly constant as C -> 0
    devs = [cat.litam_limit_deviation(C) / C for C in (1e-2, 1e-3, 1e-4)]
    assert all(0.5 < d1 / d0 < 2.0 for d0, d1 in zip(devs, devs[1:]))
    with pytest.raises(cat.CatalogParameterError):
        cat.litam_limit_deviation(0.0)
