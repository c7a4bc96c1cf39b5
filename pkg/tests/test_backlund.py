import math

import numpy as np
import pytest
from scipy.integrate import quad

from harmap import backlund as bk
from harmap import verify
from harmap.grid import FieldGrid

HALF_PLANE = verify.ConstantCurvature(-1)
ETA0 = 0.6 * math.cosh(1.0)  # 1.2 * cosh(2 xi) / 2 at |xi| = 1/2


def example_grid(n):
    """xi in [-1/2, 1/2], eta from ETA0 to about 3, spacing 1/n on both axes."""
    ny = int(round((3.0 - ETA0) * n)) + 1
    return FieldGrid.uniform((-0.5, 0.5), (ETA0, ETA0 + (ny - 1) / n), n + 1, ny)


@pytest.fixture(scope="module")
def g400():
    return example_grid(400)


@pytest.fixture(scope="module")
def pair400(g400):
    xi, eta = g400.mesh()
    choice = bk.select_branch(g400)
    th = g400.with_values(bk.kink_theta(xi, choice.theta_sign))
    return choice, th, g400.with_values(bk.omega_branch_A(xi, eta))


# --- sine-Gordon side ---------------------------------------------------------------------


def test_sine_gordon_constants():
    g = FieldGrid.uniform((0, 1), (0, 1), 11, 11)
    assert bk.sine_gordon_residual(g.with_values(np.zeros(g.shape))) == 0.0
    assert bk.sine_gordon_residual(g.with_values(np.full(g.shape, 0.5 * math.pi))) < 1e-15


def test_kink_sine_gordon(pair400):
    _, th, _ = pair400
    assert bk.sine_gordon_residual(th) < 1e-5
    assert bk.sine_gordon_residual(th, order=4) < 1e-6


def test_kink_analytic_identity():
    xi = np.linspace(-1, 1, 41)
    th = bk.kink_theta(xi)
    # theta_xixi = -4 sech 2xi tanh 2xi
    assert np.max(np.abs(0.25 * (-4 / np.cosh(2 * xi) * np.tanh(2 * xi)) + 0.5 * np.sin(2 * th))) < 1e-14


# --- pair relations -------------------------------------------------------------------------


def test_branch_selection(g400):
    choice = bk.select_branch(g400)
    assert choice.name == "A" and choice.theta_sign == -1
    assert not choice.residuals["B"]["defined"]


def test_pair_residuals_on_example(pair400):
    _, th, w = pair400
    r1, r2 = bk.backlund_residual_hyperbolic(th, w, order=4)
    assert r1 < 1e-5 and r2 < 1e-5


def test_pair_constant():
    g = FieldGrid.uniform((0, 1), (0, 1), 11, 11)
    r = bk.backlund_residual_hyperbolic(g.with_values(np.full(g.shape, 0.5 * math.pi)), g.with_values(np.zeros(g.shape)))
    assert max(r) < 1e-15


def test_pair_negative_control(pair400):
    _, th, w = pair400
    r = bk.backlund_residual_hyperbolic(th, w.with_values(w.values + 0.01), order=4)
    assert max(r) >= 1e-3


def test_transform_direction(pair400):
    _, th, w = pair400
    tol = 1e-5
    assert max(bk.backlund_residual_hyperbolic(th, w, order=4)) < tol
    assert bk.sinh_gordon_residual(w, order=4) < 10 * tol
    assert bk.sine_gordon_residual(th, order=4) < 10 * tol


def _general_residual(g):
    xi, eta = g.mesh()
    th = g.with_values(bk.kink_theta(xi, -1))
    u = bk.backlund_example_map(g)
    F = g.with_values(-2.0 * np.log(u.values.imag))
    return max(bk.backlund_residual_general(th, g.with_values(bk.omega_branch_A(xi, eta)), F))


def test_general_form_reduces_to_hyperbolic(g400):
    # with e^F = 1/S^2 along the example map the general relations hold too
    r400 = _general_residual(g400)
    assert r400 < verify.default_tolerance(g400.hx)
    assert 3.5 <= _general_residual(example_grid(200)) / r400 <= 4.5


# --- integration ---------------------------------------------------------------------------------


def test_integration_reproduces_branch(pair400):
    choice, th, w = pair400
    j0, i0 = th.ny // 2, th.nx // 2
    res = bk.backlund_integrate(th, ((j0, i0), float(w.values[j0, i0])))
    assert np.max(np.abs(res.omega.values - w.values)) < 1e-5
    assert res.path_consistency < 1e-6


def test_integration_exact_slopes(pair400):
    _, th, w = pair400
    xi, _ = th.mesh()
    s = float(th.values[0, -1] / abs(th.values[0, -1]))
    tx = s * 2.0 / np.cosh(2 * xi)
    res = bk.backlund_integrate(th, ((0, 0), float(w.values[0, 0])), (tx, np.zeros(xi.shape)))
    assert np.max(np.abs(res.omega.values - w.values)) < 1e-8


def test_path_consistency_converges():
    r = []
    for n in (100, 200):
        g = example_grid(n)
        xi, eta = g.mesh()
        th = g.with_values(bk.kink_theta(xi, -1))
        w = bk.omega_branch_A(xi, eta)
        r.append(bk.backlund_integrate(th, ((g.ny // 2, g.nx // 2), float(w[g.ny // 2, g.nx // 2]))).path_consistency)
    assert r[0] / r[1] >= 3.5


def test_constant_theta_quadrature():
    w0 = 0.8
    for xi in (0.3, 0.9):
        w = float(bk.constant_theta_omega(xi, w0))
        # xi = -(1/2) int_{w0}^{w} dw / sinh w
        q, _ = quad(lambda s: 1.0 / math.sinh(s), w0, w, epsabs=1e-14, epsrel=1e-14)
        assert abs(-0.5 * q - xi) < 1e-8


def test_constant_theta_integration():
    g = FieldGrid.uniform((0.0, 1.0), (0.0, 0.5), 201, 11)
    th = g.with_values(np.full(g.shape, 0.5 * math.pi))
    res = bk.backlund_integrate(th, ((0, 0), 0.8))
    xi, _ = g.mesh()
    assert np.max(np.abs(res.omega.values - bk.constant_theta_omega(xi, 0.8))) < 1e-8


# --- example map ---------------------------------------------------------------------------------


def test_example_map_S_positive(g400):
    u = bk.backlund_example_map(g400)
    assert u.values.imag.min() > 0
    # on eta = cosh 2xi the map gives S = (3/4) cosh 2xi
    g = FieldGrid.uniform((0.1, 0.12), (math.cosh(0.2), math.cosh(0.2) + 0.02), 3, 3)
    assert abs(bk.backlund_example_map(g).values[0, 0].imag - 0.75 * math.cosh(0.2)) < 1e-15


def test_example_map_harmonic(g400):
    u = bk.backlund_example_map(g400)
    assert verify.harmonic_residual(u, HALF_PLANE, order=4) < 1e-5


def test_example_map_target_factor(g400):
    u = bk.backlund_example_map(g400)
    assert verify.hopf_field(u, HALF_PLANE, order=4).dev_from_one < 1e-5


def test_example_map_decomposition(g400):
    u = bk.backlund_example_map(g400)
    dec = verify.beltrami_decompose(u)
    xi, eta = g400.mesh()
    assert dec.phi_harmonicity < 1e-5
    ok = dec.omega.mask
    assert np.max(np.abs(dec.omega.values - bk.omega_branch_A(xi, eta))[ok]) < 1e-4


def test_example_map_domain_error():
    with pytest.raises(ValueError):
        bk.backlund_example_map(FieldGrid.uniform((-0.5, 0.5), (0.1, 0.5), 5, 5))


def test_map_theta_omega_roundtrip(g400):
    u = bk.backlund_example_map(g400)
    th, w = bk.map_theta_omega(u, HALF_PLANE)
    xi, eta = g400.mesh()
    inner = verify.interior_mask(u.mask, 1)
    assert np.max(np.abs(w.values - bk.omega_branch_A(xi, eta))[inner]) < 1e-4
