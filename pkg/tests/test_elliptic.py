import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from harmap import elliptic as el


def quad_F(phi, m):
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, phi, epsabs=1e-14, epsrel=1e-14)
    return val


def quad_Pi(n, u, m):
    f = lambda w: 1.0 / (1.0 - n * float(el.jacobi_sn_cn_dn(w, m).sn) ** 2)
    val, _ = quad(f, 0.0, u, epsabs=1e-14, epsrel=1e-14, limit=200)
    return val


# --- complete and incomplete first kind ---------------------------------


def test_K_at_zero_is_half_pi():
    assert abs(el.complete_K(0.0) - math.pi / 2) < 1e-15


def test_K_half_matches_quadrature():
    assert abs(el.complete_K(0.5) - quad_F(math.pi / 2, 0.5)) < 1e-12


def test_K_small_m_series():
    m = 1e-8
    assert abs(el.complete_K(m) - math.pi / 2 * (1 + m / 4)) < 1e-12


def test_K_increasing():
    ms = np.linspace(0.0, 0.999, 200)
    assert np.all(np.diff(el.complete_K(ms)) > 0)


def test_K_rejects_m_ge_one():
    with pytest.raises(el.EllipticDomainError):
        el.complete_K(1.0)


def test_parameter_pack():
    p = el.EllipticParameterPack(0.3)
    assert abs(p.K - el.complete_K(0.3)) < 1e-15
    assert abs(p.Kprime - el.complete_K(0.7)) < 1e-15


@pytest.mark.parametrize("phi", [0.0, 0.4, 1.3])
def test_F_at_m_zero(phi):
    assert abs(el.incomplete_F(phi, 0.0) - phi) < 1e-15


def test_F_quarter_is_K():
    for m in (0.1, 0.5, 0.9):
        assert abs(el.incomplete_F(math.pi / 2, m) - el.complete_K(m)) < 1e-13


def test_F_quadrature_oracle():
    assert abs(el.incomplete_F(0.7, 0.3) - quad_F(0.7, 0.3)) < 1e-12


def test_F_domain_error():
    with pytest.raises(el.EllipticDomainError):
        el.incomplete_F(1.5, 2.0)


# --- sn, cn, dn -----------------------------------------------------------


def test_identity_suite_random():
    rng = np.random.default_rng(1)
    m = rng.uniform(0.0, 0.99, 10_000)
    u = rng.uniform(-3.0, 3.0, m.size) * el.complete_K(m)
    ev = el.jacobi_sn_cn_dn(u, m)
    assert np.max(np.abs(ev.sn**2 + ev.cn**2 - 1)) < 1e-12
    assert np.max(np.abs(ev.dn**2 + m * ev.sn**2 - 1)) < 1e-12
    assert np.all(np.abs(ev.sn) <= 1 + 1e-15) and np.all(ev.dn > 0)


def test_at_zero_argument():
    ev = el.jacobi_sn_cn_dn(0.0, 0.6)
    assert (float(ev.sn), float(ev.cn), float(ev.dn)) == (0.0, 1.0, 1.0)


def test_limits_m0_m1():
    u = np.linspace(-5, 5, 101)
    e0 = el.jacobi_sn_cn_dn(u, 0.0)
    assert np.max(np.abs(e0.sn - np.sin(u))) < 1e-12
    assert np.max(np.abs(e0.cn - np.cos(u))) < 1e-12
    assert np.max(np.abs(e0.dn - 1)) < 1e-12
    e1 = el.jacobi_sn_cn_dn(u, 1.0)
    assert np.max(np.abs(e1.sn - np.tanh(u))) < 1e-12
    assert np.max(np.abs(e1.cn - 1 / np.cosh(u))) < 1e-12
    assert np.max(np.abs(e1.dn - 1 / np.cosh(u))) < 1e-12


@pytest.mark.parametrize("m", [0.0, 0.2, 0.5, 0.9, 0.99])
def test_sn_at_K(m):
    ev = el.jacobi_sn_cn_dn(el.complete_K(m), m)
    assert abs(ev.sn - 1) < 1e-12 and abs(ev.cn) < 1e-12


def test_periodicity():
    m = 0.7
    K = el.complete_K(m)
    u = np.linspace(-2, 2, 41)
    assert np.max(np.abs(el.jacobi_sn_cn_dn(u + 4 * K, m).sn - el.jacobi_sn_cn_dn(u, m).sn)) < 1e-10


def test_sn_inverts_F():
    # sn(F(phi|m)|m) = sin(phi) by definition
    for m, phi in ((0.3, 0.7), (0.8, 1.2), (0.95, 0.3)):
        assert abs(el.jacobi_sn_cn_dn(quad_F(phi, m), m).sn - math.sin(phi)) < 1e-12


def test_derivative_fd():
    m, h = 0.6, 1e-5
    u = np.linspace(-3, 3, 61)
    fd = (el.jacobi_sn_cn_dn(u + h, m).sn - el.jacobi_sn_cn_dn(u - h, m).sn) / (2 * h)
    ev = el.jacobi_sn_cn_dn(u, m)
    assert np.max(np.abs(fd - ev.cn * ev.dn)) < 1e-8


@pytest.mark.parametrize("m", [1.5, 4.0 / 3.0, 2.0])
def test_reciprocal_parameter_against_quadrature(m):
    # for m > 1, sn(u|m) = sin(phi) with F(phi|m) = u while m sin^2 phi < 1
    u = np.linspace(0.05, 0.6, 12)
    sn = el.jacobi_sn_cn_dn(u, m).sn
    for ui, si in zip(u, sn):
        assert abs(quad_F(math.asin(si), m) - ui) < 1e-11
    k = math.sqrt(m)
    assert np.max(np.abs(sn - el.jacobi_sn_cn_dn(k * u, 1 / m).sn / k)) < 1e-13


def test_negative_parameter_identities():
    u = np.linspace(-4, 4, 81)
    ev = el.jacobi_sn_cn_dn(u, -2.5)
    assert np.max(np.abs(ev.sn**2 + ev.cn**2 - 1)) < 1e-12
    assert np.max(np.abs(ev.dn**2 - 2.5 * ev.sn**2 - 1)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(-20, 20), st.floats(0.0, 0.999))
def test_identities_property(u, m):
    ev = el.jacobi_sn_cn_dn(u, m)
    assert abs(ev.sn**2 + ev.cn**2 - 1) < 1e-12
    assert abs(ev.dn**2 + m * ev.sn**2 - 1) < 1e-12


# --- quotients and inverses ------------------------------------------------


def test_pp_is_one():
    u = np.linspace(-2, 2, 9)
    for p in "scdn":
        assert np.all(el.jacobi_pq(p, p, u, 0.4) == 1.0)


def test_cd_at_K():
    assert abs(el.jacobi_pq("c", "d", el.complete_K(0.5), 0.5)) < 1e-12


def test_sd_is_quotient():
    u = np.linspace(-3, 3, 31)
    ev = el.jacobi_sn_cn_dn(u, 0.5)
    assert np.max(np.abs(el.jacobi_pq("s", "d", u, 0.5) - ev.sn / ev.dn)) < 1e-13


def test_pole_is_flagged_infinity():
    val = el.jacobi_pq("s", "c", el.complete_K(0.5), 0.5)
    assert np.isinf(val)


def test_inverse_sn_endpoints():
    assert el.inverse_jacobi("sn", 0.0, 0.4) == 0.0
    assert abs(el.inverse_jacobi("sn", 1.0, 0.4) - el.complete_K(0.4)) < 1e-12


def test_inverse_sd_root():
    v = el.inverse_jacobi("sd", 0.4, 0.5)
    assert abs(el.jacobi_pq("s", "d", v, 0.5) - 0.4) < 1e-11


@pytest.mark.parametrize("fn,x,m", [("cd", 0.3, 0.6), ("sc", 2.0, 0.3), ("cn", 0.2, 0.7), ("nc", 3.0, 0.4)])
def test_inverse_round_trip(fn, x, m):
    v = el.inverse_jacobi(fn, x, m)
    assert abs(el.jacobi_pq(fn[0], fn[1], v, m) - x) < 1e-11


def test_inverse_range_error():
    with pytest.raises(el.EllipticDomainError):
        el.inverse_jacobi("sn", 1.5, 0.5)


# --- third kind --------------------------------------------------------------


def test_Pi_n_zero():
    u = np.linspace(-5, 5, 21)
    assert np.max(np.abs(el.ellint_Pi(0.0, u, 0.3) - u)) < 1e-12


def test_Pi_u_zero():
    assert el.ellint_Pi(0.4, 0.0, 0.5) == 0.0


@pytest.mark.parametrize("n,u,m", [(0.3, 1.0, 0.5), (-0.7, 2.2, 0.8), (0.5, -1.3, 0.2), (0.9, 0.6, 0.9), (-3.0, 4.0, 0.4)])
def test_Pi_quadrature(n, u, m):
    assert abs(el.ellint_Pi(n, u, m) - quad_Pi(n, u, m)) < 1e-10


def test_Pi_large_argument_quadrature():
    m = 0.6
    u = 3.3 * el.complete_K(m)
    assert abs(el.ellint_Pi(0.45, u, m) - quad_Pi(0.45, u, m)) < 1e-10


def test_Pi_additivity():
    n, m, u, v = 0.4, 0.7, 1.1, 2.3
    lhs = el.ellint_Pi(n, u + v, m) - el.ellint_Pi(n, u, m) - el.ellint_Pi(n, v, m)
    f = lambda w: 1.0 / (1.0 - n * float(el.jacobi_sn_cn_dn(w, m).sn) ** 2)
    a, _ = quad(f, u, u + v, epsabs=1e-14, epsrel=1e-14)
    b, _ = quad(f, 0.0, v, epsabs=1e-14, epsrel=1e-14)
    assert abs(lhs - (a - b)) < 1e-10


def test_Pi_excess_relation():
    n, u, m = 0.35, 1.7, 0.45
    assert abs(el.ellint_Pi(n, u, m) - (u + n * el.ellint_Pi_excess(n, u, m))) < 1e-13


def test_Pi_singular_characteristic():
    with pytest.raises(el.SingularCharacteristicError):
        el.ellint_Pi(2.0, 1.5, 0.5)


def test_carlson_against_quadrature():
    def rj_quad(x, y, z, p):
        f = lambda t: 1.0 / ((t + p) * math.sqrt((t + x) * (t + y) * (t + z)))
        val, _ = quad(f, 0.0, np.inf, epsabs=1e-15, epsrel=1e-13, limit=400)
        return 1.5 * val

    assert abs(el.carlson_rf(0.0, 0.5, 1.0) - el.complete_K(0.5)) < 1e-13
    assert abs(el.carlson_rc(0.0, 0.25) - math.pi) < 1e-13
    assert abs(el.carlson_rj(2.0, 3.0, 4.0, 5.0) - rj_quad(2.0, 3.0, 4.0, 5.0)) < 1e-12
    assert abs(el.carlson_rj(0.0, 1.0, 2.0, 0.7) - rj_quad(0.0, 1.0, 2.0, 0.7)) < 1e-11
