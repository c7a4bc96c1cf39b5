"""Real-argument Jacobi elliptic functions and elliptic integrals.

Parameter convention: ``m`` is the parameter (squared modulus) throughout, so
``sn(u | m)`` inverts ``F(phi | m) = int_0^phi dt / sqrt(1 - m sin^2 t)``.

Parameters ``m > 1`` are reduced to ``1/m`` with the reciprocal-parameter
transformation and ``m < 0`` to ``|m| / (1 + |m|)`` with the negative-parameter
transformation, so every evaluation stays in real arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EllipticDomainError",
    "SingularCharacteristicError",
    "EllipticParameterPack",
    "JacobiEval",
    "carlson_rf",
    "carlson_rc",
    "carlson_rj",
    "complete_K",
    "incomplete_F",
    "jacobi_sn_cn_dn",
    "jacobi_pq",
    "inverse_jacobi",
    "ellint_Pi",
    "ellint_Pi_excess",
]

_LETTERS = "scdn"
POLE_TOL = 1e-14  # |denominator| at or below this is reported as a pole


class EllipticDomainError(ValueError):
    """Argument or parameter outside the real domain of an elliptic function."""


class SingularCharacteristicError(EllipticDomainError):
    """The third-kind integrand 1/(1 - n sn^2) is singular on the path."""


# ---------------------------------------------------------------------------
# Carlson symmetric integrals (duplication algorithm)
# ---------------------------------------------------------------------------

_DUP_TOL = 1e-3  # truncation error of the series is O(tol^6)
_DUP_MAXITER = 64


def carlson_rf(x, y, z):
    """Carlson's R_F(x, y, z) for non-negative arguments, at most one zero."""
    x, y, z = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (x, y, z)))
    x, y, z = x.copy(), y.copy(), z.copy()
    if np.any((x < 0) | (y < 0) | (z < 0)):
        raise EllipticDomainError("R_F needs non-negative arguments")
    for _ in range(_DUP_MAXITER):
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if np.max(np.abs([dx, dy, dz]), initial=0.0) < _DUP_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    out = (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / np.sqrt(ave)
    return out[()] if out.ndim == 0 else out


def carlson_rc(x, y):
    """Carlson's R_C(x, y) = R_F(x, y, y) for x >= 0, y > 0."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    x, y = x.copy(), y.copy()
    if np.any(x < 0) or np.any(y <= 0):
        raise EllipticDomainError("R_C needs x >= 0 and y > 0")
    for _ in range(_DUP_MAXITER):
        lam = 2.0 * np.sqrt(x) * np.sqrt(y) + y
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        ave = (x + y + y) / 3.0
        s = (y - ave) / ave
        if np.max(np.abs(s), initial=0.0) < _DUP_TOL:
            break
    out = (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / np.sqrt(ave)
    return out[()] if out.ndim == 0 else out


def carlson_rj(x, y, z, p):
    """Carlson's R_J(x, y, z, p) for x, y, z >= 0 (at most one zero) and p > 0."""
    x, y, z, p = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (x, y, z, p))
    )
    x, y, z, p = x.copy(), y.copy(), z.copy(), p.copy()
    if np.any((x < 0) | (y < 0) | (z < 0)) or np.any(p <= 0):
        raise EllipticDomainError("R_J needs x, y, z >= 0 and p > 0")
    total = np.zeros_like(x)
    fac = 1.0
    for _ in range(_DUP_MAXITER):
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        alpha = (p * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = p * (p + lam) ** 2
        total = total + fac * carlson_rc(alpha, beta)
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        ave = 0.2 * (x + y + z + p + p)
        dx, dy, dz, dp = ((ave - v) / ave for v in (x, y, z, p))
        if np.max(np.abs([dx, dy, dz, dp]), initial=0.0) < _DUP_TOL:
            break
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 3.0, 3.0 / 22.0, 3.0 / 26.0
    c5, c6, c7, c8 = 0.75 * c3, 1.5 * c4, 0.5 * c2, 2.0 * c3
    ea = dx * (dy + dz) + dy * dz
    eb = dx * dy * dz
    ec = dp * dp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * dp * (ea - ec)
    series = (
        1.0
        + ed * (-c1 + c5 * ed - c6 * ee)
        + eb * (c7 + dp * (-c8 + dp * c4))
        + dp * ea * (c2 - dp * c3)
        - c2 * dp * ec
    )
    out = 3.0 * total + fac * series / (ave * np.sqrt(ave))
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# First kind
# ---------------------------------------------------------------------------


def _agm(a, b):
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    for _ in range(_DUP_MAXITER):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if np.all(np.abs(a - b) <= 1e-16 * np.abs(a)):
            break
    return 0.5 * (a + b)


def complete_K(m):
    """Complete integral of the first kind K(m), m < 1, via the AGM."""
    m = np.asarray(m, dtype=float)
    if np.any(m >= 1.0) or np.any(np.isnan(m)):
        raise EllipticDomainError("K(m) needs m < 1")
    out = 0.5 * np.pi / _agm(np.ones_like(m), np.sqrt(1.0 - m))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class EllipticParameterPack:
    """Quarter periods K = K(m) and K' = K(1 - m) for 0 < m < 1."""

    m: float

    @property
    def K(self) -> float:
        return float(complete_K(self.m))

    @property
    def Kprime(self) -> float:
        return float(complete_K(1.0 - self.m))


def incomplete_F(phi, m):
    """Incomplete integral of the first kind F(phi | m).

    For m <= 1 the amplitude is unrestricted (quasi-periodic extension
    F(phi + k pi) = F(phi) + 2 k K).  For m > 1 the radicand must stay
    positive, i.e. m sin^2(phi) < 1 with |phi| < pi/2.
    """
    phi = np.asarray(phi, dtype=float)
    m = float(m)
    if m > 1.0:
        s = np.sin(phi)
        if np.any(np.abs(phi) > 0.5 * np.pi) or np.any(m * s * s >= 1.0):
            raise EllipticDomainError("F(phi|m): radicand reaches zero")
        c = np.cos(phi)
        out = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
        return out[()] if np.ndim(out) == 0 else out
    if m == 1.0:
        if np.any(np.abs(phi) >= 0.5 * np.pi):
            raise EllipticDomainError("F(phi|1) diverges at |phi| = pi/2")
        out = np.arctanh(np.sin(phi))
        return out[()] if np.ndim(out) == 0 else out
    k = np.round(phi / np.pi)
    r = phi - k * np.pi
    s, c = np.sin(r), np.cos(r)
    out = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
    out = np.where(k != 0, out + 2.0 * k * complete_K(m), out)
    return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Jacobi functions
# ---------------------------------------------------------------------------


def _sncndn_unit(u, m):
    """sn, cn, dn for scalar 0 <= m < 1 by descending Landen / AGM."""
    u = np.asarray(u, dtype=float)
    if m == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    quarter = float(complete_K(m))
    u = u - 4.0 * quarter * np.round(u / (4.0 * quarter))
    a, b, c = 1.0, np.sqrt(1.0 - m), np.sqrt(m)
    avals, cvals = [a], [c]
    while abs(c) > 1e-17 * a and len(avals) < _DUP_MAXITER:
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        avals.append(a)
        cvals.append(c)
    n = len(avals) - 1
    phi = (2.0**n) * avals[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(cvals[j] / avals[j] * np.sin(phi)))
    sn, cn = np.sin(phi), np.cos(phi)
    # 1 - m sn^2 written as a sum of non-negative terms: no cancellation
    dn = np.sqrt((1.0 - m) + m * cn * cn)
    return sn, cn, dn


def _sncndn(u, m):
    u = np.asarray(u, dtype=float)
    if m == 1.0:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech.copy()
    if 0.0 <= m < 1.0:
        return _sncndn_unit(u, m)
    if m > 1.0:
        k = np.sqrt(m)
        s, c, d = _sncndn_unit(k * u, 1.0 / m)
        return s / k, d, c
    # m < 0
    k1 = np.sqrt(1.0 - m)
    s, c, d = _sncndn_unit(u * k1, -m / (1.0 - m))
    return s / (k1 * d), c / d, 1.0 / d


@dataclass(frozen=True)
class JacobiEval:
    """The triple (sn, cn, dn) at argument u and parameter m."""

    u: np.ndarray
    m: float
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray

    def component(self, letter: str):
        if letter == "n":
            return np.ones_like(np.asarray(self.sn, dtype=float))
        return {"s": self.sn, "c": self.cn, "d": self.dn}[letter]

    def pq(self, p: str, q: str, pole_tol: float = POLE_TOL):
        """Quotient pq = p/q; exact or near poles give a signed infinity."""
        return _quotient(self.component(p), self.component(q), p == q, pole_tol)


def _quotient(num, den, same, pole_tol):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    if same:
        out = np.ones(np.broadcast(num, den).shape)
        return out[()] if out.ndim == 0 else out
    pole = np.abs(den) <= pole_tol
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(pole, np.copysign(np.inf, num * np.where(den == 0, 1.0, den)), num / np.where(pole, 1.0, den))
    return out[()] if np.ndim(out) == 0 else out


def jacobi_sn_cn_dn(u, m) -> JacobiEval:
    """Evaluate sn, cn, dn at real u for any real parameter m.

    ``m`` may be a scalar or an array broadcastable against ``u``.
    """
    u = np.asarray(u, dtype=float)
    marr = np.asarray(m, dtype=float)
    if marr.ndim == 0:
        s, c, d = _sncndn(u, float(marr))
    else:
        ub, mb = np.broadcast_arrays(u, marr)
        s = np.empty(ub.shape)
        c = np.empty(ub.shape)
        d = np.empty(ub.shape)
        for mv in np.unique(mb):
            sel = mb == mv
            s[sel], c[sel], d[sel] = _sncndn(ub[sel], float(mv))
        marr = mb
    unwrap = lambda a: a[()] if np.ndim(a) == 0 else a  # noqa: E731
    return JacobiEval(u=unwrap(u), m=unwrap(marr) if np.ndim(marr) else float(marr),
                      sn=unwrap(s), cn=unwrap(c), dn=unwrap(d))


def jacobi_pq(p: str, q: str, u, m, pole_tol: float = POLE_TOL):
    """Glaisher quotient pq(u | m) with p, q in {s, c, d, n}.

    At a pole (denominator |den| <= pole_tol) the result is a signed
    infinity instead of an exception; test with ``np.isinf``.
    """
    if p not in _LETTERS or q not in _LETTERS:
        raise ValueError(f"unknown Jacobi letters {p!r}{q!r}")
    return jacobi_sn_cn_dn(u, m).pq(p, q, pole_tol)


# ---------------------------------------------------------------------------
# Inverses
# ---------------------------------------------------------------------------


def _check_range(ok, what):
    if not np.all(ok):
        raise EllipticDomainError(f"{what}: argument outside the attainable range")


def _asn(x, m):
    x = np.asarray(x, dtype=float)
    if m > 1.0:
        k = np.sqrt(m)
        _check_range(np.abs(x) * k <= 1.0 + 1e-15, "sn^-1")
        return _asn(np.clip(x * k, -1.0, 1.0), 1.0 / m) / k
    _check_range(np.abs(x) <= 1.0 + 1e-15, "sn^-1")
    x = np.clip(x, -1.0, 1.0)
    if m < 0.0:
        # sn(u|m) = sd(v|mu) / sqrt(1-m), v = u sqrt(1-m)
        k1 = np.sqrt(1.0 - m)
        return _asd(x * k1, -m / (1.0 - m)) / k1
    return incomplete_F(np.arcsin(x), m)


def _asd(x, m):
    x = np.asarray(x, dtype=float)
    radicand = 1.0 + m * x * x
    _check_range(radicand > 0.0, "sd^-1")
    return _asn(x / np.sqrt(radicand), m)


def _asc(x, m):
    x = np.asarray(x, dtype=float)
    if m > 1.0:
        # sc(u|m) = sd(k u | 1/m) / k with k = sqrt(m)
        k = np.sqrt(m)
        return _asd(x * k, 1.0 / m) / k
    return _asn(x / np.sqrt(1.0 + x * x), m)


def _acn(x, m):
    x = np.asarray(x, dtype=float)
    if m > 1.0:
        # cn(u|m) = dn(k u | 1/m)
        k = np.sqrt(m)
        return _adn(x, 1.0 / m) / k
    _check_range(np.abs(x) <= 1.0 + 1e-15, "cn^-1")
    x = np.clip(x, -1.0, 1.0)
    if m < 0.0:
        # cn(u|m) = cd(v|mu): principal v in [0, 2K(mu)]
        k1 = np.sqrt(1.0 - m)
        return _acd(x, -m / (1.0 - m)) / k1
    return incomplete_F(np.arccos(x), m)


def _adn(x, m):
    """dn^-1 for 0 < m <= 1 on [0, K]: dn decreases from 1 to sqrt(1 - m)."""
    x = np.asarray(x, dtype=float)
    if not 0.0 < m <= 1.0:
        raise EllipticDomainError("dn^-1 implemented for 0 < m <= 1")
    _check_range((x <= 1.0 + 1e-15) & (x * x >= 1.0 - m - 1e-15), "dn^-1")
    s = np.sqrt(np.clip((1.0 - x * x) / m, 0.0, 1.0))
    return _asn(s, m)


def _acd(x, m):
    x = np.asarray(x, dtype=float)
    if not 0.0 <= m < 1.0:
        raise EllipticDomainError("cd^-1 implemented for 0 <= m < 1")
    # cd(u) = sn(u + K) decreases from 1 to -1 on [0, 2K]
    return complete_K(m) - _asn(x, m)


def _anc(x, m):
    x = np.asarray(x, dtype=float)
    _check_range(np.abs(x) >= 1.0 - 1e-15, "nc^-1")
    return _acn(1.0 / x, m)


_INVERSES = {"sn": _asn, "sd": _asd, "sc": _asc, "cn": _acn, "dn": _adn, "cd": _acd, "nc": _anc}


def inverse_jacobi(fn: str, x, m):
    """Principal inverse of a Jacobi function.

    Supported: sn, sd, sc (values in [-K, K]), cn, cd, nc (values in
    [0, 2K]) and dn (values in [0, K]); the K refers to the parameter in
    which the inverse is monotone.
    """
    try:
        func = _INVERSES[fn]
    except KeyError:
        raise ValueError(f"inverse of {fn!r} not supported") from None
    out = func(x, float(m))
    return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Third kind
# ---------------------------------------------------------------------------


def _pi_parts(n, u, m):
    """Return (first-kind part, third-kind excess J) with Pi = F + n J.

    Valid for m <= 1.  J = int_0^u sn^2 / (1 - n sn^2) dw.
    """
    u = np.asarray(u, dtype=float)
    if m == 1.0:
        j = np.zeros_like(u)
        r = u
    else:
        quarter = float(complete_K(m))
        j = np.round(u / (2.0 * quarter))
        r = u - 2.0 * quarter * j
    ev = _sncndn(r, m)
    s, c = ev[0], ev[1]
    radicand = 1.0 - n * s * s
    if np.any(radicand <= 0.0) or (n >= 1.0 and np.any(j != 0)):
        raise SingularCharacteristicError(f"1 - n sn^2 vanishes on the path (n={n})")
    y = 1.0 - m * s * s
    first = r
    excess = (s**3 / 3.0) * carlson_rj(c * c, y, 1.0, radicand)
    if np.any(j != 0):
        excess_c = carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n) / 3.0
        first = first + 2.0 * quarter * j
        excess = excess + 2.0 * j * excess_c
    return first, excess


def ellint_Pi_excess(n, u, m):
    """J(n; u | m) = int_0^u sn^2(w|m) / (1 - n sn^2(w|m)) dw.

    Satisfies Pi(n; u | m) = u + n J and stays smooth as n -> 0.
    """
    n, m = float(n), float(m)
    if m > 1.0:
        k = np.sqrt(m)
        # sn(w|m) = sn(k w | 1/m) / k
        _, ex = _pi_parts(n / m, k * np.asarray(u, dtype=float), 1.0 / m)
        out = ex / (k * m)
    elif m < 0.0:
        out = _excess_quadrature_free_negative(n, u, m)
    else:
        _, out = _pi_parts(n, u, m)
    return out[()] if np.ndim(out) == 0 else out


def _excess_quadrature_free_negative(n, u, m):
    # With v = u sqrt(1-m), mu = -m/(1-m): sn^2(u|m) = (1-mu) sn^2/dn^2 (v|mu)
    # and 1 - n sn^2 = (1 - (mu + n(1-mu)) sn^2(v|mu)) / dn^2(v|mu).
    # Hence sn^2/(1 - n sn^2) = (1-mu) sn^2 / (1 - n' sn^2), n' = mu + n(1-mu).
    k1 = np.sqrt(1.0 - m)
    mu = -m / (1.0 - m)
    n_eff = mu + n * (1.0 - mu)
    _, ex = _pi_parts(n_eff, np.asarray(u, dtype=float) * k1, mu)
    return (1.0 - mu) * ex / k1


def ellint_Pi(n, u, m):
    """Third-kind integral Pi(n; u | m) = int_0^u dw / (1 - n sn^2(w | m)).

    Raises SingularCharacteristicError when 1 - n sn^2 vanishes on [0, u].
    """
    u = np.asarray(u, dtype=float)
    out = u + float(n) * np.asarray(ellint_Pi_excess(n, u, m))
    return out[()] if np.ndim(out) == 0 else out
