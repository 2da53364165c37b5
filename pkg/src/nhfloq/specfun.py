"""Special functions for complex parameters and complex argument.

Everything is built from two primitives: a Lanczos complex Gamma and
double-double Maclaurin series (see ddarith).  Covered: regularized
Kummer M, Tricomi U, Whittaker M/W, Bessel J/Y of complex order, Airy
Ai/Bi, and parabolic cylinder D_nu, together with their z-derivatives
and analytic continuation around z = 0.

Branch handling: functions evaluate at the principal branch of the
supplied argument; callers that wind around the origin pass an integer
``winding`` and the one-turn continuation maps are applied that many
times (negative winding undoes turns).  Entire functions accept and
ignore ``winding``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .ddarith import cdd, cdd_abs, cdd_add, cdd_div, cdd_mul, cdd_to_complex
from .errors import (
    DegenerateParameter,
    IntegerBParameter,
    IntegerOrder,
    SeriesNoConvergence,
)

Z_MAX = 100.0
MAX_TERMS = 5000
TWO_PI_I = 2j * math.pi

# Lanczos approximation, g = 7, 9 coefficients: ~1e-13 relative accuracy.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    est_error: float
    terms_used: int


def gamma(z: complex) -> complex:
    """Complex Gamma via Lanczos; reflection formula for Re z < 0.5."""
    z = complex(z)
    if z.real < 0.5:
        s = cmath.sin(cmath.pi * z)
        if s == 0:
            raise DegenerateParameter(f"Gamma pole at z = {z}")
        return cmath.pi / (s * gamma(1.0 - z))
    z -= 1.0
    x = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def recip_gamma(z: complex) -> complex:
    """1/Gamma(z), entire: exactly 0.0 at non-positive integers."""
    z = complex(z)
    if z.real < 0.5:
        return cmath.sin(cmath.pi * z) * gamma(1.0 - z) / cmath.pi
    return 1.0 / gamma(z)


def _near_nonpositive_int(x: complex, tol: float = 1e-8) -> bool:
    r = round(x.real)
    return r <= 0 and abs(x - r) < tol


def _near_int(x: complex, tol: float = 1e-8) -> bool:
    return abs(x - round(x.real)) < tol


def _pair_coeffs(lam_f: complex, lam_g: complex, c: complex, k: int):
    """Monodromy coefficients (A, B) with F_k = A F_0 + B G_0.

    One positive turn maps (F, G) -> (lam_f F + c G, lam_g G); for negative
    k the inverse turn is applied.  Powers of the triangular one-turn matrix.
    """
    if k >= 0:
        m = (lam_f, c, lam_g)
    else:
        m = (1.0 / lam_f, -c / (lam_f * lam_g), 1.0 / lam_g)
    A, B, D = 1.0 + 0j, 0j, 1.0 + 0j
    for _ in range(abs(k)):
        A, B, D = m[0] * A, m[0] * B + m[1] * D, m[2] * D
    return A, B


def _dd_ratio_series(t0: complex, ratio, tol_stop: float = 1e-33,
                     max_terms: int = MAX_TERMS) -> SeriesResult:
    """Sum t0 * (1 + r1 + r1 r2 + ...) in double-double.

    ``ratio(k)`` returns the complex-dd factor t_{k+1}/t_k, produced with
    exact dd arithmetic so each term carries ~1e-32 relative error;
    est_error tracks the peak partial term (cancellation depth).
    """
    term = cdd(1.0 + 0j)
    acc = cdd(1.0 + 0j)
    peak = 1.0
    small_run = 0
    n = 1
    for k in range(max_terms):
        term = cdd_mul(term, ratio(k))
        acc = cdd_add(acc, term)
        n += 1
        m = cdd_abs(term)
        if m > peak:
            peak = m
        if m < tol_stop * peak:
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    else:
        raise SeriesNoConvergence(f"series did not converge in {max_terms} terms")
    total = cdd_to_complex(acc) * t0
    scale = abs(t0)
    est = peak * scale * 5e-32 + abs(total) * 5e-15
    if abs(total) > 0 and est > 1e-12 * abs(total):
        raise SeriesNoConvergence(
            f"cancellation too deep: est_error {est:.2e} vs value {abs(total):.2e}"
        )
    return SeriesResult(total, est, n)


def _check_z(z: complex, what: str) -> None:
    if abs(z) > Z_MAX:
        raise SeriesNoConvergence(f"{what}: |z| = {abs(z):.3g} exceeds Z_max = {Z_MAX}")


# --- regularized Kummer M ---------------------------------------------------

def kummer_m_reg_r(a: complex, b: complex, z: complex) -> SeriesResult:
    """Regularized confluent hypergeometric M(a,b,z)/Gamma(b), entire in z.

    For Re z < 0 the Kummer transform M(a,b,z) = e^z M(b-a,b,-z) is applied
    first so the remaining series has mild cancellation only.
    """
    a, b, z = complex(a), complex(b), complex(z)
    _check_z(z, "kummer_m_reg")
    prefactor = 1.0 + 0j
    if z.real < 0.0:
        prefactor = cmath.exp(z)
        a = b - a
        z = -z
    if _near_nonpositive_int(b):
        # resonant b: per-term reciprocal gammas keep the sum entire in b
        acc = 0j
        poch = 1.0 + 0j
        zk = 1.0 + 0j
        fact = 1.0
        peak = 1e-300
        k = 0
        for k in range(MAX_TERMS):
            t = poch * zk / fact * recip_gamma(b + k)
            acc += t
            peak = max(peak, abs(t))
            if k > abs(z) + 10 and abs(t) < 1e-17 * peak:
                break
            poch *= a + k
            zk *= z
            fact *= k + 1
        return SeriesResult(prefactor * acc, peak * 1e-13, k + 1)
    t0 = recip_gamma(b)
    if t0 == 0:
        return SeriesResult(0j, 0.0, 1)
    acdd, bcdd, zcdd = cdd(a), cdd(b), cdd(z)

    def ratio(k: int):
        kf = float(k)
        num = cdd_mul(cdd_add(acdd, cdd(kf)), zcdd)
        den = cdd_mul(cdd_add(bcdd, cdd(kf)), cdd(kf + 1.0))
        return cdd_div(num, den)

    res = _dd_ratio_series(t0, ratio)
    return SeriesResult(prefactor * res.value, abs(prefactor) * res.est_error,
                        res.terms_used)


def kummer_m_reg(a: complex, b: complex, z: complex, winding: int = 0) -> complex:
    # entire in z: winding accepted for interface symmetry only
    return kummer_m_reg_r(a, b, z).value


def kummer_m_reg_prime(a: complex, b: complex, z: complex, winding: int = 0) -> complex:
    """d/dz of the regularized M: equals a * Mreg(a+1, b+1, z)."""
    return a * kummer_m_reg_r(a + 1.0, b + 1.0, z).value


# --- Tricomi U ---------------------------------------------------------------

def _u_monodromy(a: complex, b: complex):
    lam_u = cmath.exp(-TWO_PI_I * b)
    c = TWO_PI_I * cmath.exp(-1j * cmath.pi * b) * recip_gamma(1.0 + a - b)
    return lam_u, c


def _tricomi_u_principal(a: complex, b: complex, z: complex) -> complex:
    if _near_int(b):
        raise IntegerBParameter(f"U(a,b,z) connection needs non-integer b; b = {b}")
    m1 = kummer_m_reg_r(a, b, z).value
    m2 = kummer_m_reg_r(a - b + 1.0, 2.0 - b, z).value
    pref = cmath.pi / cmath.sin(cmath.pi * b)
    zp = cmath.exp((1.0 - b) * cmath.log(z))
    return pref * (m1 * recip_gamma(a - b + 1.0) - zp * m2 * recip_gamma(a))


def tricomi_u(a: complex, b: complex, z: complex, winding: int = 0) -> complex:
    """Tricomi U at z e^{2 pi i winding}, principal z supplied."""
    u = _tricomi_u_principal(a, b, z)
    if winding == 0:
        return u
    lam_u, c = _u_monodromy(a, b)
    A, B = _pair_coeffs(lam_u, 1.0 + 0j, c, int(winding))
    return A * u + B * kummer_m_reg_r(a, b, z).value


def tricomi_u_prime(a: complex, b: complex, z: complex, winding: int = 0) -> complex:
    """d/dz U(a,b,z) on the winding-th sheet."""
    up = -a * _tricomi_u_principal(a + 1.0, b + 1.0, z)
    if winding == 0:
        return up
    lam_u, c = _u_monodromy(a, b)
    A, B = _pair_coeffs(lam_u, 1.0 + 0j, c, int(winding))
    mp = kummer_m_reg_prime(a, b, z)
    return cmath.exp(-TWO_PI_I * winding) * (A * up + B * mp)


# --- Whittaker M and W --------------------------------------------------------

def _whittaker_guard(mu: complex) -> None:
    if _near_int(2.0 * mu):
        raise DegenerateParameter(f"Whittaker W resonant at 2 mu = {2 * mu}")


def _whittaker_m_principal(kappa: complex, mu: complex, z: complex) -> complex:
    b = 1.0 + 2.0 * mu
    if _near_nonpositive_int(b):
        raise DegenerateParameter(f"M_kappa,mu undefined: 1 + 2 mu = {b}")
    mreg = kummer_m_reg_r(0.5 + mu - kappa, b, z).value
    return cmath.exp(-z / 2.0 + (0.5 + mu) * cmath.log(z)) * gamma(b) * mreg


def _w_monodromy(kappa: complex, mu: complex):
    lam_w = -cmath.exp(-TWO_PI_I * mu)
    lam_m = -cmath.exp(TWO_PI_I * mu)
    c = TWO_PI_I * recip_gamma(0.5 - mu - kappa) * recip_gamma(1.0 + 2.0 * mu)
    return lam_w, lam_m, c


def whittaker_m(kappa: complex, mu: complex, z: complex, winding: int = 0) -> complex:
    m = _whittaker_m_principal(kappa, mu, z)
    if winding:
        m *= (-cmath.exp(TWO_PI_I * mu)) ** int(winding)
    return m


def whittaker_w(kappa: complex, mu: complex, z: complex, winding: int = 0) -> complex:
    """W via the two-sided M combination (2 mu non-integer)."""
    _whittaker_guard(mu)
    w = (gamma(-2.0 * mu) * recip_gamma(0.5 - mu - kappa)
         * _whittaker_m_principal(kappa, mu, z)
         + gamma(2.0 * mu) * recip_gamma(0.5 + mu - kappa)
         * _whittaker_m_principal(kappa, -mu, z))
    if winding == 0:
        return w
    lam_w, lam_m, c = _w_monodromy(kappa, mu)
    A, B = _pair_coeffs(lam_w, lam_m, c, int(winding))
    return A * w + B * _whittaker_m_principal(kappa, mu, z)


def whittaker_m_prime(kappa: complex, mu: complex, z: complex, winding: int = 0) -> complex:
    a, b = 0.5 + mu - kappa, 1.0 + 2.0 * mu
    mreg = kummer_m_reg_r(a, b, z).value
    mreg_p = a * kummer_m_reg_r(a + 1.0, b + 1.0, z).value
    pre = cmath.exp(-z / 2.0 + (0.5 + mu) * cmath.log(z)) * gamma(b)
    mp = pre * ((-0.5 + (0.5 + mu) / z) * mreg + mreg_p)
    if winding:
        k = int(winding)
        mp *= (-cmath.exp(TWO_PI_I * mu)) ** k * cmath.exp(-TWO_PI_I * k)
    return mp


def whittaker_w_prime(kappa: complex, mu: complex, z: complex, winding: int = 0) -> complex:
    _whittaker_guard(mu)
    wp = (gamma(-2.0 * mu) * recip_gamma(0.5 - mu - kappa)
          * whittaker_m_prime(kappa, mu, z)
          + gamma(2.0 * mu) * recip_gamma(0.5 + mu - kappa)
          * whittaker_m_prime(kappa, -mu, z))
    if winding == 0:
        return wp
    lam_w, lam_m, c = _w_monodromy(kappa, mu)
    k = int(winding)
    A, B = _pair_coeffs(lam_w, lam_m, c, k)
    return cmath.exp(-TWO_PI_I * k) * (A * wp + B * whittaker_m_prime(kappa, mu, z))


# --- Bessel J and Y -------------------------------------------------------------

def bessel_j_r(nu: complex, z: complex) -> SeriesResult:
    """Ascending series with principal (z/2)^nu."""
    nu, z = complex(nu), complex(z)
    _check_z(z, "bessel_j")
    if z == 0:
        return SeriesResult(1.0 + 0j if nu == 0 else 0j, 0.0, 1)
    if _near_nonpositive_int(nu + 1.0):
        # near-negative-integer order: per-term reciprocal gammas
        acc = 0j
        w = -z * z / 4.0
        wk = 1.0 + 0j
        fact = 1.0
        peak = 1e-300
        k = 0
        for k in range(MAX_TERMS):
            t = wk / fact * recip_gamma(nu + k + 1.0)
            acc += t
            peak = max(peak, abs(t))
            if k > abs(z) and abs(t) < 1e-17 * peak:
                break
            wk *= w
            fact *= k + 1
        val = cmath.exp(nu * cmath.log(z / 2.0)) * acc
        return SeriesResult(val, abs(val) * 1e-13 + peak * 1e-15, k + 1)
    t0 = cmath.exp(nu * cmath.log(z / 2.0)) * recip_gamma(nu + 1.0)
    w = -z * z / 4.0
    nucdd, wcdd = cdd(nu), cdd(w)

    def ratio(k: int):
        kf = float(k)
        den = cdd_mul(cdd_add(nucdd, cdd(kf + 1.0)), cdd(kf + 1.0))
        return cdd_div(wcdd, den)

    return _dd_ratio_series(t0, ratio)


def _y_monodromy(nu: complex):
    lam_y = cmath.exp(-TWO_PI_I * nu)
    lam_j = cmath.exp(TWO_PI_I * nu)
    c = 4j * cmath.cos(cmath.pi * nu) ** 2
    return lam_y, lam_j, c


def bessel_j(nu: complex, z: complex, winding: int = 0) -> complex:
    v = bessel_j_r(nu, z).value
    if winding:
        v *= cmath.exp(TWO_PI_I * nu * int(winding))
    return v


def bessel_y(nu: complex, z: complex, winding: int = 0) -> complex:
    """Y_nu = (J_nu cos(nu pi) - J_{-nu}) / sin(nu pi); integer order rejected."""
    nu = complex(nu)
    if _near_int(nu):
        raise IntegerOrder(f"bessel_y needs non-integer order, nu = {nu}")
    jp = bessel_j_r(nu, z).value
    jm = bessel_j_r(-nu, z).value
    y = (jp * cmath.cos(cmath.pi * nu) - jm) / cmath.sin(cmath.pi * nu)
    if winding == 0:
        return y
    lam_y, lam_j, c = _y_monodromy(nu)
    A, B = _pair_coeffs(lam_y, lam_j, c, int(winding))
    return A * y + B * jp


def bessel_j_prime(nu: complex, z: complex, winding: int = 0) -> complex:
    v = bessel_j_r(nu - 1.0, z).value - nu / z * bessel_j_r(nu, z).value
    if winding:
        v *= cmath.exp(TWO_PI_I * (nu - 1.0) * int(winding))
    return v


def bessel_y_prime(nu: complex, z: complex, winding: int = 0) -> complex:
    """d/dz Y_nu on the winding-th sheet, via Y' = Y_{nu-1} - (nu/z) Y_nu."""
    if winding == 0:
        return bessel_y(nu - 1.0, z) - nu / z * bessel_y(nu, z)
    zc = z * cmath.exp(TWO_PI_I * int(winding))
    return bessel_y(nu - 1.0, z, winding) - nu / zc * bessel_y(nu, z, winding)


# --- Airy ----------------------------------------------------------------------

def _dd_sum_to_cdd(ratio, z_extra, max_terms: int = MAX_TERMS):
    """Like _dd_ratio_series but keeps the sum as a cdd value (times z_extra)."""
    term = cdd(1.0 + 0j)
    acc = cdd(1.0 + 0j)
    peak = 1.0
    small_run = 0
    for k in range(max_terms):
        term = cdd_mul(term, ratio(k))
        acc = cdd_add(acc, term)
        m = cdd_abs(term)
        peak = max(peak, m)
        if m < 1e-35 * peak:
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    else:
        raise SeriesNoConvergence(f"series did not converge in {max_terms} terms")
    return cdd_mul(acc, z_extra)


def _airy_blocks_cdd(z: complex):
    """Maclaurin blocks (f, g, f', g') as cdd values; Ai = Ai(0) f + Ai'(0) g.

    The Ai combination cancels the blocks down to e^{-(4/3)|Re z^{3/2}|} of
    their size, so blocks, constants and combination all stay double-double.
    """
    _check_z(z, "airy")
    zc = cdd(complex(z))
    z2 = cdd_mul(zc, zc)
    z3 = cdd_mul(z2, zc)
    half = (0.5, 0.0, 0.0, 0.0)

    def mk(den, extra):
        return _dd_sum_to_cdd(lambda k: cdd_div(z3, cdd(den(k))), extra)

    f = mk(lambda k: (3.0 * k + 3.0) * (3.0 * k + 2.0), cdd(1.0 + 0j))
    g = mk(lambda k: (3.0 * k + 4.0) * (3.0 * k + 3.0), zc)
    fp = mk(lambda k: (3.0 * k + 5.0) * (3.0 * k + 3.0), cdd_mul(z2, half))
    gp = mk(lambda k: (3.0 * k + 3.0) * (3.0 * k + 1.0), cdd(1.0 + 0j))
    return f, g, fp, gp


# dd splits of the Airy normalization constants:
# Ai(0) = 3^(-2/3)/Gamma(2/3), -Ai'(0) = 3^(-1/3)/Gamma(1/3),
# Bi(0) = 3^(-1/6)/Gamma(2/3), Bi'(0) = 3^(1/6)/Gamma(1/3)
_AI0 = (0.3550280538878172, 2.05233632436212e-17, 0.0, 0.0)
_AIP0 = (0.2588194037928068, -2.522243111610832e-17, 0.0, 0.0)
_BI0 = (0.6149266274460007, 5.0899207794891416e-17, 0.0, 0.0)
_BIP0 = (0.4482883573538264, -2.5363237774417305e-17, 0.0, 0.0)
_NEG = (-1.0, 0.0, 0.0, 0.0)


def _combine(c1, blk1, c2, blk2, sign: float) -> complex:
    second = cdd_mul(c2, blk2)
    if sign < 0:
        second = cdd_mul(_NEG, second)
    return cdd_to_complex(cdd_add(cdd_mul(c1, blk1), second))


def airy_ai(z: complex, winding: int = 0) -> complex:
    f, g, _, _ = _airy_blocks_cdd(z)
    return _combine(_AI0, f, _AIP0, g, -1.0)


def airy_bi(z: complex, winding: int = 0) -> complex:
    f, g, _, _ = _airy_blocks_cdd(z)
    return _combine(_BI0, f, _BIP0, g, +1.0)


def airy_ai_prime(z: complex, winding: int = 0) -> complex:
    _, _, fp, gp = _airy_blocks_cdd(z)
    return _combine(_AI0, fp, _AIP0, gp, -1.0)


def airy_bi_prime(z: complex, winding: int = 0) -> complex:
    _, _, fp, gp = _airy_blocks_cdd(z)
    return _combine(_BI0, fp, _BIP0, gp, +1.0)


# --- parabolic cylinder ----------------------------------------------------------

def _pcf_blocks(nu: complex, z: complex):
    w = z * z / 2.0
    if abs(w) > Z_MAX:
        raise SeriesNoConvergence(f"pcf_d: |z^2/2| = {abs(w):.3g} exceeds Z_max")
    f1 = kummer_m_reg_r(-nu / 2.0, 0.5, w).value * gamma(0.5)
    f2 = kummer_m_reg_r((1.0 - nu) / 2.0, 1.5, w).value * gamma(1.5)
    g1 = recip_gamma((1.0 - nu) / 2.0)
    g2 = recip_gamma(-nu / 2.0)
    pre = 2.0 ** (nu / 2.0) * math.sqrt(math.pi) * cmath.exp(-w / 2.0)
    return w, f1, f2, g1, g2, pre


def pcf_d(nu: complex, z: complex, winding: int = 0) -> complex:
    """Parabolic cylinder D_nu(z), entire in z."""
    _, f1, f2, g1, g2, pre = _pcf_blocks(nu, z)
    return pre * (g1 * f1 - math.sqrt(2.0) * z * g2 * f2)


def pcf_d_prime(nu: complex, z: complex, winding: int = 0) -> complex:
    w, f1, f2, g1, g2, pre = _pcf_blocks(nu, z)
    f1p = z * (-nu) * kummer_m_reg_r(1.0 - nu / 2.0, 1.5, w).value * gamma(1.5)
    f2p = (z * (1.0 - nu) / 3.0
           * kummer_m_reg_r((3.0 - nu) / 2.0, 2.5, w).value * gamma(2.5))
    core = g1 * f1 - math.sqrt(2.0) * z * g2 * f2
    core_p = g1 * f1p - math.sqrt(2.0) * (g2 * f2 + z * g2 * f2p)
    return pre * (-z / 2.0 * core + core_p)
