"""Monodromy analysis: cyclic states, eigenphases, analytic bases.

Eigenphases of the one-period operator come from its trace together with
the structurally known determinant (Liouville: det U(T) = e^{-2 i f0 T},
= 1 for traceless drives).  The trace stays well conditioned even when
the columns make large intermediate excursions, unlike the raw
eigendecomposition.

Cyclic trajectories are integrated in each mode's stable direction: the
mode that rides the locally dominant exponential is propagated forward,
its partner backward; both give the same curve, but each direction keeps
the wanted mode numerically dominant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from . import specfun as sf
from .algebra import Complex3, cdot, instantaneous_eigensystem
from .errors import DegenerateParameter, JordanBlock, UnsupportedFamilyError
from .models import DriveSpec, SolvableFamily, _normalized_harmonics, f_at
from .propagate import (EvolutionOperator, StateVector, Trajectory,
                        alpha_beta, evolve_operator, trajectory)

TWO_PI = 2.0 * math.pi


class FloquetClass(Enum):
    STABLE_REAL = "StableReal"
    BROKEN_COMPLEX = "BrokenComplex"
    DEGENERATE_DIAGONALIZABLE = "DegenerateDiagonalizable"
    DEGENERATE_JORDAN = "DegenerateJordan"


@dataclass(frozen=True)
class FloquetSolution:
    phi_plus: complex
    phi_minus: complex
    mode_plus: np.ndarray
    mode_minus: np.ndarray
    classification: FloquetClass

    def phase_factor(self, sign: int) -> complex:
        return cmath.exp(1j * (self.phi_plus if sign > 0 else self.phi_minus))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def floquet_modes(U: EvolutionOperator, spec: DriveSpec | None = None) -> FloquetSolution:
    """Eigenphases and cyclic modes of a one-period operator.

    ``spec`` supplies the trace term for the structural determinant and the
    instantaneous eigenstates used to tie-break the +/- labels when both
    eigenphases are real.
    """
    M = U.U
    tr = M[0, 0] + M[1, 1]
    span = U.t1 - U.t0
    if spec is not None:
        det = cmath.exp(-2j * spec.f0 * span)
    else:
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr / 4.0 - det
    root = cmath.sqrt(disc)
    lam1 = tr / 2.0 + root
    if abs(lam1) < abs(tr / 2.0 - root):
        lam1 = tr / 2.0 - root
    lam2 = det / lam1
    gap = abs(lam1 - lam2)
    scale = max(abs(lam1), abs(lam2))
    degenerate = False
    if gap < 1e-9 * scale:
        offdiag = max(abs(M[0, 1]), abs(M[1, 0]), abs(M[0, 0] - M[1, 1]))
        if offdiag > 1e-8 * max(1.0, np.abs(M).max()):
            raise JordanBlock(
                f"degenerate non-diagonalizable one-period operator "
                f"(gap {gap:.2e}, offdiag {offdiag:.2e})")
        degenerate = True
        v1 = np.array([1.0 + 0j, 0j])
        v2 = np.array([0j, 1.0 + 0j])
    else:
        v1 = _eigvec2(M, lam1)
        v2 = _eigvec2(M, lam2)
        cond = 1.0 / max(abs(np.linalg.det(np.column_stack([_unit(v1), _unit(v2)]))),
                         1e-300)
        if gap < 1e-9 * scale and cond > 1e8:
            raise JordanBlock(f"eigenvector condition {cond:.2e}")
    phi1 = -1j * cmath.log(lam1)
    phi2 = -1j * cmath.log(lam2)
    # order: Im phi_plus <= Im phi_minus (plus mode grows or decays least)
    if phi1.imag > phi2.imag + 1e-12:
        phi1, phi2, v1, v2 = phi2, phi1, v2, v1
    elif abs(phi1.imag - phi2.imag) <= 1e-12 and spec is not None:
        # real eigenphases: for a solvable drive, "plus" is the mode whose
        # eigenvalue matches the closed form carried by the y1 basis column;
        # otherwise label by overlap with the instantaneous states
        swap = False
        from .models import classify_solvable
        fam = classify_solvable(spec)
        if fam is not SolvableFamily.NOT_SOLVABLE:
            try:
                target = cmath.exp(1j * analytic_eigenphases(fam, spec)[0])
                swap = (abs(cmath.exp(1j * phi2) - target)
                        < abs(cmath.exp(1j * phi1) - target))
            except (UnsupportedFamilyError, DegenerateParameter):
                fam = SolvableFamily.NOT_SOLVABLE
        if fam is SolvableFamily.NOT_SOLVABLE:
            eig = instantaneous_eigensystem(f_at(spec, U.t0))
            o11 = abs(np.vdot(_unit(eig.state_plus), _unit(v1)))
            o21 = abs(np.vdot(_unit(eig.state_plus), _unit(v2)))
            swap = o21 > o11
        if swap:
            phi1, phi2, v1, v2 = phi2, phi1, v2, v1
    if degenerate:
        cls = FloquetClass.DEGENERATE_DIAGONALIZABLE
    elif max(abs(phi1.imag), abs(phi2.imag)) < 1e-7:
        cls = FloquetClass.STABLE_REAL
    else:
        cls = FloquetClass.BROKEN_COMPLEX
    return FloquetSolution(phi1, phi2, _unit(v1), _unit(v2), cls)


def _eigvec2(M: np.ndarray, lam: complex) -> np.ndarray:
    r1 = np.array([M[0, 1], lam - M[0, 0]])
    r2 = np.array([lam - M[1, 1], M[1, 0]])
    return r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2


def monodromy_report(spec: DriveSpec, rtol: float = 1e-12) -> dict:
    """JSON-ready one-period report."""
    T = spec.period
    U = evolve_operator(spec, 0.0, T, rtol=rtol)
    sol = floquet_modes(U, spec)
    return {
        "phi_plus": [sol.phi_plus.real, sol.phi_plus.imag],
        "phi_minus": [sol.phi_minus.real, sol.phi_minus.imag],
        "classification": sol.classification.value,
        "U": [[[U.U[i, j].real, U.U[i, j].imag] for j in range(2)]
              for i in range(2)],
        "modes": {
            "plus": [[sol.mode_plus[0].real, sol.mode_plus[0].imag],
                     [sol.mode_plus[1].real, sol.mode_plus[1].imag]],
            "minus": [[sol.mode_minus[0].real, sol.mode_minus[0].imag],
                      [sol.mode_minus[1].real, sol.mode_minus[1].imag]],
        },
    }


# --- family parameters -------------------------------------------------------

def family_params(spec: DriveSpec, family: SolvableFamily) -> dict:
    """Derived parameters of a solvable family (slot vectors and the
    special-function parameters of its amplitude equation)."""
    h = _normalized_harmonics(spec)
    w = spec.omega * (max(abs(n) for n in spec.harmonics if n != 0) /
                      max(abs(n) for n in h if n != 0)
                      if any(n != 0 for n in h) else 1.0)
    F = SolvableFamily
    out: dict = {"omega": w}
    if family in (F.CONSTANT, F.SINGLE_FREQUENCY):
        p = h.get(0 if family is F.CONSTANT else 1, Complex3())
        out["p"] = p
        out["s_pp"] = cmath.sqrt(cdot(p, p))
        return out
    if family in (F.CASE_A_WHITTAKER, F.CASE_A_BESSEL_PQ0,
                  F.CASE_A_BESSEL_QQ0, F.CASE_A_EXPONENTIAL,
                  F.CASE_B_KUMMER, F.CASE_B_BESSEL_Q30):
        p, q = h[0], h[1]
        out.update(p=p, q=q, pp=cdot(p, p), pq=cdot(p, q), qq=cdot(q, q))
        if family is F.CASE_A_WHITTAKER:
            sqq = cmath.sqrt(out["qq"])
            out["kappa"] = -out["pq"] / (w * sqq)
            out["mu"] = 0.5 + p.f3 / w
            out["z0"] = 2.0 * sqq / w
        elif family is F.CASE_A_BESSEL_PQ0:
            out["nu"] = 0.5 + p.f3 / w
            out["z0"] = 1j * cmath.sqrt(out["qq"]) / w
        elif family is F.CASE_A_BESSEL_QQ0:
            out["nu"] = 1.0 + 2.0 * p.f3 / w
            out["z0"] = 2j * cmath.sqrt(2.0 * out["pq"]) / w
        elif family is F.CASE_B_KUMMER:
            c = cmath.sqrt(out["pp"]) / w
            out["c"] = c
            out["a"] = (out["pq"] / q.f3 + cmath.sqrt(out["pp"])) / w
            out["b"] = 1.0 + 2.0 * c
            out["z0"] = 2.0 * q.f3 / w
        elif family is F.CASE_B_BESSEL_Q30:
            out["nu"] = 2.0 * cmath.sqrt(out["pp"]) / w
            out["z0"] = 2j * cmath.sqrt(2.0 * out["pq"]) / w
        return out
    if family in (F.H12_PARABOLIC_CYLINDER, F.H12_AIRY):
        p, q = h[1], h[2]
        out.update(p=p, q=q, pp=cdot(p, p), pq=cdot(p, q), qq=cdot(q, q))
        if family is F.H12_PARABOLIC_CYLINDER:
            q3 = q.f3
            sq3 = cmath.sqrt(q3)
            out["nu"] = (out["pq"] ** 2 / (2.0 * w * q3 ** 3)
                         - out["pp"] / (2.0 * w * q3))
            out["z_const"] = math.sqrt(2.0 / w) * out["pq"] / (q3 * sq3)
            out["z_rot"] = math.sqrt(2.0 / w) * sq3
        else:
            w13 = (2.0 * out["pq"]) ** (1.0 / 3.0)
            out["z_const"] = w ** (-2.0 / 3.0) * out["pp"] / (w13 * w13)
            out["z_rot"] = w ** (-2.0 / 3.0) * w13
        return out
    if family in (F.H1M1_BESSEL, F.H1M1_POWER):
        p, q = h[-1], h[1]
        out.update(p=p, q=q, pq=cdot(p, q), qq=cdot(q, q))
        out["nu"] = cmath.sqrt(2.0 * out["pq"] / w ** 2 + 0.25)
        if family is F.H1M1_BESSEL:
            out["z0"] = 1j * cmath.sqrt(out["qq"]) / w
        return out
    if family is F.APPB_M101_WHITTAKER:
        s, p, q = h[-1], h[0], h[1]
        out.update(s=s, p=p, q=q, pq=cdot(p, q), qq=cdot(q, q), qs=cdot(q, s))
        sqq = cmath.sqrt(out["qq"])
        out["kappa"] = -out["pq"] / (w * sqq)
        out["mu"] = cmath.sqrt((2.0 * p.f3 + w) ** 2 + 8.0 * out["qs"]) / (2.0 * w)
        out["z0"] = 2.0 * sqq / w
        return out
    if family in (F.APPB_012_KUMMER, F.APPB_012_BESSEL):
        s, p, q = h[0], h[1], h[2]
        out.update(s=s, p=p, q=q, ss=cdot(s, s), ps=cdot(p, s), qs=cdot(q, s))
        R = cmath.sqrt(out["ss"])
        out["R"] = R
        if family is F.APPB_012_KUMMER:
            D = cmath.sqrt(p.f3 ** 2 + 2.0 * out["qs"])
            out["D"] = D
            out["a"] = 0.5 - p.f3 / (2.0 * D) + (R + out["ps"] / D) / w
            out["b"] = 1.0 + 2.0 * R / w
            out["z0"] = 2.0 * D / w
        else:
            out["nu"] = 2.0 * R / w
            out["z0"] = 2j * cmath.sqrt(2.0 * out["ps"] - w * p.f3) / w
        return out
    raise UnsupportedFamilyError(f"no parameter set for family {family}")


def analytic_eigenphases(family: SolvableFamily, spec: DriveSpec):
    """One-period eigenphase pair (phi1, phi2) of the analytic basis modes.

    phi1 belongs to the single-special-function mode (the y1 column of
    analytic_basis); phi2 = -phi1 modulo 2 pi.  All values are meaningful
    modulo 2 pi only.
    """
    F = SolvableFamily
    par = family_params(spec, family)
    w = par["omega"]
    if family is F.CONSTANT:
        phi1 = -par["s_pp"] * TWO_PI / w
    elif family is F.SINGLE_FREQUENCY:
        phi1 = 0.0 + 0j
    elif family in (F.CASE_A_WHITTAKER, F.CASE_A_BESSEL_PQ0,
                    F.CASE_A_BESSEL_QQ0):
        phi1 = TWO_PI * par["p"].f3 / w
    elif family is F.CASE_A_EXPONENTIAL:
        phi1 = -TWO_PI * par["p"].f3 / w
    elif family in (F.CASE_B_KUMMER, F.CASE_B_BESSEL_Q30):
        phi1 = TWO_PI * cmath.sqrt(par["pp"]) / w
    elif family in (F.H12_PARABOLIC_CYLINDER, F.H12_AIRY):
        phi1 = 0.0 + 0j
    elif family in (F.H1M1_BESSEL, F.H1M1_POWER):
        phi1 = math.pi + TWO_PI * par["nu"]
    elif family is F.APPB_M101_WHITTAKER:
        phi1 = math.pi + TWO_PI * par["mu"]
    elif family in (F.APPB_012_KUMMER, F.APPB_012_BESSEL):
        phi1 = TWO_PI * par["R"] / w
    else:
        raise UnsupportedFamilyError(f"no closed-form eigenphases for {family}")
    phi1 = complex(phi1)
    return phi1, -phi1


# --- analytic bases ----------------------------------------------------------

@dataclass(frozen=True)
class AnalyticBasis:
    """Two independent a-solutions y1, y2 with time derivatives.

    b-components follow from b = alpha(t) y + beta(t) ydot with the
    universal reconstruction coefficients of the drive.
    """

    family: SolvableFamily
    spec: DriveSpec
    y1: Callable[[float], complex]
    y1dot: Callable[[float], complex]
    y2: Callable[[float], complex]
    y2dot: Callable[[float], complex]

    def state(self, idx: int, t: float) -> StateVector:
        y, yd = (self.y1, self.y1dot) if idx == 0 else (self.y2, self.y2dot)
        a = y(t)
        al, be = alpha_beta(self.spec, t)
        return StateVector(a, al * a + be * yd(t))


def _winding(z0: complex, advance: float) -> tuple[complex, int]:
    """Principal value and winding count of z0 * e^{i advance}."""
    arg = cmath.phase(z0) + advance
    wrapped = (arg + math.pi) % TWO_PI - math.pi
    k = round((arg - wrapped) / TWO_PI)
    return abs(z0) * cmath.exp(1j * wrapped), k


def analytic_basis(family: SolvableFamily, spec: DriveSpec) -> AnalyticBasis:
    """Special-function solution pair for a solvable family.

    y1 is always the single-special-function cyclic column (regular/recessive
    member), y2 its companion carrying the branch-cut monodromy mixing.
    """
    F = SolvableFamily
    par = family_params(spec, family)
    w = par["omega"]

    if family is F.CONSTANT:
        s = par["s_pp"]

        def mk(sign):
            return (lambda t: cmath.exp(sign * 1j * s * t),
                    lambda t: sign * 1j * s * cmath.exp(sign * 1j * s * t))
        y1, y1d = mk(-1.0)
        y2, y2d = mk(+1.0)

    elif family is F.SINGLE_FREQUENCY:
        s = par["s_pp"]

        def mk(sign):
            def val(t):
                return cmath.exp(sign * (s / w) * cmath.exp(1j * w * t))

            def der(t):
                return sign * 1j * s * cmath.exp(1j * w * t) * val(t)
            return val, der
        y1, y1d = mk(+1.0)
        y2, y2d = mk(-1.0)

    elif family in (F.CASE_A_WHITTAKER, F.APPB_M101_WHITTAKER):
        kappa, mu, z0 = par["kappa"], par["mu"], par["z0"]
        if sf._near_int(2.0 * mu):
            raise DegenerateParameter(f"resonant 2 mu = {2 * mu}")

        def mk(fn, fnp):
            def val(t):
                z, k = _winding(z0, w * t)
                return fn(kappa, mu, z, winding=k)

            def der(t):
                z, k = _winding(z0, w * t)
                zdot = 1j * w * z0 * cmath.exp(1j * w * t)
                return fnp(kappa, mu, z, winding=k) * zdot
            return val, der
        y1, y1d = mk(sf.whittaker_m, sf.whittaker_m_prime)
        y2, y2d = mk(sf.whittaker_w, sf.whittaker_w_prime)

    elif family is F.CASE_A_BESSEL_PQ0:
        nu, z0 = par["nu"], par["z0"]
        y1, y1d = _bessel_sqrtz_column(sf.bessel_j, sf.bessel_j_prime, nu, z0, w)
        y2, y2d = _bessel_sqrtz_column(sf.bessel_y, sf.bessel_y_prime, nu, z0, w)

    elif family is F.CASE_A_BESSEL_QQ0:
        nu, z0 = par["nu"], par["z0"]
        y1, y1d = _bessel_zc_column(sf.bessel_j, sf.bessel_j_prime, nu, z0,
                                    w / 2.0, 1.0)
        y2, y2d = _bessel_zc_column(sf.bessel_y, sf.bessel_y_prime, nu, z0,
                                    w / 2.0, 1.0)

    elif family is F.CASE_A_EXPONENTIAL:
        p3 = par["p"].f3

        def y1(t):
            return cmath.exp(-1j * p3 * t)

        def y1d(t):
            return -1j * p3 * cmath.exp(-1j * p3 * t)

        def y2(t):
            return cmath.exp(1j * (w + p3) * t)

        def y2d(t):
            return 1j * (w + p3) * cmath.exp(1j * (w + p3) * t)

    elif family is F.CASE_B_KUMMER:
        aK, bK, c, z0 = par["a"], par["b"], par["c"], par["z0"]
        logz0 = cmath.log(z0)

        def mk(fn, fnp, entire):
            def pair(t):
                z, k = _winding(z0, w * t)
                zdot = 1j * w * z0 * cmath.exp(1j * w * t)
                lz = logz0 + 1j * w * t
                pre = cmath.exp(-z / 2.0 + c * lz)
                X = fn(aK, bK, z, winding=k)
                dX = fnp(aK, bK, z, winding=k)
                val = pre * X
                der = pre * ((-0.5 + c / z) * zdot * X + dX * zdot)
                return val, der
            return (lambda t: pair(t)[0]), (lambda t: pair(t)[1])
        y1, y1d = mk(sf.kummer_m_reg, sf.kummer_m_reg_prime, True)
        y2, y2d = mk(sf.tricomi_u, sf.tricomi_u_prime, False)

    elif family is F.CASE_B_BESSEL_Q30:
        nu, z0 = par["nu"], par["z0"]
        y1, y1d = _bessel_zc_column(sf.bessel_j, sf.bessel_j_prime, nu, z0,
                                    w / 2.0, 0.0)
        y2, y2d = _bessel_zc_column(sf.bessel_y, sf.bessel_y_prime, nu, z0,
                                    w / 2.0, 0.0)

    elif family is F.H12_PARABOLIC_CYLINDER:
        nu = par["nu"]
        zc, zr = par["z_const"], par["z_rot"]

        def mk(sign):
            def val(t):
                z = zc + zr * cmath.exp(1j * w * t)
                return sf.pcf_d(nu, sign * z)

            def der(t):
                z = zc + zr * cmath.exp(1j * w * t)
                zdot = 1j * w * zr * cmath.exp(1j * w * t)
                return sign * zdot * sf.pcf_d_prime(nu, sign * z)
            return val, der
        y1, y1d = mk(+1.0)
        y2, y2d = mk(-1.0)

    elif family is F.H12_AIRY:
        zc, zr = par["z_const"], par["z_rot"]

        def mk(fn, fnp):
            def val(t):
                return fn(zc + zr * cmath.exp(1j * w * t))

            def der(t):
                return 1j * w * zr * cmath.exp(1j * w * t) * fnp(
                    zc + zr * cmath.exp(1j * w * t))
            return val, der
        y1, y1d = mk(sf.airy_ai, sf.airy_ai_prime)
        y2, y2d = mk(sf.airy_bi, sf.airy_bi_prime)

    elif family is F.H1M1_BESSEL:
        nu, z0 = par["nu"], par["z0"]
        y1, y1d = _bessel_sqrtz_column(sf.bessel_j, sf.bessel_j_prime, nu, z0, w)
        y2, y2d = _bessel_sqrtz_column(sf.bessel_y, sf.bessel_y_prime, nu, z0, w)

    elif family is F.H1M1_POWER:
        nu = par["nu"]

        def mk(sign):
            ex = 1j * w * (0.5 + sign * nu)
            return (lambda t: cmath.exp(ex * t),
                    lambda t: ex * cmath.exp(ex * t))
        y1, y1d = mk(+1.0)
        y2, y2d = mk(-1.0)

    elif family is F.APPB_012_KUMMER:
        aK, bK, R, z0 = par["a"], par["b"], par["R"], par["z0"]

        def mk(fn, fnp):
            def pair(t):
                z, k = _winding(z0, w * t)
                zdot = 1j * w * z0 * cmath.exp(1j * w * t)
                pre = cmath.exp(-z / 2.0 + 1j * R * t)
                X = fn(aK, bK, z, winding=k)
                dX = fnp(aK, bK, z, winding=k)
                val = pre * X
                der = pre * ((-zdot / 2.0 + 1j * R) * X + dX * zdot)
                return val, der
            return (lambda t: pair(t)[0]), (lambda t: pair(t)[1])
        y1, y1d = mk(sf.kummer_m_reg, sf.kummer_m_reg_prime)
        y2, y2d = mk(sf.tricomi_u, sf.tricomi_u_prime)

    elif family is F.APPB_012_BESSEL:
        nu, z0 = par["nu"], par["z0"]

        def mk(order):
            def val(t):
                z, k = _winding(z0, w * t / 2.0)
                return sf.bessel_j(order, z, winding=k)

            def der(t):
                z, k = _winding(z0, w * t / 2.0)
                zdot = 0.5j * w * z0 * cmath.exp(0.5j * w * t)
                return sf.bessel_j_prime(order, z, winding=k) * zdot
            return val, der
        y1, y1d = mk(nu)
        y2, y2d = mk(-nu)

    else:
        raise UnsupportedFamilyError(f"no analytic basis for family {family}")

    return AnalyticBasis(family, spec, y1, y1d, y2, y2d)


def _bessel_sqrtz_column(fn, fnp, nu, z0, w):
    """y = sqrt(z) C_nu(z) with z = z0 e^{i w t}; sqrt continued in t."""
    sq0 = cmath.sqrt(z0)

    def val(t):
        z, k = _winding(z0, w * t)
        sq = sq0 * cmath.exp(0.5j * w * t)
        return sq * fn(nu, z, winding=k)

    def der(t):
        z, k = _winding(z0, w * t)
        zdot = 1j * w * z0 * cmath.exp(1j * w * t)
        sq = sq0 * cmath.exp(0.5j * w * t)
        return (0.5j * w * sq * fn(nu, z, winding=k)
                + sq * fnp(nu, z, winding=k) * zdot)
    return val, der


def _bessel_zc_column(fn, fnp, nu, z0, half_w, zpow):
    """y = z^zpow C_nu(z) with z = z0 e^{i half_w t} (half-frequency drives)."""

    def val(t):
        z, k = _winding(z0, half_w * t)
        zfac = cmath.exp(zpow * (cmath.log(z0) + 1j * half_w * t))
        return zfac * fn(nu, z, winding=k)

    def der(t):
        z, k = _winding(z0, half_w * t)
        zdot = 1j * half_w * z0 * cmath.exp(1j * half_w * t)
        zfac = cmath.exp(zpow * (cmath.log(z0) + 1j * half_w * t))
        core = fn(nu, z, winding=k)
        dcore = fnp(nu, z, winding=k)
        return zfac * (zpow * (1j * half_w) * core + dcore * zdot)
    return val, der


# --- cyclic trajectories --------------------------------------------------------

def cyclic_trajectory(spec: DriveSpec, mode: str, grid,
                      rtol: float = 1e-12) -> Trajectory:
    """Trajectory of one Floquet mode over a grid spanning >= one period.

    Each mode is integrated in the direction that keeps it numerically
    dominant.  For solvable drives the mode start states are anchored on
    the analytic basis and integrated per Stokes window, so even drives
    with huge intermediate dominance swings stay accurate in doubles.
    """
    if mode not in ("plus", "minus"):
        raise ValueError(f"mode must be 'plus' or 'minus', got {mode!r}")
    from .models import classify_solvable
    grid = np.asarray(grid, dtype=float)
    fam = classify_solvable(spec)
    if fam is not SolvableFamily.NOT_SOLVABLE:
        try:
            return analytic_cyclic_trajectory(spec, mode, grid, rtol=rtol)
        except (UnsupportedFamilyError, DegenerateParameter):
            pass
    T = spec.period
    t0 = float(grid[0])
    Ufwd = evolve_operator(spec, t0, t0 + T, rtol=rtol)
    sol = floquet_modes(Ufwd, spec)
    if sol.classification is FloquetClass.DEGENERATE_DIAGONALIZABLE:
        v = (np.array([1.0, 0.0], complex) if mode == "plus"
             else np.array([0.0, 1.0], complex))
        return trajectory(spec, StateVector(v[0], v[1]), grid, rtol=rtol)
    v_dom, lam_dom = _dominant_eigvec(Ufwd.U)
    # identify the dominant direction with one of the labeled modes
    dom_is_plus = (abs(lam_dom - sol.phase_factor(+1))
                   <= abs(lam_dom - sol.phase_factor(-1)))
    want_dom = (mode == "plus") == dom_is_plus
    if want_dom:
        return trajectory(spec, StateVector(v_dom[0], v_dom[1]), grid,
                          rtol=rtol)
    # the wanted mode decays forward: integrate backward from its cyclic
    # endpoint so it stays dominant along the integration
    v = sol.mode_plus if mode == "plus" else sol.mode_minus
    lam = sol.phase_factor(+1 if mode == "plus" else -1)
    k = math.ceil((grid[-1] - t0) / T - 1e-12)
    vT = (lam ** k) * v
    sT = StateVector(vT[0], vT[1])
    return trajectory(spec, sT, grid, rtol=rtol, backward=True)


def analytic_cyclic_trajectory(spec: DriveSpec, mode: str, grid,
                               rtol: float = 1e-12) -> Trajectory:
    """Cyclic-mode trajectory anchored on the analytic basis.

    mode 'plus' follows the y1 column (single special function), 'minus'
    the y2 column.  The grid is split at the Stokes crossings and each
    window is integrated from the end where the followed column dominates,
    which bounds error amplification by one window's swing.
    """
    from .asymptotics import exponent_form, stokes_crossings
    from .models import classify_solvable
    fam = classify_solvable(spec)
    basis = analytic_basis(fam, spec)
    grid = np.asarray(grid, dtype=float)
    idx = 0 if mode == "plus" else 1
    other = 1 - idx
    try:
        form = exponent_form(spec)
        cross = stokes_crossings(form)
    except Exception:
        cross = []
    T = spec.period
    t0 = float(grid[0])
    anchors = sorted({t0, float(grid[-1])}
                     | {t0 + th / spec.omega + k * T
                        for th in cross
                        for k in range(0, int((grid[-1] - t0) / T) + 1)
                        if t0 < t0 + th / spec.omega + k * T < grid[-1]})
    states: list[StateVector] = [None] * len(grid)
    for wi in range(len(anchors) - 1):
        ta, tb = anchors[wi], anchors[wi + 1]
        sel = (grid >= ta - 1e-12) & (grid <= tb + 1e-12) \
            if wi == 0 else (grid > ta + 1e-12) & (grid <= tb + 1e-12)
        sub = grid[np.where(sel)[0]]
        # choose the window direction from the columns' magnitude growth
        ya, yb = abs(basis.state(idx, ta).a) + abs(basis.state(idx, ta).b), \
            abs(basis.state(idx, tb).a) + abs(basis.state(idx, tb).b)
        oa, ob = abs(basis.state(other, ta).a) + abs(basis.state(other, ta).b), \
            abs(basis.state(other, tb).a) + abs(basis.state(other, tb).b)
        own_growth = math.log(max(yb, 1e-300)) - math.log(max(ya, 1e-300))
        oth_growth = math.log(max(ob, 1e-300)) - math.log(max(oa, 1e-300))
        forward = own_growth >= oth_growth
        if len(sub) == 0:
            continue
        pts = np.unique(np.concatenate([[ta], sub, [tb]]))
        if forward:
            tr = trajectory(spec, basis.state(idx, ta), pts, rtol=rtol)
        else:
            tr = trajectory(spec, basis.state(idx, tb), pts, rtol=rtol,
                            backward=True)
        lookup = {round(t, 12): s for t, s in zip(pts, tr.states)}
        for gi in np.where(sel)[0]:
            states[gi] = lookup[round(grid[gi], 12)]
    for gi, s in enumerate(states):  # any grid point not covered (edge ties)
        if s is None:
            states[gi] = basis.state(idx, float(grid[gi]))
    return Trajectory(grid, states)


def _dominant_eigvec(M: np.ndarray) -> tuple[np.ndarray, complex]:
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    root = cmath.sqrt(tr * tr / 4.0 - det)
    lam = tr / 2.0 + root
    if abs(tr / 2.0 - root) > abs(lam):
        lam = tr / 2.0 - root
    v = _unit(_eigvec2(M, lam))
    # Rayleigh quotient identifies which eigenvalue this direction carries
    lam_r = complex(np.vdot(v, M @ v))
    return v, lam_r
