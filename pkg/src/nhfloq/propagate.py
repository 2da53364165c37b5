"""Adaptive integration of the two-level non-Hermitian Schrodinger equation.

i da/dt = f3 a + (f1 - i f2) b
i db/dt = (f1 + i f2) a - f3 b            (plus an optional trace term f0)

The integrator is an explicit Dormand-Prince 5(4) embedded pair with the
Butcher tableau fixed here (reproducible golden files do not depend on a
third-party solver's step heuristics).  Evolution is non-unitary: state
norms grow and shrink exponentially, so the stepper carries a running log
scale once components pass 1e100 instead of renormalizing (which would
silently break the linearity bookkeeping of operator columns).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import Complex3
from .errors import LowerTriangularPoint, NumericError, StepSizeUnderflow
from .models import DriveSpec, f_at

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525,
      -1 / 40)

RESCALE_AT = 1e100
OVERFLOW_GUARD = 1e150
MIN_RTOL, MAX_RTOL = 1e-13, 1e-6


@dataclass(frozen=True)
class StateVector:
    a: complex
    b: complex

    @property
    def psi(self) -> complex:
        """Projective coordinate b/a."""
        return self.b / self.a

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)


@dataclass(frozen=True)
class EvolutionOperator:
    U: np.ndarray
    t0: float
    t1: float
    err_est: float

    def det(self) -> complex:
        return self.U[0, 0] * self.U[1, 1] - self.U[0, 1] * self.U[1, 0]


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: list[StateVector]
    dense: bool = True

    def psi(self) -> np.ndarray:
        return np.array([s.b / s.a for s in self.states])


def _rhs_factory(spec: DriveSpec):
    terms = [(n * spec.omega, v.upper, v.lower, v.f3)
             for n, v in spec.harmonics.items()]
    f0 = spec.f0

    def rhs(t: float, a: complex, b: complex):
        up = 0j
        lo = 0j
        d = 0j
        for w, vu, vl, v3 in terms:
            ph = cmath.exp(1j * w * t)
            up += vu * ph
            lo += vl * ph
            d += v3 * ph
        da = -1j * ((d + f0) * a + up * b)
        db = -1j * (lo * a + (f0 - d) * b)
        return da, db

    return rhs


def _check_rtol(rtol: float) -> None:
    if not (MIN_RTOL <= rtol <= MAX_RTOL):
        raise NumericError(f"rtol {rtol} outside [{MIN_RTOL}, {MAX_RTOL}]")


def _integrate(spec: DriveSpec, y0, t0: float, t1: float, rtol: float,
               atol: float, sample_times=None):
    """Core DP5(4) loop.

    Returns (a, b, log_scale, err_accum, samples) where samples are dense
    cubic-Hermite values at the requested times (scaled back by e^{scale}).
    """
    rhs = _rhs_factory(spec)
    a, b = complex(y0[0]), complex(y0[1])
    scale = 0.0
    span = t1 - t0
    if span == 0.0:
        samples = [(a, b)] * len(sample_times) if sample_times is not None else None
        return a, b, scale, 0.0, samples
    direction = 1.0 if span > 0 else -1.0
    t = t0
    da0, db0 = rhs(t, a, b)
    f_mag = max(abs(da0), abs(db0), 1e-12)
    y_mag = max(abs(a), abs(b), 1e-12)
    h = direction * min(abs(span), 0.01 * y_mag / f_mag, 0.1 * abs(span))
    err_accum = 0.0
    samples = [] if sample_times is not None else None
    si = 0
    ka = [0j] * 7
    kb = [0j] * 7
    ka[0], kb[0] = da0, db0
    min_h = 1e-14 * abs(span)
    while direction * (t1 - t) > 0:
        if direction * (t + h - t1) > 0:
            h = t1 - t
        # stages (FSAL not exploited; stage 0 already in ka[0])
        for i in range(1, 7):
            ai = _A[i]
            sa = a
            sb = b
            for j in range(i):
                c = ai[j] * h
                sa += c * ka[j]
                sb += c * kb[j]
            ka[i], kb[i] = rhs(t + _C[i] * h, sa, sb)
        na = a
        nb = b
        ea = 0j
        eb = 0j
        for i in range(7):
            if _B5[i] != 0.0:
                na += h * _B5[i] * ka[i]
                nb += h * _B5[i] * kb[i]
            if _E[i] != 0.0:
                ea += h * _E[i] * ka[i]
                eb += h * _E[i] * kb[i]
        bad = not (math.isfinite(na.real) and math.isfinite(na.imag)
                   and math.isfinite(nb.real) and math.isfinite(nb.imag))
        if bad:
            errn = 10.0
        else:
            # weight by the state norm, not per component: exponentially
            # small components must stay accurate relative to the state,
            # or their error re-grows catastrophically in linear dynamics
            w = atol + rtol * max(abs(a), abs(b), abs(na), abs(nb))
            errn = max(abs(ea), abs(eb)) / w
        if errn <= 1.0:
            # accept; dense cubic Hermite for samples inside [t, t+h]
            if samples is not None:
                d0a, d0b = ka[0], kb[0]
                d1a, d1b = rhs(t + h, na, nb)
                while si < len(sample_times) and (
                        direction * (sample_times[si] - (t + h)) <= 1e-12 * abs(span)
                        or abs(sample_times[si] - (t + h)) == 0.0):
                    s = (sample_times[si] - t) / h
                    h00 = (1 + 2 * s) * (1 - s) ** 2
                    h10 = s * (1 - s) ** 2
                    h01 = s * s * (3 - 2 * s)
                    h11 = s * s * (s - 1)
                    va = h00 * a + h10 * h * d0a + h01 * na + h11 * h * d1a
                    vb = h00 * b + h10 * h * d0b + h01 * nb + h11 * h * d1b
                    samples.append((va, vb, scale))
                    si += 1
                ka[0], kb[0] = d1a, d1b
            else:
                ka[0], kb[0] = rhs(t + h, na, nb)
            t += h
            a, b = na, nb
            err_accum = max(err_accum, errn * rtol)
            m = max(abs(a), abs(b))
            if m > RESCALE_AT:
                lm = math.log(m)
                scale += lm
                f = math.exp(-lm)
                a *= f
                b *= f
                ka[0] *= f
                kb[0] *= f
            fac = 0.9 * errn ** -0.2 if errn > 0 else 5.0
            h *= min(5.0, max(0.2, fac))
        else:
            h *= max(0.2, 0.9 * errn ** -0.2)
            if abs(h) < min_h:
                raise StepSizeUnderflow(
                    f"step collapsed at t = {t} (|state| ~ {max(abs(a), abs(b)):.2e})")
    if samples is not None:
        while si < len(sample_times):  # endpoint jitter
            samples.append((a, b, scale))
            si += 1
    return a, b, scale, err_accum, samples


def _fold(a: complex, b: complex, scale: float):
    if scale == 0.0:
        return a, b
    m = max(abs(a), abs(b))
    if scale + math.log(max(m, 1e-300)) > math.log(OVERFLOW_GUARD):
        raise StepSizeUnderflow(
            f"state norm exceeded overflow guard {OVERFLOW_GUARD:.0e}")
    f = math.exp(scale)
    return a * f, b * f


def propagate(spec: DriveSpec, s0: StateVector, t0: float, t1: float,
              rtol: float = 1e-10, atol: float = 1e-12) -> StateVector:
    """Propagate one state from t0 to t1."""
    _check_rtol(rtol)
    a, b, scale, _, _ = _integrate(spec, (s0.a, s0.b), t0, t1, rtol, atol)
    a, b = _fold(a, b, scale)
    return StateVector(a, b)


def evolve_operator(spec: DriveSpec, t0: float, t1: float,
                    rtol: float = 1e-10, atol: float = 1e-12) -> EvolutionOperator:
    """Time evolution operator: columns are propagations of (1,0) and (0,1)."""
    _check_rtol(rtol)
    cols = []
    err = 0.0
    for y0 in ((1.0 + 0j, 0j), (0j, 1.0 + 0j)):
        a, b, scale, e, _ = _integrate(spec, y0, t0, t1, rtol, atol)
        a, b = _fold(a, b, scale)
        cols.append((a, b))
        err = max(err, e)
    U = np.array([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    return EvolutionOperator(U, t0, t1, err)


def trajectory(spec: DriveSpec, s0: StateVector, grid, rtol: float = 1e-10,
               atol: float = 1e-12, backward: bool = False) -> Trajectory:
    """Dense sampling along an increasing time grid (single integration).

    With ``backward=True`` the initial state is taken at grid[-1] and the
    integration runs toward grid[0]; the returned samples are still in
    increasing time order.  Use it for states that decay forward in time.
    """
    _check_rtol(rtol)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise NumericError("trajectory grid must be a non-empty 1-D array")
    if len(grid) > 1 and np.any(np.diff(grid) <= 0):
        raise NumericError("trajectory grid must be strictly increasing")
    if len(grid) == 1:
        return Trajectory(grid, [s0])
    work = grid[::-1] if backward else grid
    out = [StateVector(s0.a, s0.b)]
    _, _, _, _, samples = _integrate(
        spec, (s0.a, s0.b), work[0], work[-1], rtol, atol,
        sample_times=work[1:])
    states = out + [StateVector(*_fold(sa, sb, sc)) for sa, sb, sc in samples]
    if backward:
        states.reverse()
    return Trajectory(grid, states)


def b_from_a(spec: DriveSpec, a: complex, adot: complex, t: float) -> complex:
    """Reconstruct b from a and da/dt: b = (i adot - f3 a) / (f1 - i f2)."""
    f = f_at(spec, t)
    u = f.upper
    if abs(u) < 1e-12 * max(f.norm(), 1e-300):
        raise LowerTriangularPoint(f"f1 - i f2 vanishes at t = {t}")
    return (1j * adot - f.f3 * a) / u


def alpha_beta(spec: DriveSpec, t: float) -> tuple[complex, complex]:
    """Coefficients of b = alpha a + beta da/dt."""
    f = f_at(spec, t)
    u = f.upper
    if abs(u) < 1e-12 * max(f.norm(), 1e-300):
        raise LowerTriangularPoint(f"f1 - i f2 vanishes at t = {t}")
    return -f.f3 / u, 1j / u


def wronskian(y1: complex, y1dot: complex, y2: complex, y2dot: complex) -> complex:
    return y1 * y2dot - y1dot * y2
