"""Drive catalog: periodically driven traceless 2x2 Hamiltonians.

A drive is a finite Fourier sum f(t) = sum_n coeff(n) e^{i n w t} (plus an
optional constant trace term).  The solvable families are recognized from
the harmonic index pattern and algebraic degeneracies of the coefficients:
an isotropic upper-right entry (v1 - i v2 = 0) in the right slot reduces
the second-order amplitude equation to a named special-function equation.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType

from .algebra import Complex3, cdot
from .errors import ConfigError

ZERO_TOL = 1e-10  # absolute tolerance for the algebraic family conditions


class SolvableFamily(Enum):
    CONSTANT = "Constant"
    SINGLE_FREQUENCY = "SingleFrequency"
    CASE_A_WHITTAKER = "CaseA_Whittaker"
    CASE_A_BESSEL_PQ0 = "CaseA_Bessel_pq0"
    CASE_A_BESSEL_QQ0 = "CaseA_Bessel_qq0"
    CASE_A_EXPONENTIAL = "CaseA_Exponential"
    CASE_B_KUMMER = "CaseB_Kummer"
    CASE_B_BESSEL_Q30 = "CaseB_Bessel_q30"
    H12_PARABOLIC_CYLINDER = "H12_ParabolicCylinder"
    H12_AIRY = "H12_Airy"
    H1M1_BESSEL = "H1m1_Bessel"
    H1M1_POWER = "H1m1_Power"
    APPB_M101_WHITTAKER = "AppB_m101_Whittaker"
    APPB_012_KUMMER = "AppB_012_Kummer"
    APPB_012_BESSEL = "AppB_012_Bessel"
    NOT_SOLVABLE = "NotSolvable"


@dataclass(frozen=True)
class DriveSpec:
    """Fourier data of the drive: omega, trace term, and harmonic map."""

    omega: float
    harmonics: dict[int, Complex3]
    f0: complex = 0j

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError(f"omega must be positive, got {self.omega}")
        cleaned = {int(n): v for n, v in self.harmonics.items()
                   if v.norm() > 0.0}
        object.__setattr__(self, "harmonics", MappingProxyType(cleaned))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def __hash__(self):
        return hash((self.omega, self.f0, tuple(sorted(
            (n, v.f1, v.f2, v.f3) for n, v in self.harmonics.items()))))


def f_at(spec: DriveSpec, t: float) -> Complex3:
    """Fourier sum at time t."""
    tot = Complex3()
    for n, v in spec.harmonics.items():
        tot = tot + v * cmath.exp(1j * n * spec.omega * t)
    return tot


def f0_at(spec: DriveSpec, t: float) -> complex:
    return spec.f0


# --- constructors -----------------------------------------------------------

def model_constant(p: Complex3, omega: float = 1.0) -> DriveSpec:
    return DriveSpec(omega, {0: p})


def model_single_frequency(p: Complex3, omega: float) -> DriveSpec:
    return DriveSpec(omega, {1: p})


def model_h01(p: Complex3, q: Complex3, omega: float) -> DriveSpec:
    """Constant part p plus one harmonic q e^{i w t}."""
    return DriveSpec(omega, {0: p, 1: q})


def model_ucf(r: complex, rho: complex, omega: float) -> DriveSpec:
    """Gain/loss dimer: H = [[i r - i rho e^{iwt}, -1], [-1, -(..)]]."""
    p = Complex3(-1.0, 0.0, 1j * r)
    q = Complex3(0.0, 0.0, -1j * rho)
    return model_h01(p, q, omega)


def model_berry_uzdin(r: complex, rho: complex, omega: float) -> DriveSpec:
    """H = i [[0, 1], [-r + rho e^{iwt}, 0]]."""
    p = Complex3(0.5j * (1.0 - r), -0.5 * (1.0 + r), 0.0)
    q = Complex3(0.5j * rho, 0.5 * rho, 0.0)
    return model_h01(p, q, omega)


def model_h12(p: Complex3, q: Complex3, omega: float) -> DriveSpec:
    """Two harmonics at n = 1, 2."""
    return DriveSpec(omega, {1: p, 2: q})


def model_airy(p: Complex3, q1: complex, omega: float) -> DriveSpec:
    """H12 with an isotropic n=2 part: q = (q1, -i q1, 0), lower-left 2 q1."""
    return model_h12(p, Complex3(q1, -1j * q1, 0.0), omega)


def model_h1m1(p: Complex3, q: Complex3, omega: float) -> DriveSpec:
    """p e^{-i w t} + q e^{+i w t}."""
    return DriveSpec(omega, {-1: p, 1: q})


def model_appB(s: Complex3, p: Complex3, q: Complex3, m: int, n: int,
               omega: float) -> DriveSpec:
    """Three-term drives of the appendix: (m, n) = (-1, 1) places
    (s, p, q) at harmonics (-1, 0, +1); (m, n) = (1, 2) places them at
    (0, 1, 2)."""
    if (m, n) == (-1, 1):
        return DriveSpec(omega, {-1: s, 0: p, 1: q})
    if (m, n) == (1, 2):
        return DriveSpec(omega, {0: s, 1: p, 2: q})
    raise ConfigError(f"unsupported appB harmonic pattern (m, n) = {(m, n)}")


def model_appB_h1(u1: complex, u3: complex, v1: complex, v2: complex,
                  v3: complex, omega: float) -> DriveSpec:
    """The three-frequency drive [[u3 + v3 Z, v1 Z], [u1 + v2/Z, -(..)]]."""
    s = Complex3(v2 / 2.0, -1j * v2 / 2.0, 0.0)
    p = Complex3(u1 / 2.0, -1j * u1 / 2.0, u3)
    q = Complex3(v1 / 2.0, 1j * v1 / 2.0, v3)
    return model_appB(s, p, q, -1, 1, omega)


def model_appB_h2(u1: complex, u3: complex, v1: complex, v2: complex,
                  v3: complex, omega: float) -> DriveSpec:
    """Single-frequency partner of model_appB_h1: [[u3 + v3 Z, v1],
    [u1 Z + v2, -(..)]]."""
    p = Complex3((v1 + v2) / 2.0, 1j * (v1 - v2) / 2.0, u3)
    q = Complex3(u1 / 2.0, -1j * u1 / 2.0, v3)
    return model_h01(p, q, omega)


# --- classification -----------------------------------------------------------

def _isz(x: complex) -> bool:
    return abs(x) < ZERO_TOL


def _normalized_harmonics(spec: DriveSpec) -> dict[int, Complex3]:
    """Divide harmonic indices by their gcd (frequency rescaling w -> g w)."""
    idx = [n for n in spec.harmonics if n != 0]
    if not idx:
        return dict(spec.harmonics)
    g = 0
    for n in idx:
        g = math.gcd(g, abs(n))
    return {n // g: v for n, v in spec.harmonics.items()}


def classify_solvable(spec: DriveSpec) -> SolvableFamily:
    """Most specific solvable family whose algebraic conditions hold.

    Conditions are tested to ZERO_TOL absolute; harmonic indices are first
    normalized by their gcd.
    """
    h = _normalized_harmonics(spec)
    if len(h) > 3:
        return SolvableFamily.NOT_SOLVABLE
    keys = frozenset(h)
    if keys <= {0}:
        return SolvableFamily.CONSTANT
    if len(keys) == 1:
        return SolvableFamily.SINGLE_FREQUENCY
    if keys == {0, 1}:
        p, q = h[0], h[1]
        pq, qq = cdot(p, q), cdot(q, q)
        if _isz(p.upper) and _isz(q.upper):
            return SolvableFamily.NOT_SOLVABLE  # lower-triangular drive
        if _isz(p.upper):
            if not _isz(qq):
                return (SolvableFamily.CASE_A_BESSEL_PQ0 if _isz(pq)
                        else SolvableFamily.CASE_A_WHITTAKER)
            return (SolvableFamily.CASE_A_EXPONENTIAL if _isz(pq)
                    else SolvableFamily.CASE_A_BESSEL_QQ0)
        if _isz(q.upper):
            if not _isz(q.f3):
                return SolvableFamily.CASE_B_KUMMER
            if not _isz(pq):
                return SolvableFamily.CASE_B_BESSEL_Q30
        return SolvableFamily.NOT_SOLVABLE
    if keys == {1, 2}:
        p, q = h[1], h[2]
        if _isz(q.upper) and not _isz(p.upper):
            if not _isz(q.f3):
                return SolvableFamily.H12_PARABOLIC_CYLINDER
            if not _isz(cdot(p, q)):
                return SolvableFamily.H12_AIRY
        return SolvableFamily.NOT_SOLVABLE
    if keys == {-1, 1}:
        p, q = h[-1], h[1]
        if _isz(cdot(p, p)) and _isz(p.upper) and not _isz(q.upper):
            return (SolvableFamily.H1M1_POWER if _isz(cdot(q, q))
                    else SolvableFamily.H1M1_BESSEL)
        return SolvableFamily.NOT_SOLVABLE
    if keys == {-1, 0, 1}:
        s, p, q = h[-1], h[0], h[1]
        if (_isz(s.upper) and _isz(s.f3) and _isz(p.upper)
                and not _isz(q.upper)
                and not _isz(cdot(q, q)) and not _isz(cdot(p, q))):
            return SolvableFamily.APPB_M101_WHITTAKER
        return SolvableFamily.NOT_SOLVABLE
    if keys == {0, 1, 2}:
        s, p, q = h[0], h[1], h[2]
        if (_isz(q.upper) and _isz(q.f3) and _isz(p.upper)
                and not _isz(s.upper) and not _isz(cdot(s, s))):
            disc = p.f3 * p.f3 + 2.0 * cdot(q, s)
            return (SolvableFamily.APPB_012_BESSEL if _isz(disc)
                    else SolvableFamily.APPB_012_KUMMER)
        return SolvableFamily.NOT_SOLVABLE
    return SolvableFamily.NOT_SOLVABLE


# --- config file I/O -----------------------------------------------------------

def _c3_from_row(row) -> Complex3:
    return Complex3(
        complex(row.get("f1_re", 0.0), row.get("f1_im", 0.0)),
        complex(row.get("f2_re", 0.0), row.get("f2_im", 0.0)),
        complex(row.get("f3_re", 0.0), row.get("f3_im", 0.0)),
    )


def spec_from_dict(data: dict) -> DriveSpec:
    """Build a DriveSpec from the config schema:

    {"omega": w, "f0": {"re": a, "im": b},
     "harmonics": [{"n": 0, "f1_re": ..., "f1_im": ..., ...}, ...]}
    """
    try:
        omega = float(data["omega"])
        f0d = data.get("f0", {})
        f0 = complex(f0d.get("re", 0.0), f0d.get("im", 0.0))
        harmonics = {}
        for row in data["harmonics"]:
            n = int(row["n"])
            if n in harmonics:
                raise ConfigError(f"duplicate harmonic index {n}")
            harmonics[n] = _c3_from_row(row)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad model config: {exc}") from exc
    return DriveSpec(omega, harmonics, f0)


def spec_to_dict(spec: DriveSpec) -> dict:
    rows = []
    for n in sorted(spec.harmonics):
        v = spec.harmonics[n]
        rows.append({
            "n": n,
            "f1_re": v.f1.real, "f1_im": v.f1.imag,
            "f2_re": v.f2.real, "f2_im": v.f2.imag,
            "f3_re": v.f3.real, "f3_im": v.f3.imag,
        })
    return {"omega": spec.omega,
            "f0": {"re": spec.f0.real, "im": spec.f0.imag},
            "harmonics": rows}


def load_spec(path: str) -> DriveSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse model file {path}: {exc}") from exc
    return spec_from_dict(data)


# Named presets with the parameter sets used throughout; r/rho (and omega)
# may be overridden by the CLI.
PRESET_DEFAULTS = {
    "ucf": {"r": 0.2j, "rho": -0.8, "omega": 2 * math.pi / 300},
    "berry-uzdin": {"r": 0.3, "rho": 0.5, "omega": 2 * math.pi / 100},
    "airy": {"p1": 1.0, "p2": 0.0, "p3": 0.5j, "q1": 0.6,
             "omega": 2 * math.pi / 50},
    "h12": {"p1": 1.0, "p2": 0.0, "p3": 0.5j, "q1": 0.2, "q3": 0.6,
            "omega": 2 * math.pi / 50},
    "single-frequency": {"p1": 1.0, "p2": 0.0, "p3": 0.4, "omega": 1.0},
    "constant": {"p1": 1.0, "p2": 0.0, "p3": 0.4, "omega": 1.0},
    "appB-m101": {"u1": 0.8, "u3": 0.25, "v1": 0.6, "v2": 0.45, "v3": 0.35,
                  "omega": 2 * math.pi / 40},
    "appB-012": {"s1": 0.5, "s2": 0.2, "s3": 0.3, "p_ll": 0.7, "p3": 0.2,
                 "q_ll": 0.6, "omega": 2 * math.pi / 40},
}


def preset_spec(name: str, **overrides) -> DriveSpec:
    """Instantiate a named preset; keyword overrides replace defaults."""
    if name not in PRESET_DEFAULTS:
        raise ConfigError(
            f"unknown preset {name!r}; known: {sorted(PRESET_DEFAULTS)}")
    params = dict(PRESET_DEFAULTS[name])
    for k, v in overrides.items():
        if v is None:
            continue
        if k not in params:
            raise ConfigError(f"preset {name!r} has no parameter {k!r}")
        params[k] = v
    w = float(params["omega"].real if isinstance(params["omega"], complex)
              else params["omega"])
    if name == "ucf":
        return model_ucf(params["r"], params["rho"], w)
    if name == "berry-uzdin":
        return model_berry_uzdin(params["r"], params["rho"], w)
    if name == "airy":
        p = Complex3(params["p1"], params["p2"], params["p3"])
        return model_airy(p, params["q1"], w)
    if name == "h12":
        p = Complex3(params["p1"], params["p2"], params["p3"])
        q = Complex3(params["q1"], -1j * params["q1"], params["q3"])
        return model_h12(p, q, w)
    if name == "single-frequency":
        return model_single_frequency(
            Complex3(params["p1"], params["p2"], params["p3"]), w)
    if name == "constant":
        return model_constant(
            Complex3(params["p1"], params["p2"], params["p3"]), w)
    if name == "appB-m101":
        return model_appB_h1(params["u1"], params["u3"], params["v1"],
                             params["v2"], params["v3"], w)
    if name == "appB-012":
        s = Complex3(params["s1"], params["s2"], params["s3"])
        p = Complex3(params["p_ll"] / 2.0, -1j * params["p_ll"] / 2.0,
                     params["p3"])
        q = Complex3(params["q_ll"] / 2.0, -1j * params["q_ll"] / 2.0, 0.0)
        return model_appB(s, p, q, 1, 2, w)
    raise ConfigError(f"unhandled preset {name!r}")
