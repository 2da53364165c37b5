"""Complex 3-vector algebra for traceless 2x2 Hamiltonians.

A Hamiltonian H = f0*I + f.sigma is parameterized by a complex scalar f0
and a complex 3-vector f = (f1, f2, f3).  The bilinear dot product
u.v = u1 v1 + u2 v2 + u3 v3 (no conjugation) controls the instantaneous
spectrum: eigenvalues are +-sqrt(f.f), and f.f = 0 marks an exceptional
point where the eigensystem coalesces.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AtExceptionalPoint, NoConvergence

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class Complex3:
    """Complex coefficient vector of the Pauli expansion f.sigma."""

    f1: complex = 0j
    f2: complex = 0j
    f3: complex = 0j

    def __add__(self, other: "Complex3") -> "Complex3":
        return Complex3(self.f1 + other.f1, self.f2 + other.f2, self.f3 + other.f3)

    def __sub__(self, other: "Complex3") -> "Complex3":
        return Complex3(self.f1 - other.f1, self.f2 - other.f2, self.f3 - other.f3)

    def __mul__(self, s: complex) -> "Complex3":
        return Complex3(self.f1 * s, self.f2 * s, self.f3 * s)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(abs(self.f1) ** 2 + abs(self.f2) ** 2 + abs(self.f3) ** 2)

    @property
    def upper(self) -> complex:
        """Upper-right matrix entry f1 - i f2."""
        return self.f1 - 1j * self.f2

    @property
    def lower(self) -> complex:
        """Lower-left matrix entry f1 + i f2."""
        return self.f1 + 1j * self.f2

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.f3, self.f1 - 1j * self.f2], [self.f1 + 1j * self.f2, -self.f3]]
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3], dtype=complex)

    @staticmethod
    def from_array(v) -> "Complex3":
        return Complex3(complex(v[0]), complex(v[1]), complex(v[2]))


def cdot(u: Complex3, v: Complex3) -> complex:
    """Bilinear dot product u1 v1 + u2 v2 + u3 v3 (no conjugation)."""
    return u.f1 * v.f1 + u.f2 * v.f2 + u.f3 * v.f3


def gauge_split(H) -> tuple[complex, Complex3]:
    """Split a 2x2 matrix into its trace part f0 and traceless vector f.

    H = f0*I + f.sigma exactly; f0 = tr(H)/2.
    """
    H = np.asarray(H, dtype=complex)
    f0 = (H[0, 0] + H[1, 1]) / 2
    f3 = (H[0, 0] - H[1, 1]) / 2
    f1 = (H[0, 1] + H[1, 0]) / 2
    f2 = (H[1, 0] - H[0, 1]) / (2j)
    return f0, Complex3(f1, f2, f3)


def ep_distance(f: Complex3) -> float:
    """|f.f|; zero exactly at an exceptional point."""
    return abs(cdot(f, f))


@dataclass(frozen=True)
class InstantEigensystem:
    """Frozen-time eigensystem of f.sigma with a tracked square-root branch.

    ``branch`` is the continued value of sqrt(f.f) for the "+" state, so a
    caller walking a parameter path can hand the previous result back in and
    keep the branch continuous.
    """

    energy_plus: complex
    energy_minus: complex
    state_plus: np.ndarray
    state_minus: np.ndarray
    branch: complex


def _eigvec(f: Complex3, energy: complex) -> np.ndarray:
    # Two algebraically equivalent forms; pick the better-conditioned one.
    # (upper, -f3 + E) fails when the upper entry and -f3 + E both vanish,
    # which happens for diagonal/lower-triangular matrices.
    v1 = np.array([f.upper, energy - f.f3])
    v2 = np.array([energy + f.f3, f.lower])
    n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
    v = v1 if n1 >= n2 else v2
    n = np.linalg.norm(v)
    if n == 0.0:  # zero matrix
        v = np.array([1.0, 0.0], dtype=complex) if energy == 0 else v1
        n = np.linalg.norm(v)
    return v / n


def instantaneous_eigensystem(
    f: Complex3, prev: InstantEigensystem | None = None
) -> InstantEigensystem:
    """Eigsystème of f.sigma with branch tracking.

    With ``prev`` supplied, the sqrt branch and the eigenvector phases are
    chosen to maximize overlap continuity with the previous sample.

    Raises AtExceptionalPoint when |f.f| < 1e-12 * ||f||^2.
    """
    ff = cdot(f, f)
    scale = f.norm() ** 2
    if abs(ff) < 1e-12 * scale or scale == 0.0:
        raise AtExceptionalPoint(f"f.f = {ff} relative to ||f||^2 = {scale}")
    s = cmath.sqrt(ff)
    if prev is not None and abs(s - prev.branch) > abs(s + prev.branch):
        s = -s
    vp = _eigvec(f, s)
    vm = _eigvec(f, -s)
    if prev is not None:
        # continuous gauge: rotate each vector's phase onto the previous one
        for v, pv in ((vp, prev.state_plus), (vm, prev.state_minus)):
            ov = np.vdot(pv, v)
            if ov != 0:
                v *= ov.conjugate() / abs(ov)
    return InstantEigensystem(s, -s, vp, vm, s)


@dataclass(frozen=True)
class RotationAngles:
    """Euler angles of R = exp(i a sigma3/2) exp(i b sigma1/2) exp(i c sigma3/2)."""

    alpha: float
    beta: float
    gamma: float = 0.0


def _rot_matrix_2x2(ang: RotationAngles) -> np.ndarray:
    ca, cb, cg = ang.alpha / 2, ang.beta / 2, ang.gamma / 2
    e3a = np.array([[cmath.exp(1j * ca), 0], [0, cmath.exp(-1j * ca)]])
    e1b = np.array(
        [[math.cos(cb), 1j * math.sin(cb)], [1j * math.sin(cb), math.cos(cb)]]
    )
    e3g = np.array([[cmath.exp(1j * cg), 0], [0, cmath.exp(-1j * cg)]])
    return e3a @ e1b @ e3g


def rotation_so3(ang: RotationAngles) -> np.ndarray:
    """Real 3x3 rotation induced on f by R^{-1} (f.sigma) R."""
    R = _rot_matrix_2x2(ang)
    Rinv = _rot_matrix_2x2(RotationAngles(-ang.gamma, -ang.beta, -ang.alpha))
    cols = []
    for sig in (SIGMA1, SIGMA2, SIGMA3):
        _, fcol = gauge_split(Rinv @ sig @ R)
        cols.append([fcol.f1.real, fcol.f2.real, fcol.f3.real])
    return np.array(cols).T


def apply_rotation(ang: RotationAngles, f: Complex3) -> Complex3:
    """Apply the real rotation componentwise to a complex vector."""
    M = rotation_so3(ang)
    return Complex3.from_array(M @ f.as_array())


def _upper_entry_after_rotation(p: Complex3, alpha: float, beta: float) -> complex:
    # upper-right coefficient of R^{-1}(p.sigma)R with gamma = 0
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    return (p.f1 - 1j * p.f2 * cb) * ca - 1j * (p.f1 * cb - 1j * p.f2) * sa + 1j * p.f3 * sb


def rotation_to_upper_triangular(p: Complex3, target: str = "p-slot") -> RotationAngles:
    """Real (alpha, beta) making the rotated p satisfy p1' - i p2' = 0.

    One complex equation in two real unknowns, solved by 2D Newton on the
    (Re, Im) pair from 8 standard starting angles; gamma is free and set to 0.
    ``target`` only records which drive component the caller is aiming at.
    """
    if p.norm() == 0.0:
        raise NoConvergence("zero vector has no preferred rotation")
    if target not in ("p-slot", "q-slot"):
        raise ValueError(f"unknown target {target!r}")
    scale = p.norm()
    starts = [
        (0.3, 0.8), (1.2, 2.2), (2.4, 0.9), (4.0, 2.5),
        (5.2, 1.5), (0.9, 4.1), (3.3, 5.0), (1.8, 1.0),
    ]
    h = 1e-7
    for a0, b0 in starts:
        a, b = a0, b0
        for _ in range(100):
            F = _upper_entry_after_rotation(p, a, b)
            if abs(F) < 1e-13 * scale:
                return RotationAngles(a % (2 * math.pi), b % (2 * math.pi), 0.0)
            Fa = (_upper_entry_after_rotation(p, a + h, b) - F) / h
            Fb = (_upper_entry_after_rotation(p, a, b + h) - F) / h
            J = np.array([[Fa.real, Fb.real], [Fa.imag, Fb.imag]])
            det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
            if abs(det) < 1e-300:
                break
            da = (-F.real * J[1, 1] + F.imag * J[0, 1]) / det
            db = (-J[0, 0] * F.imag + J[1, 0] * F.real) / det
            step = math.hypot(da, db)
            if step > 1.5:
                da, db = da / step * 1.5, db / step * 1.5
            a, b = a + da, b + db
        else:
            F = _upper_entry_after_rotation(p, a, b)
            if abs(F) < 1e-13 * scale:
                return RotationAngles(a % (2 * math.pi), b % (2 * math.pi), 0.0)
    raise NoConvergence(
        f"rotation Newton failed for p = ({p.f1}, {p.f2}, {p.f3}) from all starts"
    )
