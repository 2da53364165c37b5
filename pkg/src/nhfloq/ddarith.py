"""Double-double ("compensated") arithmetic for series summation.

Power series for the confluent-hypergeometric family suffer catastrophic
cancellation: partial sums can exceed the final value by factors up to
e^|z|.  Plain float64 summation loses ~|z|/ln(10) digits.  Representing
every term and the running sum as an unevaluated pair hi + lo of doubles
(~32 significant digits) keeps the final relative error near 1e-32 times
the cancellation ratio, which covers every regime this package evaluates.

Reals are (hi, lo) tuples, complex values are (re_hi, re_lo, im_hi, im_lo).
Algorithms are the classic error-free transforms (Knuth two-sum, Dekker
split/two-product); no FMA is assumed.
"""

from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    if not math.isfinite(p):
        return p, 0.0
    ahi = _SPLITTER * a
    ahi = ahi - (ahi - a)
    alo = a - ahi
    bhi = _SPLITTER * b
    bhi = bhi - (bhi - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def dd_add(a, b):
    s, e = two_sum(a[0], b[0])
    e += a[1] + b[1]
    return quick_two_sum(s, e)


def dd_neg(a):
    return (-a[0], -a[1])


def dd_mul(a, b):
    p, e = two_prod(a[0], b[0])
    e += a[0] * b[1] + a[1] * b[0]
    return quick_two_sum(p, e)


def dd_div(a, b):
    q1 = a[0] / b[0]
    r = dd_add(a, dd_neg(dd_mul((q1, 0.0), b)))
    q2 = r[0] / b[0]
    r = dd_add(r, dd_neg(dd_mul((q2, 0.0), b)))
    q3 = r[0] / b[0]
    s, e = quick_two_sum(q1, q2)
    return dd_add((s, e), (q3, 0.0))


def from_float(x: float):
    return (x, 0.0)


# --- complex double-double: (re_hi, re_lo, im_hi, im_lo) ---

def cdd(z: complex):
    return (z.real, 0.0, z.imag, 0.0)


def cdd_to_complex(a) -> complex:
    return complex(a[0] + a[1], a[2] + a[3])


def cdd_add(a, b):
    re = dd_add((a[0], a[1]), (b[0], b[1]))
    im = dd_add((a[2], a[3]), (b[2], b[3]))
    return (re[0], re[1], im[0], im[1])


def cdd_mul(a, b):
    ar, ai = (a[0], a[1]), (a[2], a[3])
    br, bi = (b[0], b[1]), (b[2], b[3])
    re = dd_add(dd_mul(ar, br), dd_neg(dd_mul(ai, bi)))
    im = dd_add(dd_mul(ar, bi), dd_mul(ai, br))
    return (re[0], re[1], im[0], im[1])


def cdd_div(a, b):
    br, bi = (b[0], b[1]), (b[2], b[3])
    den = dd_add(dd_mul(br, br), dd_mul(bi, bi))
    ar, ai = (a[0], a[1]), (a[2], a[3])
    re = dd_div(dd_add(dd_mul(ar, br), dd_mul(ai, bi)), den)
    im = dd_div(dd_add(dd_mul(ai, br), dd_neg(dd_mul(ar, bi))), den)
    return (re[0], re[1], im[0], im[1])


def cdd_abs(a) -> float:
    return math.hypot(a[0] + a[1], a[2] + a[3])
