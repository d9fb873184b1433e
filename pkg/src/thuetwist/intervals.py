"""Outward-rounded real intervals (mpmath interval context) and small helpers.

A private interval context is used so the global ``mpmath.iv`` precision is
never touched; its precision is fixed at import, which keeps every helper
here safe to call from several threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext

WORK_BITS = 256

IV = MPIntervalContext()
IV.prec = WORK_BITS

Interval = type(IV.mpf(0))
ComplexInterval = type(IV.mpc(0))

Real = Union[int, float, Fraction, "mpmath.mpf", Interval]


def raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def endpoints(x: Interval) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return raw_to_fraction(lo), raw_to_fraction(hi)


def iv(x: Real) -> Interval:
    """Enclosing interval of an exact or floating value."""
    if isinstance(x, Interval):
        return x
    if isinstance(x, Fraction):
        return IV.mpf(x.numerator) / x.denominator
    if isinstance(x, mpmath.mpf):
        v = raw_to_fraction(x._mpf_)
        return IV.mpf(v.numerator) / v.denominator
    return IV.mpf(x)


def span(lo: Real, hi: Real) -> Interval:
    """Interval hull of two values (lo <= hi)."""
    a, b = iv(lo), iv(hi)
    return IV.mpf([a.a, b.b])


def lower(x: Interval) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[0])


def upper(x: Interval) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[1])


def mid(x: Interval) -> float:
    lo, hi = endpoints(x)
    return float((lo + hi) / 2)


def width(x: Interval) -> Fraction:
    lo, hi = endpoints(x)
    return hi - lo


def max1(x: Interval) -> Interval:
    """Enclosure of max{1, x}."""
    lo, hi = endpoints(x)
    return span(max(Fraction(1), lo), max(Fraction(1), hi))


def certainly_lt(x: Real, y: Real) -> bool:
    return iv(x).b < iv(y).a


def certainly_le(x: Real, y: Real) -> bool:
    return iv(x).b <= iv(y).a


def possibly_le(x: Real, y: Real) -> bool:
    """False only when x > y is certified."""
    return iv(x).a <= iv(y).b


def contains(x: Interval, value: Real) -> bool:
    v = iv(value)
    return x.a <= v.a and v.b <= x.b


def overlaps(x: Interval, y: Interval) -> bool:
    return x.a <= y.b and y.a <= x.b


def log_star(x: Real):
    """max{1, log x}; returns an interval for interval input, a float otherwise."""
    if isinstance(x, Interval):
        if not x.a > 0:
            raise ValueError("log_star needs a positive argument")
        lo, hi = x.a, x.b
        llo = IV.log(lo)
        lhi = IV.log(hi)
        one = IV.mpf(1)
        a = one if llo.a < 1 else llo
        b = one if lhi.b < 1 else lhi
        return IV.mpf([a.a, b.b])
    x = float(x) if not isinstance(x, Fraction) else x
    if x <= 0:
        raise ValueError("log_star needs a positive argument")
    return max(1.0, math.log(x))


def interval_json(x: Interval) -> dict:
    lo, hi = x._mpi_
    return {
        "lo": mpmath.libmp.to_str(lo, 30),
        "hi": mpmath.libmp.to_str(hi, 30),
        "mid": mid(x),
    }


def fmt(x: Interval, digits: int = 12) -> str:
    return mpmath.nstr(mpmath.mpf(mid(x)), digits)
