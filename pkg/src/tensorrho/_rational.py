"""Exact rational helpers and rigorous rational brackets for log and exp.

The brackets are built from argument reduction plus a positive-term series,
with every intermediate rounded outward to a dyadic grid so that numerator
and denominator sizes stay linear in the requested precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Tuple

from .errors import InputError

Bracket = Tuple[Fraction, Fraction]

DEFAULT_BITS = 64


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer or an exact decimal string into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise InputError(f"refusing inexact float {text!r}; pass a string or Fraction")
    s = str(text).strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational {s!r}") from exc


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, floats (exactly) and strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"non-finite value {value!r}")
        return Fraction(value)
    return parse_rational(value)


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def ceil_sqrt_int(p: int) -> int:
    """Smallest integer s with s*s >= p (p >= 0)."""
    s = math.isqrt(p)
    return s if s * s == p else s + 1


def sqrt_upper(p: int, bits: int = DEFAULT_BITS) -> Fraction:
    """Dyadic rational upper bound of sqrt(p) with error below 2**-bits."""
    scale = 4**bits
    return Fraction(ceil_sqrt_int(p * scale), 2**bits)


def _down(q: Fraction, bits: int) -> Fraction:
    return Fraction(floor_frac(q * 2**bits), 2**bits)


def _up(q: Fraction, bits: int) -> Fraction:
    return Fraction(ceil_frac(q * 2**bits), 2**bits)


def _atanh_bracket(y: Fraction, bits: int) -> Bracket:
    # 0 <= y <= 1/3; atanh(y) = sum y^(2j+1)/(2j+1)
    if y == 0:
        return Fraction(0), Fraction(0)
    work = bits + 16
    ylo, yhi = _down(y, work), _up(y, work)
    tol = Fraction(1, 2 ** (bits + 4))

    def series(v: Fraction, upper: bool) -> Fraction:
        v2 = v * v
        if upper:
            v2 = _up(v2, work)
        else:
            v2 = _down(v2, work)
        power = v
        total = Fraction(0)
        k = 1
        while True:
            term = power / k
            total += _up(term, work) if upper else _down(term, work)
            power = _up(power * v2, work) if upper else _down(power * v2, work)
            k += 2
            if power / k < tol:
                break
        if upper:
            # geometric tail bound, plus the rounding slack of each added term
            tail = power / k / (1 - v2)
            total += tail + Fraction(k, 2**work)
        return total

    return series(ylo, upper=False), series(yhi, upper=True)


_LOG2_CACHE: dict = {}


def _log2_bracket(bits: int) -> Bracket:
    if bits not in _LOG2_CACHE:
        lo, hi = _atanh_bracket(Fraction(1, 3), bits + 2)
        _LOG2_CACHE[bits] = (2 * lo, 2 * hi)
    return _LOG2_CACHE[bits]


def log_bracket(q, bits: int = DEFAULT_BITS) -> Bracket:
    """Rational (lo, hi) with lo <= log(q) <= hi and hi - lo <= 2**-bits.

    ``log(1)`` is returned exactly as ``(0, 0)``.
    """
    q = as_fraction(q)
    if q <= 0:
        raise InputError(f"log of non-positive value {q}")
    if q == 1:
        return Fraction(0), Fraction(0)
    # q = 2**e * m with m in [1, 2)
    e = q.numerator.bit_length() - q.denominator.bit_length()
    m = q / Fraction(2) ** e
    if m < 1:
        e -= 1
        m *= 2
    # log m = 2 atanh((m-1)/(m+1)), (m-1)/(m+1) in [0, 1/3)
    extra = max(e.bit_length(), 1) + 4
    alo, ahi = _atanh_bracket((m - 1) / (m + 1), bits + extra)
    l2lo, l2hi = _log2_bracket(bits + extra)
    if e >= 0:
        lo, hi = e * l2lo, e * l2hi
    else:
        lo, hi = e * l2hi, e * l2lo
    return lo + 2 * alo, hi + 2 * ahi


def exp_bracket(t, bits: int = DEFAULT_BITS) -> Bracket:
    """Rational (lo, hi) with lo <= exp(t) <= hi, relative width about 2**-bits."""
    t = as_fraction(t)
    if t == 0:
        return Fraction(1), Fraction(1)
    if t < 0:  # invert so the width stays relative
        lo, hi = exp_bracket(-t, bits + 2)
        return _down(1 / hi, bits + 8 - floor_frac(t) * 2), _up(1 / lo, bits + 8 - floor_frac(t) * 2)
    # reduce |t / 2**s| <= 1/2 then square s times
    s = 0
    r = t
    while abs(r) > Fraction(1, 2):
        r /= 2
        s += 1
    work = bits + 2 * s + 16
    tol = Fraction(1, 2**work)

    def taylor(upper: bool) -> Fraction:
        total = Fraction(1)
        term = Fraction(1)
        k = 1
        while True:
            term = term * r / k
            total += _up(term, work) if upper else _down(term, work)
            k += 1
            if abs(term) < tol:
                break
        # |remaining tail| <= 2*|next term| since |r| <= 1/2
        slack = 2 * abs(term * r / k) + Fraction(k, 2**work)
        return total + slack if upper else total - slack

    lo, hi = taylor(False), taylor(True)
    for _ in range(s):
        lo, hi = _down(lo * lo, work), _up(hi * hi, work)
    return lo, hi


def floor_log(w: int, bits: int = DEFAULT_BITS) -> int:
    """Exact floor(log w) for a positive integer w."""
    if w == 1:
        return 0
    while True:
        lo, hi = log_bracket(w, bits)
        if floor_frac(lo) == floor_frac(hi):
            return floor_frac(lo)
        bits *= 2


def ceil_log(w: int, bits: int = DEFAULT_BITS) -> int:
    """Exact ceil(log w) for a positive integer w (log w is irrational for w > 1)."""
    if w == 1:
        return 0
    return floor_log(w, bits) + 1


def fraction_to_decimal(q: Fraction, digits: int = 40) -> str:
    """Decimal string of q correct to about ``digits`` significant digits."""
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    exp10 = len(str(q.numerator)) - len(str(q.denominator))
    shift = digits - exp10
    scaled = q * Fraction(10) ** shift
    mant = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    return f"{sign}{mant}e{-shift}"


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpmath number."""
    import mpmath

    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot convert {x} to a fraction")
    man, exp = x.man_exp
    man = int(man)
    return Fraction(man * (1 << exp)) if exp >= 0 else Fraction(man, 1 << -exp)
