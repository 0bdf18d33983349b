"""Small helpers around flint ball arithmetic.

All real constants that feed a bound are carried as arb balls; when a bound
has to become an exact number we take the upper (or lower) endpoint, which is
what outward rounding means in this package.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction

import flint
from flint import acb, arb, fmpq, fmpz

from .errors import PrecisionExhausted

DEFAULT_PREC = 256
PREC_CAP = 1 << 16


@contextlib.contextmanager
def precision(bits: int):
    """Temporarily set the working precision of flint balls."""
    old = flint.ctx.prec
    flint.ctx.prec = max(int(bits), 53)
    try:
        yield
    finally:
        flint.ctx.prec = old


def to_arb(x) -> arb:
    """Exact conversion of int/Fraction/fmpq/fmpz to an arb ball."""
    if isinstance(x, arb):
        return x
    if isinstance(x, (int, fmpz)):
        return arb(x)
    if isinstance(x, Fraction):
        return arb(x.numerator) / x.denominator
    if isinstance(x, fmpq):
        return arb(x.p) / arb(x.q)
    if isinstance(x, float):
        return arb(x)
    raise TypeError(f"cannot convert {type(x).__name__} to arb")


def _exact_to_fraction(x: arb) -> Fraction:
    m, e = x.man_exp()
    m, e = int(m), int(e)
    return Fraction(m * (1 << e)) if e >= 0 else Fraction(m, 1 << -e)


def upper(x: arb) -> Fraction:
    """Rigorous upper endpoint of a ball as an exact rational."""
    if not x.is_finite():
        raise PrecisionExhausted("ball is not finite")
    return _exact_to_fraction(x.upper())


def lower(x: arb) -> Fraction:
    if not x.is_finite():
        raise PrecisionExhausted("ball is not finite")
    return _exact_to_fraction(x.lower())


def upper_float(x: arb) -> float:
    """Upper endpoint rounded up to a double."""
    u = upper(x)
    f = float(u)
    if Fraction(f) < u:
        f = math.nextafter(f, math.inf)
    return f


def lower_float(x: arb) -> float:
    lo = lower(x)
    f = float(lo)
    if Fraction(f) > lo:
        f = math.nextafter(f, -math.inf)
    return f


def ceil_upper(x: arb) -> int:
    """Smallest integer certainly >= every point of the ball."""
    u = upper(x)
    return -((-u.numerator) // u.denominator)


def floor_upper(x: arb) -> int:
    u = upper(x)
    return u.numerator // u.denominator


def is_positive(x: arb) -> bool:
    return bool(x > 0)


def sign(x: arb) -> int:
    """Certified sign; raises if the ball straddles zero."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    if x.is_zero():
        return 0
    raise PrecisionExhausted("sign undecided at current precision")


def log_arb(x) -> arb:
    return to_arb(x).log()


def acb_abs(z: acb) -> arb:
    return abs(z)


def arb_max(*xs: arb) -> arb:
    out = xs[0]
    for x in xs[1:]:
        out = out.max(x)
    return out


def factorial(n: int) -> int:
    return math.factorial(n)
