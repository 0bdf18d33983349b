from fractions import Fraction

import pytest
from conftest import field

from sunitsolve.errors import NotAUnitAtP
from sunitsolve.padic import padic_log, vp
from sunitsolve.places import primes_above


def _vp_frac(x: Fraction, p: int) -> int:
    if x == 0:
        return 10**9
    return vp(x.numerator, p) - vp(x.denominator, p)


@pytest.mark.parametrize("p,a", [(3, 4), (5, 6), (2, 5), (3, 10), (7, 8)])
def test_log_over_q_matches_series(p, a):
    # log(1 + x) = sum (-1)^(n+1) x^n / n, summed far past the target precision
    N = 20
    K = field((-2, 1))
    P = primes_above(K, p)[0]
    L = padic_log(K.element([a]), P, N)
    x = Fraction(a - 1)
    series = sum(Fraction((-1) ** (n + 1)) * x**n / n for n in range(1, 200))
    assert _vp_frac(L.coord_fraction(0) - series, p) >= N


def test_log_of_root_of_unity_vanishes():
    K = field((1, 0, 1))
    P = primes_above(K, 5)[0]
    L = padic_log(K.gen(), P, 15)
    assert all(v is None for v in L.coord_valuations())


def test_log_requires_unit():
    K = field((-2, 0, 1))
    P = primes_above(K, 2)[0]
    with pytest.raises(NotAUnitAtP):
        padic_log(K.gen(), P, 10)


def test_vp():
    assert vp(48, 2) == 4
    assert vp(-81, 3) == 4
    assert vp(7, 5) == 0
