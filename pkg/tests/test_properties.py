"""Property suites: LLL, lattice distance bounds, p-adic logarithms, the
product formula, and stability of the bound constants under precision."""

import itertools
from fractions import Fraction

import pytest
from conftest import basis, field
from flint import arb, fmpz_mat
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from sunitsolve.bounds import initial_bound
from sunitsolve.lll import integer_lll, is_lll_reduced, minimal_vector_lb
from sunitsolve.nfield import prime_factors
from sunitsolve.padic import completion_embed, log_ord, padic_log
from sunitsolve.places import infinite_places, log_abs_value, primes_above, valuation

SETTINGS = dict(deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def square_matrices(max_dim: int, lo: int = -30, hi: int = 30):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def _det(rows) -> int:
    return int(fmpz_mat(rows).det())


# -- LLL --------------------------------------------------------------

@settings(max_examples=500, **SETTINGS)
@given(square_matrices(6))
def test_lll_lovasz_and_unimodular(rows):
    assume(_det(rows) != 0)
    red, U = integer_lll(rows, transform=True)
    assert is_lll_reduced(red)
    assert abs(_det(U)) == 1
    n = len(rows)
    prod = [[sum(U[i][k] * rows[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == red


# -- certified distance bounds -------------------------------------------

def _box_min(rows, y, radius: int) -> int:
    n = len(rows)
    best = None
    for c in itertools.product(range(-radius, radius + 1), repeat=n):
        x = [sum(c[i] * rows[i][j] for i in range(n)) for j in range(n)]
        if x == list(y):
            continue
        d = sum((a - b) ** 2 for a, b in zip(x, y))
        best = d if best is None else min(best, d)
    return best


@settings(max_examples=200, **SETTINGS)
@given(square_matrices(4, -12, 12), st.data())
def test_minimal_vector_lb_below_exhaustive_minimum(rows, data):
    assume(_det(rows) != 0)
    n = len(rows)
    radius = {1: 12, 2: 8, 3: 4, 4: 3}[n]
    y = data.draw(st.one_of(st.just([0] * n), st.lists(st.integers(-25, 25), min_size=n, max_size=n)))
    exhaustive = _box_min(rows, y, radius)
    for mode in ("auto", "never"):
        lb = minimal_vector_lb(rows, y, exact=mode)
        assert lb.squared <= exhaustive


# -- p-adic logarithm ------------------------------------------------------

PADIC_CASES = [
    ((-2, 0, 1), 2),
    ((1, -3, 0, 1), 3),
    ((-2, 0, 0, 1), 5),
    ((1, -3, -1, 1), 2),
    ((1, 0, 1), 5),
    ((-5, 0, 1), 3),
]
N_PADIC = 20


def _unit(K, P, coords):
    a = K.element([Fraction(c) for c in coords])
    return a if not a.is_zero() and valuation(a, P) == 0 else None


@settings(max_examples=200, **SETTINGS)
@given(st.sampled_from(PADIC_CASES), st.data())
def test_padic_log_additive(case, data):
    f, p = case
    K = field(f)
    P = data.draw(st.sampled_from(primes_above(K, p)))
    coords = st.lists(st.integers(-40, 40), min_size=K.degree, max_size=K.degree)
    a = _unit(K, P, data.draw(coords))
    b = _unit(K, P, data.draw(coords))
    assume(a is not None and b is not None)
    la, lb, lab = padic_log(a, P, N_PADIC), padic_log(b, P, N_PADIC), padic_log(a * b, P, N_PADIC)
    assert lab.equals_mod(la + lb, N_PADIC)
    assert padic_log(a**3, P, N_PADIC).equals_mod(la.scale(3), N_PADIC)


@settings(max_examples=200, **SETTINGS)
@given(st.sampled_from(PADIC_CASES), st.data())
def test_padic_log_ord_identity(case, data):
    """ord_p(log z) = ord_p(z - 1) once ord_p(z - 1) > 1/(p - 1)."""
    f, p = case
    K = field(f)
    P = data.draw(st.sampled_from(primes_above(K, p)))
    a = _unit(K, P, data.draw(st.lists(st.integers(-40, 40), min_size=K.degree, max_size=K.degree)))
    assume(a is not None)
    z = a ** (p**P.f - 1)
    while not (z - 1).is_zero() and Fraction(valuation(z - 1, P), P.e) <= Fraction(1, p - 1):
        z = z**p
    assume(not (z - 1).is_zero())
    ord_z1 = Fraction(valuation(z - 1, P), P.e)
    assume(ord_z1 < N_PADIC - 2)
    assert log_ord(padic_log(z, P, N_PADIC), P) == ord_z1


@settings(max_examples=50, **SETTINGS)
@given(st.sampled_from(PADIC_CASES), st.data())
def test_completion_embed_multiplicative(case, data):
    f, p = case
    K = field(f)
    P = data.draw(st.sampled_from(primes_above(K, p)))
    coords = st.lists(st.integers(-9, 9), min_size=K.degree, max_size=K.degree)
    a = _unit(K, P, data.draw(coords))
    assume(a is not None)
    x = completion_embed(a, P, 10)
    y = completion_embed(a + 1, P, 10)
    one = completion_embed(K.one(), P, 10)
    assert y.equals_mod(x + one, 10)


# -- product formula ------------------------------------------------------

PRODUCT_FIELDS = [(-2, 0, 1), (5, 0, 1), (1, -3, 0, 1), (-2, 0, 0, 1), (1, 0, -1, 0, 1)]


@settings(max_examples=100, **SETTINGS)
@given(st.sampled_from(PRODUCT_FIELDS), st.data())
def test_product_formula_encloses_zero(f, data):
    K = field(f)
    n = K.degree
    num = data.draw(st.lists(st.integers(-60, 60), min_size=n, max_size=n))
    den = data.draw(st.integers(1, 30))
    a = K.element([Fraction(c, den) for c in num])
    assume(not a.is_zero())
    dn = 1
    for c in K.order_coords(a):
        dn = dn * c.denominator // __import__("math").gcd(dn, c.denominator)
    nrm = (a * dn).norm()
    primes = set(prime_factors(dn)) | set(prime_factors(abs(nrm.numerator)))
    total = arb(0)
    for p in sorted(primes):
        for P in primes_above(K, p):
            total += log_abs_value(a, P)
    for v in infinite_places(K):
        total += log_abs_value(a, v)
    assert total.contains(0)


# -- stability of the bound constants --------------------------------------

STABILITY_CASES = [((-2, 0, 1), (2,)), ((-2, 1), (2, 3)), ((1, -3, 0, 1), (2,)), ((-3, 0, 1), (2,))]


def _constants(rep):
    out = {"c1": rep.c1, "c2": rep.c2, "c3": rep.c3, "bw": rep.bw, "K0": rep.K0, "K1": rep.K1}
    for fb in rep.finite:
        out[f"fin{fb.place.p}.{fb.place.label}"] = fb.K0
    for ib in rep.infinite:
        out[f"inf{ib.index}"] = ib.K1
    return out


@pytest.mark.parametrize("f,ps", STABILITY_CASES)
def test_bound_constants_stable_under_precision_doubling(f, ps):
    b = basis(f, ps)
    lo, hi = initial_bound(b, prec=128), initial_bound(b, prec=256)
    c_lo, c_hi = _constants(lo), _constants(hi)
    for name in c_lo:
        assert c_lo[name].overlaps(c_hi[name]), name
        assert c_hi[name].rad() <= c_lo[name].rad() or c_hi[name].rad() < arb("1e-30"), name
    # the integer bound may only tighten by rounding noise
    assert abs(hi.B_init - lo.B_init) <= max(1, lo.B_init // 10**6)
