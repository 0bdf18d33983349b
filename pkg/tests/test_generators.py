from fractions import Fraction

import pytest
from conftest import basis, field

from sunitsolve.generators import condition_basis, find_generators_bruteforce
from sunitsolve.places import PlaceSet, exponent_vector, valuation, primes_above


def _det(M):
    from flint import fmpz_mat

    return int(fmpz_mat(M).det())


def test_q_2_3():
    b = basis((-2, 1), (2, 3))
    assert b.w == 2 and b.t == 2
    assert b.rho0 == b.field.element([-1])
    K = b.field
    P2, P3 = primes_above(K, 2)[0], primes_above(K, 3)[0]
    assert abs(_det([[valuation(r, P2), valuation(r, P3)] for r in b.rho])) == 1


def test_qsqrt2_matches_classical_generators():
    # 1 + sqrt 2 is the fundamental unit (continued fraction of sqrt 2),
    # sqrt 2 generates the prime above 2
    b = basis((-2, 0, 1), (2,))
    K = b.field
    assert b.w == 2
    classical = [K.element([1, 1]), K.gen()]
    M = [exponent_vector(b, g)[1:] for g in classical]
    assert abs(_det(M)) == 1


@pytest.mark.parametrize("f,ps", [((1, -3, 0, 1), (2,)), ((1, 0, -1, 0, 1), (3,)), ((-2, 0, 0, 1), (2, 3))])
def test_returned_basis_validates(f, ps):
    b = basis(f, ps)
    b.validate()
    K = b.field
    r, s = K.signature
    assert b.t == len(b.S.finite) + r + s - 1


def test_condition_basis_preserves_group():
    b = basis((1, -3, 0, 1), (2,))
    c = condition_basis(b)
    M = [exponent_vector(b, r)[1:] for r in c.rho]
    assert abs(_det(M)) == 1
