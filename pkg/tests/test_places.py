import math

import pytest
from conftest import basis, field
from flint import arb

from sunitsolve.errors import HypothesisViolated
from sunitsolve.places import (
    PlaceSet,
    exponent_vector,
    heights,
    primes_above,
    torsion_order,
    valuation,
    weil_height,
)


@pytest.mark.parametrize("f", [(-2, 0, 1), (1, 0, 1), (1, -3, 0, 1), (-2, 0, 0, 1), (1, 0, -1, 0, 1), (1, -3, -1, 1)])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_fundamental_identity(f, p):
    K = field(f)
    Ps = primes_above(K, p)
    assert sum(P.e * P.f for P in Ps) == K.degree
    for P in Ps:
        assert valuation(K.element([p] + [0] * (K.degree - 1)), P) == P.e


@pytest.mark.parametrize(
    "f,p,ef",
    [
        ((-2, 0, 1), 2, [(2, 1)]),
        ((1, 0, 1), 5, [(1, 1), (1, 1)]),
        ((1, 0, 1), 3, [(1, 2)]),
        ((1, -3, 0, 1), 3, [(3, 1)]),
        ((1, 0, -1, 0, 1), 3, [(2, 2)]),
        ((1, -3, -1, 1), 2, [(3, 1)]),
    ],
)
def test_splitting_types(f, p, ef):
    # classical decomposition laws (quadratic reciprocity, cyclotomic fields)
    assert sorted((P.e, P.f) for P in primes_above(field(f), p)) == ef


def test_valuation_multiplicative():
    K = field((1, -3, -1, 1))
    P = primes_above(K, 2)[0]
    a, b = K.element([3, 1, 0]), K.element([2, 0, 5])
    assert valuation(a * b, P) == valuation(a, P) + valuation(b, P)
    assert valuation(a.inverse(), P) == -valuation(a, P)


def test_place_set_rejects_composite():
    with pytest.raises(HypothesisViolated):
        PlaceSet.above(field((-2, 0, 1)), [4])


@pytest.mark.parametrize("f,w", [((-2, 0, 1), 2), ((1, 0, 1), 4), ((1, 1, 1), 6), ((1, 0, -1, 0, 1), 12), ((-2, 1), 2)])
def test_torsion_order(f, w):
    assert torsion_order(field(f)) == w


def test_weil_height_values():
    K = field((-2, 0, 1))
    assert weil_height(K.element([2, 0])).overlaps(arb(2).log())
    assert weil_height(K.element([-1, 0])).contains(0)
    assert weil_height(K.element([1, 1])).overlaps(arb(1 + math.sqrt(2)).log() / 2)
    h = heights(K.element([1, 1]), "h'")
    assert h >= weil_height(K.element([1, 1]))


def test_exponent_vector_roundtrip():
    b = basis((-2, 0, 1), (2,))
    for a in ([1, 3, -2], [0, -5, 7], [1, 0, 0]):
        assert exponent_vector(b, b.phi(a)) == a
    with pytest.raises(HypothesisViolated):
        exponent_vector(b, b.field.element([3, 0]))
