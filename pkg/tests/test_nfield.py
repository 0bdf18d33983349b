from fractions import Fraction

import pytest
from conftest import field

from sunitsolve.errors import DivisionByZero, NotIrreducible, NotMonic
from sunitsolve.nfield import NumberField, SUnitBasis, is_s_unit, nf_create
from sunitsolve.places import PlaceSet


def test_rejects_bad_polynomials():
    with pytest.raises(NotMonic):
        NumberField([1, 0, 2])
    with pytest.raises(NotIrreducible):
        NumberField([-1, 0, 1])


def test_arithmetic_sqrt2():
    K = NumberField([-2, 0, 1])
    r = K.gen()
    assert r * r == K.element([2, 0])
    u = r + 1
    assert u * u.inverse() == K.one()
    assert u.norm() == -1
    assert u.trace() == 2
    assert (u / u).is_one()
    with pytest.raises(DivisionByZero):
        K.zero().inverse()


def test_minpoly_and_charpoly():
    K = NumberField([1, -3, 0, 1])
    a = K.gen()
    assert a.minpoly() == [Fraction(c) for c in (1, -3, 0, 1)]
    assert (a * a).charpoly()[-1] == 1
    assert K.element([3, 0, 0]).minpoly() == [Fraction(-3), Fraction(1)]


@pytest.mark.parametrize(
    "f,disc",
    [((-2, 0, 1), 8), ((-3, 0, 1), 12), ((-5, 0, 1), 5), ((1, 0, 1), -4), ((1, -3, 0, 1), 81), ((-2, 0, 0, 1), -108), ((1, 0, -1, 0, 1), 144)],
)
def test_field_discriminant(f, disc):
    # classical values for Q(sqrt 2), Q(sqrt 3), Q(sqrt 5), Q(i), Q(zeta_9)^+, Q(2^(1/3)), Q(zeta_12)
    assert field(f).discriminant == disc


def test_maximal_flag_enlarges_order():
    K = nf_create([-5, 0, 1], maximal=True)
    assert K.discriminant == 5
    assert nf_create([-5, 0, 1]).discriminant == 20


def test_signature_and_conjugates():
    K = field((-2, 0, 0, 1))
    assert K.signature == (1, 1)
    z = K.gen().to_complex(0)
    assert abs(z - 2 ** (1 / 3)) < 1e-12


def test_phi_and_s_unit():
    K = field((-2, 0, 1))
    S = PlaceSet.above(K, [2])
    r = K.gen()
    b = SUnitBasis(K, S, K.element([-1, 0]), 2, [r + 1, r])
    b.validate()
    assert b.phi([1, 2, -1]) == -((r + 1) ** 2) / r
    assert is_s_unit(r / 4, S)
    assert not is_s_unit(K.element([3, 0]), S)
