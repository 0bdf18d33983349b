from fractions import Fraction

import pytest

from sunitsolve.errors import HypothesisViolated
from sunitsolve.lll import gram_schmidt, integer_lll, is_lll_reduced, lll_reduce, minimal_vector_lb


def test_classic_example():
    # textbook example: reduces to (0, 1, 0), (1, 0, 1), (-1, 0, 2)
    B = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
    R = integer_lll(B)
    assert is_lll_reduced(R)
    assert sorted(sum(x * x for x in r) for r in R) == [1, 2, 5]


def test_dependent_rows_rejected():
    with pytest.raises(HypothesisViolated):
        integer_lll([[1, 2], [2, 4]])


def test_backends_agree_on_determinant():
    B = [[10**20 + 7, 3, 1], [5, 10**19 + 1, 2], [1, 1, 10**18 + 9]]
    for backend in ("exact", "flint"):
        R = lll_reduce(B, backend=backend)
        norms, _ = gram_schmidt(R)
        prod = Fraction(1)
        for n in norms:
            prod *= n
        ref, _ = gram_schmidt(B)
        prod_ref = Fraction(1)
        for n in ref:
            prod_ref *= n
        assert prod == prod_ref


def test_minimal_vector_exact_values():
    assert minimal_vector_lb([[1, 0], [0, 1]]).squared == 1
    # distance from (1/2, 1/2) to Z^2 is 1/sqrt(2)
    assert minimal_vector_lb([[1, 0], [0, 1]], [Fraction(1, 2), Fraction(1, 2)]).squared == Fraction(1, 2)
    lb = minimal_vector_lb([[3, 0], [0, 5]], [1, 1], exact="never")
    assert 0 < lb.squared <= 5
