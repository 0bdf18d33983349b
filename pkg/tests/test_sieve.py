import numpy as np
import pytest
from conftest import basis, field, solved

from sunitsolve.errors import DegenerateTau
from sunitsolve.sieve import (
    decode,
    encode,
    find_split_primes,
    rfv,
    sieve_below_bound,
    solution_cycle,
)


def test_solution_cycle_of_two():
    K = field((-2, 1))
    orbit = solution_cycle(K.element([2]))
    assert sorted(int(x.coords[0] * 2) for x in orbit) == [-2, 1, 4]
    with pytest.raises(DegenerateTau):
        solution_cycle(K.one())


def test_cycle_of_generic_element_has_six_members():
    K = field((-2, 0, 1))
    assert len(solution_cycle(K.gen() + 3)) == 6


def test_encode_decode_roundtrip():
    b = basis((-2, 0, 1), (2,))
    sp = find_split_primes(b, 10)[0]
    rng = np.random.default_rng(1)
    n = rng.integers(0, sp.size, 50)
    assert (encode(sp, decode(sp, n)) == n).all()


def test_rfv_matches_direct_reduction():
    b = basis((1, -3, 0, 1), (2,))
    for sp in find_split_primes(b, 10):
        for a in ([0, 1, 0, 0], [1, 2, -3, 1], [0, 5, 5, -7]):
            assert rfv(a, sp) == sp.reduce(b.phi(a))


@pytest.mark.parametrize("B", [1, 2, 4])
def test_sieve_below_bound_equals_filtered_solutions(B):
    f, ps = (-2, 0, 1), (2,)
    b = basis(f, ps)
    full = solved(f, ps).solutions
    want = {s.key() for s in full if max(map(abs, s.b1[1:])) <= B and max(map(abs, s.b2[1:])) <= B}
    got = {s.key() for s in sieve_below_bound(b, B)}
    assert got == want


def test_one_sided_is_superset():
    b = basis((-3, 0, 1), (2,))
    both = {s.key() for s in sieve_below_bound(b, 3)}
    one = {s.key() for s in sieve_below_bound(b, 3, one_sided=True)}
    assert both <= one


def test_every_solution_verified_exactly():
    f, ps = (-2, 1), (2, 3)
    for s in solved(f, ps).solutions:
        assert (s.tau1 + s.tau2).is_one()
        b = basis(f, ps)
        assert b.phi(s.b1) == s.tau1 and b.phi(s.b2) == s.tau2
