import numpy as np
import pytest
from conftest import basis, solved
from oracle import ORACLE_CASES, as_oracle_set, oracle

from sunitsolve.places import exponent_vector
from sunitsolve.sieve import build_E, encode, find_split_primes, run_sieve

# frozen from the oracle (exponents |a| <= 30)
ORACLE_COUNTS = {"Q_2": 2, "Q_2_3": 11, "Q_2_3_5": 50, "Qsqrt2_2": 17, "Qsqrt3_2": 8}


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_oracle_counts_frozen(name):
    assert len(oracle(name)) == ORACLE_COUNTS[name]


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_solve_matches_bruteforce(name):
    f, ps = ORACLE_CASES[name]
    res = solved(f, ps)
    got = as_oracle_set(res.solutions, len(f) - 1)
    want = oracle(name)
    assert got == want, (sorted(map(sorted, got - want)), sorted(map(sorted, want - got)))


@pytest.mark.parametrize("name", ["Qsqrt2_2", "Qsqrt3_2"])
def test_infinite_only_matches_bruteforce(name):
    f, ps = ORACLE_CASES[name]
    res = solved(f, ps, "infinite-only")
    assert as_oracle_set(res.solutions, len(f) - 1) == oracle(name)


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_sieve_keeps_every_solution_class(name):
    f, ps = ORACLE_CASES[name]
    b = basis(f, ps)
    sols = solved(f, ps).solutions
    vecs = [exponent_vector(b, s.tau1) for s in sols] + [exponent_vector(b, s.tau2) for s in sols]
    B = max(max(abs(x) for x in v[1:]) for v in vecs) if b.t else 1
    sps = find_split_primes(b, max(B, 2))
    Y = run_sieve([build_E(sp) for sp in sps])
    for sp, y in zip(sps, Y):
        idx = encode(sp, np.array(vecs))
        assert np.isin(idx, y).all(), f"sieve prime {sp.q} removed a solution class"
