import pytest
from conftest import basis, field, solved

from sunitsolve.apps import (
    RAMIFIED_CUBICS,
    bound_report,
    cube_candidates,
    cubic_splitting_field,
    fermat_check,
    load_job,
    ramanujan_nagell,
    run_job,
    search_ratio,
)
from sunitsolve.errors import HypothesisNotMet, HypothesisViolated, InputError


def _icube(n):
    if n < 0:
        return None
    x = round(n ** (1 / 3))
    for y in (x - 1, x, x + 1):
        if y >= 0 and y**3 == n:
            return y
    return None


def test_fermat_trivial_solution_passes():
    K = field(tuple(RAMIFIED_CUBICS[0]))
    v = fermat_check(K, [(K.element([-1, 0, 0]), K.element([2, 0, 0]))])
    assert v.satisfied and v.witnesses[0] is not None


def test_fermat_engineered_failure():
    K = field(tuple(RAMIFIED_CUBICS[0]))
    # ord_P(32) = 5 ord_P(2) at the only prime above 2
    v = fermat_check(K, [(K.element([32, 0, 0]), K.element([-31, 0, 0]))])
    assert not v.satisfied and v.failures == [0]
    assert v.to_json()["verdict"] == "criterion not satisfied"


def test_fermat_hypotheses():
    with pytest.raises(HypothesisNotMet):
        fermat_check(field((1, 0, 1)), [])
    # 2 is inert in Q(sqrt 5): even degree with T empty
    with pytest.raises(HypothesisNotMet):
        fermat_check(field((-1, -1, 1)), [])
    K = field((-2, 0, 1))
    with pytest.raises(InputError):
        fermat_check(K, [(K.one(), K.one())])


def test_fermat_on_qsqrt2():
    res = solved((-2, 0, 1), (2,))
    assert fermat_check(field((-2, 0, 1)), res.solutions).satisfied


def test_bound_report_single_finite_place():
    b = basis((-2, 0, 1), (2,))
    rep = bound_report(b.field, b.S, b)
    assert rep.B1 >= rep.B2 and rep.R >= 1
    js = rep.to_json()
    assert js["B1"] == rep.B1 and js["B2"] == rep.B2


def test_bound_report_two_finite_places():
    b = basis((-2, 1), (2, 3))
    rep = bound_report(b.field, b.S, b)
    assert rep.B2 is None and rep.R is None
    assert rep.to_json()["B2"] == "n/a"


def test_search_ratio():
    assert search_ratio(10, 10, 3) == 1
    assert search_ratio(20, 10, 1) == pytest.approx((41 / 21) ** 2)


def test_cubic_splitting_field():
    L = cubic_splitting_field(3)
    assert L.degree == 6 and L.signature == (0, 3)


def test_cube_candidates_match_naive():
    got = set(cube_candidates(11, 3, 40, 1, 20))
    want = {(k, n) for k in range(41) for n in range(1, 21) if _icube(11**n - 3**k) is not None}
    assert got == want


def test_ramanujan_nagell_q11():
    r = ramanujan_nagell(11)
    assert r.solutions == [(11, 2, 1, 1)]
    assert r.k_max > 0 and r.n_max > 0


def test_ramanujan_nagell_q5_empty():
    # direct enumeration of 5^n - 3^k for n, k <= 60 finds no positive cube
    assert not any(_icube(5**n - 3**k) for n in range(1, 61) for k in range(61))
    assert ramanujan_nagell(5).solutions == []


def test_ramanujan_nagell_negative_x_optional():
    r = ramanujan_nagell(17, positive_x=False)
    assert (17, -4, 4, 1) in r.solutions and (17, 2, 2, 1) in r.solutions


@pytest.mark.parametrize(
    "data",
    [
        {"field": [1, 0, 2]},
        {"field": "a,b"},
        {"field": [-2, 0, 1], "mode": "nope"},
        {"field": [-2, 0, 1], "mode": "sieve-below-bound"},
        {"field": [-2, 0, 1], "precision_bits": 8},
        {"field": [-2, 0, 1], "bogus": 1},
        {"mode": "solve"},
    ],
)
def test_bad_jobs(data):
    with pytest.raises(InputError):
        run_job(load_job(data))


def test_invalid_generators_are_rejected():
    job = load_job({"field": [-2, 0, 1], "s_primes": [2], "generators": {"rho0": [-1], "w": 2, "rho": [[1, 1], [3]]}})
    with pytest.raises(HypothesisViolated):
        run_job(job)


def test_bruteforce_window_enforced():
    job = load_job({"field": [1, 0, -1, 0, 1], "s_primes": [2, 3]})
    with pytest.raises(InputError, match="supply generators"):
        run_job(job)


def test_supplied_generators_used():
    job = load_job(
        {"field": [-2, 0, 1], "s_primes": [2], "generators": {"rho0": [-1], "w": 2, "rho": [[1, 1], [0, 1]]}, "mode": "solve"}
    )
    doc, code = run_job(job)
    assert code == 0 and doc["count"] == 17
    assert doc["generators"]["rho"] == [["1", "1"], ["0", "1"]]
