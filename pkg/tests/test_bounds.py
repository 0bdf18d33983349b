import math

import pytest
from conftest import basis, solved
from sunitsolve import numerics as nm
from sunitsolve.bounds import bw_constant, initial_bound, pdw_bound, pdw_solve, yu_D
from sunitsolve.errors import HypothesisViolated


def test_bw_constant_closed_form():
    want = 18 * math.factorial(3) * 2**3 * 32**4 * math.log(4)
    assert abs(float(bw_constant(1, 1).mid()) / want - 1) < 1e-12


@pytest.mark.parametrize("a,b,h", [(0, 10, 1), (100, 1000, 1), (5, 200, 2), (1e6, 1e4, 3)])
def test_pdw_solve_exceeds_largest_root(a, b, h):
    x = nm.upper(pdw_solve(a, b, h))
    xf = float(x)
    assert xf > a + b * math.log(xf) ** h


def test_pdw_hypotheses():
    with pytest.raises(HypothesisViolated):
        pdw_solve(1, 2, 1)
    assert pdw_bound(-5, 2, 1) > 0


def test_yu_D():
    assert yu_D(3, 4, 2) == 2
    assert yu_D(2, 6, 2) == 2
    assert yu_D(2, 2, 3) == 6
    assert yu_D(5, 2, 3) == 6


@pytest.mark.parametrize("f,ps", [((-2, 0, 1), (2,)), ((-2, 1), (2, 3)), ((-3, 0, 1), (2,))])
def test_initial_bound_covers_solutions(f, ps):
    b = basis(f, ps)
    rep = initial_bound(b)
    sols = solved(f, ps).solutions
    worst = max(max(map(abs, s.b1[1:] + s.b2[1:])) for s in sols)
    assert rep.B_init >= worst
    assert rep.c3 > 0 and rep.c1 > 0
    js = rep.to_json()
    assert js["B_init"] == rep.B_init and len(js["infinite_places"]) == len(b.S.infinite)


def test_c1_rules_both_valid():
    b = basis((-2, 1), (2, 3))
    lo = initial_bound(b, c1_rule="min")
    hi = initial_bound(b, c1_rule="max")
    assert nm.upper(lo.c1) <= nm.upper(hi.c1)
