import pytest
from conftest import basis, solved

from sunitsolve.bounds import initial_bound
from sunitsolve.errors import ModeUnavailable
from sunitsolve.reduce import build_linear_form, reduce_finite, reduce_infinite, reduced_bound, special_solutions


@pytest.mark.parametrize("f,ps", [((-2, 0, 1), (2,)), ((-2, 1), (2, 3)), ((1, -3, 0, 1), (2,))])
def test_reduced_bound_is_sound_and_smaller(f, ps):
    b = basis(f, ps)
    rep = initial_bound(b)
    st = reduced_bound(b, rep)
    assert st.B_final < rep.B_init
    sols = solved(f, ps).solutions
    assert st.B_final >= max(max(map(abs, s.b1[1:] + s.b2[1:])) for s in sols)


def test_infinite_only_needs_single_finite_place():
    with pytest.raises(ModeUnavailable):
        reduced_bound(basis((-2, 1), (2, 3)), mode="infinite-only")


def test_infinite_only_not_larger():
    b = basis((-2, 0, 1), (2,))
    assert reduced_bound(b, mode="infinite-only").B_final <= reduced_bound(b).B_final


def test_special_solutions_over_q():
    b = basis((-2, 1), (2,))
    sp = special_solutions(b)
    assert len(sp) == 1
    tau1, tau2, _, e2 = sp[0]
    assert tau1 == b.field.element([2]) and tau2 == b.field.element([-1])
    assert e2 == [1, 0]


def test_single_place_entry_points():
    b = basis((-2, 0, 1), (2,))
    rep = initial_bound(b)
    P = b.S.finite[0]
    pr = reduce_finite(P, build_linear_form(P, b, report=rep), rep.B_init)
    assert pr.bound < rep.B_init
    pr = reduce_infinite(b.S.infinite[0], b, rep.B_init, report=rep)
    assert pr.bound < rep.B_init
