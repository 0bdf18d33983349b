"""Acceptance suite: one PASS/FAIL line per criterion.

The lines are printed as each criterion finishes and again in the pytest
terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import sys
import time
from fractions import Fraction

import pytest
from conftest import basis, field, solved
from oracle import ORACLE_CASES, as_oracle_set, oracle

from sunitsolve.apps import RAMIFIED_CUBICS, bound_report, fermat_check, ramanujan_nagell
from sunitsolve.nfield import is_s_unit
from sunitsolve.places import PlaceSet
from sunitsolve.reduce import reduced_bound
from sunitsolve.sieve import sieve_below_bound

RESULTS: dict[str, str] = {}


def report(capsys, ac: str, ok: bool, detail: str) -> None:
    line = f"{ac} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[ac] = line
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


def _exact_ok(sols, S) -> bool:
    return all((s.tau1 + s.tau2).is_one() and is_s_unit(s.tau1, S) and is_s_unit(s.tau2, S) for s in sols)


def test_ac1_cubic_53_solutions(capsys):
    t0 = time.perf_counter()
    f = tuple(RAMIFIED_CUBICS[0])
    res = solved(f, (2,))
    K = field(f)
    keys = {frozenset([s.tau1, s.tau2]) for s in res.solutions}
    trivial = frozenset([K.element([-1, 0, 0]), K.element([2, 0, 0])]) in keys
    half = frozenset([K.element([Fraction(1, 2), 0, 0])]) in keys
    exact = _exact_ok(res.solutions, basis(f, (2,)).S)
    dt = time.perf_counter() - t0
    ok = len(res.solutions) == 53 and trivial and half and exact and dt <= 3600
    report(capsys, "AC1", ok, f"x^3-x^2-3x+1, S above 2: {len(res.solutions)} solutions (want 53), B = {res.bound}, "
           f"{{-1, 2}}: {trivial}, {{1/2, 1/2}}: {half}, exact: {exact}, {dt:.1f}s")


TABLE1 = [((1, 0, -1, 0, 1), 16), ((9, 0, 0, 0, 1), 0), ((18, 0, 12, 0, 1), 0)]


def test_ac2_quartic_sieve(capsys):
    parts, ok = [], True
    for f, want in TABLE1:
        t0 = time.perf_counter()
        sols = sieve_below_bound(basis(f, (3,)), 40)
        dt = time.perf_counter() - t0
        exact = _exact_ok(sols, basis(f, (3,)).S)
        ok &= len(sols) == want and dt <= 600 and exact
        parts.append(f"{f}: {len(sols)} unordered (want {want}, {dt:.1f}s)")
    report(capsys, "AC2", ok, "S above 3, B = 40: " + "; ".join(parts))


def test_ac3_reduced_bound_and_small_sieve(capsys):
    f = (1, -3, 0, 1)
    b = basis(f, (2,))
    st = reduced_bound(b)
    full = {s.key() for s in solved(f, (2,)).solutions}
    small = {s.key() for s in sieve_below_bound(b, 5)}
    ok = st.B_final <= 150 and small == full
    report(capsys, "AC3", ok, f"x^3-3x+1, S above 2: reduced bound {st.B_final} (want <= 150), "
           f"sieve(B=5) {len(small)} = solve {len(full)}: {small == full}")


RN_HITS = {11: (11, 2, 1, 1), 17: (17, 2, 2, 1), 67: (67, 4, 1, 1), 73: (73, 4, 2, 1), 89: (89, 2, 4, 1), 251: (251, 2, 5, 1), 307: (307, 4, 5, 1)}
RN_EMPTY = [5, 7, 13, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 71, 79, 83, 97, 101, 103]


def test_ac4_ramanujan_nagell(capsys):
    bad = []
    for q in list(RN_HITS) + RN_EMPTY:
        want = [RN_HITS[q]] if q in RN_HITS else []
        got = ramanujan_nagell(q).solutions
        if got != want:
            bad.append((q, got))
    report(capsys, "AC4", not bad, f"{len(RN_HITS)} tuples reproduced, {len(RN_EMPTY)} empty q checked, mismatches: {bad}")


def test_ac5_oracle_completeness(capsys):
    parts, ok = [], True
    for name, (f, ps) in sorted(ORACLE_CASES.items()):
        got = as_oracle_set(solved(f, ps).solutions, len(f) - 1)
        want = oracle(name)
        disc = len(got ^ want)
        ok &= disc == 0
        parts.append(f"{name}: {len(got)}/{len(want)} ({disc} discrepancies)")
    report(capsys, "AC5", ok, "; ".join(parts))


def test_ac6_property_suites(capsys):
    import test_oracle as to
    import test_properties as tp

    suites = [
        ("LLL x500", tp.test_lll_lovasz_and_unimodular),
        ("lattice lb x200", tp.test_minimal_vector_lb_below_exhaustive_minimum),
        ("p-adic additivity x200", tp.test_padic_log_additive),
        ("p-adic ord x200", tp.test_padic_log_ord_identity),
        ("product formula x100", tp.test_product_formula_encloses_zero),
    ]
    parts, ok = [], True
    for name, fn in suites:
        try:
            fn()
            parts.append(f"{name} ok")
        except Exception as e:  # noqa: BLE001 - reported below
            ok = False
            parts.append(f"{name} FAILED ({type(e).__name__})")
    for name in sorted(ORACLE_CASES):
        try:
            to.test_sieve_keeps_every_solution_class(name)
        except Exception as e:  # noqa: BLE001
            ok = False
            parts.append(f"sieve {name} FAILED ({type(e).__name__})")
    parts.append("sieve keeps oracle classes ok" if ok else "sieve checked")
    for f, ps in tp.STABILITY_CASES:
        try:
            tp.test_bound_constants_stable_under_precision_doubling(f, ps)
        except Exception as e:  # noqa: BLE001
            ok = False
            parts.append(f"stability {f} FAILED ({type(e).__name__})")
    parts.append("precision stability checked")
    report(capsys, "AC6", ok, "; ".join(parts))


def test_ac7_fermat(capsys):
    parts, ok = [], True
    for f in RAMIFIED_CUBICS[:3]:
        res = solved(tuple(f), (2,))
        v = fermat_check(field(tuple(f)), res.solutions)
        ok &= v.satisfied
        parts.append(f"{f}: {len(res.solutions)} solutions, {'satisfied' if v.satisfied else 'NOT satisfied'}")
    report(capsys, "AC7", ok, "; ".join(parts))


def test_ac8_genus2_bound_stretch(capsys):
    f = (1, 0, 0, -1, 0, 0, 1)
    t0 = time.perf_counter()
    K = field(f)
    S = PlaceSet.above(K, [2, 3])
    b = basis(f, (2, 3))
    rep = bound_report(K, S, b)
    dt = time.perf_counter() - t0
    ok = 1578 / 10 <= rep.B1 <= 1578 * 10 and dt <= 24 * 3600
    report(capsys, "AC8", ok, f"x^6-x^3+1, S above 2, 3 (stretch): B_init {rep.B_init}, reduced {rep.B1} "
           f"(want within a factor 10 of 1578), {dt:.0f}s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
