"""Lattice reduction of the exponent bound.

Two lemmas shrink a bound X on the exponents of all solutions:

* at a finite place P (p below P) the p-adic logarithms of the mu-system give
  a lattice whose short vectors certify B < (u + c18)/c5;
* at an infinite place the rounded complex logarithms of the generators give
  a lattice whose short vectors certify
  B <= (log 2C - log(sqrt(m^2 - S) - T)) / c13.

Both are applied to every place of S, the new global bound is the maximum of
the per-place results, and the process is repeated until it stops improving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, arb, arb_mat

from . import numerics as nm
from .bounds import BoundReport, FinitePlaceBound, InfinitePlaceBound, initial_bound
from .errors import HypothesisViolated, ModeUnavailable, PrecisionExhausted, Unsupported
from .lll import minimal_vector_lb
from .nfield import SUnitBasis, is_s_unit
from .padic import padic_log
from .places import FinitePlace, exponent_vector, log_abs_value

U_GROWTH = 0.15
U_TRIES = 14
C_TRIES = 6
MAX_ROUNDS = 60


@dataclass
class PlaceReduction:
    """Outcome of the last reduction attempt at one place."""

    place: str
    kind: str
    bound: int
    params: dict = field(default_factory=dict)
    status: str = "reduced"
    attempts: int = 0


@dataclass
class ReductionState:
    B_init: int
    B_final: int
    mode: str
    rounds: list = field(default_factory=list)
    places: dict = field(default_factory=dict)
    special: list = field(default_factory=list)
    special_floor: int = 0

    def to_json(self) -> dict:
        return {
            "B_init": self.B_init,
            "B_final": self.B_final,
            "mode": self.mode,
            "rounds": list(self.rounds),
            "places": {
                k: {"kind": v.kind, "bound": v.bound, "status": v.status, "attempts": v.attempts, **v.params}
                for k, v in self.places.items()
            },
            "special_floor": self.special_floor,
            "special_solutions": [[str(c) for c in s[0].coords] for s in self.special],
        }


# ----------------------------------------------------------------------
# special solutions: one of the two terms is a root of unity
# ----------------------------------------------------------------------

def special_solutions(basis: SUnitBasis):
    """Solutions (1 - zeta, zeta) with zeta a root of unity.

    These escape the p-adic lemma (the linear form degenerates), so their
    exponents are computed directly and enter the final bound.
    Returns a list of (tau1, tau2, exps1, exps2).
    """
    K = basis.field
    out = []
    z = basis.rho0
    for k in range(1, basis.w):
        zeta = basis.rho0 ** k
        other = K.one() - zeta
        if other.is_zero() or not is_s_unit(other, basis.S):
            continue
        out.append((other, zeta, exponent_vector(basis, other), [k] + [0] * basis.t))
    del z
    return out


def _free_height(v) -> int:
    return max((abs(x) for x in v[1:]), default=0)


# ----------------------------------------------------------------------
# exponent bound from the valuation at the minimal place
# ----------------------------------------------------------------------

class ValuationPolytope:
    """Turns a lower bound log|tau_1|_l >= -Omega into an exponent bound.

    With l the place where |tau_1|_v is smallest, the vector L = (log|tau_1|_v)
    satisfies sum_v L_v = 0 and L_v >= L_l >= -Omega, a polytope whose
    vertices are 0 and -Omega (1, .., 1) + |S| Omega e_v0 (v0 != l).  The
    exponents of tau_1 are M_U^{-1} L_U for any invertible U, so
    B <= Omega * min_U max_{v0, i} |(M_U^{-1} L^{(v0)}_U)_i|.  This is never
    worse than Omega / c3 when |S| - 1 = r + s and is applied alongside it.
    """

    def __init__(self, basis: SUnitBasis, prec: int = 128):
        self.n = len(basis.S.places)
        self.t = basis.t
        self.prec = prec
        full = [[log_abs_value(r, v, prec + 64) for r in basis.rho] for v in basis.S.places]
        self.inverses = []
        with nm.precision(prec):
            for drop in range(self.n):
                M = arb_mat([full[i] for i in range(self.n) if i != drop])
                if not (abs(M.det()) > 0):
                    continue
                self.inverses.append((drop, M.inv()))
        self._factor: dict = {}

    def factor(self, ell: int) -> arb | None:
        if ell in self._factor:
            return self._factor[ell]
        n, t = self.n, self.t
        best = None
        with nm.precision(self.prec):
            for drop, Minv in self.inverses:
                worst = arb(0)
                for v0 in range(n):
                    if v0 == ell:
                        continue
                    L = [-1] * n
                    L[v0] = n - 1
                    LU = [L[k] for k in range(n) if k != drop]
                    for i in range(t):
                        acc = arb(0)
                        for k in range(t):
                            acc += Minv[i, k] * LU[k]
                        worst = worst.max(abs(acc))
                best = worst if best is None else best.min(worst)
        self._factor[ell] = best
        return best

    def bound(self, ell: int, omega: arb) -> int | None:
        f = self.factor(ell)
        if f is None:
            return None
        with nm.precision(self.prec):
            return nm.floor_upper(f * omega)


# ----------------------------------------------------------------------
# finite places
# ----------------------------------------------------------------------

class FiniteReducer:
    """Lemma data at one finite place: the p-adic logs of the mu_i."""

    def __init__(self, basis: SUnitBasis, fb: FinitePlaceBound, polytope: ValuationPolytope | None = None):
        self.basis = basis
        self.fb = fb
        self.polytope = polytope
        self.ell = basis.S.places.index(fb.place)
        self.P = fb.place
        self.ms = fb.mu
        self.p = self.P.p
        self.n = self.P.e * self.P.f
        self.m = len(self.ms.kernel)  # t - 1
        self.N = 0
        self.logs = []
        self.c17 = None
        self.disc_val = None

    def ensure(self, N: int) -> None:
        if N <= self.N:
            return
        from .padic import local_ring

        self.logs = [padic_log(mu, self.P, N) for mu in self.ms.mus]
        self.N = N
        self.disc_val = local_ring(self.P, N).disc_val
        vals = []
        for L in self.logs:
            vals.extend(v for v in L.coord_valuations() if v is not None)
        if not vals:
            self.c17 = None
        else:
            self.c17 = min(vals)

    def kappa(self, u: int) -> list[list[int]]:
        """kappa^{(u)}_{j,i} for j = 1..t-1, i = 0..n-1."""
        p, c17 = self.p, self.c17
        mod = p**u
        rows = []
        for L in self.logs:
            s = L.shift + c17
            if u > L.prec - c17:
                raise PrecisionExhausted("p-adic logarithms not known to precision u")
            row = []
            for c in L.coords:
                if s >= 0:
                    c = c % p ** (L.prec + L.shift)
                    if c % p**s:
                        raise AssertionError("coordinate below c17")
                    row.append((c // p**s) % mod)
                else:
                    row.append((c * p ** (-s)) % mod)
            rows.append(row)
        return rows

    def c18(self) -> Fraction:
        return Fraction(self.c17) + Fraction(self.disc_val, 2)

    def lattice(self, u: int) -> list[list[int]]:
        m, n = self.m, self.n
        kap = self.kappa(u)
        rows = []
        for j in range(m):
            rows.append([int(i == j) for i in range(m)] + kap[j])
        q = self.p**u
        for i in range(n):
            rows.append([0] * m + [q * int(k == i) for k in range(n)])
        return rows

    def try_u(self, u: int, X: int):
        """Apply the lemma with parameter u; returns the bound or None."""
        self.ensure(max(self.N, u + max(0, -(self.c17 or 0)) + 20))
        while self.c17 is None or u > min(L.prec for L in self.logs) - self.c17:
            self.ensure(2 * self.N + u)
        lb = minimal_vector_lb(self.lattice(u))
        if not lb.exceeds(Fraction(self.m * X * X)):
            return None, lb
        with nm.precision(nm.DEFAULT_PREC):
            val = (nm.to_arb(Fraction(u) + self.c18())) / self.fb.c5
            return nm.ceil_upper(val) - 1, lb

    def reduce(self, B_cur: int) -> PlaceReduction:
        label = repr(self.P)
        fb = self.fb
        with nm.precision(nm.DEFAULT_PREC):
            c16 = 1 / fb.c5
        c16_floor = nm.floor_upper(c16)
        floor = self._sharpen(c16_floor, None)
        if self.m == 0:
            return PlaceReduction(label, "finite", floor, {"c16": nm.upper_float(c16)}, "no free part")
        if B_cur <= floor:
            return PlaceReduction(label, "finite", B_cur, {"c16": nm.upper_float(c16)}, "below floor")
        X = int(math.floor(self.ms.inflation * B_cur)) if self.ms.inflation >= 1 else B_cur
        X = max(X, 1)
        dim = self.m + self.n
        target = math.log(math.sqrt(self.m) * X + 1, self.p)
        u = max(1, math.ceil(dim / self.n * target) + 1)
        best = None
        tries = 0
        last_u = None
        lo = 0  # largest u known to fail
        while tries < U_TRIES:
            tries += 1
            res, _ = self.try_u(u, X)
            if res is not None:
                best, last_u = res, u
                break
            lo = u
            u = int(u * (1 + U_GROWTH)) + 1
        # bisect towards the smallest working u (a smaller u gives a smaller bound)
        probes = 0
        while best is not None and last_u - lo > 1 and probes < 6:
            probes += 1
            mid = (lo + last_u) // 2
            res, _ = self.try_u(mid, X)
            tries += 1
            if res is not None:
                best, last_u = res, mid
            else:
                lo = mid
        params = {
            "c16": nm.upper_float(c16),
            "c17": self.c17,
            "c18": float(self.c18()) if self.c17 is not None else None,
            "u": last_u,
            "padic_precision": self.N,
            "lattice_dim": dim,
            "inflation": float(self.ms.inflation),
        }
        if best is None:
            return PlaceReduction(label, "finite", B_cur, params, "hypothesis not met", tries)
        # the lemma itself needs B > c16; the polytope form does not
        lemma = max(best, c16_floor) if B_cur > c16_floor else B_cur
        sharp = self._sharpen(lemma, last_u)
        params["lemma_bound"] = lemma
        return PlaceReduction(label, "finite", sharp, params, "reduced", tries)

    def _sharpen(self, bound: int, u: int | None) -> int:
        """min with the polytope bound; ord_P(tau_1) <= max(ceil(e(u + c18)) - 1, e)."""
        if self.polytope is None:
            return bound
        e, f = self.P.e, self.P.f
        top = e
        if u is not None:
            top = max(math.ceil(e * (u + self.c18())) - 1, e)
        with nm.precision(nm.DEFAULT_PREC):
            omega = top * f * arb(self.p).log()
        poly = self.polytope.bound(self.ell, omega)
        return bound if poly is None else min(bound, poly)


# ----------------------------------------------------------------------
# infinite places
# ----------------------------------------------------------------------

def _nearest(x: arb) -> int | None:
    """Certified nearest integer of a ball, or None if undecidable."""
    m = x.mid()
    n = int(math.floor(float(m))) if abs(float(m)) < 2**52 else None
    if n is None:
        n = int(nm.floor_upper(x))
    for cand in (n - 1, n, n + 1, n + 2):
        if abs(x - cand) < arb(1) / 2:
            return cand
    return None


class InfiniteReducer:
    """Lemma data at one infinite place: the complex logs of the generators."""

    def __init__(self, basis: SUnitBasis, ib: InfinitePlaceBound, c3: arb, polytope: ValuationPolytope | None = None):
        self.basis = basis
        self.ib = ib
        self.v = basis.S.infinite[[v.index for v in basis.S.infinite].index(ib.index)]
        self.polytope = polytope
        self.ell = basis.S.places.index(self.v)
        self.c3 = c3
        self._kappa_prec = 0
        self._kappa = None

    def kappas(self, prec: int):
        if self._kappa is not None and self._kappa_prec >= prec:
            return self._kappa
        with nm.precision(prec):
            ks = []
            for r in self.basis.rho:
                z = self.v.embed(r, prec + 32)
                if z.imag.contains(0) and z.real < 0:
                    # on the branch cut: any fixed branch works, branches
                    # differ by multiples of 2 pi i
                    ks.append((-z).log() + acb(0, 1) * arb.pi())
                else:
                    ks.append(z.log())
            self._kappa = ks
            self._kappa_prec = prec
        return ks

    def try_C(self, C: int, X: int, order: list[int]):
        t, w = self.basis.t, self.basis.w
        bits = C.bit_length() + 96
        while True:
            ks = self.kappas(bits)
            with nm.precision(bits):
                re = [_nearest(C * ks[j].real) for j in order]
                im = [_nearest(C * ks[j].imag) for j in order]
                last = _nearest(C * 2 * arb.pi() / w)
            if None not in re and None not in im and last is not None:
                break
            bits *= 2
            if bits > nm.PREC_CAP:
                raise PrecisionExhausted("cannot round C*kappa")
        if re[-1] == 0:
            return None, None
        # rows are the generating vectors (columns of the displayed matrix)
        rows = []
        for j in range(t):
            head = [int(i == j) for i in range(t - 1)]
            rows.append(head + [re[j], im[j]])
        rows.append([0] * (t - 1) + [0, last])
        lb = minimal_vector_lb(rows)
        with nm.precision(nm.DEFAULT_PREC + C.bit_length()):
            S = arb((t - 1) * X * X)
            T = (1 + arb((t + w + t * w) * X)) / arb(2).sqrt()
            m2 = nm.to_arb(lb.squared)
            if not (m2 > T * T + S):
                return None, lb
            inner = (m2 - S).sqrt() - T
            gap = (2 * arb(C)).log() - inner.log()
            val = gap / self.ib.c13
            lemma = max(nm.floor_upper(val), nm.floor_upper(self.ib.c11))
            if self.polytope is None:
                return lemma, lb
            # |tau_1|_l >= min(4^-delta, (inner / 2C)^delta)
            omega = self.ib.delta * gap.max(arb(4).log())
            poly = self.polytope.bound(self.ell, omega)
            return (lemma if poly is None else min(lemma, poly)), lb

    def reduce(self, B_cur: int) -> PlaceReduction:
        label = repr(self.v)
        t = self.basis.t
        c11_floor = nm.floor_upper(self.ib.c11)
        floor = c11_floor
        if self.polytope is not None:
            with nm.precision(nm.DEFAULT_PREC):
                fp = self.polytope.bound(self.ell, self.ib.delta * arb(4).log())
            if fp is not None:
                floor = min(floor, fp)
        if B_cur <= floor:
            return PlaceReduction(label, "infinite", B_cur, {"c11": nm.upper_float(self.ib.c11)}, "below floor")
        # put a generator with the largest |Re kappa| last
        ks = self.kappas(128)
        with nm.precision(128):
            mags = [float(abs(k.real).mid()) for k in ks]
        jmax = max(range(t), key=lambda j: mags[j])
        if mags[jmax] == 0:
            raise Unsupported("every kappa_j is purely imaginary at this place")
        order = [j for j in range(t) if j != jmax] + [jmax]
        e = math.ceil((t + 1) * math.log10(max(B_cur, 2)))
        C = 10**e
        best = None
        tries = 0
        for _ in range(C_TRIES + 1):
            tries += 1
            res, lb = self.try_C(C, B_cur, order)
            if res is not None:
                best = res
                break
            C *= 10
        params = {"c11": nm.upper_float(self.ib.c11), "C_log10": int(round(math.log10(C))), "lattice_dim": t + 1}
        if best is None:
            return PlaceReduction(label, "infinite", B_cur, params, "hypothesis not met", tries)
        return PlaceReduction(label, "infinite", best, params, "reduced", tries)


# ----------------------------------------------------------------------
# driver
# ----------------------------------------------------------------------

def reduced_bound(basis: SUnitBasis, report: BoundReport | None = None, mode: str = "both", log=None, sharpen: bool = True) -> ReductionState:
    """Iterate both lemmas at every place of S (mode "both", the bound B1) or at
    the infinite places only (mode "infinite-only", the bound B2, valid up to
    solution cycles when S has exactly one finite place)."""
    if mode not in ("both", "infinite-only"):
        raise ValueError(f"unknown mode {mode}")
    if mode == "infinite-only" and len(basis.S.finite) != 1:
        raise ModeUnavailable("infinite-only mode needs exactly one finite place in S")
    if report is None:
        report = initial_bound(basis)
    specials = special_solutions(basis)
    sfloor = max((max(_free_height(a), _free_height(b)) for _, _, a, b in specials), default=0)
    poly = ValuationPolytope(basis) if sharpen else None
    if mode == "both":
        X = report.B_init
        finite = [FiniteReducer(basis, fb, poly) for fb in report.finite]
    else:
        X = max(nm.ceil_upper(report.K1), 4)
        finite = []
    infinite = [InfiniteReducer(basis, ib, report.c3, poly) for ib in report.infinite]
    state = ReductionState(report.B_init, X, mode, special=specials, special_floor=sfloor)
    for rnd in range(MAX_ROUNDS):
        results = [r.reduce(X) for r in finite] + [r.reduce(X) for r in infinite]
        new = max([pr.bound for pr in results] + [sfloor, 1])
        state.rounds.append({"X": X, "new": new})
        if log:
            log(f"round {rnd}: {X} -> {new}")
        for pr in results:
            state.places[pr.place] = pr
        if new >= X:
            break
        X = new
    state.B_final = X
    return state


# ----------------------------------------------------------------------
# single-place entry points
# ----------------------------------------------------------------------

PadicLinearForm = FiniteReducer


def build_linear_form(P: FinitePlace, basis: SUnitBasis, prec: int = 64, report: BoundReport | None = None) -> FiniteReducer:
    """mu-system and p-adic logarithms at P, with c17 and c18 computed."""
    report = report or initial_bound(basis)
    for fb in report.finite:
        if fb.place == P:
            form = FiniteReducer(basis, fb, ValuationPolytope(basis))
            if form.m:
                form.ensure(prec)
            return form
    raise HypothesisViolated(f"{P} is not in S")


def reduce_finite(P: FinitePlace, form: FiniteReducer, B_current: int) -> PlaceReduction:
    """One application of the p-adic reduction lemma at P."""
    if form.P != P:
        raise HypothesisViolated("linear form belongs to another place")
    return form.reduce(int(B_current))


def reduce_infinite(v, basis: SUnitBasis, B_current: int, prec: int = nm.DEFAULT_PREC, report: BoundReport | None = None) -> PlaceReduction:
    """One application of the real/complex reduction lemma at v."""
    report = report or initial_bound(basis, prec)
    for ib in report.infinite:
        if ib.index == v.index:
            return InfiniteReducer(basis, ib, report.c3, ValuationPolytope(basis)).reduce(int(B_current))
    raise HypothesisViolated(f"{v} is not an infinite place of K")
