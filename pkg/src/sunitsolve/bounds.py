"""Initial exponent bounds from linear forms in logarithms.

Everything here is computed in ball arithmetic and reported through upper
endpoints, so every constant in a BoundReport is a certified upper bound of
the true value (or a lower bound where smaller is the safe side, e.g. c3).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from flint import arb, arb_mat, fmpq_mat, fmpz_mat

from . import numerics as nm
from .errors import AllSingular, HypothesisViolated, RankDeficient
from .lll import integer_lll
from .nfield import FieldElement, SUnitBasis
from .places import FinitePlace, log_abs_value, valuation, weil_height

C3_FACTOR = Fraction(9999999, 10000000)


# ----------------------------------------------------------------------
# heights
# ----------------------------------------------------------------------

def max_abs_log(beta: FieldElement, prec: int = nm.DEFAULT_PREC) -> arb:
    """max over complex embeddings of |Log sigma(beta)| (principal branch)."""
    with nm.precision(prec):
        best = arb(0)
        for z in beta.all_conjugates(prec):
            lg = z.log()
            best = best.max(abs(lg))
        return best


def modified_height(beta: FieldElement, d: int, prec: int = nm.DEFAULT_PREC) -> arb:
    """h'(beta) = max(d h(beta), |log beta|, 1) / d.

    The embedding is not fixed by the caller; taking the maximum of |log| over
    all embeddings gives an upper bound valid for any choice.
    """
    with nm.precision(prec):
        h = weil_height(beta, prec)
        return (d * h).max(max_abs_log(beta, prec)).max(arb(1)) / d


def modified_height_p(beta: FieldElement, P: FinitePlace, D: int, d: int, prec: int = nm.DEFAULT_PREC) -> arb:
    """h'_P(beta) = max(h(beta), |log beta| / (2 pi D), f log p / d)."""
    with nm.precision(prec):
        h = weil_height(beta, prec)
        return h.max(max_abs_log(beta, prec) / (2 * arb.pi() * D)).max(P.f * arb(P.p).log() / d)


def root_of_unity_height_p(P: FinitePlace, D: int, d: int, prec: int = nm.DEFAULT_PREC) -> arb:
    """Upper bound of h'_P over all roots of unity (h = 0, |log| <= pi)."""
    with nm.precision(prec):
        return (arb.pi() / (2 * arb.pi() * D)).max(P.f * arb(P.p).log() / d)


# ----------------------------------------------------------------------
# classical constants
# ----------------------------------------------------------------------

def bw_constant(t: int, d: int, prec: int = nm.DEFAULT_PREC) -> arb:
    """Baker-Wustholz C(t, d) = 18 (t+2)! (t+1)^(t+2) (32 d)^(t+3) log(2 (t+1) d)."""
    with nm.precision(prec):
        c = 18 * math.factorial(t + 2) * (t + 1) ** (t + 2) * (32 * d) ** (t + 3)
        return arb(c) * arb(2 * (t + 1) * d).log()


def yu_D(p: int, w: int, d: int) -> int:
    """The degree parameter D of Yu's theorem for K' = K (w = #torsion)."""
    if p > 2 and w % 4 == 0:
        return d
    if p == 2 and w % 3 == 0:
        return d
    return 2 * d


def yu_constants(p: int, f: int, n: int, D: int, d: int, heights: Sequence[arb], prec: int = nm.DEFAULT_PREC) -> dict:
    """k2..k5 and H of Yu's p-adic linear forms bound for n logarithms."""
    with nm.precision(prec):
        if p == 2:
            k2 = arb(197142) * arb(36) ** n
        elif p % 4 == 1:
            k2 = arb(35009) * (arb(45) / 2) ** n
        else:
            k2 = arb(30760) * arb(25) ** n
        prodh = arb(1)
        for h in heights:
            prodh *= h
        H = heights[0]
        for h in heights[1:]:
            H = H.max(h)
        k3 = (
            arb(n + 1) ** (2 * n + 4)
            * arb(p) ** (arb(D * f) / d)
            * (f * arb(p).log()) ** (-(n + 1))
            * arb(D) ** (n + 2)
            * prodh
        )
        if p > 2:
            k4 = (arb(2) ** 11 * (n + 1) ** 2 * D * D * H).log()
        else:
            k4 = (3 * arb(2) ** 10 * (n + 1) ** 2 * D * D * H).log()
        k5 = 2 * arb(D).log()
        return {"k2": k2, "k3": k3, "k4": k4, "k5": k5, "H": H}


def pdw_solve(a, b, h: int = 1, prec: int = nm.DEFAULT_PREC) -> arb:
    """Upper bound 2^h (a^{1/h} + b^{1/h} log(h^h b))^h for the largest root of x = a + b (log x)^h.

    Requires a >= 0, h >= 1 and b > (e^2/h)^h (certified on the balls).
    """
    with nm.precision(prec):
        a = nm.to_arb(a)
        b = nm.to_arb(b)
        if h < 1 or not (a >= 0):
            raise HypothesisViolated("pdw_solve needs a >= 0 and h >= 1")
        thr = (arb(1).exp() ** 2 / h) ** h
        if not (b > thr):
            raise HypothesisViolated("pdw_solve needs b > (e^2/h)^h")
        if h == 1:
            return 2 * (a + b * b.log())
        inner = a ** (arb(1) / h) + b ** (arb(1) / h) * (arb(h) ** h * b).log()
        return arb(2) ** h * inner ** h


def pdw_bound(a, b, h: int = 1, prec: int = nm.DEFAULT_PREC) -> arb:
    """pdw_solve with the hypotheses forced: a is clipped at 0 and a too small
    b is raised to just above the threshold (the largest root only grows with
    a and b, so the result still bounds the original fixed point)."""
    with nm.precision(prec):
        a = nm.to_arb(a).max(arb(0))
        b = nm.to_arb(b)
        thr = (arb(1).exp() ** 2 / h) ** h
        if not (b > thr):
            b = thr * (1 + arb(2) ** -20)
        return pdw_solve(a, b, h, prec)


def c1_constant(basis: SUnitBasis, prec: int = nm.DEFAULT_PREC, rule: str = "max"):
    """c1 = max over invertible t-subsets U of S of the row norm of M_U^{-1}.

    Returns (c1 ball, list of (dropped place index, norm or None)).  Any single
    invertible U already gives a valid inequality B <= |M_U^{-1}| max|log|tau|_v|,
    so subsets whose determinant cannot be certified nonzero are skipped, and
    rule="min" returns the sharpest such constant instead of the largest.
    """
    if rule not in ("max", "min"):
        raise HypothesisViolated("rule must be 'max' or 'min'")
    t = basis.t
    places = basis.S.places
    if len(places) != t + 1:
        raise RankDeficient("|S| must equal t + 1")
    full = [[log_abs_value(r, u, prec + 64) for r in basis.rho] for u in places]
    best = None
    detail = []
    with nm.precision(prec):
        for drop in range(len(places)):
            rows = [full[i] for i in range(len(places)) if i != drop]
            if t == 0:
                continue
            M = arb_mat(rows)
            det = M.det()
            if not (abs(det) > 0):
                detail.append((drop, None))
                continue
            Minv = M.inv()
            norm = arb(0)
            for i in range(t):
                s = arb(0)
                for j in range(t):
                    s += abs(Minv[i, j])
                norm = norm.max(s)
            detail.append((drop, norm))
            if best is None:
                best = norm
            else:
                best = best.max(norm) if rule == "max" else best.min(norm)
    if best is None:
        raise AllSingular("no t-subset of S gives an invertible log matrix")
    return best, detail


# ----------------------------------------------------------------------
# the mu-system at a finite place
# ----------------------------------------------------------------------

@dataclass
class MuSystem:
    """tau_2 = mu_0 prod mu_i^{d_i} with ord_P(mu_i) = 0.

    kernel: Z-basis (rows) of {b in Z^t : sum b_j ord_P(rho_j) = 0}
    mus: mu_i = prod rho_j^{kernel[i][j]}
    mu0: the possible mu_0, i.e. the roots of unity rho_0^k
    inflation: |d|_inf <= inflation * |b|_inf for b in the kernel
    """

    P: FinitePlace
    ords: list[int]
    kernel: list[list[int]]
    left_inverse: list[list[Fraction]]
    inflation: Fraction
    mus: list[FieldElement]
    mu0: list[FieldElement]


def _kernel_basis(o: list[int]) -> list[list[int]]:
    t = len(o)
    rows = [[o[i]] + [int(i == j) for j in range(t)] for i in range(t)]
    H = fmpz_mat(rows).hnf()
    ker = []
    for i in range(t):
        r = [int(H[i, j]) for j in range(t + 1)]
        if r[0] == 0 and any(r[1:]):
            ker.append(r[1:])
    if len(ker) != t - 1:
        raise AssertionError("kernel lattice has wrong rank")
    if ker:
        ker = integer_lll(ker)
    return ker


def _left_inverses(V: list[list[int]], o: list[int]) -> list[list[list[Fraction]]]:
    """Candidate matrices W (t x (t-1)) with V W = I on the kernel lattice."""
    t = len(o)
    m = len(V)
    out = []
    for k in range(t):
        if o[k] == 0:
            continue
        cols = [j for j in range(t) if j != k]
        sub = fmpq_mat([[V[i][j] for j in cols] for i in range(m)])
        if sub.det() == 0:
            continue
        inv = sub.inv()
        W = [[Fraction(0)] * m for _ in range(t)]
        for a, j in enumerate(cols):
            for i in range(m):
                x = inv[a, i]
                W[j][i] = Fraction(int(x.p), int(x.q))
        out.append(W)
    return out


def _column_norm(W: list[list[Fraction]]) -> Fraction:
    if not W or not W[0]:
        return Fraction(0)
    return max(sum(abs(W[k][i]) for k in range(len(W))) for i in range(len(W[0])))


def mu_system(basis: SUnitBasis, P: FinitePlace) -> MuSystem:
    o = [valuation(r, P) for r in basis.rho]
    if not any(o):
        raise RankDeficient(f"no generator has nonzero valuation at {P}")
    V = _kernel_basis(o)
    Ws = _left_inverses(V, o) if V else []
    if V and not Ws:
        raise AssertionError("no left inverse for the kernel basis")
    W = min(Ws, key=_column_norm) if Ws else []
    infl = _column_norm(W) if W else Fraction(0)
    mus = []
    for row in V:
        mus.append(basis.phi([0] + row))
    mu0 = [basis.rho0 ** k for k in range(basis.w)]
    return MuSystem(P, o, V, W, infl, mus, mu0)


def kernel_coordinates(ms: MuSystem, b: Sequence[int]) -> list[Fraction]:
    """d with b = sum d_i kernel[i], for b (free part) in the kernel lattice."""
    t = len(b)
    return [sum(Fraction(b[k]) * ms.left_inverse[k][i] for k in range(t)) for i in range(len(ms.kernel))]


# ----------------------------------------------------------------------
# K0 and K1
# ----------------------------------------------------------------------

@dataclass
class FinitePlaceBound:
    place: FinitePlace
    c5: arb
    c8: arb
    c9: arb
    K0: arb
    yu: dict
    inflation: Fraction
    mu: MuSystem | None


@dataclass
class InfinitePlaceBound:
    index: int
    delta: int
    c11: arb
    c13: arb
    c14: arb
    c15: arb
    K1: arb


@dataclass
class BoundReport:
    """All constants of the initial bound, as balls."""

    t: int
    w: int
    d: int
    c1: arb
    c2: arb
    c3: arb
    bw: arb
    c1_rule: str = "max"
    finite: list[FinitePlaceBound] = field(default_factory=list)
    infinite: list[InfinitePlaceBound] = field(default_factory=list)
    K0: arb = None
    K1: arb = None
    B_init: int = 0
    reduced: dict = field(default_factory=dict)
    B_final: int | None = None
    mode: str = "full"
    notes: list = field(default_factory=list)
    B1: int | None = None
    B2: int | None = None
    R: float | None = None
    timings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def up(x):
            return None if x is None else nm.upper_float(x)

        out = {
            "t": self.t,
            "w": self.w,
            "degree": self.d,
            "c1": up(self.c1),
            "c1_rule": self.c1_rule,
            "c2": up(self.c2),
            "c3_lower": nm.lower_float(self.c3),
            "C_bw": up(self.bw),
            "K0": up(self.K0),
            "K1": up(self.K1),
            "B_init": self.B_init,
            "finite_places": [
                {
                    "p": fb.place.p,
                    "e": fb.place.e,
                    "f": fb.place.f,
                    "label": fb.place.label,
                    "c5_lower": nm.lower_float(fb.c5),
                    "c8": up(fb.c8),
                    "c9": up(fb.c9),
                    "K0": up(fb.K0),
                    "k2": up(fb.yu.get("k2")) if fb.yu else None,
                    "k3": up(fb.yu.get("k3")) if fb.yu else None,
                    "k4": up(fb.yu.get("k4")) if fb.yu else None,
                    "k5": up(fb.yu.get("k5")) if fb.yu else None,
                    "H": up(fb.yu.get("H")) if fb.yu else None,
                    "inflation": float(fb.inflation),
                }
                for fb in self.finite
            ],
            "infinite_places": [
                {
                    "index": ib.index,
                    "delta": ib.delta,
                    "c11": up(ib.c11),
                    "c13_lower": nm.lower_float(ib.c13),
                    "c14": up(ib.c14),
                    "c15": up(ib.c15),
                    "K1": up(ib.K1),
                }
                for ib in self.infinite
            ],
            "reduced": self.reduced,
            "B1": self.B1,
            "B2": self.B2 if self.B2 is not None else "n/a",
            "R": self.R,
            "B_final": self.B_final,
            "timings": dict(self.timings),
            "mode": self.mode,
            "notes": list(self.notes),
        }
        return out


def _finite_bound(basis: SUnitBasis, P: FinitePlace, c3: arb, prec: int) -> FinitePlaceBound:
    K = basis.field
    d = K.degree
    t = basis.t
    with nm.precision(prec):
        c5 = c3 / (P.e * arb(P.norm).log())
    ms = mu_system(basis, P)
    if t == 1:
        # tau_2 is forced to be a root of unity: no linear form to bound
        zero = arb(0)
        return FinitePlaceBound(P, c5, zero, zero, zero, {}, ms.inflation, ms)
    D = yu_D(P.p, basis.w, d)
    hs = [root_of_unity_height_p(P, D, d, prec)]
    hs += [modified_height_p(m, P, D, d, prec) for m in ms.mus]
    n = len(hs)
    yu = yu_constants(P.p, P.f, n, D, d, hs, prec)
    with nm.precision(prec):
        c8 = yu["k2"] * yu["k3"] * yu["k4"]
        c9 = c8 * yu["k5"]
        infl = max(ms.inflation, Fraction(1))
        c9_eff = c9 + c8 * nm.to_arb(infl).log()
        ec5 = P.e * c5
        K0 = pdw_bound(c9_eff / ec5, c8 / ec5, 1, prec)
    return FinitePlaceBound(P, c5, c8, c9_eff, K0, yu, ms.inflation, ms)


def _infinite_bound(basis: SUnitBasis, v, c3: arb, bw: arb, prec: int) -> InfinitePlaceBound:
    K = basis.field
    d = K.degree
    t, w = basis.t, basis.w
    delta = v.delta
    with nm.precision(prec):
        c11 = delta * arb(4).log() / c3
        c13 = c3 / delta
        zeta_h = (arb(2) * arb.pi() / w).max(arb(1)) / d
        h0 = modified_height(basis.rho0, d, prec).max(zeta_h)
        prodh = h0
        for r in basis.rho:
            prodh *= modified_height(r, d, prec)
        c14 = bw * prodh
        c15 = 2 / c13 * (arb(2).log() + c14 * ((t + 1) * w * c14 / c13).log())
        K1 = c11.max(c15)
    return InfinitePlaceBound(v.index, delta, c11, c13, c14, c15, K1)


def c_constants(basis: SUnitBasis, prec: int = nm.DEFAULT_PREC, rule: str = "max"):
    c1, _ = c1_constant(basis, prec, rule)
    with nm.precision(prec):
        c2 = 1 / c1
        r, s = basis.field.signature
        c3 = nm.to_arb(C3_FACTOR) * c2 / (r + s)
    return c1, c2, c3


def c1_c3(basis: SUnitBasis, prec: int = nm.DEFAULT_PREC, rule: str = "max"):
    """(c1, c2, c3) with c2 = 1/c1 and c3 = 0.9999999 c2 / (r + s)."""
    return c_constants(basis, prec, rule)


def initial_bound(basis: SUnitBasis, prec: int = nm.DEFAULT_PREC, c1_rule: str = "min") -> BoundReport:
    """B_init = max(K0, K1) with the full set of constants.

    c1_rule="min" (default) uses the best invertible U for c1; "max" is the
    uniform choice over all U.  Both give valid bounds.
    """
    K = basis.field
    d = K.degree
    t = basis.t
    if t == 0:
        raise HypothesisViolated("S-unit group of rank 0: nothing to bound")
    c1, c2, c3 = c_constants(basis, prec, c1_rule)
    bw = bw_constant(t, d, prec)
    rep = BoundReport(t, basis.w, d, c1, c2, c3, bw, c1_rule=c1_rule)
    for P in basis.S.finite:
        rep.finite.append(_finite_bound(basis, P, c3, prec))
    for v in basis.S.infinite:
        rep.infinite.append(_infinite_bound(basis, v, c3, bw, prec))
    with nm.precision(prec):
        K0 = arb(0)
        for fb in rep.finite:
            K0 = K0.max(fb.K0)
        K1 = arb(0)
        for ib in rep.infinite:
            K1 = K1.max(ib.K1)
        rep.K0, rep.K1 = K0, K1
        rep.B_init = max(nm.ceil_upper(K0.max(K1)), 4)
    return rep


def K0_bound(basis: SUnitBasis, prec: int = nm.DEFAULT_PREC):
    rep = initial_bound(basis, prec)
    return rep.K0, {repr(fb.place): fb.K0 for fb in rep.finite}


def K1_bound(basis: SUnitBasis, prec: int = nm.DEFAULT_PREC):
    rep = initial_bound(basis, prec)
    return rep.K1, {ib.index: ib.K1 for ib in rep.infinite}


K0 = K0_bound
K1 = K1_bound
