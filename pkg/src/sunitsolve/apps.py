"""Application drivers, job files and reports.

* bound_report: the finite-place bound B1 and the infinite-place bound B2
  with the search-space ratio R(K);
* fermat_check: the asymptotic Fermat criterion for totally real fields
  (solutions (lambda, mu) against the primes above 2 of degree one);
* ramanujan_nagell: x^3 + p^k = q^n through the S-unit bound of the
  splitting field of x^3 + p;
* JobSpec / load_job / run_job: the JSON job format used by the CLI.
"""

from __future__ import annotations

import math
import platform
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from flint import acb, fmpz, fmpz_poly

from . import numerics as nm
from .bounds import BoundReport, initial_bound
from .errors import (
    CapTooSmall,
    FieldTooLarge,
    HypothesisNotMet,
    HypothesisViolated,
    InputError,
    RankDeficient,
)
from .generators import find_generators_bruteforce
from .nfield import FieldElement, NumberField, SUnitBasis
from .places import PlaceSet, maximal_order_field, primes_above, valuation
from .reduce import C_TRIES, MAX_ROUNDS, U_GROWTH, U_TRIES, reduced_bound
from .sieve import DEFAULT_BUDGET_MIB, SolutionPair, sieve_below_bound, solve

SCHEMA_VERSION = "1.0"
BRUTEFORCE_MAX_DEGREE = 3
BRUTEFORCE_MAX_RANK = 2

# totally real cubic fields of |disc| <= 2000 in which 2 is totally ramified
RAMIFIED_CUBICS = [
    [1, -3, -1, 1],
    [-1, -5, -1, 1],
    [3, -5, -1, 1],
    [-2, -6, 0, 1],
    [-3, -7, -1, 1],
    [-6, -8, 0, 1],
    [-10, -10, 0, 1],
    [5, -7, -1, 1],
    [-5, -9, -1, 1],
    [1, -7, -1, 1],
    [11, -9, -1, 1],
    [-14, -12, 0, 1],
    [-2, -8, 0, 1],
]


# ----------------------------------------------------------------------
# bound report
# ----------------------------------------------------------------------

def search_ratio(B1: int, B2: int, t: int) -> float:
    """R(K) = ((2 B1 + 1) / (2 B2 + 1))^(2t)."""
    return ((2 * B1 + 1) / (2 * B2 + 1)) ** (2 * t)


def bound_report(K: NumberField, S: PlaceSet, basis: SUnitBasis, prec: int = nm.DEFAULT_PREC, log=None) -> BoundReport:
    """Initial bound, B1 (every place), and B2 (infinite places only, when
    S has a single finite place), with R(K) and timings."""
    if basis.field is not K:
        raise InputError("basis belongs to another field")
    t0 = time.perf_counter()
    rep = initial_bound(basis, prec)
    t1 = time.perf_counter()
    st1 = reduced_bound(basis, rep, mode="both", log=log)
    t2 = time.perf_counter()
    rep.B1 = st1.B_final
    rep.reduced = {"B1": st1.to_json()}
    rep.timings = {"initial": t1 - t0, "B1": t2 - t1}
    if len(S.finite) == 1:
        st2 = reduced_bound(basis, rep, mode="infinite-only", log=log)
        rep.timings["B2"] = time.perf_counter() - t2
        rep.B2 = st2.B_final
        rep.reduced["B2"] = st2.to_json()
        rep.R = search_ratio(rep.B1, rep.B2, basis.t)
    else:
        rep.notes.append("B2 n/a: S has more than one finite place")
    rep.B_final = rep.B1
    rep.mode = "bound-only"
    return rep


# ----------------------------------------------------------------------
# asymptotic Fermat
# ----------------------------------------------------------------------

@dataclass
class FermatVerdict:
    satisfied: bool
    T: list
    witnesses: list  # per solution: label of a witnessing prime or None
    failures: list

    def to_json(self) -> dict:
        return {
            "verdict": "criterion satisfied" if self.satisfied else "criterion not satisfied",
            "T": [repr(P) for P in self.T],
            "witnesses": self.witnesses,
            "failures": self.failures,
        }


def _pair_elements(sol) -> tuple[FieldElement, FieldElement]:
    if isinstance(sol, SolutionPair):
        return sol.tau1, sol.tau2
    lam, mu = sol
    return lam, mu


def fermat_check(K: NumberField, solutions: Sequence) -> FermatVerdict:
    """Every solution (lambda, mu) must have some P | 2 with f_P = 1 and
    max(|ord_P lambda|, |ord_P mu|) <= 4 ord_P(2)."""
    r, s = K.signature
    if s:
        raise HypothesisNotMet("K is not totally real")
    S = primes_above(K, 2)
    T = [P for P in S if P.f == 1]
    if K.degree % 2 == 0 and not T:
        raise HypothesisNotMet("[K:Q] is even and no prime above 2 has residue degree 1")
    witnesses, failures = [], []
    for i, sol in enumerate(solutions):
        lam, mu = _pair_elements(sol)
        if not (lam + mu).is_one():
            raise InputError(f"solution {i} does not satisfy lambda + mu = 1")
        hit = None
        for P in T:
            if max(abs(valuation(lam, P)), abs(valuation(mu, P))) <= 4 * P.e:
                hit = repr(P)
                break
        witnesses.append(hit)
        if hit is None:
            failures.append(i)
    return FermatVerdict(not failures, T, witnesses, failures)


# ----------------------------------------------------------------------
# cubic Ramanujan-Nagell
# ----------------------------------------------------------------------

@dataclass
class RNResult:
    q: int
    solutions: list  # (q, x, k, n)
    B: int
    c3: Fraction
    cq: int
    k_max: int
    n_max: int
    t: int
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "solutions": [list(s) for s in self.solutions],
            "B": self.B,
            "c_3": str(self.c3),
            "c_q": self.cq,
            "k_max": self.k_max,
            "n_max": self.n_max,
            "t": self.t,
            "notes": list(self.notes),
        }


def cubic_splitting_field(p: int) -> NumberField:
    """Q(p^(1/3), zeta_3) with its maximal order."""
    if p == 3:
        return maximal_order_field([3, 0, 0, 0, 0, 0, 1])
    # primitive element p^(1/3) + sqrt(-3): multiply out its six conjugates
    with nm.precision(256):
        cr = acb(p) ** (acb(1) / 3)
        z = acb.exp_pi_i(acb(2) / 3)
        s3 = acb(-3).sqrt()
        poly = [acb(1)]
        for i in range(3):
            for sg in (1, -1):
                root = cr * z**i + sg * s3
                nxt = [acb(0)] * (len(poly) + 1)
                for j, c in enumerate(poly):
                    nxt[j + 1] += c
                    nxt[j] -= c * root
                poly = nxt
        coeffs = [int(round(float(c.real.mid()))) for c in poly]
    f = fmpz_poly(coeffs)
    if f.degree() != 6:
        raise HypothesisViolated("primitive element computation failed")
    return maximal_order_field(coeffs)


def _icbrt(n: int) -> int | None:
    """Exact integer cube root of n, or None."""
    r = int(fmpz(abs(n)).root(3))
    while r**3 < abs(n):
        r += 1
    while r**3 > abs(n):
        r -= 1
    if r**3 != abs(n):
        return None
    return r if n >= 0 else -r


def _cube_sieve_primes(count: int = 40) -> list[int]:
    out, l = [], 7
    while len(out) < count:
        if fmpz(l).is_prime() and l % 3 == 1:
            out.append(l)
        l += 6
    return out


def cube_candidates(q: int, p: int, k_max: int, n_min: int, n_max: int) -> list[tuple[int, int]]:
    """(k, n) with q^n - p^k a cube modulo many primes l = 1 mod 3."""
    ks = np.arange(0, k_max + 1, dtype=np.int64)
    ns = np.arange(n_min, n_max + 1, dtype=np.int64)
    alive = np.ones((len(ks), len(ns)), dtype=bool)
    for l in _cube_sieve_primes():
        if q % l == 0 or p % l == 0:
            continue
        cubes = np.zeros(l, dtype=bool)
        cubes[(np.arange(l, dtype=np.int64) ** 3) % l] = True
        pk = np.array([pow(p, int(k), l) for k in ks], dtype=np.int64)
        qn = np.array([pow(q, int(n), l) for n in ns], dtype=np.int64)
        alive &= cubes[(qn[None, :] - pk[:, None]) % l]
    ii, jj = np.nonzero(alive)
    return [(int(ks[i]), int(ns[j])) for i, j in zip(ii, jj)]


def ramanujan_nagell(q: int, p_base: int = 3, max_rank: int = 10, log=None, bound: int | None = None, positive_x: bool = True) -> RNResult:
    """All (q, x, k, n) with x^3 + p^k = q^n, k >= 0, n >= 1 (and x >= 1
    unless positive_x is False).

    B is the reduced S-unit bound of L = Q(p^(1/3), zeta_3) for S above p
    and q; then k <= c_p B and n <= c_q B with c_q = max_{Q|q} sum |ord_Q rho_i|
    and c_p = (3/e_p) max_{P|p} sum |ord_P rho_i|.  The box is searched with
    a cube-residue sieve and every survivor is checked exactly.  n = 0 gives
    only the q-independent x^3 = 1 - p^k and is not searched.
    """
    q, p = int(q), int(p_base)
    if q == p or q < 3 or not fmpz(q).is_prime():
        raise InputError(f"q = {q} must be an odd prime different from {p}")
    if p < 2 or not fmpz(p).is_prime():
        raise InputError(f"p_base = {p} must be prime")
    L = cubic_splitting_field(p)
    S = PlaceSet.above(L, [p, q])
    r, s = L.signature
    t = len(S.finite) + r + s - 1
    if t > max_rank:
        raise FieldTooLarge(f"S-unit rank {t} exceeds the configured limit {max_rank}")
    basis = find_generators_bruteforce(L, S)
    if bound is None:
        B = reduced_bound(basis, initial_bound(basis), log=log).B_final
    else:
        B = int(bound)
    over_p = [P for P in S.finite if P.p == p]
    over_q = [P for P in S.finite if P.p == q]
    cq = max(sum(abs(valuation(rho, P)) for rho in basis.rho) for P in over_q)
    e_p = over_p[0].e
    c3 = Fraction(3, e_p) * max(sum(abs(valuation(rho, P)) for rho in basis.rho) for P in over_p)
    k_max = math.floor(c3 * B)
    n_max = cq * B
    sols = []
    for k, n in cube_candidates(q, p, k_max, 1, n_max):
        x = _icbrt(q**n - p**k)
        if x is not None and x**3 + p**k == q**n:
            sols.append((q, x, k, n))
    sols.sort()
    notes = ["n = 0 excluded: x^3 = 1 - p^k does not involve q"]
    negative = [s for s in sols if s[1] < 1]
    if positive_x:
        sols = [s for s in sols if s[1] >= 1]
        if negative:
            notes.append(f"x < 1 solutions omitted: {negative}")
    if log:
        log(f"q = {q}: t = {t}, B = {B}, k <= {k_max}, n <= {n_max}, {len(sols)} solutions")
    return RNResult(q, sols, B, c3, cq, k_max, n_max, t, notes)


# ----------------------------------------------------------------------
# jobs
# ----------------------------------------------------------------------

MODES = ("solve", "bound", "sieve-below-bound", "fermat-check", "ramanujan-nagell", "generators")


@dataclass
class JobSpec:
    """A JSON job: polynomial constant term first, S by rational primes or
    two-element ideals {"p": p, "pi": [coords]}, optional generators
    {"rho0": coords, "w": w, "rho": [coords, ...]}."""

    field: list
    mode: str = "solve"
    integral_basis: list | None = None
    s_primes: list = field(default_factory=list)
    s_ideals: list | None = None
    generators: dict | None = None
    bound: int | None = None
    precision_bits: int = nm.DEFAULT_PREC
    memory_budget_mib: int = DEFAULT_BUDGET_MIB
    reduction_mode: str = "both"
    q: list | None = None
    p_base: int = 3
    allow_bruteforce: bool = False
    height_cap: int = 3

    def to_json(self) -> dict:
        return asdict(self)


def _int_list(x, name: str) -> list[int]:
    if isinstance(x, str):
        x = [v for v in x.replace(" ", "").split(",") if v]
    if isinstance(x, (int, float)):
        x = [x]
    out = []
    for v in x:
        if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
            raise InputError(f"{name} must be a list of integers")
        try:
            out.append(int(v))
        except (TypeError, ValueError):
            raise InputError(f"{name} must be a list of integers, got {v!r}")
    return out


def load_job(data: dict) -> JobSpec:
    if not isinstance(data, dict):
        raise InputError("job must be a JSON object")
    known = set(JobSpec.__dataclass_fields__)
    unknown = set(data) - known - {"schema_version"}
    if unknown:
        raise InputError(f"unknown job fields: {sorted(unknown)}")
    if "field" not in data and data.get("mode") != "ramanujan-nagell":
        raise InputError("job needs a 'field' polynomial")
    job = JobSpec(**{k: v for k, v in data.items() if k in known})
    job.field = _int_list(job.field or [], "field")
    job.s_primes = _int_list(job.s_primes or [], "s_primes")
    if job.mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    if job.reduction_mode not in ("both", "infinite-only"):
        raise InputError("reduction_mode must be 'both' or 'infinite-only'")
    if job.bound is not None:
        job.bound = int(job.bound)
        if job.bound < 0:
            raise InputError("bound must be non-negative")
    if job.mode == "sieve-below-bound" and job.bound is None:
        raise InputError("sieve-below-bound needs 'bound'")
    if int(job.precision_bits) < 64:
        raise InputError("precision_bits must be at least 64")
    if int(job.memory_budget_mib) < 1:
        raise InputError("memory_budget_mib must be positive")
    return job


def build_field(job: JobSpec) -> NumberField:
    ib = None
    if job.integral_basis is not None:
        try:
            ib = [[Fraction(str(c)) for c in row] for row in job.integral_basis]
        except (TypeError, ValueError):
            raise InputError("integral_basis must be a matrix of rationals")
    return maximal_order_field(job.field, ib)


def _element(K: NumberField, coords, what: str) -> FieldElement:
    try:
        cs = [Fraction(str(c)) for c in coords]
    except (TypeError, ValueError):
        raise InputError(f"{what}: coordinates must be rationals")
    if len(cs) > K.degree:
        raise InputError(f"{what}: more than {K.degree} power-basis coordinates")
    return K.element(cs + [Fraction(0)] * (K.degree - len(cs)))


def build_S(K: NumberField, job: JobSpec) -> PlaceSet:
    if job.s_ideals:
        fin = []
        for spec in job.s_ideals:
            if not isinstance(spec, dict) or "p" not in spec:
                raise InputError("s_ideals entries need 'p' and optionally 'pi'")
            p = int(spec["p"])
            above = primes_above(K, p)
            if "pi" not in spec:
                chosen = above
            else:
                pi = _element(K, spec["pi"], "s_ideals pi")
                if pi.is_zero():
                    raise InputError("s_ideals pi must be nonzero")
                chosen = [P for P in above if valuation(pi, P) > 0]
                if not chosen:
                    raise InputError(f"(p, pi) is the unit ideal for p = {p}")
            for P in chosen:
                if P not in fin:
                    fin.append(P)
        return PlaceSet(K, fin)
    return PlaceSet.above(K, job.s_primes)


def s_unit_rank(K: NumberField, S: PlaceSet) -> int:
    r, s = K.signature
    return len(S.finite) + r + s - 1


def build_basis(K: NumberField, S: PlaceSet, job: JobSpec, log=None) -> SUnitBasis:
    """Supplied generators (validated) or the brute-force finder."""
    t = s_unit_rank(K, S)
    g = job.generators
    if g:
        try:
            rho0 = _element(K, g["rho0"], "rho0")
            w = int(g["w"])
            rho = [_element(K, c, f"rho{i + 1}") for i, c in enumerate(g.get("rho", []))]
        except KeyError as e:
            raise InputError(f"generators need 'rho0', 'w' and 'rho' ({e} missing)")
        basis = SUnitBasis(K, S, rho0, w, rho)
        basis.validate()
        return basis
    if K.degree > BRUTEFORCE_MAX_DEGREE and t > BRUTEFORCE_MAX_RANK and not job.allow_bruteforce:
        raise InputError(
            f"S-unit rank t = {t} over a degree {K.degree} field is outside the brute-force "
            "finder's range: supply generators (rho0, w, rho) in the job file, "
            "or set allow_bruteforce"
        )
    try:
        return find_generators_bruteforce(K, S, height_cap=job.height_cap, log=log)
    except CapTooSmall as e:
        raise CapTooSmall(f"{e}; supply generators or raise height_cap")


def provenance(job: JobSpec | None = None, **extra) -> dict:
    import flint

    from . import __version__
    from . import sieve as sv

    out = {
        "package": "sunitsolve",
        "version": __version__,
        "python": platform.python_version(),
        "python_flint": flint.__version__,
        "numpy": np.__version__,
        "schedules": {
            "u_growth": U_GROWTH,
            "u_tries": U_TRIES,
            "C_tries": C_TRIES,
            "max_rounds": MAX_ROUNDS,
            "extra_sieve_primes": sv.EXTRA_PRIMES,
            "box_hash_seed": sv.HASH_SEED,
        },
        "seeds": {"box_hash": sv.HASH_SEED},
    }
    if job is not None:
        out["job"] = job.to_json()
    out.update(extra)
    return out


def field_json(K: NumberField) -> dict:
    return {
        "polynomial": list(K.coeffs),
        "degree": K.degree,
        "signature": list(K.signature),
        "discriminant": K.discriminant,
        "integral_basis": [[str(c) for c in w.coords] for w in K.order_basis],
    }


def places_json(S: PlaceSet) -> list:
    return [{"p": P.p, "e": P.e, "f": P.f, "label": P.label} for P in S.finite]


def basis_json(b: SUnitBasis) -> dict:
    return {"w": b.w, "t": b.t, "rho0": b.rho0.to_json(), "rho": [r.to_json() for r in b.rho]}


def result_document(command: str, **body) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    doc.update(body)
    return doc


def run_job(job: JobSpec, log=None) -> tuple[dict, int]:
    """Execute a job; returns (result document, exit code)."""
    prov = {}
    if job.mode == "ramanujan-nagell":
        qs = job.q or []
        if not qs:
            raise InputError("ramanujan-nagell needs 'q' (a list of odd primes)")
        res = [ramanujan_nagell(int(q), job.p_base, log=log, bound=job.bound) for q in qs]
        return result_document(
            job.mode,
            solutions=[list(s) for r in res for s in r.solutions],
            runs=[r.to_json() for r in res],
            provenance=provenance(job),
        ), 0
    K = build_field(job)
    S = build_S(K, job)
    head = {"field": field_json(K), "S": places_json(S)}
    if job.mode == "fermat-check":
        if (job.s_primes and job.s_primes != [2]) or job.s_ideals:
            raise InputError("fermat-check uses S = primes above 2")
        S = PlaceSet.above(K, [2])
        head["S"] = places_json(S)
    basis = build_basis(K, S, job, log)
    head["generators"] = basis_json(basis)
    if job.mode == "generators":
        return result_document(job.mode, **head, provenance=provenance(job)), 0
    if job.mode == "bound":
        rep = bound_report(K, S, basis, int(job.precision_bits), log)
        return result_document(job.mode, **head, solutions=[], bound_report=rep.to_json(), provenance=provenance(job)), 0
    if job.mode == "sieve-below-bound":
        info: dict = {}
        sols = sieve_below_bound(basis, job.bound, int(job.memory_budget_mib), log, info=info)
        prov = provenance(job, sieve=info)
        return result_document(
            job.mode, **head, bound=job.bound, count=len(sols),
            solutions=[s.to_json() for s in sols], bound_report=None, provenance=prov,
        ), 0
    info = {}
    res = solve(basis, job.reduction_mode, int(job.memory_budget_mib), log, info=info)
    body = dict(
        **head, count=len(res.solutions), solutions=[s.to_json() for s in res.solutions],
        bound_report=res.report.to_json() if res.report is not None else None,
        provenance=provenance(job, sieve=info),
    )
    if job.mode == "fermat-check":
        verdict = fermat_check(K, res.solutions)
        body["fermat"] = verdict.to_json()
    return result_document(job.mode, **body), 0


def cli_main(argv=None) -> int:
    from .cli import main

    return main(argv)
