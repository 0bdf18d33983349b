"""Modular sieve for the S-unit equation and the final exact search.

Exponent vectors modulo m = q - 1 are encoded as integers
n = a0 + w * (a1 + m * (a2 + ...)), so every set of classes is a numpy array.
Residue field vectors are handled through discrete logarithms: the rfv of a
class is the vector D(a) = sum_i a_i dlog(rho_i mod q_j) in (Z/m)^d, and a
complement of a is any class b with D(b) = dlog(1 - g^D(a)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from flint import fmpz, nmod_poly

from .errors import DegenerateTau, HypothesisViolated, MemoryBudgetExceeded, SearchExhausted
from .nfield import FieldElement, NumberField, SUnitBasis, is_s_unit, prime_factors
from .places import exponent_vector

SCAN_CAP = 10**7
DEFAULT_BUDGET_MIB = 512
EXTRA_PRIMES = 3
HASH_SEED = 0x5EED


# ----------------------------------------------------------------------
# sieve primes
# ----------------------------------------------------------------------

@dataclass
class SievePrime:
    q: int
    roots: list[int]  # theta -> roots[j] defines the prime q_j
    g: int  # generator of F_q^*
    dlog: np.ndarray  # dlog[x] for x in 1..q-1 (dlog[0] = -1)
    logs: np.ndarray  # logs[i, j] = dlog(rho_i mod q_j), i = 0..t
    w: int
    t: int

    @property
    def m(self) -> int:
        return self.q - 1

    @property
    def size(self) -> int:
        """|A_{K,S,q-1}| = w (q-1)^t."""
        return self.w * self.m ** self.t

    def reduce(self, alpha: FieldElement) -> list[int]:
        """rfv_q(alpha) as residues in F_q."""
        return [_residue(alpha, self.q, r) for r in self.roots]


def _residue(alpha: FieldElement, q: int, r: int) -> int:
    acc = 0
    for c in reversed(alpha.coords):
        if c.denominator % q == 0:
            raise HypothesisViolated(f"{alpha} is not integral at {q}")
        acc = (acc * r + c.numerator * pow(c.denominator, -1, q)) % q
    return acc


def _next_prime(n: int) -> int:
    n += 1
    while not fmpz(n).is_prime():
        n += 1
    return n


def _primitive_root(q: int) -> int:
    fac = prime_factors(q - 1)
    g = 2
    while any(pow(g, (q - 1) // l, q) == 1 for l in fac):
        g += 1
    return g


def _split_roots(K: NumberField, q: int) -> list[int] | None:
    fbar = nmod_poly([int(c) for c in K.coeffs], q)
    if fbar.degree() != K.degree:
        return None
    _, facs = fbar.factor()
    if any(phi.degree() != 1 or e != 1 for phi, e in facs):
        return None
    return sorted(int(-phi.coeffs()[0]) % q for phi, e in facs)


def make_sieve_prime(basis: SUnitBasis, q: int) -> SievePrime:
    K = basis.field
    roots = _split_roots(K, q)
    if roots is None:
        raise HypothesisViolated(f"{q} does not split completely")
    g = _primitive_root(q)
    dlog = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        dlog[x] = k
        x = x * g % q
    logs = np.zeros((basis.t + 1, K.degree), dtype=np.int64)
    for i, rho in enumerate(basis.generators):
        for j, r in enumerate(roots):
            v = _residue(rho, q, r)
            if v == 0:
                raise HypothesisViolated(f"{q} does not avoid S")
            logs[i, j] = dlog[v]
    return SievePrime(q, roots, g, dlog, logs, basis.w, basis.t)


def _class_bytes(N: int, m: int, d: int, t: int) -> int:
    """Rough peak memory of build_E and the complement pairs for one prime.

    Each class has about |kernel of rfv| complements, and the image of rfv
    has at most m^min(d, t+1) elements.
    """
    image = m ** min(d, t + 1)
    kernel = max(1, N // image)
    return 8 * N * 8 + 40 * N * kernel


def _bad_primes(basis: SUnitBasis) -> set[int]:
    K = basis.field
    bad = set(prime_factors(abs(K.poly_discriminant))) | set(basis.S.rational_primes)
    for g in basis.generators:
        bad |= set(prime_factors(g.denominator()))
    return bad


def find_split_primes(basis: SUnitBasis, B: int, budget_mib: int = DEFAULT_BUDGET_MIB, extra: int = EXTRA_PRIMES) -> list[SievePrime]:
    """Completely split primes avoiding S with lcm(q - 1) >= 2B + 1.

    Primes are chosen greedily by log(cost) / log(lcm growth) with cost
    w (q-1)^t; a few extra cheap primes are added to strengthen the sieve.
    """
    if B < 1:
        raise HypothesisViolated("B must be at least 1")
    K = basis.field
    d, t, w = K.degree, basis.t, basis.w
    bad = _bad_primes(basis)
    budget = budget_mib * 2**20
    target = 2 * B + 1

    def admissible(q):
        return q not in bad and _split_roots(K, q) is not None

    def fits(q):
        return (q - 1) ** d < 2**62 and _class_bytes(w * (q - 1) ** t, q - 1, d, t) <= budget

    def gain(L, p):
        return (p - 1) // math.gcd(L, p - 1)

    pool: list[int] = []
    chosen: list[int] = []
    L, q, done = 1, 2, False
    while L < target:
        fresh = 0
        while fresh < 6 and not done:
            q = _next_prime(q)
            if q > SCAN_CAP or not fits(q):
                done = True
                break
            if admissible(q):
                pool.append(q)
                fresh += gain(L, q) > 1
        cands = [p for p in pool if p not in chosen and gain(L, p) > 1]
        if not cands:
            if q > SCAN_CAP:
                raise SearchExhausted("no completely split primes below the scan cap; try a smaller bound")
            raise MemoryBudgetExceeded("sieve primes large enough for this bound exceed the memory budget")
        need = target / L

        def score(p):
            cost = _class_bytes(w * (p - 1) ** t, p - 1, d, t)
            return math.log(cost) / math.log(min(gain(L, p), max(need, 1.5)))

        best = min(cands, key=lambda p: (score(p), p))
        chosen.append(best)
        L = L * gain(L, best)
    while sum(p not in chosen for p in pool) < extra and not done:
        q = _next_prime(q)
        if q > SCAN_CAP or not fits(q):
            break
        if admissible(q):
            pool.append(q)
    rest = sorted((p for p in pool if p not in chosen), key=lambda p: (_class_bytes(w * (p - 1) ** t, p - 1, d, t), p))
    chosen += rest[:extra]
    return [make_sieve_prime(basis, p) for p in chosen]


# ----------------------------------------------------------------------
# residue field vectors and E-sets
# ----------------------------------------------------------------------

def decode(sp: SievePrime, n: np.ndarray) -> np.ndarray:
    """Class indices -> exponent vectors (rows a0, a1..at)."""
    n = np.asarray(n, dtype=np.int64)
    out = np.zeros((len(n), sp.t + 1), dtype=np.int64)
    out[:, 0] = n % sp.w
    rest = n // sp.w
    for i in range(1, sp.t + 1):
        out[:, i] = rest % sp.m
        rest //= sp.m
    return out


def encode(sp: SievePrime, a: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    n = np.zeros(len(a), dtype=np.int64)
    for i in range(sp.t, 0, -1):
        n = n * sp.m + a[:, i] % sp.m
    return n * sp.w + a[:, 0] % sp.w


def _dlog_vectors(sp: SievePrime, a: np.ndarray) -> np.ndarray:
    """D(a) in (Z/m)^d for exponent rows a (any lift)."""
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    red = a.copy()
    red[:, 0] %= sp.w
    red[:, 1:] %= sp.m
    return (red @ sp.logs) % sp.m


def rfv(a: Sequence[int], sp: SievePrime) -> list[int]:
    """Residue field vector of the class of a (exponents mod q - 1)."""
    D = _dlog_vectors(sp, np.array([list(a)]))[0]
    return [pow(sp.g, int(x), sp.q) for x in D]


def _keys(sp: SievePrime, D: np.ndarray) -> np.ndarray:
    k = np.zeros(D.shape[0], dtype=np.int64)
    for j in range(D.shape[1] - 1, -1, -1):
        k = k * sp.m + D[:, j]
    return k


@dataclass
class ResidueClassSet:
    """E_{K,S}(q - 1) with complement links.

    members: sorted class indices of E; pairs (pa, pb): every (a, b) with
    a, b in E and b a (q-1)-complement of a.
    """

    sp: SievePrime
    members: np.ndarray
    pa: np.ndarray
    pb: np.ndarray

    def __len__(self):
        return len(self.members)

    def vectors(self) -> np.ndarray:
        return decode(self.sp, self.members)


def build_E(sp: SievePrime, budget_mib: int = DEFAULT_BUDGET_MIB) -> ResidueClassSet:
    N = sp.size
    if _class_bytes(N, sp.m, len(sp.roots), sp.t) > budget_mib * 2**20:
        raise MemoryBudgetExceeded(f"E-set for q = {sp.q} needs more than {budget_mib} MiB")
    m, d = sp.m, len(sp.roots)
    # D(n) accumulated column by column to keep memory linear in N
    n = np.arange(N, dtype=np.int64)
    coords = decode(sp, n)
    key = np.zeros(N, dtype=np.int64)
    tkey = np.zeros(N, dtype=np.int64)
    valid = np.ones(N, dtype=bool)
    # complement of x in dlog form: dlog(1 - g^x); undefined for x = 0
    gpow = np.array([pow(sp.g, k, sp.q) for k in range(m)], dtype=np.int64)
    comp = sp.dlog[(1 - gpow) % sp.q]
    for j in range(d - 1, -1, -1):
        Dj = (coords @ sp.logs[:, j]) % m
        valid &= Dj != 0
        key = key * m + Dj
        tkey = tkey * m + np.where(Dj != 0, comp[Dj], 0)
    del coords
    order = np.argsort(key, kind="stable")
    skey = key[order]
    lo = np.searchsorted(skey, tkey, side="left")
    hi = np.searchsorted(skey, tkey, side="right")
    cnt = np.where(valid, hi - lo, 0)
    members = np.nonzero(cnt > 0)[0]
    total = int(cnt.sum())
    if total * 16 > budget_mib * 2**20:
        raise MemoryBudgetExceeded(f"complement pairs for q = {sp.q} exceed the budget")
    pa = np.repeat(members, cnt[members])
    starts = np.repeat(lo[members], cnt[members])
    offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt[members]) - cnt[members], cnt[members])
    pb = order[starts + offs]
    return ResidueClassSet(sp, members, pa, pb)


# ----------------------------------------------------------------------
# the sieve
# ----------------------------------------------------------------------

def _reduced_class(sp: SievePrime, n: np.ndarray, g: int) -> np.ndarray:
    """Index of (a0, a mod g) for classes n modulo q - 1 (g | q - 1)."""
    a = decode(sp, n)
    out = np.zeros(len(n), dtype=np.int64)
    for i in range(sp.t, 0, -1):
        out = out * g + a[:, i] % g
    return out * sp.w + a[:, 0]


def _pair_keys(sp: SievePrime, pa: np.ndarray, pb: np.ndarray, g: int) -> np.ndarray:
    size = sp.w * g ** sp.t
    red = _reduced_class(sp, np.arange(sp.size, dtype=np.int64), g)
    return red[pa] * size + red[pb]


LOOKUP_CAP = 1 << 26


def _member(keys: np.ndarray, present: np.ndarray, size: int) -> np.ndarray:
    """keys in present, via a bitmap when the key space is small."""
    if size <= LOOKUP_CAP:
        table = np.zeros(size, dtype=bool)
        table[present] = True
        return table[keys]
    return np.isin(keys, present)


def run_sieve(E: Sequence[ResidueClassSet], log=None) -> list[np.ndarray]:
    """Fixed-point pruning of the sets Y_i (returned as sorted class indices).

    a_i is removed when no complement of it remains in Y_i, or when for some
    j != i no member of Y_j is complement compatible with it.  Compatibility
    is equality of the torsion coordinate and agreement of the free
    coordinates modulo gcd(q_i - 1, q_j - 1).
    """
    k = len(E)
    alive = []
    for e in E:
        mask = np.zeros(e.sp.size, dtype=bool)
        mask[e.members] = True
        alive.append(mask)
    keys: dict = {}

    def pair_keys(i, g):
        if (i, g) not in keys:
            keys[(i, g)] = _pair_keys(E[i].sp, E[i].pa, E[i].pb, g)
        return keys[(i, g)]

    rounds = 0
    while True:
        rounds += 1
        changed = False
        for i in range(k):
            e = E[i]
            live = alive[i][e.pa] & alive[i][e.pb]
            new = np.zeros(e.sp.size, dtype=bool)
            new[e.pa[live]] = True
            for j in range(k):
                if j == i or not new.any():
                    continue
                g = math.gcd(e.sp.m, E[j].sp.m)
                size = (E[j].sp.w * g ** E[j].sp.t) ** 2
                f = E[j]
                live_j = alive[j][f.pa] & alive[j][f.pb]
                present = pair_keys(j, g)[live_j]
                if size > LOOKUP_CAP:
                    present = np.unique(present)
                ok = live & _member(pair_keys(i, g), present, size)
                hit = np.zeros(e.sp.size, dtype=bool)
                hit[e.pa[ok]] = True
                new &= hit
            if new.sum() < alive[i].sum():
                changed = True
            alive[i] = new
        if log:
            log(f"sieve round {rounds}: sizes {[int(a.sum()) for a in alive]}")
        if not changed:
            return [np.nonzero(a)[0] for a in alive]


# ----------------------------------------------------------------------
# lifting and exact verification
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionPair:
    """An unordered solution {tau1, tau2} of x + y = 1 with exponent vectors."""

    tau1: FieldElement
    tau2: FieldElement
    b1: tuple[int, ...]
    b2: tuple[int, ...]

    def key(self):
        return (self.tau1.coords, self.tau2.coords)

    def to_json(self) -> dict:
        return {
            "tau1": [str(c) for c in self.tau1.coords],
            "tau2": [str(c) for c in self.tau2.coords],
            "b1": list(self.b1),
            "b2": list(self.b2),
        }


def _canonical(x: FieldElement) -> tuple:
    return tuple(x.coords)


def make_pair(basis: SUnitBasis, tau: FieldElement, a=None) -> SolutionPair:
    eta = basis.field.one() - tau
    if tau.is_zero() or eta.is_zero():
        raise DegenerateTau("0 and 1 are not S-units")
    if not (is_s_unit(tau, basis.S) and is_s_unit(eta, basis.S)):
        raise HypothesisViolated("not a solution")
    ea = list(a) if a is not None else exponent_vector(basis, tau)
    eb = exponent_vector(basis, eta)
    if _canonical(eta) < _canonical(tau):
        tau, eta, ea, eb = eta, tau, eb, ea
    return SolutionPair(tau, eta, tuple(int(x) for x in ea), tuple(int(x) for x in eb))


def _smooth(n: int, primes: Sequence[int]) -> bool:
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


def check_candidate(basis: SUnitBasis, a: Sequence[int]) -> FieldElement | None:
    """tau = Phi_rho(a) when 1 - tau is an S-unit (exact), else None."""
    tau = basis.phi(a)
    eta = basis.field.one() - tau
    if eta.is_zero():
        return None
    N = eta.norm()
    primes = basis.S.rational_primes
    if not (_smooth(N.numerator, primes) and _smooth(N.denominator, primes)):
        return None
    if not is_s_unit(eta, basis.S):
        return None
    return tau


def _crt_join(a0, R, M, sp: SievePrime, Y: np.ndarray):
    """Join partial lifts (a0, R mod M) with the classes Y modulo m = q - 1."""
    m = sp.m
    g = math.gcd(M, m)
    Ya = decode(sp, Y)
    t = sp.t
    # keys: (a0, residues mod g)
    def key(a0s, res):
        k = np.zeros(len(a0s), dtype=np.int64)
        for i in range(t - 1, -1, -1):
            k = k * g + res[:, i] % g
        return k * sp.w + a0s

    kY = key(Ya[:, 0], Ya[:, 1:])
    order = np.argsort(kY, kind="stable")
    skY = kY[order]
    kP = key(a0, R)
    lo = np.searchsorted(skY, kP, side="left")
    hi = np.searchsorted(skY, kP, side="right")
    cnt = hi - lo
    total = int(cnt.sum())
    idxP = np.repeat(np.arange(len(a0)), cnt)
    offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    idxY = order[np.repeat(lo, cnt) + offs]
    L = M // g * m
    r1 = R[idxP]
    r2 = Ya[idxY, 1:]
    Mg, mg = M // g, m // g
    inv = pow(Mg, -1, mg) if mg > 1 else 0
    k = ((r2 - r1) // g % mg) * inv % mg if mg > 1 else np.zeros_like(r1)
    newR = (r1 + M * k) % L
    return a0[idxP], newR, L


def lift_and_enumerate(basis: SUnitBasis, Y: Sequence[np.ndarray], sps: Sequence[SievePrime], B: int, log=None) -> list[SolutionPair]:
    """CRT-lift the surviving classes to exponent vectors with |a_i| <= B and verify.

    Only the exponent vector of tau is bounded here; its complement is
    checked exactly.
    """
    if any(len(y) == 0 for y in Y):
        return []
    L = 1
    for sp in sps:
        L = L * sp.m // math.gcd(L, sp.m)
    if L < 2 * B + 1:
        raise HypothesisViolated("lcm(q - 1) < 2B + 1")
    # process primes so that the partial lcm grows fast
    order = sorted(range(len(sps)), key=lambda i: len(Y[i]))
    first = order[0]
    A0 = decode(sps[first], Y[first])
    a0, R, M = A0[:, 0], A0[:, 1:], sps[first].m
    lifted = False
    for i in order[1:]:
        if not lifted:
            a0, R, M = _crt_join(a0, R, M, sps[i], Y[i])
            if M >= 2 * B + 1:
                # unique representative in [-B, B] per coordinate
                R = np.where(R > B, R - M, R)
                ok = np.all(R >= -B, axis=1)
                a0, R = a0[ok], R[ok]
                lifted = True
        else:
            sp = sps[i]
            full = np.concatenate([a0[:, None], R], axis=1)
            ok = np.isin(encode(sp, full), Y[i])
            a0, R = a0[ok], R[ok]
        if log:
            log(f"lift: {len(a0)} partial candidates, modulus {M}")
    if not lifted:
        R = np.where(R > B, R - M, R)
        ok = np.all(R >= -B, axis=1)
        a0, R = a0[ok], R[ok]
    return _verify(basis, np.concatenate([a0[:, None], R], axis=1))


def _verify(basis: SUnitBasis, cands) -> list[SolutionPair]:
    out: dict = {}
    for a in (list(map(int, r)) for r in cands):
        tau = check_candidate(basis, a)
        if tau is not None:
            pair = make_pair(basis, tau, a)
            out[pair.key()] = pair
    return sorted(out.values(), key=lambda p: p.key())


BOX_CAP = 2 * 10**9
CHUNK = 1 << 20


def _box_rows(w: int, t: int, B: int, lo: int, hi: int | None = None) -> np.ndarray:
    """Exponent vectors with box index lo..hi-1, or at an index array lo."""
    n = np.arange(lo, hi, dtype=np.int64) if hi is not None else np.array(lo, dtype=np.int64)
    out = np.empty((len(n), t + 1), dtype=np.int64)
    out[:, 0] = n % w
    n //= w
    side = 2 * B + 1
    for i in range(1, t + 1):
        out[:, i] = n % side - B
        n //= side
    return out


def _signatures(A: np.ndarray, sps: Sequence[SievePrime], masks, mults):
    """Membership in every Y_i plus hashes of rfv(tau) and rfv(1 - tau)."""
    keep = np.ones(len(A), dtype=bool)
    hf = np.zeros(len(A), dtype=np.uint64)
    hc = np.zeros(len(A), dtype=np.uint64)
    for sp, mask, (comp, R) in zip(sps, masks, mults):
        keep &= mask[encode(sp, A)]
        red = A.copy()
        red[:, 0] %= sp.w
        red[:, 1:] %= sp.m
        D = (red @ sp.logs) % sp.m
        keep &= np.all(D != 0, axis=1)
        for j in range(D.shape[1]):
            hf += D[:, j].astype(np.uint64) * R[j]
            hc += comp[D[:, j]].astype(np.uint64) * R[j]
    return keep, hf, hc


def box_search(basis: SUnitBasis, Y: Sequence[np.ndarray], sps: Sequence[SievePrime], B: int, budget_mib: int = DEFAULT_BUDGET_MIB, log=None, one_sided: bool = False) -> list[SolutionPair]:
    """Meet-in-the-middle search over the box |a_i| <= B.

    A solution (tau, 1 - tau) with both exponent vectors a, b in the box has
    rfv_q(1 - tau) = rfv_q(rho^b) at every sieve prime, so the complement
    signature of a equals the forward signature of b.  Box elements outside
    pi_Q^{-1}(prod Y_i) are dropped first; matching signatures are then
    verified exactly (hash collisions only cost a wasted check).  With
    one_sided=True only tau is bounded and every survivor is checked.
    """
    w, t = basis.w, basis.t
    N = w * (2 * B + 1) ** t
    masks = []
    for sp, y in zip(sps, Y):
        mk = np.zeros(sp.size, dtype=bool)
        mk[y] = True
        masks.append(mk)
    rng = np.random.default_rng(HASH_SEED)
    mults = []
    for sp in sps:
        gpow = np.array([pow(sp.g, k, sp.q) for k in range(sp.m)], dtype=np.int64)
        comp = sp.dlog[(1 - gpow) % sp.q]
        comp[0] = 0
        R = rng.integers(1, 2**63, size=len(sp.roots), dtype=np.int64).astype(np.uint64) | np.uint64(1)
        mults.append((comp, R))
    # survivors are kept as (hash, index) twice; partition by hash if needed
    passes = max(1, -(-24 * N // (budget_mib * 2**20)))
    found = set()
    if one_sided:
        for lo in range(0, N, CHUNK):
            hi = min(N, lo + CHUNK)
            keep, _, _ = _signatures(_box_rows(w, t, B, lo, hi), sps, masks, mults)
            found.update(np.nonzero(keep)[0] + lo)
        passes = 0
        if log:
            log(f"box scan: {len(found)} one-sided candidates")
    for p in range(passes):
        F_h, F_i, C_h, C_i = [], [], [], []
        for lo in range(0, N, CHUNK):
            hi = min(N, lo + CHUNK)
            keep, hf, hc = _signatures(_box_rows(w, t, B, lo, hi), sps, masks, mults)
            idx = np.arange(lo, hi, dtype=np.int64)
            if passes > 1:
                kf = keep & (hf % np.uint64(passes) == p)
                kc = keep & (hc % np.uint64(passes) == p)
            else:
                kf = kc = keep
            F_h.append(hf[kf]); F_i.append(idx[kf])
            C_h.append(hc[kc]); C_i.append(idx[kc])
        fh, fi = np.concatenate(F_h), np.concatenate(F_i)
        ch, ci = np.concatenate(C_h), np.concatenate(C_i)
        order = np.argsort(fh, kind="stable")
        fh = fh[order]
        hit = np.searchsorted(fh, ch, side="right") > np.searchsorted(fh, ch, side="left")
        found.update(ci[hit].tolist())
        if log:
            log(f"box pass {p + 1}/{passes}: {len(fi)} survivors, {int(hit.sum())} matches")
    cands = _box_rows(w, t, B, sorted(found))
    return _verify(basis, cands)


def _enumerate_torsion(basis: SUnitBasis) -> list[SolutionPair]:
    out = {}
    for k in range(basis.w):
        tau = check_candidate(basis, [k])
        if tau is not None:
            pair = make_pair(basis, tau, [k])
            out[pair.key()] = pair
    return sorted(out.values(), key=lambda p: p.key())


def sieve_below_bound(basis: SUnitBasis, B: int, budget_mib: int = DEFAULT_BUDGET_MIB, log=None, one_sided: bool = False, info: dict | None = None) -> list[SolutionPair]:
    """All solutions {tau, 1 - tau} whose exponent vectors satisfy |a_i| <= B (i >= 1).

    Both exponent vectors are bounded unless one_sided, in which case every
    solution with tau in the box is returned.
    """
    if basis.t == 0:
        return _enumerate_torsion(basis)
    B = max(int(B), 1)
    sps = find_split_primes(basis, B, budget_mib)
    if log:
        log(f"sieve primes {[sp.q for sp in sps]}")
    E = [build_E(sp, budget_mib) for sp in sps]
    if log:
        log(f"E sizes {[len(e) for e in E]} of {[sp.size for sp in sps]}")
    Y = run_sieve(E, log)
    if info is not None:
        info.update(
            bound=B,
            sieve_primes=[sp.q for sp in sps],
            E_sizes=[len(e) for e in E],
            Y_sizes=[len(y) for y in Y],
        )
    if basis.w * (2 * B + 1) ** basis.t <= BOX_CAP:
        return box_search(basis, Y, sps, B, budget_mib, log, one_sided)
    sols = lift_and_enumerate(basis, Y, sps, B, log)
    if one_sided:
        return sols
    return [s for s in sols if max(map(abs, s.b1[1:])) <= B and max(map(abs, s.b2[1:])) <= B]


# ----------------------------------------------------------------------
# solution cycles and the full solve
# ----------------------------------------------------------------------

def solution_cycle(tau: FieldElement) -> list[FieldElement]:
    """The orbit {tau, 1-tau, 1/tau, 1-1/tau, 1/(1-tau), 1-1/(1-tau)}."""
    one = tau.K.one()
    if tau.is_zero() or tau == one:
        raise DegenerateTau("tau must not be 0 or 1")
    eta = one - tau
    cands = [tau, eta, one / tau, one - one / tau, one / eta, one - one / eta]
    out = []
    for c in cands:
        if c not in out:
            out.append(c)
    return out


def close_under_cycles(basis: SUnitBasis, pairs: Sequence[SolutionPair]) -> list[SolutionPair]:
    out = {p.key(): p for p in pairs}
    for p in list(pairs):
        for c in solution_cycle(p.tau1):
            q = make_pair(basis, c)
            out.setdefault(q.key(), q)
    return sorted(out.values(), key=lambda p: p.key())


@dataclass
class SolveResult:
    solutions: list[SolutionPair]
    report: object
    reduction: object = None
    bound: int = 0
    notes: list[str] = field(default_factory=list)


def solve(basis: SUnitBasis, mode: str = "both", budget_mib: int = DEFAULT_BUDGET_MIB, log=None, info: dict | None = None) -> SolveResult:
    """The complete solution set X_{K,S} as unordered pairs with its bound report.

    mode "both" searches the box of the bound B1 (both exponent vectors
    bounded); "infinite-only" (one finite place in S) searches the smaller
    box of B2 for one member of every solution cycle and closes under cycles.
    """
    from .bounds import initial_bound
    from .reduce import reduced_bound

    if basis.t == 0:
        return SolveResult(_enumerate_torsion(basis), None, None, 0)
    report = initial_bound(basis)
    state = reduced_bound(basis, report, mode=mode, log=log)
    B = int(state.B_final)
    report.reduced = {"B1" if mode == "both" else "B2": state.to_json()}
    if mode == "both":
        report.B1 = B
    else:
        report.B2 = B
    report.B_final = B
    report.mode = mode
    sols = sieve_below_bound(basis, B, budget_mib, log, one_sided=(mode == "infinite-only"), info=info)
    if mode == "infinite-only":
        sols = close_under_cycles(basis, sols)
    return SolveResult(sols, report, state, B)
