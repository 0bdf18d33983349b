"""Generators of the S-unit group for small fields.

The search collects S-units among small elements of O_K and of the prime
ideals in S, combines them into a basis of the group they generate (exact
relations only), and then proves that this group is the full S-unit group:
its index is bounded through Friedman's regulator lower bound and every prime
below that bound is ruled out by a p-saturation test.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np
from flint import acb, acb_mat, arb, arb_mat, fmpz, fmpz_mat, nmod_poly

from . import numerics as nm
from .errors import CapTooSmall, SearchExhausted
from .lll import integer_lll
from .nfield import FieldElement, NumberField, SUnitBasis, prime_factors
from .places import (
    PlaceSet,
    fp_nullspace,
    infinite_places,
    log_abs_value,
    primes_above,
    roots_of_unity,
    valuation,
)

FRIEDMAN_REGULATOR_LB = 0.2052
RELATION_DENOMINATOR_CAP = 64


# ----------------------------------------------------------------------
# integer linear algebra
# ----------------------------------------------------------------------

def hnf_with_transform(R: Sequence[Sequence[int]]):
    """Row-style Hermite form H = U R with U unimodular (small matrices)."""
    H = [[int(x) for x in row] for row in R]
    m = len(H)
    n = len(H[0]) if H else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        # gcd-combine column c into row r
        for i in range(r + 1, m):
            while H[i][c]:
                q = H[r][c] // H[i][c]
                H[r] = [a - q * b for a, b in zip(H[r], H[i])]
                U[r] = [a - q * b for a, b in zip(U[r], U[i])]
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
        if r < m and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
            if r == m:
                break
    return H, U


def integer_kernel(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of {e : sum_i e_i M_i = 0} (rows of M indexed by i)."""
    m = len(M)
    if m == 0:
        return []
    k = len(M[0])
    rows = [list(M[i]) + [int(i == j) for j in range(m)] for i in range(m)]
    if k == 0:
        return [r[k:] for r in rows]
    H = fmpz_mat(rows).hnf()
    out = []
    for i in range(m):
        r = [int(H[i, j]) for j in range(k + m)]
        if not any(r[:k]) and any(r[k:]):
            out.append(r[k:])
    return out


# ----------------------------------------------------------------------
# group bookkeeping
# ----------------------------------------------------------------------

def _power_product(K: NumberField, gens: Sequence[FieldElement], exps: Sequence[int]) -> FieldElement:
    out = K.one()
    for g, e in zip(gens, exps):
        if e:
            out = out * g ** int(e)
    return out


def _is_torsion(alpha: FieldElement, w: int) -> bool:
    return alpha ** w == alpha.K.one()


class _GroupBuilder:
    """Basis of the subgroup (mod torsion) generated by the S-units added so far."""

    def __init__(self, K: NumberField, S: PlaceSet, w: int):
        self.K = K
        self.S = S
        self.w = w
        self.gens: list[FieldElement] = []
        self.vecs = np.zeros((0, len(S.places)))

    @property
    def rank(self) -> int:
        return len(self.gens)

    def log_vector(self, alpha: FieldElement, vals=None) -> np.ndarray:
        out = []
        for P in self.S.finite:
            v = vals[P] if vals is not None else valuation(alpha, P)
            out.append(-v * P.f * math.log(P.p))
        for v in self.S.infinite:
            z = abs(v.embed(alpha, 64))
            out.append(float(z.log().mid()) * v.delta)
        return np.array(out)

    def add(self, alpha: FieldElement, vec: np.ndarray) -> bool:
        """Add an S-unit; returns True when the group grew."""
        if np.max(np.abs(vec)) < 1e-9:
            return False
        if self.rank == 0:
            self.gens.append(alpha)
            self.vecs = vec[None, :]
            return True
        A = self.vecs.T
        x, *_ = np.linalg.lstsq(A, vec, rcond=None)
        resid = np.max(np.abs(A @ x - vec))
        scale = max(1.0, float(np.max(np.abs(vec))))
        if resid > 1e-7 * scale:
            self.gens.append(alpha)
            self.vecs = np.vstack([self.vecs, vec])
            return True
        for m in range(1, RELATION_DENOMINATOR_CAP + 1):
            a = np.rint(m * x)
            if np.max(np.abs(m * x - a)) < 1e-6 * max(1.0, m * float(np.max(np.abs(x)))):
                break
        else:
            return False
        if m == 1:
            return False
        a = [int(v) for v in a]
        g = math.gcd(m, *a)
        m, a = m // g, [v // g for v in a]
        if m == 1:
            return False
        rel = alpha**m / _power_product(self.K, self.gens, a)
        if not _is_torsion(rel, self.w):
            return False
        self.extend_by_root(alpha, a, m, vec)
        return True

    def extend_by_root(self, alpha: FieldElement, a: list[int], m: int, vec: np.ndarray) -> None:
        """Replace the basis by one of <gens, alpha> where alpha^m ~ prod gens^a."""
        r = self.rank
        rows = [[m * int(i == j) for j in range(r)] for i in range(r)] + [list(a)]
        H, U = hnf_with_transform(rows)
        allg = self.gens + [alpha]
        allv = np.vstack([self.vecs, vec])
        new_g, new_v = [], []
        for i in range(r):
            if not any(H[i]):
                continue
            new_g.append(_power_product(self.K, allg, U[i]))
            new_v.append(np.array(U[i], dtype=float) @ allv)
        self.gens = new_g
        self.vecs = np.array(new_v)


# ----------------------------------------------------------------------
# small elements
# ----------------------------------------------------------------------

def _embedding_matrix(K: NumberField, basis_coords: Sequence[Sequence[int]]) -> np.ndarray:
    """Complex conjugates (all d of them) of the elements with the given order coordinates."""
    roots = K.all_conjugate_roots(64)
    elems = [K.from_order_coords(c) for c in basis_coords]
    return np.array([[complex(e.evaluate(z).mid()) for z in roots] for e in elems])


def _lll_reduce_for_t2(K: NumberField, basis_coords: list[list[int]]) -> list[list[int]]:
    """LLL-reduce a lattice of elements of O (order coordinates) for the T2 norm."""
    E = _embedding_matrix(K, basis_coords)
    r, s = K.signature
    d = K.degree
    real = []
    for row in E:
        v = [row[i].real for i in range(r)]
        for j in range(s):
            z = row[r + j]
            v += [math.sqrt(2) * z.real, math.sqrt(2) * z.imag]
        real.append(v)
    scale = 2.0 ** 40 / max(1.0, max(abs(x) for v in real for x in v))
    ints = [[int(round(x * scale)) for x in v] for v in real]
    try:
        _, U = integer_lll(ints, transform=True)
    except Exception:
        return basis_coords
    out = []
    for urow in U:
        out.append([sum(u * b[k] for u, b in zip(urow, basis_coords)) for k in range(d)])
    return out


def _ideal_lattice(P) -> list[list[int]]:
    """Z-basis (order coordinates) of the prime ideal P."""
    K = P.field
    n = K.degree
    gens = [[P.p * int(i == j) for j in range(n)] for i in range(n)] + [list(r) for r in P.ideal_mod_p]
    H = fmpz_mat(gens).hnf()
    return [[int(H[i, j]) for j in range(n)] for i in range(H.nrows()) if any(H[i, j] for j in range(n))]


def _smooth_part(n: int, primes: Sequence[int]) -> int:
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def _box_search(K: NumberField, lattice: list[list[int]], radius: int, primes: Sequence[int], cap: int):
    """Elements sum c_i b_i with |c_i| <= radius whose norm is supported on primes."""
    d = K.degree
    E = _embedding_matrix(K, lattice)
    rng = np.arange(-radius, radius + 1)
    total = (2 * radius + 1) ** d
    if total > cap:
        return []
    C = np.array(list(itertools.product(rng, repeat=d)), dtype=np.int64)
    # keep one of each pair +-c
    first = np.argmax(C != 0, axis=1)
    lead = C[np.arange(len(C)), first]
    C = C[(lead > 0)]
    vals = C @ E
    norms = np.prod(vals, axis=1).real
    t2 = np.sum(np.abs(vals) ** 2, axis=1)
    ok = (np.abs(norms) > 0.5) & (np.abs(norms) < 1e13)
    out = []
    for idx in np.nonzero(ok)[0]:
        N = int(round(norms[idx]))
        if N == 0 or _smooth_part(abs(N), primes) != 1:
            continue
        out.append((float(t2[idx]), tuple(int(x) for x in C[idx])))
    out.sort()
    res = []
    for _, c in out:
        coords = [sum(ci * b[k] for ci, b in zip(c, lattice)) for k in range(d)]
        res.append(K.from_order_coords(coords))
    return res


# ----------------------------------------------------------------------
# saturation
# ----------------------------------------------------------------------

def _residue_map(K: NumberField, q: int, r: int):
    """alpha -> alpha(r) mod q for the degree-one prime (q, theta - r)."""

    def ev(alpha: FieldElement):
        acc = 0
        for c in reversed(alpha.coords):
            if c.denominator % q == 0:
                return None
            acc = (acc * r + c.numerator * pow(c.denominator, -1, q)) % q
        return acc

    return ev


def _character_rows(K: NumberField, elems: Sequence[FieldElement], p: int, avoid: set[int], want: int, start: int = 2):
    """Rows (chi(elem_i))_i of p-th power residue characters at degree-one primes."""
    rows = []
    q = start
    bad = set(avoid) | set(prime_factors(abs(K.poly_discriminant))) | set(prime_factors(K.index))
    while len(rows) < want:
        q += 1
        if q % p != 1 or not fmpz(q).is_prime() or q in bad:
            continue
        fbar = nmod_poly([int(c) for c in K.coeffs], q)
        _, facs = fbar.factor()
        roots = [int(-phi.coeffs()[0]) % q for phi, e in facs if phi.degree() == 1 and e == 1]
        if not roots:
            continue
        # a generator of mu_p in F_q and its dlog table
        g = 2
        while pow(g, (q - 1) // p, q) == 1:
            g += 1
        z = pow(g, (q - 1) // p, q)
        table = {pow(z, k, q): k for k in range(p)}
        for r in roots:
            ev = _residue_map(K, q, r)
            row = []
            for a in elems:
                x = ev(a)
                if x is None or x == 0:
                    row = None
                    break
                row.append(table[pow(x, (q - 1) // p, q)])
            if row is not None:
                rows.append(row)
    return rows, q


def nth_root(beta_gens: Sequence[FieldElement], exps: Sequence[int], p: int, S: PlaceSet) -> FieldElement | None:
    """A p-th root in K of beta = prod g^e, or None if there is none."""
    K = S.field
    beta = _power_product(K, beta_gens, exps)
    # valuations must be divisible by p; use them to clear denominators of the root
    c = 1
    for P in S.finite:
        v = valuation(beta, P)
        if v % p:
            return None
        if v < 0:
            k = -(v // p)
            c *= P.p ** (-(-k // P.e))
    d = K.degree
    r, s = K.signature
    prec = 128 + sum(abs(e) for e in exps) * 8
    roots = K.all_conjugate_roots(prec)
    with nm.precision(prec):
        logs = []
        signs = []
        for z in roots[: r + s]:
            acc = 0
            neg = 0
            for g, e in zip(beta_gens, exps):
                if e:
                    gz = g.evaluate(z)
                    if gz.imag.contains(0) and gz.real < 0:
                        # branch cut: log(-gz) + i pi is as good as any branch
                        acc += e * ((-gz).log() + acb(0, 1) * arb.pi())
                        neg += e
                    else:
                        acc += e * gz.log()
            logs.append(acc)
            signs.append(-1 if neg % 2 else 1)
        base = [(lg / p).exp() * c for lg in logs]
        two_pi = 2 * arb.pi()
        choices = []
        for i in range(r):
            # real place: the real p-th root of the (real) conjugate
            mag = (logs[i].real / p).exp() * c
            if p == 2:
                choices.append([acb(mag), acb(-mag)])
            else:
                choices.append([acb(signs[i] * mag)])
        for j in range(s):
            zs = []
            for k in range(p):
                zs.append(base[r + j] * acb(0, two_pi * k / p).exp())
            choices.append(zs)
        V = acb_mat(d, d, [K.order_basis[i].evaluate(roots[j]) for j in range(d) for i in range(d)])
        W = V.inv()
    count = 1
    for ch in choices:
        count *= len(ch)
    if count > 200000:
        raise SearchExhausted("too many branch choices for an exact p-th root test")
    idx_lists = [range(len(ch)) for ch in choices]
    target = beta * K(c) ** p
    for pick in itertools.product(*idx_lists):
        vals = []
        for i in range(r):
            vals.append(choices[i][pick[i]])
        conj = []
        for j in range(s):
            z = choices[r + j][pick[r + j]]
            vals.append(z)
            conj.append(z.conjugate())
        vals = vals + conj
        with nm.precision(prec):
            coords = []
            okay = True
            for i in range(d):
                acc = 0
                for j in range(d):
                    acc += W[j, i] * vals[j]
                n = acc.real.mid()
                n = int(round(float(n))) if abs(float(n)) < 2**50 else None
                if n is None or not (abs(acc.real - n) < arb("0.25")) or not (abs(acc.imag) < arb("0.25")):
                    okay = False
                    break
                coords.append(n)
        if not okay:
            continue
        gamma = K.from_order_coords(coords)
        if gamma ** p == target:
            return gamma / c
    return None


def saturate(K: NumberField, S: PlaceSet, rho0: FieldElement, w: int, gens: list[FieldElement], p: int, log=None) -> list[FieldElement]:
    """Make the group <rho0, gens> p-saturated in K* (returns new generators)."""
    while True:
        elems = list(gens)
        use_torsion = w % p == 0
        if use_torsion:
            elems = [rho0] + elems
        n = len(elems)
        rows = []
        # valuations and (for p = 2) real signs are characters too
        for P in S.finite:
            rows.append([valuation(e, P) % p for e in elems])
        if p == 2:
            for v in S.infinite:
                if v.real:
                    rows.append([0 if float(v.embed(e, 64).real.mid()) > 0 else 1 for e in elems])
        q = 2
        ker = fp_nullspace(rows, n, p) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
        rounds = 0
        avoid = set(S.rational_primes) | {p}
        while ker and rounds < 12:
            rounds += 1
            new, q = _character_rows(K, elems, p, avoid, n + 4, q)
            rows.extend(new)
            ker = fp_nullspace(rows, n, p)
            if ker and rounds >= 2 and len(ker) <= 2:
                break
        if not ker:
            return gens
        found = None
        for v in ker:
            root = nth_root(elems, v, p, S)
            if root is not None:
                found = (v, root)
                break
        if found is None:
            # characters have not separated yet: keep going with more primes
            more, q = _character_rows(K, elems, p, avoid, 10 * n + 40, q)
            rows.extend(more)
            if not fp_nullspace(rows, n, p):
                return gens
            raise SearchExhausted(f"could not decide {p}-saturation")
        v, root = found
        if log:
            log(f"saturation: found a {p}-th root")
        # root^p = prod elems^v (up to nothing); update the free part
        free_v = v[1:] if use_torsion else v
        b = _GroupBuilder(K, S, w)
        b.gens = list(gens)
        b.vecs = np.array([b.log_vector(g) for g in gens])
        b.extend_by_root(root, list(free_v), p, b.log_vector(root))
        gens = b.gens


def _regulator_upper(K: NumberField, units: list[FieldElement]) -> float:
    r, s = K.signature
    ru = r + s - 1
    if ru == 0:
        return 1.0
    places = infinite_places(K)[:ru]
    with nm.precision(128):
        M = arb_mat([[log_abs_value(u, v, 128) for u in units] for v in places])
        return float(nm.upper(abs(M.det())))


def index_bound(K: NumberField, S: PlaceSet, gens: list[FieldElement]) -> int:
    """Upper bound for [O_S^* : <torsion, gens>]."""
    V = [[valuation(g, P) for P in S.finite] for g in gens]
    detV = 1
    if S.finite:
        H = fmpz_mat(V).hnf()
        rows = [[int(H[i, j]) for j in range(len(S.finite))] for i in range(H.nrows())]
        rows = [r for r in rows if any(r)]
        if len(rows) != len(S.finite):
            raise CapTooSmall("valuation image has deficient rank")
        detV = abs(int(fmpz_mat(rows).det()))
    ker = integer_kernel(V) if S.finite else [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
    units = [_power_product(K, gens, e) for e in ker]
    r, s = K.signature
    if r + s - 1 == 0:
        return detV
    reg = _regulator_upper(K, units)
    return int(math.floor(detV * reg / FRIEDMAN_REGULATOR_LB)) + 1


def _primes_upto(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if fmpz(q).is_prime()]


def reduce_generators(K: NumberField, S: PlaceSet, gens: list[FieldElement]) -> list[FieldElement]:
    """LLL on the log vectors: a unimodular change to smaller generators."""
    if len(gens) < 2:
        return gens
    b = _GroupBuilder(K, S, 2)
    vecs = [b.log_vector(g) for g in gens]
    scale = 2.0 ** 30 / max(1.0, max(float(np.max(np.abs(v))) for v in vecs))
    ints = [[int(round(x * scale)) for x in v] for v in vecs]
    _, U = integer_lll(ints, transform=True)
    return [_power_product(K, gens, row) for row in U]


def find_generators_bruteforce(
    K: NumberField,
    S: PlaceSet,
    height_cap: int = 3,
    box_cap: int = 400000,
    log=None,
) -> SUnitBasis:
    """A basis rho_0; rho_1..rho_t of the S-unit group, proven complete.

    Intended for small fields (degree <= 6 with modest discriminant); fails
    with CapTooSmall when the box search does not reach full rank.
    """
    rho0, w = roots_of_unity(K)
    r, s = K.signature
    t = len(S.finite) + r + s - 1
    if t == 0:
        return SUnitBasis(K, S, rho0, w, [])
    primes = S.rational_primes
    above = {p: primes_above(K, p) for p in primes}
    S_keys = {P.key() for P in S.finite}
    builder = _GroupBuilder(K, S, w)
    order_basis = [[int(i == j) for j in range(K.degree)] for i in range(K.degree)]
    lattices = [_lll_reduce_for_t2(K, order_basis)] + [_lll_reduce_for_t2(K, _ideal_lattice(P)) for P in S.finite]
    extra = 0
    for radius in range(1, height_cap + 1):
        for lat in lattices:
            for alpha in _box_search(K, lat, radius, primes, box_cap):
                vals = {}
                ok = True
                if abs(alpha.norm()) != 1:
                    for p in primes:
                        for P in above[p]:
                            v = valuation(alpha, P)
                            if v and P.key() not in S_keys:
                                ok = False
                                break
                            vals[P] = v
                        if not ok:
                            break
                else:
                    vals = {P: 0 for P in S.finite}
                if not ok:
                    continue
                builder.add(alpha, builder.log_vector(alpha, vals))
                if builder.rank == t:
                    extra += 1
                    if extra > 400:
                        break
        if builder.rank == t:
            break
    if builder.rank < t:
        raise CapTooSmall(f"found {builder.rank} independent S-units, need {t}; raise height_cap")
    gens = reduce_generators(K, S, builder.gens)
    bound = index_bound(K, S, gens)
    if log:
        log(f"index bound {bound}")
    for p in _primes_upto(bound):
        gens = saturate(K, S, rho0, w, gens, p, log)
    gens = reduce_generators(K, S, gens)
    basis = SUnitBasis(K, S, rho0, w, gens)
    basis.validate()
    return basis


# ----------------------------------------------------------------------
# conditioning for the height bounds
# ----------------------------------------------------------------------

def _c1_float(M: np.ndarray) -> float:
    """max over dropped rows of the row norm of the inverse (floats)."""
    n = M.shape[0]
    best = 0.0
    for drop in range(n):
        sub = np.delete(M, drop, axis=0)
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        best = max(best, float(np.max(np.sum(np.abs(np.linalg.inv(sub)), axis=1))))
    return best


def condition_basis(basis: SUnitBasis, max_steps: int = 500) -> SUnitBasis:
    """A basis of the same group with small c1 (greedy elementary column moves).

    c1 enters every height bound through c3 = c2 / (r + s), and it depends
    on the choice of basis; any unimodular change of the free generators is
    allowed, so we descend over moves rho_i <- rho_i * rho_j^(+-1).
    """
    t = basis.t
    if t < 2:
        return basis
    cols = []
    for r in basis.rho:
        cols.append([float(log_abs_value(r, v, 64).mid()) for v in basis.S.places])
    M = np.array(cols).T
    U = np.eye(t, dtype=np.int64)
    cur = _c1_float(M)
    for _ in range(max_steps):
        best = None
        for i in range(t):
            for j in range(t):
                if i == j:
                    continue
                for sgn in (1, -1):
                    V = U.copy()
                    V[:, i] += sgn * V[:, j]
                    val = _c1_float(M @ V)
                    if val < cur * (1 - 1e-9) and (best is None or val < best[0]):
                        best = (val, V)
        if best is None:
            break
        cur, U = best
    if np.array_equal(U, np.eye(t, dtype=np.int64)):
        return basis
    rho = [_power_product(basis.field, basis.rho, [int(x) for x in U[:, k]]) for k in range(t)]
    return SUnitBasis(basis.field, basis.S, basis.rho0, basis.w, rho)
