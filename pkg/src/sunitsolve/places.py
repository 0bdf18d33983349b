"""Places of a number field: prime decomposition, valuations, absolute values,
roots of unity and Weil heights.

Finite places are found by working in the F_p-algebra O/pO, where O is the
order attached to the field (power basis or supplied integral basis).  For a
p-maximal O the maximal ideals of O/pO are exactly the primes above p.
Valuations use an "anti-uniformizer" beta with beta*P contained in pO and
beta not in pO: for a in O, v_P(a) >= 1 iff a*beta lies in pO.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from flint import acb, arb, arb_mat, fmpz, nmod_mat, nmod_poly

from . import numerics as nm
from .errors import (
    HypothesisViolated,
    IndexDivisible,
    Unsupported,
    ZeroElement,
)
from .nfield import FieldElement, NumberField, prime_factors


# ----------------------------------------------------------------------
# linear algebra over F_p
# ----------------------------------------------------------------------

def fp_nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {x in F_p^ncols : M x = 0} for M given by its rows."""
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    M = nmod_mat(len(rows), ncols, [v % p for r in rows for v in r], p)
    X, nullity = M.nullspace()
    return [[int(X[i, j]) for i in range(ncols)] for j in range(nullity)]


def fp_rowspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Echelon basis of the span of the given vectors."""
    if not rows:
        return []
    M = nmod_mat(len(rows), ncols, [v % p for r in rows for v in r], p)
    R, rank = M.rref()
    return [[int(R[i, j]) for j in range(ncols)] for i in range(rank)]


def fp_in_span(v: list[int], basis: list[list[int]], p: int) -> bool:
    n = len(v)
    r0 = len(fp_rowspace(basis, n, p)) if basis else 0
    r1 = len(fp_rowspace(basis + [v], n, p))
    return r0 == r1


def fp_complement(basis: list[list[int]], n: int, p: int) -> list[list[int]]:
    """Unit vectors completing an echelon basis to a basis of F_p^n."""
    ech = fp_rowspace(basis, n, p)
    pivots = set()
    for r in ech:
        for j, x in enumerate(r):
            if x:
                pivots.add(j)
                break
    return [[int(i == j) for j in range(n)] for i in range(n) if i not in pivots]


# ----------------------------------------------------------------------
# places
# ----------------------------------------------------------------------

@dataclass(eq=False)
class FinitePlace:
    """A prime ideal P of the order above the rational prime p."""

    field: NumberField
    p: int
    e: int
    f: int
    label: int
    ideal_mod_p: list  # F_p-basis of P/pO in order coordinates
    beta: list  # anti-uniformizer in order coordinates (integers in [0, p))
    pi: FieldElement = None  # two-element generator: P = (p, pi)
    local_factor: object = None  # monic integer polynomial phi with phi(theta) in P, if known
    _local: dict = field(default_factory=dict, repr=False)

    is_finite = True

    @property
    def norm(self) -> int:
        return self.p ** self.f

    def __eq__(self, other):
        return (
            isinstance(other, FinitePlace)
            and other.p == self.p
            and other.label == self.label
            and other.field == self.field
        )

    def __hash__(self):
        return hash(("fin", self.p, self.label))

    def __repr__(self):
        return f"P({self.p}, e={self.e}, f={self.f}, #{self.label})"

    def key(self):
        return ("fin", self.p, self.label)


@dataclass(eq=False)
class InfinitePlace:
    field: NumberField
    index: int  # position in NumberField.embeddings()
    real: bool

    is_finite = False

    @property
    def delta(self) -> int:
        return 1 if self.real else 2

    def embed(self, alpha: FieldElement, prec: int = nm.DEFAULT_PREC) -> acb:
        z = self.field.embeddings(prec)[self.index]
        with nm.precision(prec):
            return alpha.evaluate(z)

    def __eq__(self, other):
        return isinstance(other, InfinitePlace) and other.index == self.index and other.field == self.field

    def __hash__(self):
        return hash(("inf", self.index))

    def __repr__(self):
        return f"{'R' if self.real else 'C'}#{self.index}"

    def key(self):
        return ("inf", self.index)


def infinite_places(K: NumberField) -> list[InfinitePlace]:
    r, s = K.signature
    return [InfinitePlace(K, i, i < r) for i in range(r + s)]


class PlaceSet:
    """A finite set S of places containing all infinite ones."""

    def __init__(self, K: NumberField, finite: Sequence[FinitePlace], infinite: Sequence[InfinitePlace] | None = None):
        self.field = K
        self.finite = list(finite)
        self.infinite = list(infinite) if infinite is not None else infinite_places(K)
        if len(self.infinite) != sum(K.signature):
            raise HypothesisViolated("S must contain every infinite place")

    @classmethod
    def above(cls, K: NumberField, primes: Sequence[int]) -> "PlaceSet":
        fin = []
        for p in sorted(set(int(p) for p in primes)):
            if not nm_is_prime(p):
                raise HypothesisViolated(f"{p} is not prime")
            fin.extend(primes_above(K, p))
        return cls(K, fin)

    @property
    def places(self) -> list:
        return self.finite + self.infinite

    @property
    def rational_primes(self) -> list[int]:
        return sorted({P.p for P in self.finite})

    def __len__(self):
        return len(self.finite) + len(self.infinite)

    def __iter__(self):
        return iter(self.places)

    def __repr__(self):
        return f"PlaceSet({self.finite}, {len(self.infinite)} infinite)"


def nm_is_prime(p: int) -> bool:
    return p >= 2 and bool(fmpz(p).is_prime())


# ----------------------------------------------------------------------
# prime decomposition
# ----------------------------------------------------------------------

def _alg_mul(K: NumberField, x, y, p):
    return K.order_mul(x, y, p)


def _alg_pow(K: NumberField, x, e: int, p: int):
    n = K.degree
    one = [v % p for v in _order_one(K)]
    result = one
    base = [v % p for v in x]
    while e:
        if e & 1:
            result = _alg_mul(K, result, base, p)
        e >>= 1
        if e:
            base = _alg_mul(K, base, base, p)
    return result


def _order_one(K: NumberField) -> list[int]:
    return [int(c) for c in K.order_coords(K.one())]


def _mult_matrix_rows(K: NumberField, g: list[int], p: int) -> list[list[int]]:
    """Rows of the matrix of x -> g*x on O/pO (so column j is g*omega_j)."""
    n = K.degree
    cols = [_alg_mul(K, g, [int(i == j) for i in range(n)], p) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _p_radical(K: NumberField, p: int) -> list[list[int]]:
    """F_p-basis of the p-radical of O/pO (kernel of a large Frobenius power)."""
    n = K.degree
    k = 0
    while p**k < n:
        k += 1
    cols = [_alg_pow(K, [int(i == j) for i in range(n)], p**k, p) for j in range(n)]
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    J = fp_nullspace(rows, n, p)
    return fp_rowspace(J, n, p) if J else []


def _multiplier_kernel(K: NumberField, p: int, radical: list[list[int]]):
    """Basis of {x in O/pO : x I subset p I} for the p-radical I, or None
    when some multiplication is not integral in the I-basis."""
    from flint import fmpq_mat, fmpz_mat

    n = K.degree
    gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + [list(r) for r in radical]
    H = fmpz_mat(gens).hnf()
    basis = [[int(H[i, j]) for j in range(n)] for i in range(H.nrows()) if any(H[i, j] for j in range(n))]
    if len(basis) != n:
        raise AssertionError("radical lattice has wrong rank")
    Binv = fmpq_mat(basis).inv()
    blocks = []
    for i in range(n):
        w = [int(k == i) for k in range(n)]
        col_entries = []
        for b in basis:
            c = fmpq_mat([K.order_mul(w, b)]) * Binv
            row = []
            for j in range(n):
                v = c[0, j]
                if v.q % p == 0:
                    return None
                row.append(int(v.p * pow(int(v.q), -1, p)) % p)
            col_entries.append(row)
        blocks.append(col_entries)
    rows = []
    for k in range(n):
        for j in range(n):
            rows.append([blocks[i][k][j] for i in range(n)])
    return fp_nullspace(rows, n, p)


def enlarge_order(K: NumberField, p: int):
    """One Pohst-Zassenhaus step at p.

    Returns the power-basis rows of the ring of multipliers of the p-radical,
    or None when the order of K is already p-maximal.
    """
    from flint import fmpz_mat

    n = K.degree
    ker = _multiplier_kernel(K, p, _p_radical(K, p))
    if ker is None:
        raise AssertionError("multiplication by the order does not preserve its radical")
    if not ker:
        return None
    gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + [list(r) for r in ker]
    H = fmpz_mat(gens).hnf()
    rows = [[int(H[i, j]) for j in range(n)] for i in range(H.nrows()) if any(H[i, j] for j in range(n))]
    out = []
    for r in rows:
        elem = K.from_order_coords([Fraction(c, p) for c in r])
        out.append(list(elem.coords))
    return out


def maximal_order_field(coeffs, integral_basis=None, primes=None) -> NumberField:
    """K with its maximal order, enlarging Z[theta] (or the supplied order) at
    every prime whose square divides the discriminant (or at ``primes``)."""
    K = NumberField(coeffs, integral_basis=integral_basis)
    if primes is None:
        disc = abs(K.discriminant)
        primes = [q for q, e in fmpz(disc).factor() if e >= 2]
    for q in primes:
        q = int(q)
        while True:
            if K.power_basis_is_order and K.dedekind_ok(q):
                break
            rows = enlarge_order(K, q)
            if rows is None:
                break
            K = NumberField(coeffs, integral_basis=rows)
    return K


def _check_p_maximal(K: NumberField, p: int, radical: list[list[int]]) -> None:
    """Pohst-Zassenhaus test: O is p-maximal iff x*I subset p*I forces x in pO.

    I = pO + radical is the p-radical; we check that no nonzero x in O/pO
    annihilates I/pI.
    """
    n = K.degree
    # Z-basis of I: HNF of p*e_i and lifts of the radical basis
    from flint import fmpz_mat

    gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + [list(r) for r in radical]
    H = fmpz_mat(gens).hnf()
    basis = [[int(H[i, j]) for j in range(n)] for i in range(H.nrows()) if any(H[i, j] for j in range(n))]
    if len(basis) != n:
        raise AssertionError("radical lattice has wrong rank")
    from flint import fmpq_mat

    Bq = fmpq_mat(basis)
    Binv = Bq.inv()
    # for each omega_i, matrix of multiplication on I expressed in I-basis, mod p
    blocks = []
    for i in range(n):
        w = [int(k == i) for k in range(n)]
        col_entries = []
        for b in basis:
            prod = K.order_mul(w, b)
            c = fmpq_mat([prod]) * Binv
            row = []
            for j in range(n):
                v = c[0, j]
                if v.q % p == 0:
                    raise IndexDivisible("order is not p-maximal (non-integral multiplier)")
                row.append(int(v.p * pow(int(v.q), -1, p)) % p)
            col_entries.append(row)
        blocks.append(col_entries)
    # linear map x -> (x*b_k in I-coords) ; x = sum x_i omega_i
    rows = []
    for k in range(n):
        for j in range(n):
            rows.append([blocks[i][k][j] for i in range(n)])
    ker = fp_nullspace(rows, n, p)
    if ker:
        raise IndexDivisible(
            f"the order basis is not {p}-maximal; supply an integral basis that is"
        )


def _split_semisimple(K, p, J, comp):
    """Decompose A/J (A = O/pO, J = radical) into its maximal ideals.

    comp is a list of order-coordinate vectors whose images form a basis of
    A/J.  Returns F_p-bases (in A) of the preimages of the maximal ideals.
    """
    n = K.degree
    m = len(comp)

    def reduce_mod_J(v):
        # express v (in A) as coordinates on comp modulo J
        rows = [list(b) for b in comp] + [list(b) for b in J]
        # solve sum c_i rows_i = v
        M = nmod_mat(n, len(rows), [rows[j][i] % p for i in range(n) for j in range(len(rows))], p)
        rhs = nmod_mat(n, 1, [x % p for x in v], p)
        sol = M.solve(rhs)
        return [int(sol[i, 0]) for i in range(m)]

    def lift(c):
        out = [0] * n
        for ci, b in zip(c, comp):
            if ci:
                for k in range(n):
                    out[k] = (out[k] + ci * b[k]) % p
        return out

    def mul(c1, c2):
        return reduce_mod_J(_alg_mul(K, lift(c1), lift(c2), p))

    def power(c, e):
        one = reduce_mod_J(_order_one(K))
        res, base = one, c
        while e:
            if e & 1:
                res = mul(res, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return res

    one = reduce_mod_J(_order_one(K))
    # Berlekamp subalgebra: kernel of Frobenius - id on A/J
    frob_cols = [power([int(i == j) for i in range(m)], p) for j in range(m)]
    rows = [[(frob_cols[j][i] - (i == j)) % p for j in range(m)] for i in range(m)]
    B = fp_nullspace(rows, m, p)
    g = len(B)
    idems = [one]
    if g > 1:
        for y in B:
            if len(idems) == g:
                break
            new = []
            for eps in idems:
                ye = mul(y, eps)
                pieces = []
                for c in range(p):
                    z = [(ye[i] - c * eps[i]) % p for i in range(m)]
                    zp = power(z, p - 1)
                    piece = [(eps[i] - mul(zp, eps)[i]) % p for i in range(m)]
                    if any(piece):
                        pieces.append(piece)
                    if len(pieces) >= g:
                        break
                new.extend(pieces if pieces else [eps])
            idems = new
        if len(idems) != g:
            raise AssertionError("failed to split the residue algebra")
    ideals = []
    for eps in idems:
        # maximal ideal of A/J: {x : x*eps = 0}
        cols = [mul([int(i == j) for i in range(m)], eps) for j in range(m)]
        rows = [[cols[j][i] for j in range(m)] for i in range(m)]
        ker = fp_nullspace(rows, m, p)
        ideal = [lift(c) for c in ker] + [list(v) for v in J]
        ideals.append(fp_rowspace(ideal, n, p))
    return ideals


def _anti_uniformizer(K: NumberField, p: int, ideal: list[list[int]]) -> list[int]:
    n = K.degree
    rows = []
    for gamma in ideal:
        M = _mult_matrix_rows(K, gamma, p)
        rows.extend(M)
    ker = fp_nullspace(rows, n, p)
    if not ker:
        raise AssertionError("no anti-uniformizer found")
    # prefer a short vector for cheaper valuations
    ker.sort(key=lambda v: sum(1 for x in v if x))
    return [x % p for x in ker[0]]


def _valuation_order(K: NumberField, a: list[int], P: FinitePlace) -> int:
    """v_P(a) for a nonzero integer order-coordinate vector a."""
    p = P.p
    g = 0
    for x in a:
        g = math.gcd(g, x)
    if g == 0:
        raise ZeroElement("valuation of zero")
    c = 0
    while g % p == 0:
        g //= p
        c += 1
    if c:
        a = [x // p**c for x in a]
    return c * P.e + _valuation_loop(K, a, P)


def _valuation_loop(K: NumberField, a: list[int], P: FinitePlace) -> int:
    p = P.p
    beta = P.beta
    v = 0
    while True:
        y = K.order_mul(a, beta)
        if any(x % p for x in y):
            return v
        a = [x // p for x in y]
        v += 1


def valuation(alpha: FieldElement, P: FinitePlace) -> int:
    """ord_P(alpha) for nonzero alpha."""
    if alpha.is_zero():
        raise ZeroElement("valuation of zero")
    K = alpha.K
    c = K.order_coords(alpha)
    d = 1
    for x in c:
        d = d * x.denominator // math.gcd(d, x.denominator)
    a = [int(x * d) for x in c]
    vd = 0
    while d % P.p == 0:
        d //= P.p
        vd += 1
    return _valuation_order(K, a, P) - P.e * vd


ord_p = valuation


def _decompose_dedekind(K: NumberField, p: int):
    n = K.degree
    fbar = nmod_poly([int(c) for c in K.coeffs], p)
    _, facs = fbar.factor()
    out = []
    for phi, e in facs:
        # P/pO = multiples of phi in F_p[x]/(fbar)
        vecs = []
        for k in range(n - phi.degree()):
            g = (phi * nmod_poly([0] * k + [1], p)) % fbar
            cs = [int(x) for x in g.coeffs()]
            vecs.append(cs + [0] * (n - len(cs)))
        out.append((fp_rowspace(vecs, n, p), int(e), int(phi.degree()), [int(x) for x in phi.coeffs()]))
    return out


def _decompose_general(K: NumberField, p: int):
    n = K.degree
    k = 0
    while p**k < n:
        k += 1
    q = p**k
    cols = [_alg_pow(K, [int(i == j) for i in range(n)], q, p) for j in range(n)]
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    J = fp_nullspace(rows, n, p)
    J = fp_rowspace(J, n, p) if J else []
    _check_p_maximal(K, p, J)
    comp = fp_complement(J, n, p)
    ideals = _split_semisimple(K, p, J, comp)
    return [(I, None, n - len(I), None) for I in ideals]


def primes_above(K: NumberField, p: int) -> list[FinitePlace]:
    """All prime ideals of O_K above the rational prime p."""
    p = int(p)
    hit = K._places_cache.get(p)
    if hit is not None:
        return hit
    if not nm_is_prime(p):
        raise HypothesisViolated(f"{p} is not prime")
    if K.power_basis_is_order:
        if not K.dedekind_ok(p):
            raise IndexDivisible(
                f"{p} divides the index of Z[theta]; supply a {p}-maximal integral basis"
            )
        raw = _decompose_dedekind(K, p)
    else:
        raw = _decompose_general(K, p)
    places = []
    for label, (ideal, e, f, phi) in enumerate(raw):
        beta = _anti_uniformizer(K, p, ideal)
        P = FinitePlace(K, p, e or 0, f, label, ideal, beta, local_factor=phi)
        if not e:
            P.e = _valuation_loop(K, [p * c for c in _order_one(K)], P)
        places.append(P)
    if sum(P.e * P.f for P in places) != K.degree:
        raise AssertionError("prime decomposition does not satisfy sum e f = d")
    for P in places:
        P.pi = _two_element_generator(K, P, places)
    K._places_cache[p] = places
    return places


def _two_element_generator(K, P, places) -> FieldElement:
    """pi in P with v_P(pi) = 1 and v_Q(pi) = 0 for the other Q above p."""
    p = P.p
    n = K.degree
    others = [Q for Q in places if Q != P]
    if P.e == 1 and not others:
        return K(p)
    rng = random.Random(p * 1000 + P.label)
    base = P.ideal_mod_p
    for _ in range(2000):
        coeffs = [rng.randrange(p) for _ in base]
        v = [0] * n
        for c, b in zip(coeffs, base):
            for k in range(n):
                v[k] = (v[k] + c * b[k]) % p
        if not any(v):
            continue
        alpha = K.from_order_coords(v)
        vP = valuation(alpha, P)
        if vP >= 2 and P.e == 1:
            alpha, vP = alpha + p, 1
        if vP != 1:
            continue
        if all(valuation(alpha, Q) == 0 for Q in others):
            return alpha
    raise AssertionError("could not find a two-element generator")


# ----------------------------------------------------------------------
# absolute values
# ----------------------------------------------------------------------

def abs_value(alpha: FieldElement, v, prec: int = nm.DEFAULT_PREC) -> arb:
    """Normalised absolute value |alpha|_v as a ball."""
    with nm.precision(prec):
        if v.is_finite:
            if alpha.is_zero():
                return arb(0)
            k = valuation(alpha, v)
            return arb(v.norm) ** (-k)
        z = abs(v.embed(alpha, prec))
        return z if v.real else z * z


def log_abs_value(alpha: FieldElement, v, prec: int = nm.DEFAULT_PREC) -> arb:
    """log |alpha|_v as a ball (alpha nonzero)."""
    if alpha.is_zero():
        raise ZeroElement("log of zero")
    with nm.precision(prec):
        if v.is_finite:
            k = valuation(alpha, v)
            return -k * v.f * arb(v.p).log()
        z = abs(v.embed(alpha, prec + 20))
        if not (z > 0):
            raise nm.PrecisionExhausted("cannot separate embedding from zero")
        lz = z.log()
        return lz if v.real else 2 * lz


def log_matrix(basis, exclude=None, places=None, prec: int = nm.DEFAULT_PREC):
    """Matrix (log|rho_j|_u) with rows u in S (optionally one row removed)."""
    rows = []
    pl = places if places is not None else basis.S.places
    for i, u in enumerate(pl):
        if exclude is not None and i == exclude:
            continue
        rows.append([log_abs_value(r, u, prec) for r in basis.rho])
    return rows


# ----------------------------------------------------------------------
# roots of unity
# ----------------------------------------------------------------------

def _torsion_box(K: NumberField, prec: int = 128) -> list[int]:
    """Coordinate bounds (order basis) for elements with all |sigma| <= 1."""
    n = K.degree
    roots = K.all_conjugate_roots(prec)
    with nm.precision(prec):
        from flint import acb_mat

        V = acb_mat(n, n, [K.order_basis[i].evaluate(roots[j]) for i in range(n) for j in range(n)])
        W = V.inv()
        bounds = []
        for i in range(n):
            s = arb(0)
            for j in range(n):
                s += abs(W[j, i])
            bounds.append(int(nm.floor_upper(s)))
    return bounds


def roots_of_unity(K: NumberField) -> tuple[FieldElement, int]:
    """A generator of the torsion subgroup of K* and its order w."""
    hit = getattr(K, "_torsion", None)
    if hit is not None:
        return hit
    n = K.degree
    if K.signature[0] > 0:
        out = (K(-1), 2)
        K._torsion = out
        return out
    bounds = _torsion_box(K)
    size = 1
    for b in bounds:
        size *= 2 * b + 1
    if size > 20_000_000:
        raise Unsupported("torsion search box too large")
    # numerical filter: all conjugates of modulus 1
    roots = K.all_conjugate_roots(64)
    emb = np.array(
        [[complex(K.order_basis[i].evaluate(z).mid()) for z in roots] for i in range(n)]
    )
    best, best_order = K(-1), 2
    ranges = [np.arange(-b, b + 1) for b in bounds]
    # enumerate in chunks over the first coordinate
    grids = np.array(np.meshgrid(*ranges[1:], indexing="ij")).reshape(n - 1, -1).T if n > 1 else np.zeros((1, 0), dtype=int)
    for c0 in ranges[0]:
        coords = np.hstack([np.full((grids.shape[0], 1), c0), grids])
        vals = coords @ emb
        ok = np.all(np.abs(np.abs(vals) - 1.0) < 1e-6, axis=1)
        for row in coords[ok]:
            alpha = K.from_order_coords([int(x) for x in row])
            m = _root_of_unity_order(alpha, n)
            if m and m > best_order:
                best, best_order = alpha, m
    out = (best, best_order)
    K._torsion = out
    return out


def _root_of_unity_order(alpha: FieldElement, n: int) -> int:
    """Exact multiplicative order of alpha if it is a root of unity, else 0."""
    # possible orders m satisfy phi(m) | n; phi(m) <= n gives m <= 2 n^2 crudely
    cand = [m for m in range(1, 4 * n * n + 7) if n % euler_phi(m) == 0]
    K = alpha.K
    for m in sorted(cand):
        if alpha ** m == K.one():
            return m
    return 0


def euler_phi(m: int) -> int:
    out = m
    for q in prime_factors(m):
        out = out // q * (q - 1)
    return out


def torsion_order(K: NumberField) -> int:
    return roots_of_unity(K)[1]


# ----------------------------------------------------------------------
# heights
# ----------------------------------------------------------------------

def weil_height(alpha: FieldElement, prec: int = nm.DEFAULT_PREC) -> arb:
    """Absolute logarithmic Weil height h(alpha) as a ball.

    Computed from the Mahler measure of the primitive integer multiple of the
    characteristic polynomial: h = (log a_0 + sum log max(1, |sigma alpha|)) / d.
    """
    K = alpha.K
    if alpha.is_zero():
        return arb(0)
    cp = alpha.charpoly()
    a0 = 1
    for c in cp:
        a0 = a0 * c.denominator // math.gcd(a0, c.denominator)
    with nm.precision(prec):
        s = arb(a0).log()
        for z in alpha.all_conjugates(prec):
            m = abs(z)
            s += m.max(arb(1)).log()
        return s / K.degree


# ----------------------------------------------------------------------
# discrete logarithm in the S-unit group
# ----------------------------------------------------------------------

def exponent_vector(basis, alpha: FieldElement, prec: int = 128) -> list[int]:
    """The exponent vector a (a_0 mod w) with alpha = rho_0^a_0 prod rho_j^a_j.

    The free part is read off from the log vector on t places with an
    invertible log matrix and rounded; the result is then checked exactly.
    Raises HypothesisViolated if alpha is not in the group generated by basis.
    """
    from .nfield import is_s_unit

    K = basis.field
    if alpha.is_zero():
        raise ZeroElement("zero has no exponent vector")
    t = basis.t
    if t and not is_s_unit(alpha, basis.S):
        raise HypothesisViolated(f"{alpha} is not an S-unit")
    places = basis.S.places
    b: list[int] = []
    while t:
        with nm.precision(prec):
            done = False
            for drop in range(len(places)):
                rows = [u for i, u in enumerate(places) if i != drop]
                M = arb_mat([[log_abs_value(r, u, prec) for r in basis.rho] for u in rows])
                if not (abs(M.det()) > 0):
                    continue
                rhs = arb_mat([[log_abs_value(alpha, u, prec)] for u in rows])
                sol = M.solve(rhs)
                b = []
                for i in range(t):
                    x = sol[i, 0]
                    n = int(round(float(x.mid())))
                    if not (abs(x - n) < arb(1) / 4):
                        break
                    b.append(n)
                if len(b) == t:
                    done = True
                break
        if done:
            break
        prec *= 2
        if prec > nm.PREC_CAP:
            raise nm.PrecisionExhausted("exponent vector could not be separated")
    rest = alpha
    for j, e in enumerate(b):
        if e:
            rest = rest / basis.power(j + 1, e)
    z = K.one()
    for k in range(basis.w):
        if rest == z:
            return [k] + b
        z = z * basis.rho0
    raise HypothesisViolated("element is not in the group generated by the basis")


ord_p = valuation


def heights(alpha: FieldElement, variant: str = "h", prec: int = nm.DEFAULT_PREC, P: FinitePlace | None = None, D: int | None = None, d: int | None = None) -> arb:
    """h(alpha), h'(alpha) or h'_P(alpha) as a ball.

    d is the degree of the field generated by the linear form's numbers
    (defaults to [K : Q]); D is Yu's D for the h'_P variant.
    """
    from . import bounds

    if variant == "h":
        return weil_height(alpha, prec)
    if alpha.is_zero():
        raise ZeroElement("height of zero")
    d = d or alpha.K.degree
    if variant == "h'":
        return bounds.modified_height(alpha, d, prec)
    if variant == "h_p'":
        if P is None:
            raise HypothesisViolated("h_p' needs a finite place")
        if D is None:
            D = bounds.yu_D(P.p, torsion_order(alpha.K), d)
        return bounds.modified_height_p(alpha, P, D, d, prec)
    raise HypothesisViolated(f"unknown height variant {variant!r}")
