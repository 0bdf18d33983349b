"""Exact integer LLL reduction and certified lattice distance bounds.

integer_lll follows the all-integer formulation (de Weger / Cohen): the
Gram-Schmidt data is kept as the integers d_i = det(Gram_i) and
lambda_{k,j} = d_j mu_{k,j}, so no rational arithmetic is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from flint import fmpq, fmpq_mat, fmpz_mat

from .errors import HypothesisViolated


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def integer_lll(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4), transform: bool = False):
    """LLL-reduce the rows of an integer matrix with Lovasz constant delta.

    Returns the reduced basis (and the unimodular transformation U with
    reduced = U * basis when transform=True).  Rows must be independent.
    """
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return ([], []) if transform else []
    dn, dd = delta.numerator, delta.denominator
    U = [[int(i == j) for j in range(n)] for i in range(n)] if transform else None
    d = [0] * (n + 1)  # d[0] = 1, d[i+1] = d_i of row i
    d[0] = 1
    lam = [[0] * n for _ in range(n)]
    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise HypothesisViolated("basis vectors are linearly dependent")
    k, kmax = 1, 0

    def red(k, l):
        dl = d[l + 1]
        if 2 * abs(lam[k][l]) > dl:
            q = (2 * lam[k][l] + dl) // (2 * dl)
            bk, bl = b[k], b[l]
            for i in range(len(bk)):
                bk[i] -= q * bl[i]
            if U is not None:
                Uk, Ul = U[k], U[l]
                for i in range(n):
                    Uk[i] -= q * Ul[i]
            lam[k][l] -= q * dl
            lk, ll = lam[k], lam[l]
            for i in range(l):
                lk[i] -= q * ll[i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        if U is not None:
            U[k], U[k - 1] = U[k - 1], U[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
            lam[i][k - 1] = (B * t + lmb * lam[i][k]) // d[k + 1]
        d[k] = B

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise HypothesisViolated("basis vectors are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        # Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lambda^2   (indices shifted)
        lhs = dd * d[k + 1] * d[k - 1]
        rhs = dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2
        if lhs < rhs:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return (b, U) if transform else b


def lll_reduce(basis: Sequence[Sequence[int]], backend: str = "auto"):
    """LLL reduction used by the reduction lemmas.

    The flint backend is only an accelerator: every bound we derive from a
    reduced basis is certified afterwards from exact Gram-Schmidt data, which
    is valid for any basis of the lattice.
    """
    rows = [[int(x) for x in r] for r in basis]
    if backend == "exact":
        return integer_lll(rows)
    bits = max((abs(x).bit_length() for r in rows for x in r), default=0)
    if backend == "flint" or (backend == "auto" and len(rows) * bits > 600):
        M = fmpz_mat(rows).lll()
        return [[int(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]
    return integer_lll(rows)


def gram_schmidt(basis: Sequence[Sequence[int]]):
    """Exact Gram-Schmidt: returns (squared norms |b_i*|^2, mu matrix) as Fractions."""
    n = len(basis)
    bstar: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            if norms[j] == 0:
                continue
            m = sum(Fraction(a) * c for a, c in zip(basis[i], bstar[j])) / norms[j]
            mu[i][j] = m
            v = [x - m * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(sum(x * x for x in v))
    return norms, mu


def is_lll_reduced(basis, delta: Fraction = Fraction(3, 4)) -> bool:
    norms, mu = gram_schmidt(basis)
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


@dataclass
class DistanceBound:
    """Certified lower bound for l(L, y) = min_{x in L, x != y} |x - y|."""

    squared: Fraction
    method: str

    @property
    def value(self) -> float:
        """A double that is <= the true bound."""
        if self.squared <= 0:
            return 0.0
        r = math.sqrt(float(self.squared))
        # step down to absorb the rounding of float() and sqrt
        return r * (1 - 1e-12)

    def exceeds(self, bound_sq: Fraction) -> bool:
        """True if the certified bound is strictly larger than sqrt(bound_sq)."""
        return self.squared > bound_sq


def _dist_to_int(x: Fraction) -> Fraction:
    f = x - math.floor(x)
    return min(f, 1 - f)


ENUM_MAX_DIM = 10
ENUM_NODE_BUDGET = 200000


def _enumerate_min(norms, mu, sigma, radius_sq: Fraction, budget: int):
    """Exact min of |sum (x_i - sigma_i) b_i|^2 over integer x != sigma.

    Fincke-Pohst depth-first search on the Gram-Schmidt data; returns None
    when the node budget runs out.
    """
    n = len(norms)
    best = [radius_sq]
    x = [0] * n
    nodes = [0]
    integral = all(s.denominator == 1 for s in sigma)

    def rec(i, partial):
        if nodes[0] > budget:
            return False
        if i < 0:
            if integral and all(x[k] == sigma[k] for k in range(n)):
                return True
            if partial < best[0]:
                best[0] = partial
            return True
        c = sigma[i] - sum(mu[j][i] * (x[j] - sigma[j]) for j in range(i + 1, n))
        room = best[0] - partial
        if room < 0:
            return True
        r = math.sqrt(float(room / norms[i])) + 1e-9
        lo = math.floor(float(c) - r) - 1
        hi = math.ceil(float(c) + r) + 1
        for v in range(lo, hi + 1):
            nodes[0] += 1
            diff = v - c
            q = partial + norms[i] * diff * diff
            if q <= best[0]:
                x[i] = v
                if not rec(i - 1, q):
                    return False
        return True

    if not rec(n - 1, Fraction(0)):
        return None
    return best[0]


def minimal_vector_lb(basis: Sequence[Sequence[int]], y: Sequence | None = None, reduce: bool = True, exact: str = "auto") -> DistanceBound:
    """Certified lower bound on l(L, y) for the lattice spanned by basis rows.

    In small dimension (exact="auto", dim <= ENUM_MAX_DIM) the distance is
    computed exactly by enumeration.  Otherwise, for y in L (including y = 0)
    we use min_i |b_i*|, which is valid for any basis and, for an LLL-reduced
    one, dominates the 2^{-(n-1)/2} |b_1| bound.  For y not in L we write
    y = sum sigma_i b_i; with i0 the largest index whose sigma is not an
    integer every x != y in L satisfies
    |x - y| >= min(||sigma_i0|| |b_i0*|, min_{i > i0} |b_i*|).
    """
    B = lll_reduce(basis) if reduce else [list(r) for r in basis]
    n = len(B)
    norms, mu = gram_schmidt(B)
    if y is None or all(v == 0 for v in y):
        sigma = [Fraction(0)] * n
    else:
        M = fmpq_mat(B)
        yv = fmpq_mat(1, len(y), [fmpq(Fraction(v).numerator, Fraction(v).denominator) for v in y])
        # solve sigma * B = y; B is square here (full-rank lattices only)
        if M.nrows() != M.ncols():
            raise HypothesisViolated("minimal_vector_lb expects a full-rank square basis")
        sol = yv * M.inv()
        sigma = [Fraction(int(sol[0, i].p), int(sol[0, i].q)) for i in range(n)]
    if exact == "always" or (exact == "auto" and n <= ENUM_MAX_DIM):
        # any lattice vector gives an upper bound to start the search from
        start = min(_dot(b, b) for b in B)
        if any(s.denominator != 1 for s in sigma):
            rnd = [round(s) for s in sigma]
            diff = [sum((rnd[i] - sigma[i]) * B[i][k] for i in range(n)) for k in range(len(B[0]))]
            start = sum(v * v for v in diff)
        else:
            start = Fraction(start)
        val = _enumerate_min(norms, mu, sigma, Fraction(start), ENUM_NODE_BUDGET)
        if val is not None:
            return DistanceBound(val, "enumeration")
    if all(s.denominator == 1 for s in sigma):
        return DistanceBound(min(norms), "gram-schmidt")
    i0 = max(i for i in range(n) if sigma[i].denominator != 1)
    cand = [_dist_to_int(sigma[i0]) ** 2 * norms[i0]] + [norms[k] for k in range(i0 + 1, n)]
    return DistanceBound(min(cand), "gram-schmidt")
