"""Completions K_P and the p-adic logarithm.

A completion is represented by a Z_p-basis of its ring of integers together
with its multiplication, truncated modulo p^M:

* "poly" rings are Z_p[x]/(G) where G is the Hensel lift of the block of
  f mod p belonging to P (power basis of G is integral and maximal when p does
  not divide [O_K : Z[theta]]);
* "table" rings use the structure constants of a supplied p-maximal order;
  this is only valid when P is the only prime above p.

All arithmetic is exact in Z/p^M, so precision loss only occurs at explicit
divisions by powers of p, which are tracked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from flint import fmpz_poly, nmod_poly

from .errors import LocalFactorizationUnsupported, NotAUnitAtP, PrecisionExhausted
from .nfield import FieldElement, NumberField
from .places import FinitePlace, primes_above, valuation

PADIC_PREC_CAP = 20000
EMBED_SLACK = 40


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ----------------------------------------------------------------------
# Hensel lifting
# ----------------------------------------------------------------------

def _mod_poly(g: fmpz_poly, m: int) -> fmpz_poly:
    return fmpz_poly([int(c) % m for c in g.coeffs()])


def _hensel_step(f, g, h, s, t, m):
    """One quadratic lifting step: f = g h (mod m) to mod m^2 (h monic)."""
    m2 = m * m
    e = _mod_poly(f - g * h, m2)
    q, r = divmod(s * e, h)
    g2 = _mod_poly(g + t * e + q * g, m2)
    h2 = _mod_poly(h + r, m2)
    b = _mod_poly(s * g2 + t * h2 - 1, m2)
    c, d = divmod(s * b, h2)
    s2 = _mod_poly(s - d, m2)
    t2 = _mod_poly(t - t * b - c * g2, m2)
    return g2, h2, s2, t2


def _lift_two(f: fmpz_poly, g0: nmod_poly, h0: nmod_poly, p: int, k: int):
    """Lift a coprime factorisation f = g0 h0 (mod p) to mod p^k (g, h monic)."""
    d, s0, t0 = g0.xgcd(h0)
    inv = pow(int(d.coeffs()[0]), -1, p)
    g = fmpz_poly([int(c) for c in g0.coeffs()])
    h = fmpz_poly([int(c) for c in h0.coeffs()])
    s = fmpz_poly([int(c) * inv % p for c in s0.coeffs()])
    t = fmpz_poly([int(c) * inv % p for c in t0.coeffs()])
    m = p
    while m < p**k:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m = m * m
    pk = p**k
    return _mod_poly(g, pk), _mod_poly(h, pk)


def hensel_blocks(f: fmpz_poly, blocks: list[nmod_poly], p: int, k: int) -> list[fmpz_poly]:
    """Lift pairwise coprime monic factors of f mod p to monic factors mod p^k."""
    if len(blocks) == 1:
        return [_mod_poly(f, p**k)]
    half = len(blocks) // 2
    g0 = blocks[0]
    for b in blocks[1:half]:
        g0 = g0 * b
    h0 = blocks[half]
    for b in blocks[half + 1:]:
        h0 = h0 * b
    g, h = _lift_two(f, g0, h0, p, k)
    return hensel_blocks(g, blocks[:half], p, k) + hensel_blocks(h, blocks[half:], p, k)


# ----------------------------------------------------------------------
# local rings
# ----------------------------------------------------------------------

class LocalRing:
    """The ring of integers of K_P modulo p^M."""

    def __init__(self, P: FinitePlace, M: int):
        self.P = P
        self.p = P.p
        self.M = M
        self.mod = P.p ** M
        K = P.field
        self.field = K
        above = primes_above(K, P.p)
        if K.power_basis_is_order or (K.index % P.p and K.dedekind_ok(P.p)):
            self.kind = "poly"
            single = len(above) == 1
            if single:
                G = _mod_poly(K.poly, self.mod)
            else:
                fbar = nmod_poly([int(c) for c in K.coeffs], P.p)
                _, facs = fbar.factor()
                blocks = [phi ** int(e) for phi, e in facs]
                lifted = hensel_blocks(K.poly, blocks, P.p, M + EMBED_SLACK)
                phis = [[int(c) for c in phi.coeffs()] for phi, _ in facs]
                idx = None
                for i, phi in enumerate(phis):
                    if self._phi_in_P(phi):
                        idx = i
                        break
                if idx is None:
                    raise LocalFactorizationUnsupported("no local block matches P")
                G = lifted[idx]
            self.G_slack = [int(c) for c in G.coeffs()] if not single else [int(c) for c in K.coeffs]
            self.G = [c % self.mod for c in self.G_slack]
            self.n = len(self.G) - 1
            if single:
                self.disc_val = vp(K.poly_discriminant, P.p)
            else:
                # the discriminant of the lifted block is only meaningful mod p^M
                d = int(fmpz_poly(self.G).discriminant()) % self.mod
                if d == 0:
                    raise PrecisionExhausted("local discriminant vanishes mod p^M")
                self.disc_val = vp(d, P.p)
        else:
            if len(above) != 1:
                raise LocalFactorizationUnsupported(
                    "p divides [O_K : Z[theta]] and several primes lie above p"
                )
            self.kind = "table"
            self.n = K.degree
            self.T = K.structure_constants
            self.disc_val = vp(K.discriminant, P.p)
        if self.n != P.e * P.f:
            raise LocalFactorizationUnsupported("local degree mismatch")

    def _phi_in_P(self, phi: list[int]) -> bool:
        K = self.field
        x = K.gen()
        val = K.zero()
        for c in reversed(phi):
            val = val * x + c
        return valuation(val, self.P) > 0

    # arithmetic on coordinate vectors --------------------------------
    def one(self) -> list[int]:
        if self.kind == "poly":
            return [1] + [0] * (self.n - 1)
        return [int(c) % self.mod for c in self.field.order_coords(self.field.one())]

    def mul(self, x: list[int], y: list[int]) -> list[int]:
        n, mod = self.n, self.mod
        if self.kind == "table":
            return self.field.order_mul(x, y, mod)
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        G = self.G
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % mod
            if c:
                for j in range(n):
                    prod[k - n + j] -= c * G[j]
            prod[k] = 0
        return [v % mod for v in prod[:n]]

    def pow(self, x: list[int], e: int) -> list[int]:
        result = self.one()
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def embed(self, alpha: FieldElement) -> list[int]:
        """Image of alpha (which must be P-integral) in O_P / p^M."""
        p, mod = self.p, self.mod
        if self.kind == "table":
            out = []
            for c in self.field.order_coords(alpha):
                if c.denominator % p == 0:
                    raise NotAUnitAtP("element is not integral at P")
                out.append(c.numerator * pow(c.denominator, -1, mod) % mod)
            return out
        coords = alpha.coords
        d = 1
        for c in coords:
            d = d * c.denominator // math.gcd(d, c.denominator)
        s = vp(d, p)
        if s > EMBED_SLACK and self.G_slack is not None and len(primes_above(self.field, p)) > 1:
            big_ring = LocalRing(self.P, self.M + s)
            return [c % mod for c in big_ring.embed(alpha)]
        dprime = d // p**s
        big = p ** (self.M + s)
        a = [int(c * d) % big for c in coords]
        # reduce a(x) modulo G (monic) with coefficients mod p^(M+s)
        G = self.G_slack
        n = self.n
        a = a + [0] * max(0, n - len(a))
        for k in range(len(a) - 1, n - 1, -1):
            c = a[k] % big
            if c:
                for j in range(n):
                    a[k - n + j] -= c * G[j]
            a[k] = 0
        a = [v % big for v in a[:n]]
        if s:
            if any(v % p**s for v in a):
                raise NotAUnitAtP("element is not integral at P")
            a = [v // p**s for v in a]
        inv = pow(dprime, -1, mod)
        return [v * inv % mod for v in a]

    def det_mult(self, x: list[int]) -> int:
        """Norm from K_P to Q_p of x, modulo p^M."""
        from flint import fmpz_mat

        n = self.n
        cols = [self.mul(x, [int(i == j) for i in range(n)]) for j in range(n)]
        M = fmpz_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)])
        return int(M.det()) % self.mod


_RING_CACHE: dict = {}


def local_ring(P: FinitePlace, M: int) -> LocalRing:
    key = (id(P.field), P.p, P.label)
    hit = _RING_CACHE.get(key)
    if hit is not None and hit.M >= M:
        if hit.M == M:
            return hit
        return _truncate(hit, M)
    R = LocalRing(P, M)
    _RING_CACHE[key] = R
    return R


def _truncate(R: LocalRing, M: int) -> LocalRing:
    S = object.__new__(LocalRing)
    S.__dict__.update(R.__dict__)
    S.M = M
    S.mod = R.p ** M
    if R.kind == "poly":
        S.G = [c % S.mod for c in R.G]
        S.G_slack = R.G_slack
    return S


# ----------------------------------------------------------------------
# p-adic elements
# ----------------------------------------------------------------------

@dataclass
class PadicElement:
    """x = p^(-shift) * sum coords[i] * b_i, known modulo p^prec * O_P."""

    p: int
    coords: list[int]
    shift: int
    prec: int

    def coord_valuations(self) -> list[int | None]:
        """Exact valuation of each coordinate, or None if it vanishes to precision."""
        out = []
        for c in self.coords:
            c %= self.p ** (self.prec + self.shift)
            if c == 0:
                out.append(None)
            else:
                v = vp(c, self.p) - self.shift
                out.append(v if v < self.prec else None)
        return out

    def coord_fraction(self, i: int) -> Fraction:
        return Fraction(self.coords[i], self.p ** self.shift)

    def min_coord_valuation(self) -> int:
        vs = [v for v in self.coord_valuations() if v is not None]
        if not vs:
            raise PrecisionExhausted("p-adic element vanishes to working precision")
        return min(vs)

    def _aligned(self, other: "PadicElement"):
        s = max(self.shift, other.shift)
        a = [c * self.p ** (s - self.shift) for c in self.coords]
        b = [c * self.p ** (s - other.shift) for c in other.coords]
        return a, b, s, min(self.prec, other.prec)

    def __add__(self, other: "PadicElement") -> "PadicElement":
        a, b, s, prec = self._aligned(other)
        m = self.p ** (prec + s)
        return PadicElement(self.p, [(x + y) % m for x, y in zip(a, b)], s, prec)

    def __sub__(self, other: "PadicElement") -> "PadicElement":
        a, b, s, prec = self._aligned(other)
        m = self.p ** (prec + s)
        return PadicElement(self.p, [(x - y) % m for x, y in zip(a, b)], s, prec)

    def scale(self, k: int) -> "PadicElement":
        m = self.p ** (self.prec + self.shift)
        return PadicElement(self.p, [c * k % m for c in self.coords], self.shift, self.prec)

    def equals_mod(self, other: "PadicElement", N: int) -> bool:
        """True when self - other lies in p^N O_P (N <= both precisions)."""
        d = self - other
        if N > d.prec:
            raise PrecisionExhausted("comparison beyond known precision")
        m = self.p ** (N + d.shift)
        return all(c % m == 0 for c in d.coords)


def padic_log(alpha: FieldElement, P: FinitePlace, N: int) -> PadicElement:
    """log_p(alpha) in K_P to absolute precision at least p^N.

    alpha must be a P-unit.  We kill the Teichmueller part with the exponent
    p^f - 1 and then raise to p-th powers until z - 1 has coordinates divisible
    by p (p^2 when p = 2), where the logarithm series converges and the
    identity ord_p(log z) = ord_p(z - 1) holds.
    """
    if alpha.is_zero() or valuation(alpha, P) != 0:
        raise NotAUnitAtP(f"{alpha} is not a unit at {P}")
    if N > PADIC_PREC_CAP:
        raise PrecisionExhausted("requested p-adic precision exceeds the cap")
    p = P.p
    need = 2 if p == 2 else 1
    guard = 8
    while True:
        M = N + guard
        R = local_ring(P, M)
        x = R.embed(alpha)
        z = R.pow(x, p**P.f - 1)
        one = R.one()
        k = 0
        while True:
            y = [(a - b) % R.mod for a, b in zip(z, one)]
            v = min((vp(c, p) if c else M) for c in y)
            if v >= need:
                break
            z = R.pow(z, p)
            k += 1
        if v >= M:
            # z == 1 to working precision: log is 0 to the same precision
            return PadicElement(p, [0] * R.n, k, M - k)
        target = M
        # n*v - log_p(n) is increasing, so every term past nmax has valuation
        # >= target and can be dropped
        nmax = 1
        while (nmax + 1) * v - math.log(nmax + 1, p) < target:
            nmax += 1
        max_o = max(vp(n, p) for n in range(1, nmax + 1))
        if M - max_o - k < N:
            guard = max_o + k + 8
            continue
        acc = [0] * R.n
        ypow = one
        for n in range(1, nmax + 1):
            ypow = R.mul(ypow, y)
            o = vp(n, p)
            u = n // p**o
            if o:
                term = [c // p**o for c in ypow]
                if any(c % p**o for c in ypow):
                    raise AssertionError("series term not divisible")
            else:
                term = ypow
            inv = pow(u, -1, R.mod)
            sgn = 1 if n % 2 else -1
            for i in range(R.n):
                acc[i] = (acc[i] + sgn * term[i] * inv) % R.mod
        prec_logz = M - max_o
        inv_m = pow(p**P.f - 1, -1, R.mod)
        acc = [c * inv_m % R.mod for c in acc]
        return PadicElement(p, acc, k, prec_logz - k)


def local_ord(R: LocalRing, x: list[int]) -> Fraction:
    """ord_p of a local element via its norm (exact if below precision)."""
    d = R.det_mult(x)
    if d == 0:
        raise PrecisionExhausted("norm vanishes to working precision")
    return Fraction(vp(d, R.p), R.n)


def log_ord(L: PadicElement, P: FinitePlace) -> Fraction:
    """ord_p of a logarithm (returned as a PadicElement) via the local norm."""
    R = local_ring(P, L.prec + L.shift)
    d = R.det_mult([c % R.mod for c in L.coords])
    if d == 0:
        raise PrecisionExhausted("norm vanishes to working precision")
    return Fraction(vp(d, P.p), R.n) - L.shift


def completion_embed(alpha: FieldElement, P: FinitePlace, N: int) -> PadicElement:
    """Image of alpha in K_P with absolute precision N (any alpha != 0 or 0)."""
    k = 0
    if not alpha.is_zero():
        v = valuation(alpha, P)
        if v < 0:
            k = -(v // P.e)
    R = local_ring(P, N + k)
    coords = R.embed(alpha * (P.p ** k))
    return PadicElement(P.p, coords, k, N)
