"""Number fields K = Q[x]/(f) with exact element arithmetic.

Elements are stored as flint fmpq_poly residues modulo the defining
polynomial.  An order basis (the power basis unless an integral basis is
supplied) is attached to every field; prime decomposition and valuations are
computed with respect to it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from flint import acb, arb, fmpq, fmpq_mat, fmpq_poly, fmpz, fmpz_poly, nmod_poly

from . import numerics as nm
from .errors import (
    BasisNotIntegral,
    DivisionByZero,
    HypothesisViolated,
    NotIrreducible,
    NotMonic,
    RankDeficient,
    ZeroElement,
)


def _fmpq_to_fraction(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _to_fmpq(c) -> fmpq:
    if isinstance(c, fmpq):
        return c
    if isinstance(c, Fraction):
        return fmpq(c.numerator, c.denominator)
    if isinstance(c, (int, fmpz)):
        return fmpq(c)
    if isinstance(c, str):
        return _to_fmpq(Fraction(c))
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| (n != 0)."""
    n = abs(int(n))
    if n <= 1:
        return []
    return sorted(int(p) for p, _ in fmpz(n).factor())


def _is_prime(p: int) -> bool:
    return p >= 2 and fmpz(p).is_prime()


class NumberField:
    """K = Q[x]/(f) for a monic irreducible integer polynomial f.

    ``coeffs`` lists the coefficients of f constant term first.  An optional
    ``integral_basis`` gives a Z-basis of an order (normally O_K) as rational
    power-basis coordinate vectors; without it the power basis is used.
    """

    def __init__(self, coeffs: Sequence[int], integral_basis=None, name: str = "theta"):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise NotIrreducible("defining polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
        self.coeffs = tuple(coeffs)
        self.name = name
        self.poly = fmpz_poly(coeffs)
        self.qpoly = fmpq_poly(coeffs)
        self.degree = len(coeffs) - 1
        _, facs = self.poly.factor()
        if len(facs) != 1 or facs[0][1] != 1:
            raise NotIrreducible(f"{self.poly} is not irreducible over Q")
        self.poly_discriminant = int(self.poly.discriminant())
        self._set_order_basis(integral_basis)
        self._roots_cache: dict[int, tuple] = {}
        self._places_cache: dict[int, list] = {}

    # -- order basis -------------------------------------------------
    def _set_order_basis(self, basis):
        n = self.degree
        if basis is None:
            rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
            self.power_basis_is_order = True
        else:
            rows = [[Fraction(c) for c in row] for row in basis]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise BasisNotIntegral("integral basis must be a d x d matrix")
            self.power_basis_is_order = all(
                rows[i][j] == (i == j) for i in range(n) for j in range(n)
            )
        bm = fmpq_mat(n, n, [_to_fmpq(c) for r in rows for c in r])
        if bm.det() == 0:
            raise BasisNotIntegral("integral basis is singular")
        self.basis_matrix = bm
        self.basis_matrix_inv = bm.inv()
        self.order_basis = [self.element(r) for r in rows]
        # structure constants: omega_i * omega_j = sum_k T[i][j][k] omega_k
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                c = self.order_coords(self.order_basis[i] * self.order_basis[j])
                if any(x.denominator != 1 for x in c):
                    raise BasisNotIntegral("basis is not closed under multiplication")
                row.append([int(x) for x in c])
            table.append(row)
        self.structure_constants = table
        one = self.order_coords(self.one())
        if any(x.denominator != 1 for x in one):
            raise BasisNotIntegral("order does not contain 1")
        for w in self.order_basis:
            cp = w.charpoly()
            if any(c.denominator != 1 for c in cp):
                raise BasisNotIntegral("basis element is not an algebraic integer")
        det = Fraction(int(bm.det().p), int(bm.det().q))
        disc = Fraction(self.poly_discriminant) * det * det
        if disc.denominator != 1:
            raise BasisNotIntegral("basis discriminant is not an integer")
        self.discriminant = int(disc)
        idx = 1 / abs(det)
        if idx.denominator != 1:
            raise BasisNotIntegral("order does not contain Z[theta]")
        self.index = int(idx)  # [order : Z[theta]]

    def order_coords(self, a: "FieldElement") -> list[Fraction]:
        """Coordinates of a in the order basis."""
        v = fmpq_mat(1, self.degree, [_to_fmpq(c) for c in a.coords])
        w = v * self.basis_matrix_inv
        return [_fmpq_to_fraction(w[0, j]) for j in range(self.degree)]

    def from_order_coords(self, coords: Sequence) -> "FieldElement":
        v = fmpq_mat(1, self.degree, [_to_fmpq(c) for c in coords])
        w = v * self.basis_matrix
        return self.element([w[0, j] for j in range(self.degree)])

    def order_mul(self, x: Sequence[int], y: Sequence[int], modulus: int | None = None) -> list[int]:
        """Multiply two order-coordinate vectors via the structure constants."""
        n = self.degree
        T = self.structure_constants
        out = [0] * n
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            Ti = T[i]
            for j in range(n):
                c = xi * y[j]
                if not c:
                    continue
                Tij = Ti[j]
                for k in range(n):
                    if Tij[k]:
                        out[k] += c * Tij[k]
        if modulus is not None:
            out = [v % modulus for v in out]
        return out

    # -- elements ------------------------------------------------------
    def element(self, coords) -> "FieldElement":
        if isinstance(coords, FieldElement):
            return coords
        if isinstance(coords, (int, Fraction, fmpq, fmpz)):
            coords = [coords]
        return FieldElement(self, fmpq_poly([_to_fmpq(c) for c in coords]))

    __call__ = element

    def one(self) -> "FieldElement":
        return FieldElement(self, fmpq_poly([1]), reduced=True)

    def zero(self) -> "FieldElement":
        return FieldElement(self, fmpq_poly([]), reduced=True)

    def gen(self) -> "FieldElement":
        return FieldElement(self, fmpq_poly([0, 1]))

    # -- signature and embeddings -------------------------------------
    @cached_property
    def signature(self) -> tuple[int, int]:
        # flint isolates real roots of integer polynomials as exact-real balls
        with nm.precision(64):
            r = sum(1 for c, _ in self.poly.complex_roots() if c.imag.is_zero())
        return r, (self.degree - r) // 2

    def roots(self, prec: int = nm.DEFAULT_PREC) -> tuple[list[acb], list[acb]]:
        """Certified roots of f: (real roots ascending, complex roots with Im > 0)."""
        prec = max(prec, 64)
        hit = self._roots_cache.get(prec)
        if hit is not None:
            return hit
        asked = prec
        r, s = self.signature
        while True:
            with nm.precision(prec + 32):
                allr = [c for c, _ in self.poly.complex_roots()]
                reals = [c for c in allr if c.imag.is_zero()]
                cplx = [c for c in allr if c.imag > 0]
            if len(reals) == r and len(cplx) == s:
                break
            prec *= 2
            if prec > nm.PREC_CAP:
                raise nm.PrecisionExhausted("could not isolate the roots of f")
        reals.sort(key=lambda c: float(c.real.mid()))
        cplx.sort(key=lambda c: (float(c.real.mid()), float(c.imag.mid())))
        out = (reals, cplx)
        self._roots_cache[asked] = out
        return out

    def embeddings(self, prec: int = nm.DEFAULT_PREC) -> list[acb]:
        """One root per infinite place: r real roots then s complex ones."""
        reals, cplx = self.roots(prec)
        return reals + cplx

    def all_conjugate_roots(self, prec: int = nm.DEFAULT_PREC) -> list[acb]:
        reals, cplx = self.roots(prec)
        return reals + cplx + [c.conjugate() for c in cplx]

    @property
    def unit_rank(self) -> int:
        r, s = self.signature
        return r + s - 1

    # -- misc ------------------------------------------------------------
    def index_primes(self) -> list[int]:
        return prime_factors(self.index) if self.index > 1 else []

    def dedekind_ok(self, p: int) -> bool:
        """True when p does not divide [O_K : Z[theta]] (Dedekind's criterion)."""
        if self.poly_discriminant % (p * p) != 0:
            return True
        fbar = nmod_poly([int(c) for c in self.coeffs], p)
        _, facs = fbar.factor()
        g = nmod_poly([1], p)
        for phi, _e in facs:
            g *= phi
        h = fbar // g
        gz = fmpz_poly([int(c) for c in g.coeffs()])
        hz = fmpz_poly([int(c) for c in h.coeffs()])
        F = (self.poly - gz * hz)
        Fc = [int(c) for c in F.coeffs()]
        if any(c % p for c in Fc):
            raise AssertionError("Dedekind lift failed")
        Fbar = nmod_poly([c // p for c in Fc], p)
        d = Fbar.gcd(g).gcd(h)
        return d.degree() == 0

    def __repr__(self):
        return f"NumberField({list(self.coeffs)})"

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.coeffs == other.coeffs
            and self.basis_matrix == other.basis_matrix
        )

    def __hash__(self):
        return hash(self.coeffs)


def number_field(f: Sequence[int], integral_basis=None) -> NumberField:
    return NumberField(f, integral_basis)


def nf_create(f: Sequence[int], integral_basis=None, maximal: bool = False) -> NumberField:
    """K = Q[x]/(f); with maximal=True the order is enlarged to O_K."""
    if maximal:
        from .places import maximal_order_field

        return maximal_order_field(f, integral_basis)
    return NumberField(f, integral_basis)


class FieldElement:
    """An element of a NumberField, kept reduced modulo f."""

    __slots__ = ("K", "p")

    def __init__(self, K: NumberField, p: fmpq_poly, reduced: bool = False):
        self.K = K
        self.p = p if reduced or p.degree() < K.degree else p % K.qpoly

    # -- coercion --------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.K is not self.K and other.K != self.K:
                raise HypothesisViolated("elements of different fields")
            return other
        if isinstance(other, (int, Fraction, fmpq, fmpz)):
            return FieldElement(self.K, fmpq_poly([_to_fmpq(other)]), reduced=True)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.K, self.p + o.p, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.K, -self.p, reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.K, self.p - o.p, reduced=True)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.K, o.p - self.p, reduced=True)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.K, (self.p * o.p) % self.K.qpoly, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.p.is_zero():
            raise DivisionByZero("inverse of zero")
        g, s, _t = self.p.xgcd(self.K.qpoly)
        # g is a nonzero constant since f is irreducible
        return FieldElement(self.K, s / g[0], reduced=False)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = fmpq_poly([1])
        base = self.p
        f = self.K.qpoly
        while e:
            if e & 1:
                result = (result * base) % f
            e >>= 1
            if e:
                base = (base * base) % f
        return FieldElement(self.K, result, reduced=True)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.p == o.p

    def __hash__(self):
        return hash((self.K.coeffs, tuple(self.coords)))

    def __bool__(self):
        return not self.p.is_zero()

    def is_zero(self) -> bool:
        return self.p.is_zero()

    def is_one(self) -> bool:
        return self.p.is_one()

    # -- data --------------------------------------------------------
    @property
    def coords(self) -> tuple[Fraction, ...]:
        n = self.K.degree
        cs = [_fmpq_to_fraction(c) for c in self.p.coeffs()]
        return tuple(cs + [Fraction(0)] * (n - len(cs)))

    def denominator(self) -> int:
        return int(self.p.denom())

    def is_rational(self) -> bool:
        return self.p.degree() <= 0

    def mult_matrix(self) -> fmpq_mat:
        n = self.K.degree
        cols = []
        x = fmpq_poly([0, 1])
        cur = self.p
        for _ in range(n):
            cs = cur.coeffs()
            cols.append([cs[i] if i < len(cs) else fmpq(0) for i in range(n)])
            cur = (cur * x) % self.K.qpoly
        return fmpq_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)])

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial over Q, constant term first."""
        cp = self.mult_matrix().charpoly()
        return [_fmpq_to_fraction(c) for c in cp.coeffs()]

    def minpoly(self) -> list[Fraction]:
        cp = fmpq_poly([_to_fmpq(c) for c in self.charpoly()])
        num = fmpz_poly([int(c) for c in (cp * cp.denom()).coeffs()])
        _, facs = num.factor()
        # the minimal polynomial is the irreducible factor vanishing at self
        for g, _ in facs:
            cs = [int(c) for c in g.coeffs()]
            val = self.K.zero()
            for c in reversed(cs):
                val = val * self + c
            if val.is_zero():
                lc = cs[-1]
                return [Fraction(c, lc) for c in cs]
        raise AssertionError("no factor of the characteristic polynomial vanishes")

    def norm(self) -> Fraction:
        if self.p.is_zero():
            return Fraction(0)
        r = self.K.qpoly.resultant(self.p)
        return _fmpq_to_fraction(r)

    def trace(self) -> Fraction:
        cp = self.charpoly()
        return -cp[-2]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.charpoly())

    # -- embeddings -----------------------------------------------------
    def evaluate(self, z: acb) -> acb:
        cs = self.p.coeffs()
        acc = acb(0)
        for c in reversed(cs):
            acc = acc * z + acb(nm.to_arb(c))
        return acc

    def conjugates(self, prec: int = nm.DEFAULT_PREC) -> list[acb]:
        """Images under the embeddings of the infinite places (one per place)."""
        with nm.precision(prec):
            return [self.evaluate(z) for z in self.K.embeddings(prec)]

    def all_conjugates(self, prec: int = nm.DEFAULT_PREC) -> list[acb]:
        with nm.precision(prec):
            return [self.evaluate(z) for z in self.K.all_conjugate_roots(prec)]

    def to_complex(self, place: int = 0) -> complex:
        z = self.conjugates(128)[place]
        return complex(float(z.real.mid()), float(z.imag.mid()))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mon = "" if i == 0 else (self.K.name if i == 1 else f"{self.K.name}^{i}")
            if mon and c == 1:
                terms.append(mon)
            elif mon and c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}" if mon else f"{c}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def prod(elems: Iterable[FieldElement], K: NumberField) -> FieldElement:
    out = K.one()
    for e in elems:
        out = out * e
    return out


class SUnitBasis:
    """A basis rho_0 (torsion, order w), rho_1..rho_t of the S-unit group."""

    def __init__(self, field: NumberField, S, rho0: FieldElement, w: int, rho: Sequence[FieldElement]):
        self.field = field
        self.S = S
        self.rho0 = field.element(rho0)
        self.w = int(w)
        self.rho = [field.element(r) for r in rho]
        self._inv = None
        self._pow_cache: dict = {}

    @property
    def t(self) -> int:
        return len(self.rho)

    @property
    def generators(self) -> list[FieldElement]:
        return [self.rho0] + list(self.rho)

    def validate(self, check_torsion_generator: bool = True) -> None:
        """Check the basis against S: orders, S-unit property and rank."""
        from .places import torsion_order

        K = self.field
        if self.rho0 ** self.w != K.one():
            raise HypothesisViolated("rho_0 does not have order dividing w")
        if check_torsion_generator:
            for q in prime_factors(self.w):
                if self.rho0 ** (self.w // q) == K.one():
                    raise HypothesisViolated("rho_0 is not of exact order w")
            if torsion_order(K) != self.w:
                raise HypothesisViolated("w differs from the number of roots of unity in K")
        expected = len(self.S.finite) + len(self.S.infinite) - 1
        if self.t != expected:
            raise RankDeficient(f"expected {expected} free generators, got {self.t}")
        for r in self.rho:
            if r.is_zero():
                raise ZeroElement("zero generator")
            if not is_s_unit(r, self.S):
                raise HypothesisViolated(f"{r} is not an S-unit")
        from .places import log_matrix

        M = log_matrix(self, exclude=0)
        with nm.precision(128):
            from flint import arb_mat

            if not (abs(arb_mat(M).det()) > 0):
                raise RankDeficient("generators are multiplicatively dependent")

    def inverses(self) -> list[FieldElement]:
        if self._inv is None:
            self._inv = [r.inverse() for r in self.rho]
        return self._inv

    def power(self, i: int, e: int) -> FieldElement:
        """rho_i ** e with caching (i = 0 is the torsion generator)."""
        if i == 0:
            e %= self.w
        key = (i, e)
        hit = self._pow_cache.get(key)
        if hit is None:
            base = self.rho0 if i == 0 else self.rho[i - 1]
            hit = base ** e
            if len(self._pow_cache) < 100000:
                self._pow_cache[key] = hit
        return hit

    def phi(self, a: Sequence[int]) -> FieldElement:
        """Phi_rho(a) = rho_0^{a_0} rho_1^{a_1} ... rho_t^{a_t}."""
        if len(a) != self.t + 1:
            raise HypothesisViolated("exponent vector has the wrong length")
        out = self.field.one()
        for i, e in enumerate(a):
            if e:
                out = out * self.power(i, int(e))
        return out

    def __repr__(self):
        return f"SUnitBasis(w={self.w}, t={self.t})"


def phi_rho(basis: SUnitBasis, a: Sequence[int]) -> FieldElement:
    return basis.phi(a)


def is_s_unit(alpha: FieldElement, S) -> bool:
    """Exact test that alpha has valuation zero at every finite place outside S."""
    from .places import primes_above, valuation

    if alpha.is_zero():
        raise ZeroElement("zero is not an S-unit")
    K = alpha.K
    cp = alpha.charpoly()
    c0 = cp[0]
    bad: set[int] = set()
    for c in cp:
        bad.update(prime_factors(c.denominator))
        q = c / c0
        bad.update(prime_factors(q.denominator))
    s_fin = list(S.finite)
    for q in sorted(bad):
        over = [P for P in s_fin if P.p == q]
        if not over:
            return False
        allP = primes_above(K, q)
        if len(over) == len(allP):
            continue
        for P in allP:
            if any(P == Q for Q in over):
                continue
            if valuation(alpha, P) != 0:
                return False
    return True
