"""Independent brute-force oracle for x + y = 1 in S-units.

Uses plain integer arithmetic in Z[sqrt(D)][1/2] (or Q), fixed textbook
generators and the norm test, sharing no code with the package.
"""

from fractions import Fraction
from itertools import product


def _smooth(n: int, primes) -> bool:
    n = abs(n)
    if n == 0:
        return False
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


def rational_solutions(primes, A: int = 30) -> set:
    """Unordered pairs {x, 1 - x} with x = +-prod p^a_p, |a_p| <= A."""
    powers = [[Fraction(p) ** e for e in range(-A, A + 1)] for p in primes]
    out = set()
    for sgn in (1, -1):
        for combo in product(*powers):
            x = Fraction(sgn)
            for c in combo:
                x *= c
            y = 1 - x
            if y != 0 and _smooth(y.numerator, primes) and _smooth(y.denominator, primes):
                out.add(frozenset([(x,), (y,)]))
    return out


class QuadElt:
    """a + b sqrt(D) with rational a, b."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        self.a, self.b, self.D = Fraction(a), Fraction(b), D

    def __mul__(self, o):
        return QuadElt(self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a, self.D)

    def inv(self):
        n = self.norm()
        return QuadElt(self.a / n, -self.b / n, self.D)

    def norm(self):
        return self.a * self.a - self.D * self.b * self.b

    def key(self):
        return (self.a, self.b)


def _pow(x: QuadElt, e: int) -> QuadElt:
    base = x if e >= 0 else x.inv()
    out = QuadElt(1, 0, x.D)
    for _ in range(abs(e)):
        out = out * base
    return out


def quadratic_solutions(D: int, gens, A: int = 30) -> set:
    """Solutions in Z[sqrt D][1/2] with a single prime above 2.

    gens are (a, b) pairs of free generators; torsion is -1.  1 - x is an
    S-unit iff it lies in Z[sqrt D][1/2] (automatic) and its norm is +-2^k.
    """
    g = [QuadElt(a, b, D) for a, b in gens]
    tables = [[_pow(x, e) for e in range(-A, A + 1)] for x in g]
    out = set()
    for combo in product(*tables):
        x = QuadElt(1, 0, D)
        for c in combo:
            x = x * c
        for s in (1, -1):
            xs = QuadElt(s * x.a, s * x.b, D)
            y = QuadElt(1 - xs.a, -xs.b, D)
            n = y.norm()
            if n != 0 and _smooth(n.numerator, [2]) and _smooth(n.denominator, [2]):
                out.add(frozenset([xs.key(), y.key()]))
    return out


ORACLE_CASES = {
    "Q_2": ((-2, 1), (2,)),
    "Q_2_3": ((-2, 1), (2, 3)),
    "Q_2_3_5": ((-2, 1), (2, 3, 5)),
    "Qsqrt2_2": ((-2, 0, 1), (2,)),
    "Qsqrt3_2": ((-3, 0, 1), (2,)),
}


def oracle(name: str, A: int = 30) -> set:
    if name == "Q_2":
        return rational_solutions([2], A)
    if name == "Q_2_3":
        return rational_solutions([2, 3], A)
    if name == "Q_2_3_5":
        return rational_solutions([2, 3, 5], A)
    if name == "Qsqrt2_2":
        return quadratic_solutions(2, [(1, 1), (0, 1)], A)
    if name == "Qsqrt3_2":
        return quadratic_solutions(3, [(2, 1), (1, 1)], A)
    raise KeyError(name)


def as_oracle_set(pairs, degree: int) -> set:
    """Package SolutionPairs -> oracle keys (power-basis coordinates)."""
    out = set()
    for s in pairs:
        k1 = tuple(Fraction(c) for c in s.tau1.coords) + (Fraction(0),) * (degree - len(s.tau1.coords))
        k2 = tuple(Fraction(c) for c in s.tau2.coords) + (Fraction(0),) * (degree - len(s.tau2.coords))
        out.add(frozenset([k1[:degree], k2[:degree]]))
    return out
