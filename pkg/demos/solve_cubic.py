"""Solve x + y = 1 in S-units of Q[x]/(x^3 - x^2 - 3x + 1), S = primes above 2."""

import time

from sunitsolve import PlaceSet, find_generators_bruteforce, maximal_order_field, solve


def main():
    K = maximal_order_field([1, -3, -1, 1])
    S = PlaceSet.above(K, [2])
    basis = find_generators_bruteforce(K, S)
    print(f"w = {basis.w}, t = {basis.t}")
    t0 = time.perf_counter()
    res = solve(basis, log=lambda m: print("  ", m))
    print(f"bound {res.bound}: {len(res.solutions)} unordered solutions in {time.perf_counter() - t0:.1f}s")
    for s in res.solutions[:10]:
        print(f"  ({s.tau1}) + ({s.tau2}) = 1")


if __name__ == "__main__":
    main()
