"""B1 (all places) against B2 (infinite places only) and the search ratio R(K)."""

from sunitsolve import PlaceSet, bound_report, find_generators_bruteforce, maximal_order_field

FIELDS = [[-2, 0, 1], [-3, 0, 1], [1, -3, 0, 1], [1, -3, -1, 1], [-1, -5, -1, 1]]


def main():
    print(f"{'field':>20} {'t':>2} {'B1':>5} {'B2':>5} {'R(K)':>10}")
    for f in FIELDS:
        K = maximal_order_field(f)
        S = PlaceSet.above(K, [2])
        b = find_generators_bruteforce(K, S)
        rep = bound_report(K, S, b)
        print(f"{str(f):>20} {b.t:>2} {rep.B1:>5} {rep.B2:>5} {rep.R:>10.3g}")


if __name__ == "__main__":
    main()
