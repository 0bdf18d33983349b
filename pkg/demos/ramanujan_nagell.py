"""x^3 + 3^k = q^n for the odd primes q < 110."""

from flint import fmpz

from sunitsolve import ramanujan_nagell


def main():
    for q in range(5, 110, 2):
        if not fmpz(q).is_prime():
            continue
        r = ramanujan_nagell(q)
        print(f"q = {q:3d}: B = {r.B:4d}, k <= {r.k_max:5d}, n <= {r.n_max:4d}  {r.solutions}")


if __name__ == "__main__":
    main()
