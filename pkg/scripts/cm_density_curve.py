"""Proportion of primes pi with a CM twist of conductor (pi)^2, as the norm
bound grows, next to the limiting value."""
import argparse

from ninefields.cm_families import cm_density, expected_density
from ninefields.field_arith import field


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, nargs="+", default=[1, 3, 7])
    ap.add_argument("--bounds", type=int, nargs="+", default=[100, 1000, 10000, 100000])
    args = ap.parse_args()
    print("   d   bound   hits  primes  ratio  limit")
    for d in args.d:
        K = field(d)
        for bound in args.bounds:
            hits, total = cm_density(K, bound)
            print(f"{d:>4} {bound:>7} {hits:>6} {total:>7}  {hits / total:.3f}  "
                  f"{float(expected_density(d)):.3f}")


if __name__ == "__main__":
    main()
