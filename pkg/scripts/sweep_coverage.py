"""Exhaustive sweep over E_{a,b} with norm(b^2(a^2-4b)) <= bound, reporting
curves of odd prime-power conductor the family searches miss.

    python3 scripts/sweep_coverage.py --bound 100000000 --d 7 11
"""
import argparse
import time

from ninefields.field_arith import FIELDS, field
from ninefields.two_torsion import exhaustive_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=10 ** 8)
    ap.add_argument("--d", type=int, nargs="+", default=[7, 11])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for d in args.d:
        if d not in FIELDS:
            ap.error(f"d must be one of {FIELDS}")
        t0 = time.time()
        found, missing = exhaustive_sweep(field(d), args.bound, workers=args.workers)
        primes = sorted({pg.norm() for _, (pg, _) in found})
        print(f"d={d:>3}  curves={len(found):>4}  missing={len(missing)}  "
              f"primes={primes}  ({time.time() - t0:.1f}s)")
        for key, pgen in missing:
            print(f"    missing {key} at {pgen.to_str()}")


if __name__ == "__main__":
    main()
