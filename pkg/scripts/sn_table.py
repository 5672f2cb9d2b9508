"""Setzer-Neumann curves and their twists over every field, for odd prime
powers pi^r of norm at most the bound."""
import argparse

from ninefields.field_arith import FIELDS, field
from ninefields.two_torsion import setzer_neumann_search


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=2000)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for d in FIELDS:
        recs = setzer_neumann_search(field(d), args.bound, workers=args.workers)
        norms = sorted({r.conductor_norm for r in recs})
        print(f"d={d:>3}  {len(recs):>3} curves  conductor norms {norms}")


if __name__ == "__main__":
    main()
