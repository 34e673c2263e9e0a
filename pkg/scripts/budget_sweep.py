#!/usr/bin/env python3
"""Chaining budget for L1 discretization: required m as the space grows.

Prints min_m_chaining over hyperbolic crosses together with the m/|Q|
ratio, whose log2 slope against n is the quantity tracked in the tests.
"""

import argparse
import math
import sys

from normdisc.l1disc import ChainingParams, chaining_budget, min_m_chaining
from normdisc.spaces import build_hyperbolic_cross


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, default=0.125)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--dim", type=int, default=1)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w")
    print("n,size,min_m,ratio,log2_ratio,in_window", file=fh)
    for n in range(2, args.n_max + 1):
        size = len(build_hyperbolic_cross(n, args.dim))
        params = ChainingParams(size=size, n=n, dim=args.dim, eta=args.eta)
        m = min_m_chaining(params)
        ratio = m / size
        budget = chaining_budget(params, m)
        print(f"{n},{size},{m},{ratio:.6g},{math.log2(ratio):.4f},{budget.in_theorem_window}", file=fh)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
