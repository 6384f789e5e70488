#!/usr/bin/env python3
"""Bound-vs-actual gallery: evaluate each inequality on a spread of phases
and intervals and print the observed ratios.  Useful for eyeballing how much
slack the explicit constants leave at desk scale.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np  # noqa: E402

from primeud.discrepancy import fractional_parts  # noqa: E402
from primeud.expsums import (  # noqa: E402
    composite_bound_eval,
    erdos_turan_bound,
    kusmin_landau_check,
)
from primeud.literals import parse_expr  # noqa: E402
from primeud.primes import sieve  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--table-limit", type=int, default=2_000_000)
    args = ap.parse_args()
    table = sieve(args.table_limit)

    print("== flat-derivative cancellation (actual vs 2/(pi lambda) + 1) ==")
    for literal, a, b in [("x^(1/2)", 700, 2300), ("x^(1/2)", 10_000, 40_000),
                          ("x^(2/3)", 1_000, 2_000)]:
        rep = kusmin_landau_check(parse_expr(literal), 1, a, b)
        status = "valid" if rep.valid else f"invalid ({rep.note})"
        print(f"  {literal:10s} [{a},{b}]  actual = {rep.actual:9.3f}  "
              f"bound = {rep.bound:9.3f}  ratio = {rep.ratio:.4f}  [{status}]")

    print("\n== iterated-shift bound, k = 1 (constant is advisory) ==")
    for X1 in (1_000, 10_000, 100_000):
        rep = composite_bound_eval(parse_expr("x^(3/2)"), 1, 1, X1, X1)
        print(f"  X1 = {X1:>7}  actual/X = {rep.actual / X1:8.5f}  "
              f"ratio = {rep.ratio:.5f}")

    print("\n== harmonic discrepancy bound along primes (C = 4) ==")
    for literal in ("x^(3/2)", "sqrt(2)*x^2", "log"):
        pts = fractional_parts(parse_expr(literal), 1, "primes", 50_000, table)
        rep = erdos_turan_bound(pts.points, 50)
        print(f"  {literal:14s} star = {rep.actual:.5f}  bound = {rep.bound:.5f}  "
              f"ratio = {rep.ratio:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
