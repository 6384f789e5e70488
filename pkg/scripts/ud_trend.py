#!/usr/bin/env python3
"""Star-discrepancy trend of {q * f(n)} along a chosen index domain.

Prints one row per N checkpoint (and optionally writes gnuplot-ready
two-column data), e.g.:

    python scripts/ud_trend.py --expr "x^(3/2)" --domain primes \
        --checkpoints 1000,10000,100000 --table-limit 2000000
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from primeud.discrepancy import equidistribution_report  # noqa: E402
from primeud.literals import parse_expr  # noqa: E402
from primeud.primes import sieve  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--expr", required=True)
    ap.add_argument("--q", type=int, default=1)
    ap.add_argument("--domain", default="primes",
                    choices=["integers", "primes", "primes_in_ap"])
    ap.add_argument("--modulus", type=int, default=1)
    ap.add_argument("--residue", type=int, default=1)
    ap.add_argument("--checkpoints", default="1000,10000,100000")
    ap.add_argument("--table-limit", type=int, default=2_000_000)
    ap.add_argument("--plot-out", default=None,
                    help="write two-column 'N star' data here")
    args = ap.parse_args()

    expr = parse_expr(args.expr)
    checkpoints = [int(t) for t in args.checkpoints.split(",")]
    table = None
    if args.domain != "integers":
        table = sieve(args.table_limit)

    rows = []
    print(f"{'N':>9}  {'star':>12}  {'et_bound':>12}  {'max |S_q|/N, q<=10':>20}")
    for N in checkpoints:
        rep = equidistribution_report(expr, args.q, args.domain, N, table,
                                      modulus=args.modulus,
                                      residue=args.residue)
        wmax = max(m for _, m in rep.weyl_moduli)
        print(f"{N:>9}  {rep.star:>12.6f}  {rep.et_bound:>12.6f}  {wmax:>20.6f}")
        rows.append((N, rep.star))

    if args.plot_out:
        with open(args.plot_out, "w", encoding="utf-8") as f:
            f.write(f"# expr={args.expr} q={args.q} domain={args.domain}\n")
            for N, star in rows:
                f.write(f"{N} {star:.12g}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
