#!/usr/bin/env python3
"""Run the built-in recurrence model corpus and print the margin tables:
torus overlap averages against mu(A)^2, difference-set hit densities against
d*(E)^2, and the spectral tail-max probes.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from primeud.corpus import (  # noqa: E402
    lattice_corpus,
    spectral_corpus,
    spectral_generators,
    torus_corpus,
    unitary_corpus,
)
from primeud.ergodic import (  # noqa: E402
    ergodic_average,
    fcplus_probe,
    lattice_recurrence_scan,
    torus_recurrence_average,
)
from primeud.primes import sieve  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=10_000)
    ap.add_argument("--table-limit", type=int, default=2_000_000)
    args = ap.parse_args()

    table = sieve(args.table_limit)
    N = args.N

    print(f"== unitary mean averages (N = {N}) ==")
    for name, sysm, exprs in unitary_corpus():
        res = ergodic_average(sysm, exprs, N, table)
        print(f"  {name:26s} deviation = {res.deviation:.5f}")

    print(f"\n== torus recurrence (N = {N}) ==")
    for name, sysm, spec in torus_corpus():
        res = torus_recurrence_average(sysm, spec, N, table)
        print(f"  {name:26s} avg = {res.average:.5f}  mu^2 = {res.mu_sq:.5f}  "
              f"margin = {res.margin:+.5f}")

    print(f"\n== difference-set scans (N = {N}) ==")
    for name, E, spec in lattice_corpus():
        res = lattice_recurrence_scan(E, spec, N, table)
        print(f"  {name:26s} hits = {res.hit_density:.4f}  d*^2 = {res.dstar_sq:.4f}  "
              f"margin = {res.margin:+.4f}")

    print(f"\n== spectral tail-max probes (N = {N}) ==")
    for mname, sigma in spectral_corpus():
        for gname, spec in spectral_generators(sigma.k):
            res = fcplus_probe(sigma, spec, N, table)
            flag = "ok" if res.mass_at_zero <= res.final_tail_max + 0.01 else "VIOLATION"
            print(f"  {mname:26s} {gname:9s} mass(0) = {res.mass_at_zero:.3f}  "
                  f"tail-max = {res.final_tail_max:.3f}  [{flag}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
