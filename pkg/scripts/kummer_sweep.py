"""Char variety, purity and log containment for rank-one log connections over a range of primes.

    python3 scripts/kummer_sweep.py --primes 3 5 7 --d 2
"""

import argparse
import json
from dataclasses import asdict, dataclass
from itertools import product

from charvar.char_variety import char_variety, purity_report
from charvar.symp import CotangentChart, lagrangian_test, log_containment_check
from charvar.weyl import log_induce


@dataclass
class Row:
    p: int
    d: int
    r: int
    residues: tuple
    char_ideal: list
    codim: int
    contained: bool
    lagrangian: bool


def sweep(primes, dmax):
    for p in primes:
        for d in range(1, dmax + 1):
            for r in range(1, d + 1):
                for res in product(range(p), repeat=r):
                    M = log_induce(d, r, A=[[[a]] for a in res], B=[[[0]] for _ in range(d - r)], p=p)
                    chart = CotangentChart(d, r, p)
                    C = char_variety(M)
                    yield Row(p, d, r, res, C.char_ideal(), purity_report(M)["codim"],
                              log_containment_check(M, chart)["contained"], lagrangian_test(C, chart))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7])
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = list(sweep(args.primes, args.d))
    if args.json:
        print(json.dumps([asdict(r) for r in rows], indent=2))
        return
    print(f"{'p':>3} {'d':>2} {'r':>2} {'residues':<10} {'codim':>5} {'contained':>9} {'lagr':>5}  char ideal")
    for r in rows:
        print(f"{r.p:>3} {r.d:>2} {r.r:>2} {str(r.residues):<10} {r.codim!s:>5} {r.contained!s:>9} "
              f"{r.lagrangian!s:>5}  {', '.join(r.char_ideal)}")
    bad = [r for r in rows if not (r.contained and r.lagrangian and r.codim == r.d)]
    print(f"{len(rows)} modules, {len(bad)} outside the expected pattern")


if __name__ == "__main__":
    main()
