"""Outcome statistics for random filtered morphisms: strict / mono / epi and the gr criteria.

    python3 scripts/strictness_sweep.py --n 500 --ring weyl1
"""

import argparse
import os
import random
import time
from collections import Counter

from charvar.filt import FilteredRingSpec, gr_four_term_report, is_strict
from charvar.modgb import GroebnerTimeout
from charvar.randgen import random_morphism

RINGS = {
    "poly2": lambda p: FilteredRingSpec.poly(("x", "y"), p),
    "weyl1": lambda p: FilteredRingSpec.weyl(1, p),
    "weyl2": lambda p: FilteredRingSpec.weyl(2, p),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--ring", choices=sorted(RINGS), default="weyl1")
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timeout", type=float, default=10, help="seconds per Gröbner run")
    args = ap.parse_args()
    os.environ["CHARVAR_TIMEOUT_SECS"] = str(args.timeout)
    ring = RINGS[args.ring](args.p).ring
    rng = random.Random(args.seed)
    outcomes = Counter()
    disagreements = 0
    start = time.perf_counter()
    for _ in range(args.n):
        u = random_morphism(rng, ring)
        try:
            r = is_strict(u)
            four = gr_four_term_report(u)
        except GroebnerTimeout:
            outcomes["timeout"] += 1
            continue
        disagreements += (not r["equivalences_hold"]) + (four["exact"] != r["strict"])
        outcomes[(r["strict"], r["mono"], r["epi"])] += 1
    print(f"{args.n} morphisms over {args.ring} (p={args.p}) in {time.perf_counter() - start:.1f}s")
    print("strict  mono   epi    count")
    for key, c in sorted(outcomes.items(), key=str):
        if key == "timeout":
            continue
        s, m, e = key
        print(f"{s!s:<7} {m!s:<6} {e!s:<6} {c}")
    if outcomes["timeout"]:
        print(f"skipped after timeout: {outcomes['timeout']}")
    print(f"criterion disagreements: {disagreements}")


if __name__ == "__main__":
    main()
