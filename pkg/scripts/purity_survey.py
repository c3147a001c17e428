"""Ext patterns and purity verdicts of random cyclic Weyl-algebra modules.

    python3 scripts/purity_survey.py --n 200 --d 1 2 --seed 0
"""

import argparse
import random
from collections import Counter

from charvar.char_variety import char_variety, component_ext_check, purity_report
from charvar.randgen import random_cyclic_weyl


def survey(n, dims, p, seed, max_order):
    rng = random.Random(seed)
    verdicts = Counter()
    component_checks = Counter()
    for _ in range(n):
        P = random_cyclic_weyl(rng, rng.choice(dims), p=p, max_order=max_order)
        if char_variety(P).is_empty:
            verdicts["zero module"] += 1
            continue
        rep = purity_report(P)
        verdicts[(P.ring.d, rep["codim"], rep["verdict"])] += 1
        if rep["components"] and rep["codim"] is not None:
            for comp in rep["components"]:
                if len(comp) == rep["codim"]:
                    component_checks[component_ext_check(P, tuple(comp))] += 1
    return verdicts, component_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--d", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--max-order", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    verdicts, checks = survey(args.n, args.d, args.p, args.seed, args.max_order)
    for key, count in sorted(verdicts.items(), key=str):
        print(f"{count:5d}  {key}")
    print(f"component inside Car(Ext^r): {dict(checks)}")


if __name__ == "__main__":
    main()
