"""Full super-modular suite over the catalog, with timings and a per-datum table.

    python3 scripts/verlinde_catalog.py --max-pointed 16 --partitions 10
"""
import argparse
import random
import time

from fusionlab.catalog import supermodular_catalog
from fusionlab.supermodular import full_suite, promote


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-pointed", type=int, default=16)
    ap.add_argument("--partitions", type=int, default=0, help="extra random partitions per datum")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t_all = time.perf_counter()
    failures = 0
    for name, data in supermodular_catalog(args.max_pointed):
        t0 = time.perf_counter()
        rep = full_suite(promote(data))
        ref = rep.outcomes()
        invariant = all(full_suite(promote(data, rng=rng)).outcomes() == ref for _ in range(args.partitions))
        failures += not (rep.ok and invariant)
        print(f"{'ok ' if rep.ok and invariant else 'BAD'} {name:40s} rank={data.rank:3d} dim={data.fpdim!s:6} "
              f"checks={len(rep.lines):3d} ({time.perf_counter() - t0:.2f}s)")
    print(f"\n{failures} failures, {time.perf_counter() - t_all:.1f}s total")


if __name__ == "__main__":
    main()
