"""Bounded classification sweep over integer FPdims, with the doubling stability check.

    python3 scripts/run_classification.py 4 6 8 12 --multiplier 16 --out results/classification.json
"""
import argparse
import json
import time
from pathlib import Path

from fusionlab.search.classify import stable_under_doubling


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("fpdims", nargs="+", type=int)
    ap.add_argument("--multiplier", type=int, default=16)
    ap.add_argument("--max-rank", type=int, default=12)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = []
    for n in args.fpdims:
        t0 = time.perf_counter()
        stable, a, b = stable_under_doubling(n, multiplier=args.multiplier, max_rank=args.max_rank)
        kinds = sorted(f.kind for f in a.survivors)
        row = {
            "fpdim": n,
            "order_bounds": [a.order_bound, b.order_bound],
            "complete": a.complete and b.complete,
            "stable": stable,
            "survivors": kinds,
            "strictly_weakly_integral": len(a.strictly_weakly_integral_survivors()),
            "vectors": [list(v) for v in a.vectors],
            "seconds": round(time.perf_counter() - t0, 2),
        }
        rows.append(row)
        print(f"FPdim {n:3d}  bounds {a.order_bound}/{b.order_bound}  complete={row['complete']}  "
              f"stable={stable}  survivors={kinds}  ({row['seconds']}s)")
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(rows, indent=1))


if __name__ == "__main__":
    main()
