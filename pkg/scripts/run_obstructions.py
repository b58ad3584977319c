"""Scripted obstructions and the twist search on sVec x TY(Gamma) for small Gamma.

    python3 scripts/run_obstructions.py --bounds 16 32 64
"""
import argparse
import time

from fusionlab.catalog import svec, ty_dims, ty_ring
from fusionlab.fusering import deligne_product
from fusionlab.groups import AbelianGroup
from fusionlab.search.csp import theta_csp
from fusionlab.search.obstruction import obstruction_script

GAMMAS = [(), (2,), (3,), (4,), (2, 2), (5,)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bounds", nargs="+", type=int, default=[16, 32])
    args = ap.parse_args()

    print("# gamma obstruction")
    for orders in GAMMAS:
        out = obstruction_script("gamma_bound", gamma=orders)
        last = out.certificate[-1] if out.certificate else ""
        print(f"Gamma={orders!s:8} {out.status:5} witnesses={len(out.witnesses):3d}  {last}")

    print("\n# twist search, sVec x TY(Gamma)")
    for orders in GAMMAS:
        G = AbelianGroup(orders)
        ring = deligne_product(svec().ring, ty_ring(G))
        dims = [a * b for a in svec().dims for b in ty_dims(G)]
        chi = ring.labels.index("chi")
        for B in args.bounds:
            t0 = time.perf_counter()
            out = theta_csp(ring, dims, chi, B)
            print(f"Gamma={orders!s:8} B={B:4d} {out.status:5} witnesses={len(out.witnesses):4d} "
                  f"grid={out.stats.get('grid', '-')} visited={out.stats.get('visited', '-')} "
                  f"({time.perf_counter() - t0:.2f}s)")

    print("\n# dim-2 triple")
    out = obstruction_script("dim2_triple")
    for line in out.certificate:
        print("  " + line)
    print(out.status)


if __name__ == "__main__":
    main()
