"""fusionlab command line.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 UNSAT, 4 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import catalog as cat
from . import io
from .exactnum import ConductorOverflowError, conductor_cap, set_conductor_cap
from .fusering import (
    FPDimError,
    adjoint_subring,
    fp_character,
    invertibles,
    nilpotency_class,
    subrings,
    universal_grading,
    validate_ring,
)
from .groups import AbelianGroup
from .premodular import (
    CenterKind,
    PremodularData,
    PremodularError,
    check_dimension_theorem,
    classify_center,
    s_matrix_checks,
    tannakian_subrings,
)
from .report import Report
from .supermodular import SuperModularError, full_suite, promote

OK, CHECK_FAILED, INPUT_ERROR, UNSAT, BUDGET = 0, 1, 2, 3, 4


def _orders(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text or text == "1":
        return ()
    return tuple(int(p) for p in text.replace("x", ",").split(",") if p)


def _say(*lines: str) -> None:
    for ln in lines:
        print(ln)


def _labels(ring, idx) -> str:
    return "{" + ",".join(ring.labels[i] for i in idx) + "}"


# -- validate / analyze / super ---------------------------------------------------------------


def _premodular_or_fail(loaded: io.Loaded, rep: Report):
    try:
        data = loaded.premodular()
    except PremodularError as exc:
        rep.add("premodular.data", False, f"{type(exc).__name__}: {exc}")
        return None
    rep.add("premodular.data", True)
    return data


def cmd_validate(args) -> int:
    loaded = io.load(args.path)
    rep = validate_ring(loaded.ring)
    if rep.ok and loaded.dims is not None:
        try:
            fp_character(loaded.ring, loaded.dims)
            rep.add("dims.fp_character", True)
        except FPDimError as exc:
            rep.add("dims.fp_character", False, str(exc))
    if rep.ok and loaded.is_premodular:
        data = _premodular_or_fail(loaded, rep)
        if data is not None:
            rep.extend(s_matrix_checks(data))
    _say(str(rep))
    return OK if rep.ok else CHECK_FAILED


def cmd_analyze(args) -> int:
    loaded = io.load(args.path)
    ring = loaded.ring
    rep = validate_ring(ring)
    out = [f"ring rank={ring.rank} labels={list(ring.labels)}"]
    if not rep.ok:
        _say(*out, str(rep))
        return CHECK_FAILED
    if loaded.dims is not None:
        dims = fp_character(ring, loaded.dims)
        out.append("fpdims " + " ".join(f"{lab}={d}" for lab, d in zip(ring.labels, dims)))
    else:
        ivs = fp_character(ring, eps=args.eps)
        out.append("fpdims " + " ".join(f"{lab}~{float(iv.mid):.12g}" for lab, iv in zip(ring.labels, ivs)))
    pt = invertibles(ring)
    out.append(f"pointed {_labels(ring, pt.indices)} type={list(pt.primary_type())}")
    out.append(f"adjoint {_labels(ring, adjoint_subring(ring))}")
    U = universal_grading(ring)
    out.append(f"universal_grading type={list(U.group_type())} components=" + " ".join(_labels(ring, c) for c in U.components))
    nil = nilpotency_class(ring)
    out.append(f"nilpotency {nil if nil is not None else 'not nilpotent'}")
    subs = subrings(ring, max_rank=args.max_subring_rank)
    out.append("subrings " + " ".join(_labels(ring, s) for s in subs))
    if loaded.is_premodular:
        data = _premodular_or_fail(loaded, rep)
        if data is not None:
            rep.extend(s_matrix_checks(data))
            cls = classify_center(data)
            out.append(f"center {cls} {_labels(ring, cls.center)}")
            for D in subs:
                rep.extend(check_dimension_theorem(data, D, cls.center))
            if cls.kind in (CenterKind.NON_DEGENERATE, CenterKind.SLIGHTLY_DEGENERATE):
                scan = tannakian_subrings(data, max_rank=args.max_subring_rank)
                out.append("tannakian " + (" ".join(_labels(ring, E) for E in scan.subrings) or "none"))
                rep.extend(scan.report)
            else:
                out.append(f"tannakian skipped: ratio test needs a center of rank <= 2, got {cls}")
    _say(*out, str(rep))
    return OK if rep.ok else CHECK_FAILED


def cmd_super(args) -> int:
    loaded = io.load(args.path)
    if not loaded.is_premodular:
        raise io.InputError("super needs dims and twists")
    try:
        base = loaded.premodular()
        if loaded.pi0 is not None:
            sm = promote(base, partition=[loaded.ring.index(x) for x in loaded.pi0])
        else:
            sm = promote(base, rng=random.Random(args.seed) if args.seed is not None else None)
    except (PremodularError, SuperModularError) as exc:
        _say(f"ERROR {type(exc).__name__}: {exc}")
        return CHECK_FAILED
    ring = sm.ring
    rep = full_suite(sm)
    _say(
        f"fermion {ring.labels[sm.fermion]}",
        f"pi0 {_labels(ring, sm.pi0)}",
        f"pi1 {_labels(ring, sm.pi1)}",
        "s_hat",
        *("  " + " ".join(str(x) for x in row) for row in sm.s_hat.tolist()),
        str(rep),
    )
    return OK if rep.ok else CHECK_FAILED


# -- catalog ---------------------------------------------------------------------------------


def _catalog_data(args):
    name = args.name
    if name == "svec":
        return cat.svec()
    if name == "semion":
        return cat.semion(conjugate=args.conjugate)
    if name == "ising":
        return cat.ising_data(args.nu)
    if name == "pointed":
        forms = cat.quadratic_forms(_orders(args.orders))
        if not 0 <= args.form < len(forms):
            raise io.InputError(f"--form must be in [0, {len(forms)}) for orders {args.orders}")
        return cat.pointed_data(forms[args.form])
    if name == "ty":
        G = AbelianGroup(_orders(args.orders))
        if G.orders == (2,):
            return cat.ising_data(args.nu)
        return io.ring_with_dims_json(cat.ty_ring(G), cat.ty_dims(G))
    if name == "rep-dihedral":
        return cat.rep_dihedral(args.d)
    if name == "product":
        if len(args.files) < 2:
            raise io.InputError("product needs at least two premodular files")
        try:
            parts = [io.load(p).premodular() for p in args.files]
        except PremodularError as exc:
            raise io.InputError(f"{type(exc).__name__}: {exc}") from exc
        return cat.product_many(parts)
    raise io.InputError(f"unknown catalog entry {name!r}")


def cmd_catalog(args) -> int:
    try:
        data = _catalog_data(args)
    except cat.CatalogError as exc:
        raise io.InputError(str(exc)) from exc
    io.write(data if isinstance(data, dict) else data.to_json(), args.out)
    return OK


# -- search ----------------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    from .search.enumerate import RingSpec, enumerate_rings

    try:
        spec = RingSpec.from_json(json.loads(io.read_text(args.spec)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise io.InputError(f"bad ring spec: {exc}") from exc
    res = enumerate_rings(spec, budget=args.budget, jobs=args.jobs, max_rank=args.max_rank)
    summary = {"spec": spec.to_json(), "complete": res.complete, "nodes": res.nodes, "rings": len(res.rings)}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for k, ring in enumerate(res.rings):
            io.write(io.ring_with_dims_json(ring, res.dims), out / f"ring_{k:03d}.json")
        io.write(summary, out / "summary.json")
    for k, ring in enumerate(res.rings):
        prods = " ".join(
            f"{ring.labels[i]}*{ring.labels[j]}=" + "+".join(
                (f"{m}{ring.labels[z]}" if m > 1 else ring.labels[z]) for z, m in ring.product(i, j).items()
            )
            for i in range(1, ring.rank)
            for j in range(i, ring.rank)
        )
        _say(f"RING {k} {prods}")
    _say(f"SUMMARY rings={len(res.rings)} nodes={res.nodes} complete={res.complete}")
    return OK if res.complete else BUDGET


def cmd_classify(args) -> int:
    from .search.classify import classify

    target = args.target
    params = {"multiplier": args.multiplier, "order_bound": args.order_bound}
    if target.isdigit():
        fpdim = int(target)
    else:
        try:
            obj = json.loads(io.read_text(target))
            fpdim = int(obj["fpdim"])
            params.update({k: obj[k] for k in ("multiplier", "order_bound") if k in obj})
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise io.InputError(f"bad classify spec: {exc}") from exc
    res = classify(fpdim, budget=args.budget, jobs=args.jobs, max_rank=args.max_rank, **params)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        k = 0
        for fam in res.survivors:
            dims = res.enumerations[fam.dim_vector].dims
            for chi, o in fam.outcomes.items():
                for w in range(len(o.witnesses)):
                    obj = PremodularData(fam.ring, tuple(dims), o.twists(w), check=False).to_json()
                    obj["fermion"] = fam.ring.labels[chi]
                    obj["kind"] = fam.kind
                    io.write(obj, out / f"survivor_{k:04d}.json")
                    k += 1
        io.write(res.to_json(), out / "summary.json")
    for v in res.vectors:
        e = res.enumerations[v]
        _say(f"VECTOR {list(v)} rings={len(e.rings)} complete={e.complete}")
    for fam in res.families:
        status = "SAT" if fam.sat else "UNSAT"
        _say(f"FAMILY {fam.kind} dims={list(fam.dim_vector)} {status} witnesses={fam.witness_count}")
    _say(f"SUMMARY fpdim={fpdim} order_bound={res.order_bound} survivors={len(res.survivors)} complete={res.complete}")
    return OK if res.complete else BUDGET


def _report_outcome(outcome, out: Optional[str]) -> int:
    from .search.csp import SAT

    if out:
        io.write(outcome.to_json(), out)
    for line in outcome.certificate:
        _say(f"CERT {line}")
    _say(f"{outcome.status} order_bound={outcome.order_bound} witnesses={len(outcome.witnesses)}")
    return OK if outcome.status == SAT else UNSAT


def cmd_csp(args) -> int:
    from .search.csp import theta_csp
    from .search.enumerate import has_free_fermion

    loaded = io.load(args.path)
    ring = loaded.ring
    if not validate_ring(ring).ok:
        raise io.InputError("ring fails validation")
    dims = loaded.dims
    if dims is None:
        raise io.InputError("csp needs exact dims")
    if args.fermion:
        if args.fermion not in ring.labels:
            raise io.InputError(f"unknown fermion label {args.fermion!r}")
        chi = ring.index(args.fermion)
    elif loaded.fermion:
        chi = ring.index(loaded.fermion)
    else:
        free = has_free_fermion(ring)
        if not free:
            raise io.InputError("no invertible of order 2 acts freely")
        chi = free[0]
    return _report_outcome(theta_csp(ring, dims, chi, args.order_bound), args.out)


def cmd_obstruct(args) -> int:
    from .search.obstruction import obstruction_script

    params = {"order_bound": args.order_bound}
    if args.name in ("THM_4_3", "gamma_bound"):
        params["gamma"] = _orders(args.gamma)
    try:
        outcome = obstruction_script(args.name, **params)
    except ValueError as exc:
        raise io.InputError(str(exc)) from exc
    return _report_outcome(outcome, args.out)


# -- wiring ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fusionlab", description=__doc__.splitlines()[0])
    p.add_argument("--conductor-cap", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="ring axioms, plus S-matrix checks when dims and twists are present")
    s.add_argument("path")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("analyze", help="gradings, nilpotency, center, subrings, dimension table")
    s.add_argument("path")
    s.add_argument("--eps", default="1e-12")
    s.add_argument("--max-subring-rank", type=int, default=16)
    s.set_defaults(fn=cmd_analyze)

    s = sub.add_parser("super", help="promote and run the super-modular suite")
    s.add_argument("path")
    s.add_argument("--seed", type=int, default=None, help="random valid partition instead of the default one")
    s.set_defaults(fn=cmd_super)

    s = sub.add_parser("catalog", help="emit a catalog datum")
    s.add_argument("name", choices=["svec", "semion", "pointed", "ising", "ty", "rep-dihedral", "product"])
    s.add_argument("files", nargs="*", help="inputs for product")
    s.add_argument("--nu", type=int, default=1)
    s.add_argument("--orders", default="2")
    s.add_argument("--form", type=int, default=0)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--conjugate", action="store_true")
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_catalog)

    for name, fn in (("enumerate", cmd_enumerate), ("classify", cmd_classify)):
        s = sub.add_parser(name)
        s.add_argument("spec" if name == "enumerate" else "target")
        s.add_argument("--out", default=None, help="results directory")
        s.add_argument("--budget", type=int, default=None)
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--max-rank", type=int, default=8 if name == "enumerate" else 12)
        if name == "classify":
            s.add_argument("--multiplier", type=int, default=16)
            s.add_argument("--order-bound", type=int, default=None)
        s.set_defaults(fn=fn)

    s = sub.add_parser("csp", help="twist search on a ring with exact dims")
    s.add_argument("path")
    s.add_argument("--fermion", default=None)
    s.add_argument("--order-bound", type=int, default=16)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_csp)

    s = sub.add_parser("obstruct", help="scripted obstruction with certificate")
    s.add_argument("name")
    s.add_argument("--gamma", default="2,2")
    s.add_argument("--order-bound", type=int, default=16)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_obstruct)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.conductor_cap is not None and args.conductor_cap < 1:
        parser.error("--conductor-cap must be positive")
    previous = conductor_cap()
    if args.conductor_cap is not None:
        set_conductor_cap(args.conductor_cap)
    try:
        return args.fn(args)
    except io.InputError as exc:
        print(f"ERROR input: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except ConductorOverflowError as exc:
        print(f"ERROR conductor: {exc}", file=sys.stderr)
        return INPUT_ERROR
    finally:
        set_conductor_cap(previous)


if __name__ == "__main__":
    sys.exit(main())
