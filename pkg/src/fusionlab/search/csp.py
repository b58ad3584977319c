"""Twist search: all theta assignments (roots of unity of bounded order) that make a ring super-modular.

Exponents live in Z/B.  Forced relations (unit, fermion, duality, fermion partners) are
merged with a signed union-find.  Free classes are assigned one at a time; each column
character identity s_XY s_ZY = d_Y sum_W N_XZ^W s_WY is tested as soon as every twist it
touches is fixed.  Full assignments then face the unitarity and Verlinde float filters.
Every float test rejects only on a defect far above rounding error; survivors are
re-checked exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..exactnum import CycloNum, as_cyclo, conductor_cap, root_of_unity
from ..fusering import FusionRing
from ..premodular import PremodularData, PremodularError, character_check
from ..supermodular import SuperModularError, data_level_suite, promote

SAT, UNSAT = "SAT", "UNSAT"
TOL = 1e-6


@dataclass
class CSPOutcome:
    status: str
    order_bound: int
    witnesses: list[tuple[int, ...]] = field(default_factory=list)
    certificate: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def twists(self, k: int = 0) -> tuple[CycloNum, ...]:
        return tuple(root_of_unity(self.order_bound, e) for e in self.witnesses[k])

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "order_bound": self.order_bound,
            "witnesses": [list(w) for w in self.witnesses],
            "certificate": list(self.certificate),
            "stats": dict(self.stats),
        }


class _SignedUF:
    """e[x] = e[root(x)] + off[x] (mod B)."""

    def __init__(self, n: int, B: int):
        self.parent = list(range(n))
        self.off = [0] * n
        self.B = B

    def find(self, x: int) -> tuple[int, int]:
        off = 0
        while self.parent[x] != x:
            off += self.off[x]
            x = self.parent[x]
        return x, off % self.B

    def union(self, x: int, y: int, delta: int) -> bool:
        """Impose e[x] = e[y] + delta; False on contradiction."""
        rx, ox = self.find(x)
        ry, oy = self.find(y)
        if rx == ry:
            return (ox - oy - delta) % self.B == 0
        # keep the smaller index as root so the unit class is rooted at 0
        if rx < ry:
            self.parent[ry] = rx
            self.off[ry] = (ox - oy - delta) % self.B
        else:
            self.parent[rx] = ry
            self.off[rx] = (oy + delta - ox) % self.B
        return True


def _pi0(action: Sequence[int], dual: Sequence[int]) -> list[int]:
    chosen: dict[int, int] = {}
    for x in range(len(action)):
        key = min(x, action[x])
        if key in chosen:
            continue
        dkey = min(dual[x], action[dual[x]])
        if dkey in chosen and dkey != key:
            chosen[key] = dual[chosen[dkey]]
        else:
            chosen[key] = key
    return sorted(chosen.values())


def _s_float(N, d, E, B) -> np.ndarray:
    r = N.shape[0]
    th = np.exp(2j * np.pi * E / B)
    inner = (th * d) @ N.reshape(r * r, r).T
    return inner.reshape(-1, r, r) * np.conj(th)[:, :, None] * np.conj(th)[:, None, :]


def _character_levels(ring: FusionRing, cls: Sequence[int], nvars: int) -> list[tuple[np.ndarray, ...]]:
    """Bucket every (X, Z, Y) character identity by the last free class it depends on."""
    r = ring.rank
    supp = [[np.nonzero(ring.N[i, j])[0] for j in range(r)] for i in range(r)]
    buckets: list[list[tuple[int, int, int]]] = [[] for _ in range(nvars + 1)]
    for X, Z, Y in itertools.product(range(r), repeat=3):
        if Z < X:
            continue
        deps = {X, Y, Z}
        deps.update(supp[X][Y], supp[Z][Y])
        for W in supp[X][Z]:
            deps.add(W)
            deps.update(supp[W][Y])
        buckets[max(cls[t] for t in deps) + 1].append((X, Z, Y))
    return [tuple(np.array(c, dtype=np.int64).reshape(-1) for c in zip(*b)) if b else (np.array([], dtype=np.int64),) * 3 for b in buckets]


def _float_filter(N, d, E, pi0, partner, dual, D, B) -> np.ndarray:
    """Boolean mask over the rows of E (batch x rank exponents)."""
    S = _s_float(N, d, E, B)
    Sh = S[:, pi0][:, :, pi0]
    n = len(pi0)
    unit = Sh @ np.conj(Sh) - (D / 2) * np.eye(n)
    ok = np.abs(unit).max(axis=(1, 2)) < TOL
    if not ok.any():
        return ok
    Sh_ok = Sh[ok]
    dpi = d[pi0]
    pos = {v: i for i, v in enumerate(pi0)}
    dual_pos = [pos[dual[v]] for v in pi0]
    V = np.einsum("bxv,byv,bzv->bxyz", Sh_ok, Sh_ok / dpi, Sh_ok[:, :, dual_pos]) * (2 / D)
    Nhat = N[np.ix_(pi0, pi0, pi0)] + N[np.ix_(pi0, pi0, partner)]
    ok2 = np.abs(V - Nhat).max(axis=(1, 2, 3)) < TOL
    out = ok.copy()
    out[ok] = ok2
    return out


def theta_csp(
    ring: FusionRing,
    dims: Sequence,
    fermion: int,
    order_bound: int = 16,
    chunk: int = 1 << 14,
    max_witnesses: Optional[int] = None,
) -> CSPOutcome:
    B = order_bound
    if B > conductor_cap():
        raise ValueError(f"order_bound {B} exceeds the conductor cap {conductor_cap()}")
    r = ring.rank
    dims = [as_cyclo(x) for x in dims]
    cert: list[str] = []
    labels = ring.labels
    out = CSPOutcome(UNSAT, B, certificate=cert)
    if B % 2:
        cert.append(f"theta_{labels[fermion]}=-1 has no solution among roots of unity of order dividing {B}")
        return out
    action = []
    for x in range(r):
        prod = ring.product(fermion, x)
        if len(prod) != 1:
            raise ValueError(f"{labels[fermion]} is not invertible")
        action.append(next(iter(prod)))
    if any(action[x] == x for x in range(r)):
        fixed = [labels[x] for x in range(r) if action[x] == x]
        cert.append(f"{labels[fermion]} fixes {fixed}: theta_X=-theta_X")
        return out
    uf = _SignedUF(r, B)
    half = B // 2
    relations = [(fermion, 0, half, f"theta_{labels[fermion]}=-1")]
    for x in range(r):
        relations.append((ring.dual[x], x, 0, f"theta_{labels[ring.dual[x]]}=theta_{labels[x]}"))
        relations.append((action[x], x, half, f"theta_{labels[action[x]]}=-theta_{labels[x]}"))
    used = []
    for x, y, delta, text in relations:
        used.append(text)
        if not uf.union(x, y, delta):
            cert.append("contradictory forced relations: " + ", ".join(dict.fromkeys(used)))
            cert.append("-> theta=-theta for some simple")
            return out
    roots = sorted({uf.find(x)[0] for x in range(r)} - {0})
    var_of = {rt: i for i, rt in enumerate(roots)}
    cls = [var_of.get(uf.find(x)[0], -1) for x in range(r)]
    base_off = np.array([uf.find(x)[1] for x in range(r)], dtype=np.int64)
    sel = np.zeros((r, len(roots)), dtype=np.int64)
    for x in range(r):
        if cls[x] >= 0:
            sel[x, cls[x]] = 1
    d = np.array([x.to_complex().real for x in dims])
    D = float((d * d).sum())
    N = ring.N.astype(np.float64)
    levels = _character_levels(ring, cls, len(roots))
    frontier = np.zeros((1, 0), dtype=np.int64)
    visited = 0
    for lev in range(len(roots) + 1):
        if lev > 0:
            frontier = np.hstack([np.repeat(frontier, B, axis=0), np.tile(np.arange(B), len(frontier))[:, None]])
        visited += len(frontier)
        Xs, Zs, Ys = levels[lev]
        if len(Xs) == 0 or len(frontier) == 0:
            continue
        keep = []
        for start in range(0, len(frontier), chunk):
            F = frontier[start : start + chunk]
            E = (F @ sel[:, : F.shape[1]].T + base_off) % B
            S = _s_float(N, d, E, B)
            lhs = S[:, Xs, Ys] * S[:, Zs, Ys] / d[Ys]
            rhs = np.einsum("cw,nwc->nc", N[Xs, Zs], S[:, :, Ys])
            keep.append(np.abs(lhs - rhs).max(axis=1) < TOL)
        frontier = frontier[np.concatenate(keep)]
    pi0 = _pi0(action, ring.dual)
    partner = [action[z] for z in pi0]
    survivors = []
    for start in range(0, len(frontier), chunk):
        E = (frontier[start : start + chunk] @ sel.T + base_off) % B
        mask = _float_filter(N, d, E, pi0, partner, ring.dual, D, B)
        survivors.extend(tuple(int(v) for v in row) for row in E[mask])
    total = B ** len(roots)
    witnesses = []
    for e in survivors:
        twists = tuple(root_of_unity(B, k) for k in e)
        try:
            base = PremodularData(ring, tuple(dims), twists)
            sm = promote(base)
        except (PremodularError, SuperModularError):
            continue
        if sm.fermion != fermion:
            continue
        if data_level_suite(sm).ok and character_check(base).ok:
            witnesses.append(e)
            if max_witnesses is not None and len(witnesses) >= max_witnesses:
                break
    out.stats = {
        "free_classes": len(roots),
        "grid": total,
        "visited": visited,
        "float_survivors": len(survivors),
        "exact": len(witnesses),
    }
    if witnesses:
        out.status = SAT
        out.witnesses = witnesses
    else:
        cert.append(
            f"exhausted {total} assignments of {len(roots)} free twist classes at order bound {B} "
            f"({visited} partial assignments visited): {len(survivors)} passed the float filter, none passed the exact checks"
        )
    return out
