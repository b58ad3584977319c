"""Exhaustive enumeration of commutative fusion rings with prescribed squared dimensions.

Unknowns are the fully symmetric multiplicities T(a, b, c) = N_ab^{c*}, one per orbit
under S_3 and simultaneous duality.  Rows (i, j) are filled in a fixed order; each row
must satisfy d_i d_j = sum_k N_ij^k d_k, which splits into one integer equation per
square class because square roots of distinct squarefree integers are independent
over Q.  Associativity is pruned with interval bounds on every partial assignment.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from ..fusering import FusionRing, _squarefree, fp_character, validate_ring
from ..exactnum import sqrt_int
from ..groups import AbelianGroup, abelian_groups_of_order


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RingSpec:
    """Target squared dimensions (unit first), plus optional filters."""

    dim_vector: tuple[int, ...]
    duality: Optional[tuple[int, ...]] = None
    fermion: bool = False
    required_subring: Optional[FusionRing] = None

    def __post_init__(self):
        dv = tuple(sorted(int(x) for x in self.dim_vector))
        if not dv or dv[0] != 1:
            raise ValueError("dim_vector must contain the unit (squared dim 1)")
        object.__setattr__(self, "dim_vector", dv)
        if self.duality is not None and len(self.duality) != len(dv):
            raise ValueError("duality must have one entry per simple")

    @property
    def rank(self) -> int:
        return len(self.dim_vector)

    @property
    def fpdim(self) -> int:
        return sum(self.dim_vector)

    def to_json(self) -> dict:
        out = {"dim_vector": list(self.dim_vector), "fermion": self.fermion}
        if self.duality is not None:
            out["duality"] = list(self.duality)
        if self.required_subring is not None:
            out["required_subring"] = self.required_subring.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "RingSpec":
        sub = obj.get("required_subring")
        return cls(
            tuple(obj["dim_vector"]),
            tuple(obj["duality"]) if obj.get("duality") is not None else None,
            bool(obj.get("fermion", False)),
            FusionRing.from_json(sub) if sub else None,
        )


@dataclass
class EnumerationResult:
    rings: list[FusionRing]
    complete: bool
    nodes: int
    spec: RingSpec

    @property
    def dims(self):
        return [sqrt_int(n) for n in self.spec.dim_vector]


# -- helpers -----------------------------------------------------------------------------


def _duality_patterns(classes: list[list[int]]) -> Iterator[list[int]]:
    """For each non-invertible dim class: number of dual pairs (pairs first, rest self-dual)."""
    choices = [range(len(c) // 2 + 1) for c in classes]
    for pairs in itertools.product(*choices):
        yield list(pairs)


def _self_dual_profile(dual: Sequence[int], sq: Sequence[int]) -> tuple:
    prof: dict[int, int] = {}
    for i, n in enumerate(sq):
        prof[n] = prof.get(n, 0) + (1 if dual[i] == i else 0)
    return tuple(sorted(prof.items()))


def has_free_fermion(ring: FusionRing) -> list[int]:
    """Invertibles of order 2 acting without fixed points."""
    out = []
    for c in range(1, ring.rank):
        if int(ring.N[c, ring.dual[c]].sum()) != 1 or ring.dual[c] != c:
            continue
        if all(ring.N[c, x, x] == 0 for x in range(ring.rank)):
            out.append(c)
    return out


def embeds(sub: FusionRing, ring: FusionRing) -> bool:
    """Is there an injective unit-preserving relabeling of sub into a subring of ring?"""
    rs = sub.rank
    for img in itertools.permutations(range(1, ring.rank), rs - 1):
        p = (0,) + img
        if np.array_equal(ring.N[np.ix_(p, p, p)], sub.N) and all(
            ring.dual[p[i]] == p[sub.dual[i]] for i in range(rs)
        ):
            if all(set(np.nonzero(ring.N[p[i], p[j]])[0]) <= set(p) for i in range(rs) for j in range(rs)):
                return True
    return False


# -- single-task search ---------------------------------------------------------------------


class _Search:
    def __init__(self, sq: Sequence[int], group: AbelianGroup, pairs: Sequence[int], budget: Optional[int]):
        self.sq = list(sq)
        r = self.r = len(sq)
        a = group.size
        self.group = group
        self.budget = budget
        self.nodes = 0
        self.m = [0] * r
        self.cls = [0] * r
        for i, n in enumerate(sq):
            s = _squarefree(n)
            self.cls[i] = s
            self.m[i] = math.isqrt(n // s)
        # duality: group inverse on invertibles, canonical pattern on the rest
        dual = [0] * r
        for g, el in enumerate(group.elements):
            dual[g] = group.index(group.neg(el))
        classes = self.classes = self._noninv_classes(a)
        for c, p in zip(classes, pairs):
            for t in range(p):
                x, y = c[2 * t], c[2 * t + 1]
                dual[x], dual[y] = y, x
            for x in c[2 * p :]:
                dual[x] = x
        self.dual = dual
        self.a = a
        self._build_orbits()

    def _noninv_classes(self, a: int) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(a, self.r):
            out.setdefault(self.sq[i], []).append(i)
        return [out[k] for k in sorted(out)]

    def _build_orbits(self) -> None:
        r, dual = self.r, self.dual
        key_of: dict[tuple, int] = {}
        pos_key = np.zeros((r, r, r), dtype=np.int64)
        members: list[list[tuple[int, int, int]]] = []
        for i, j, k in itertools.product(range(r), repeat=3):
            t = (i, j, dual[k])
            tt = (dual[t[0]], dual[t[1]], dual[t[2]])
            key = min(tuple(sorted(t)), tuple(sorted(tt)))
            if key not in key_of:
                key_of[key] = len(members)
                members.append([])
            o = key_of[key]
            pos_key[i, j, k] = o
            members[o].append((i, j, k))
        self.pos_key = pos_key
        self.members = [tuple(np.array(m).T) for m in members]
        self.n_orb = len(members)
        # bounds and presets
        hi = np.full(self.n_orb, 1 << 20, dtype=np.int64)
        val = np.full(self.n_orb, -1, dtype=np.int64)
        T = self.group.table
        a = self.a
        for i, j, k in itertools.product(range(r), repeat=3):
            o = pos_key[i, j, k]
            if i == 0 or j == 0:
                v = 1 if (k == (j if i == 0 else i)) else 0
                val[o] = v
                continue
            if i < a and j < a:
                val[o] = 1 if (k < a and T[i, j] == k) else 0
                continue
            s0 = _squarefree(self.sq[i] * self.sq[j])
            if self.cls[k] != s0:
                hi[o] = 0
                continue
            c = math.isqrt(self.sq[i] * self.sq[j] // s0)
            hi[o] = min(hi[o], c // self.m[k])
        self.hi0 = hi
        self.val0 = val

    def _arrays(self, val: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lo = np.where(val >= 0, val, 0)
        hi = np.where(val >= 0, val, self.hi0)
        return lo[self.pos_key], hi[self.pos_key]

    def _assoc_ok(self, val: np.ndarray) -> bool:
        lo, hi = self._arrays(val)
        l_lo = np.einsum("ijm,mkl->ijkl", lo, lo)
        l_hi = np.einsum("ijm,mkl->ijkl", hi, hi)
        r_lo = np.einsum("jkm,iml->ijkl", lo, lo)
        r_hi = np.einsum("jkm,iml->ijkl", hi, hi)
        return not (np.any(l_lo > r_hi) or np.any(l_hi < r_lo))

    def rows(self) -> list[tuple[int, int]]:
        a, r = self.a, self.r
        out = [(g, x) for g in range(1, a) for x in range(a, r)]
        out += [(x, y) for x in range(a, r) for y in range(x, r)]
        return out

    def _solutions(self, weights: list[int], bounds: list[int], target: int) -> Iterator[tuple[int, ...]]:
        if not weights:
            if target == 0:
                yield ()
            return
        w, b = weights[0], bounds[0]
        rest_max = sum(ww * bb for ww, bb in zip(weights[1:], bounds[1:]))
        for v in range(min(b, target // w), -1, -1):
            rem = target - v * w
            if rem > rest_max:
                break
            for tail in self._solutions(weights[1:], bounds[1:], rem):
                yield (v,) + tail

    def run(self) -> Iterator[np.ndarray]:
        val = self.val0.copy()
        if not self._assoc_ok(val):
            return
        yield from self._recurse(self.rows(), 0, val)

    def _recurse(self, rows, idx, val) -> Iterator[np.ndarray]:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded
        if idx == len(rows):
            N = np.where(val >= 0, val, 0)[self.pos_key]
            yield N
            return
        i, j = rows[idx]
        s0 = _squarefree(self.sq[i] * self.sq[j])
        c = math.isqrt(self.sq[i] * self.sq[j] // s0)
        fixed = 0
        free: dict[int, int] = {}
        for k in range(self.r):
            if self.cls[k] != s0:
                continue
            o = int(self.pos_key[i, j, k])
            if val[o] >= 0:
                fixed += int(val[o]) * self.m[k]
            else:
                free[o] = free.get(o, 0) + self.m[k]
        target = c - fixed
        if target < 0:
            return
        orbs = list(free)
        weights = [free[o] for o in orbs]
        bounds = [int(self.hi0[o]) for o in orbs]
        for sol in self._solutions(weights, bounds, target):
            nv = val.copy()
            for o, v in zip(orbs, sol):
                nv[o] = v
            # orbits of this row that carry no dimension weight are forced to 0
            for k in range(self.r):
                o = int(self.pos_key[i, j, k])
                if nv[o] < 0:
                    nv[o] = 0
            if self._assoc_ok(nv):
                yield from self._recurse(rows, idx + 1, nv)


def _canonical(N: np.ndarray, perms: np.ndarray) -> tuple[bytes, np.ndarray]:
    P = perms
    imgs = N[P[:, :, None, None], P[:, None, :, None], P[:, None, None, :]]
    flat = imgs.reshape(len(P), -1)
    best = min(range(len(P)), key=lambda t: flat[t].tobytes())
    return flat[best].tobytes(), imgs[best]


def _perms(group: AbelianGroup, classes: list[list[int]]) -> np.ndarray:
    auts = group.automorphisms()
    class_perms = [list(itertools.permutations(c)) for c in classes]
    out = []
    for aut in auts:
        for combo in itertools.product(*class_perms):
            p = list(aut)
            for c in combo:
                p.extend(c)
            out.append(p)
    return np.array(out, dtype=np.int64)


def _labels(sq: Sequence[int], a: int) -> list[str]:
    out = ["1"] + [f"g{i}" for i in range(1, a)]
    counts: dict[int, int] = {}
    for n in sq[a:]:
        counts[n] = counts.get(n, 0) + 1
        out.append(f"X{n}_{counts[n]}")
    return out


def _run_task(args) -> tuple[list[tuple[bytes, np.ndarray]], int, bool]:
    sq, orders, pairs, budget = args
    group = AbelianGroup(orders)
    search = _Search(sq, group, pairs, budget)
    found: dict[bytes, np.ndarray] = {}
    perms = _perms(group, search.classes) if search.a < len(sq) else None
    complete = True
    try:
        for N in search.run():
            if perms is None:
                found.setdefault(N.tobytes(), N)
                continue
            key, canon = _canonical(N, perms)
            found.setdefault(key, canon)
    except BudgetExceeded:
        complete = False
    return sorted(found.items()), search.nodes, complete


def _ring_from_N(N: np.ndarray, labels: Sequence[str]) -> FusionRing:
    r = N.shape[0]
    dual = [int(np.nonzero(N[i, :, 0])[0][0]) for i in range(r)]
    return FusionRing(labels, dual, N)


def enumerate_rings(spec: RingSpec, budget: Optional[int] = None, jobs: int = 1, max_rank: int = 8) -> EnumerationResult:
    """All rings (up to relabeling fixing the unit and dim classes) matching spec."""
    if spec.rank > max_rank:
        raise ValueError(f"rank {spec.rank} exceeds max_rank {max_rank}")
    sq = spec.dim_vector
    a = sum(1 for n in sq if n == 1)
    noninv: dict[int, int] = {}
    for n in sq[a:]:
        noninv[n] = noninv.get(n, 0) + 1
    classes, start = [], a
    for n in sorted(noninv):
        classes.append(list(range(start, start + noninv[n])))
        start += noninv[n]
    tasks = []
    for G in abelian_groups_of_order(a):
        for pairs in _duality_patterns(classes):
            tasks.append((tuple(sq), G.orders, tuple(pairs), budget))
    if jobs > 1 and len(tasks) > 1:
        # each worker gets the full budget; the merged count is still reported
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_task, tasks))
    else:
        results, spent = [], 0
        for t in tasks:
            left = None if budget is None else max(budget - spent, 0)
            results.append(_run_task(t[:-1] + (left,)))
            spent += results[-1][1]
    labels = _labels(sq, a)
    rings, nodes, complete = [], 0, True
    for found, n, ok in results:
        nodes += n
        complete &= ok
        for _, N in found:
            ring = _ring_from_N(N, labels)
            if not validate_ring(ring).ok:
                continue
            fp_character(ring, [sqrt_int(x) for x in sq])
            if spec.fermion and not has_free_fermion(ring):
                continue
            if spec.duality is not None and _self_dual_profile(ring.dual, sq) != _self_dual_profile(spec.duality, sq):
                continue
            if spec.required_subring is not None and not embeds(spec.required_subring, ring):
                continue
            rings.append(ring)
    return EnumerationResult(rings, complete, nodes, spec)
