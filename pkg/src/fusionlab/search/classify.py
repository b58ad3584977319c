"""Bounded classification of slightly degenerate data at a fixed integer FPdim."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

from ..catalog import ising_data, svec
from ..exactnum import sqrt_int
from ..fusering import FusionRing, deligne_product
from .csp import CSPOutcome, theta_csp
from .enumerate import EnumerationResult, RingSpec, embeds, enumerate_rings, has_free_fermion


def admissible_dim_vectors(fpdim: int, max_rank: Optional[int] = None) -> list[tuple[int, ...]]:
    """Squared-dim multisets compatible with a free fermion at this FPdim.

    Every n satisfies 2n | fpdim, each value occurs an even number of times, there are at
    least two invertibles, and their count divides fpdim.
    """
    parts = [n for n in range(1, fpdim + 1) if fpdim % (2 * n) == 0]
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, acc: list[int]):
        if remaining == 0:
            ones = acc.count(1)
            if ones >= 2 and fpdim % ones == 0 and (max_rank is None or len(acc) <= max_rank):
                out.append(tuple(sorted(acc)))
            return
        if i == len(parts):
            return
        n = parts[i]
        for k in range(0, remaining // n + 1, 2):
            rec(i + 1, remaining - k * n, acc + [n] * k)

    rec(0, fpdim, [])
    return sorted(out, key=lambda v: (len(v), v))


@dataclass
class Family:
    ring: FusionRing
    dim_vector: tuple[int, ...]
    kind: str
    outcomes: dict[int, CSPOutcome] = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return any(o.sat for o in self.outcomes.values())

    @property
    def witness_count(self) -> int:
        return sum(len(o.witnesses) for o in self.outcomes.values())

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dim_vector": list(self.dim_vector),
            "ring": self.ring.to_json(),
            "fermions": {self.ring.labels[f]: o.to_json() for f, o in self.outcomes.items()},
        }


@dataclass
class Classification:
    fpdim: int
    order_bound: int
    vectors: list[tuple[int, ...]]
    enumerations: dict[tuple[int, ...], EnumerationResult]
    families: list[Family]
    seconds: float = 0.0

    @property
    def survivors(self) -> list[Family]:
        return [f for f in self.families if f.sat]

    @property
    def complete(self) -> bool:
        return all(e.complete for e in self.enumerations.values())

    def survivor_keys(self) -> set[bytes]:
        return {f.ring.N.tobytes() for f in self.survivors}

    def strictly_weakly_integral_survivors(self) -> list[Family]:
        return [f for f in self.survivors if any(math.isqrt(n) ** 2 != n for n in f.dim_vector)]

    def to_json(self) -> dict:
        return {
            "fpdim": self.fpdim,
            "order_bound": self.order_bound,
            "complete": self.complete,
            "vectors": [
                {"dim_vector": list(v), "rings": len(self.enumerations[v].rings), "nodes": self.enumerations[v].nodes}
                for v in self.vectors
            ],
            "survivors": [f.to_json() for f in self.survivors],
            "rejected": len(self.families) - len(self.survivors),
            "seconds": round(self.seconds, 3),
        }


def _svec_ising_ring() -> FusionRing:
    return deligne_product(svec().ring, ising_data().ring)


def family_kind(ring: FusionRing, dim_vector) -> str:
    if all(n == 1 for n in dim_vector):
        return "pointed"
    target = _svec_ising_ring()
    if ring.rank == target.rank and embeds(target, ring):
        return "sVec x Ising"
    return "other"


def classify(
    fpdim: int,
    mode: str = "slightly_degenerate",
    multiplier: int = 16,
    order_bound: Optional[int] = None,
    max_rank: int = 12,
    jobs: int = 1,
    budget: Optional[int] = None,
) -> Classification:
    """Twist orders divide order_bound, which defaults to multiplier * fpdim."""
    if mode != "slightly_degenerate":
        raise ValueError(f"unsupported mode {mode!r}")
    if order_bound is None:
        order_bound = multiplier * fpdim
    t0 = time.perf_counter()
    vectors = admissible_dim_vectors(fpdim, max_rank)
    enums, families = {}, []
    for v in vectors:
        res = enumerate_rings(RingSpec(v, fermion=True), budget=budget, jobs=jobs, max_rank=max_rank)
        enums[v] = res
        dims = [sqrt_int(n) for n in v]
        for ring in res.rings:
            fam = Family(ring, v, family_kind(ring, v))
            for chi in has_free_fermion(ring):
                fam.outcomes[chi] = theta_csp(ring, dims, chi, order_bound)
            families.append(fam)
    return Classification(fpdim, order_bound, vectors, enums, families, time.perf_counter() - t0)


def stable_under_doubling(fpdim: int, multiplier: int = 16, **kw) -> tuple[bool, Classification, Classification]:
    a = classify(fpdim, multiplier=multiplier, **kw)
    b = classify(fpdim, multiplier=2 * multiplier, **kw)
    return a.survivor_keys() == b.survivor_keys(), a, b
