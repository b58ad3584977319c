"""Fusion rings: validation, Frobenius-Perron dimensions, gradings, subrings."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import mpmath
from mpmath.libmp import to_rational
import numpy as np

from .exactnum import CycloNum, Interval, as_cyclo, certified_sign, sqrt_int
from .groups import is_abelian_group_table, primary_type_of_table
from .report import Report

Dims = Sequence[Union[CycloNum, Interval]]


class FPDimError(ValueError):
    """Claimed dimensions are not the positive character of the ring."""


class GradingError(ValueError):
    pass


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class FusionRing:
    """Based ring with unit at index 0. N[i, j, k] is the multiplicity of k in i*j."""

    __slots__ = ("labels", "dual", "N", "__dict__")

    def __init__(self, labels: Sequence[str], dual: Sequence[int], N: np.ndarray):
        N = _readonly(N)
        r = len(labels)
        if N.shape != (r, r, r):
            raise ValueError(f"N must have shape ({r},{r},{r}), got {N.shape}")
        if len(dual) != r:
            raise ValueError("dual has wrong length")
        if len(set(labels)) != r:
            raise ValueError("labels must be distinct")
        self.labels = tuple(str(x) for x in labels)
        self.dual = tuple(int(x) for x in dual)
        self.N = N

    @classmethod
    def from_sparse(cls, labels, dual, entries: Iterable[Sequence[int]]) -> "FusionRing":
        r = len(labels)
        N = np.zeros((r, r, r), dtype=np.int64)
        for i, j, k, m in entries:
            N[i, j, k] = m
        return cls(labels, dual, N)

    @classmethod
    def group_ring(cls, table: np.ndarray, labels: Optional[Sequence[str]] = None) -> "FusionRing":
        n = table.shape[0]
        N = np.zeros((n, n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                N[a, b, table[a, b]] = 1
        dual = [int(np.where(table[a] == 0)[0][0]) for a in range(n)]
        labels = labels or (["1"] + [f"g{a}" for a in range(1, n)])
        return cls(labels, dual, N)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FusionRing)
            and self.labels == other.labels
            and self.dual == other.dual
            and np.array_equal(self.N, other.N)
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.dual, self.N.tobytes()))

    def __repr__(self) -> str:
        return f"FusionRing(rank={self.rank}, labels={list(self.labels)})"

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def product(self, i: int, j: int) -> dict[int, int]:
        row = self.N[i, j]
        return {int(k): int(row[k]) for k in np.nonzero(row)[0]}

    def support(self, i: int, j: int) -> set[int]:
        return set(int(k) for k in np.nonzero(self.N[i, j])[0])

    @cached_property
    def fusion_matrices(self) -> np.ndarray:
        """L[i][j, k] = N[i, j, k]: left multiplication by i."""
        return self.N

    def restrict(self, subset: Iterable[int]) -> "FusionRing":
        """The subring on a closed index set, reindexed in ascending order."""
        idx = sorted(set(subset))
        if idx[0] != 0:
            raise ValueError("subring must contain the unit")
        pos = {v: p for p, v in enumerate(idx)}
        N = self.N[np.ix_(idx, idx, idx)]
        return FusionRing([self.labels[i] for i in idx], [pos[self.dual[i]] for i in idx], N)

    def permute(self, perm: Sequence[int]) -> "FusionRing":
        """Relabel: new index p holds old simple perm[p]."""
        perm = list(perm)
        if perm[0] != 0:
            raise ValueError("permutation must fix the unit")
        inv = {v: p for p, v in enumerate(perm)}
        N = self.N[np.ix_(perm, perm, perm)]
        return FusionRing([self.labels[i] for i in perm], [inv[self.dual[i]] for i in perm], N)

    def to_json(self) -> dict:
        r = self.rank
        entries = [[i, j, k, int(self.N[i, j, k])] for i in range(r) for j in range(r) for k in range(r) if self.N[i, j, k]]
        return {"labels": list(self.labels), "dual": list(self.dual), "N": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "FusionRing":
        return cls.from_sparse(obj["labels"], obj["dual"], obj["N"])


# -- validation -----------------------------------------------------------------


def _fmt_viol(name: str, idx: list[tuple], limit: int = 5) -> str:
    shown = ", ".join(str(t) for t in idx[:limit])
    more = f" (+{len(idx) - limit} more)" if len(idx) > limit else ""
    return f"{len(idx)} violation(s) at {shown}{more}"


def validate_ring(ring: FusionRing) -> Report:
    """One report line per axiom; every violated index tuple is listed in `data`."""
    rep = Report()
    N, r, dual = ring.N, ring.rank, ring.dual

    neg = [tuple(map(int, t)) for t in np.argwhere(N < 0)]
    rep.add("ring.nonnegative", not neg, _fmt_viol("nonneg", neg) if neg else "")

    inv_bad = [(i,) for i in range(r) if not (0 <= dual[i] < r and dual[dual[i]] == i)]
    rep.add("ring.dual_involution", not inv_bad, _fmt_viol("dual", inv_bad) if inv_bad else "")
    if inv_bad:
        rep.data["violations"] = {"dual_involution": inv_bad}
        return rep

    eye = np.eye(r, dtype=np.int64)
    unit_bad = [(0, j, k) for j, k in np.argwhere(N[0] != eye)] + [(j, 0, k) for j, k in np.argwhere(N[:, 0, :] != eye)]
    unit_bad = [tuple(map(int, t)) for t in unit_bad]
    rep.add("ring.unit", not unit_bad and dual[0] == 0, _fmt_viol("unit", unit_bad) if unit_bad else "")

    target = np.zeros((r, r), dtype=np.int64)
    target[np.arange(r), list(dual)] = 1
    duality_bad = [(int(i), int(j), 0) for i, j in np.argwhere(N[:, :, 0] != target)]
    rep.add("ring.duality", not duality_bad, _fmt_viol("duality", duality_bad) if duality_bad else "")

    d = np.array(dual)
    # N[i][j][k] = N[i*][k][j] = N[k][j*][i]
    A = N.transpose(0, 2, 1)[d]  # A[i, j, k] = N[i*, k, j]
    B = N[:, d, :].transpose(2, 1, 0)  # B[i, j, k] = N[k, j*, i]
    frob_bad = [tuple(map(int, t)) for t in np.argwhere((N != A) | (N != B))]
    rep.add("ring.frobenius", not frob_bad, _fmt_viol("frobenius", frob_bad) if frob_bad else "")

    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    assoc_bad = [tuple(map(int, t)) for t in np.argwhere(lhs != rhs)]
    rep.add("ring.associativity", not assoc_bad, _fmt_viol("associativity", assoc_bad) if assoc_bad else "")

    comm_bad = [tuple(map(int, t)) for t in np.argwhere(N != N.transpose(1, 0, 2))]
    rep.add("ring.commutativity", not comm_bad, _fmt_viol("commutativity", comm_bad) if comm_bad else "")

    rep.data["violations"] = {
        k: v
        for k, v in {
            "nonnegative": neg,
            "unit": unit_bad,
            "duality": duality_bad,
            "frobenius": frob_bad,
            "associativity": assoc_bad,
            "commutativity": comm_bad,
        }.items()
        if v
    }
    return rep


# -- Frobenius-Perron dimensions --------------------------------------------------


def _verify_character(ring: FusionRing, dims: Sequence[CycloNum]) -> None:
    r = ring.rank
    if len(dims) != r:
        raise FPDimError(f"expected {r} dims, got {len(dims)}")
    if dims[0] != 1:
        raise FPDimError("dimension of the unit must be 1")
    for i in range(r):
        for j in range(i, r):
            rhs = sum((dims[k] * int(m) for k, m in ring.product(i, j).items()), CycloNum.rational(0))
            if dims[i] * dims[j] != rhs:
                raise FPDimError(f"d_{i} d_{j} != sum_k N_{i}{j}^k d_k")
    cache: dict[CycloNum, int] = {}
    for i, x in enumerate(dims):
        if x not in cache:
            cache[x] = certified_sign(x)
        if cache[x] <= 0:
            raise FPDimError(f"d_{i} is not positive")


def _perron_vector(M: np.ndarray, prec: int) -> list[Fraction]:
    with mpmath.workprec(prec):
        A = mpmath.matrix(M.tolist())
        vals, vecs = mpmath.eig(A)
        k = max(range(len(vals)), key=lambda t: mpmath.re(vals[t]))
        v = [abs(mpmath.re(vecs[t, k])) for t in range(M.shape[0])]
        v = [x / v[0] for x in v]
        return [Fraction(*to_rational(mpmath.mpf(x)._mpf_)) for x in v]


def _cw_bounds(L: np.ndarray, x: Sequence[Fraction]) -> Interval:
    ratios = []
    for j in range(L.shape[0]):
        s = sum((int(L[j, k]) * x[k] for k in np.nonzero(L[j])[0]), Fraction(0))
        ratios.append(s / x[j])
    return Interval(min(ratios), max(ratios))


def fp_character(
    ring: FusionRing,
    claimed_dims: Optional[Sequence[Union[CycloNum, int]]] = None,
    eps: Union[Fraction, float, str] = Fraction(1, 10**12),
) -> list:
    """FP dimensions: exact (claimed and verified) or certified Collatz-Wielandt intervals."""
    if claimed_dims is not None:
        dims = [as_cyclo(x) for x in claimed_dims]
        _verify_character(ring, dims)
        return dims
    eps = Fraction(eps)
    L = ring.N
    M = L.sum(axis=0)
    prec = 64
    while True:
        x = _perron_vector(M, prec)
        if all(v > 0 for v in x):
            ivs = [_cw_bounds(L[i], x) for i in range(ring.rank)]
            if all(iv.width <= eps for iv in ivs):
                return ivs
        prec *= 2
        if prec > 1 << 14:
            raise FPDimError("Perron-Frobenius refinement did not converge")


def global_fpdim(ring: FusionRing, dims: Dims, subset: Optional[Iterable[int]] = None):
    idx = range(ring.rank) if subset is None else subset
    if all(isinstance(dims[i], CycloNum) for i in idx):
        return sum((dims[i] * dims[i] for i in idx), CycloNum.rational(0))
    total = Interval.point(0)
    for i in idx:
        x = dims[i] if isinstance(dims[i], Interval) else Interval.point(as_cyclo(dims[i]).to_fraction())
        total = total + x * x
    return total


def exact_dims_from_squares(ring: FusionRing, squares: Sequence[int]) -> list[CycloNum]:
    """sqrt of integer squared dims, verified as the FP character."""
    return fp_character(ring, [sqrt_int(int(s)) for s in squares])


# -- invertibles and subrings -------------------------------------------------------


@dataclass(frozen=True)
class PointedPart:
    indices: tuple[int, ...]
    table: np.ndarray  # positions within `indices`
    inverse: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.indices)

    def primary_type(self) -> tuple[int, ...]:
        return primary_type_of_table(self.table)


def invertible_indices(ring: FusionRing) -> tuple[int, ...]:
    return tuple(i for i in range(ring.rank) if int(ring.N[i, ring.dual[i]].sum()) == 1)


def invertibles(ring: FusionRing) -> PointedPart:
    idx = invertible_indices(ring)
    pos = {v: p for p, v in enumerate(idx)}
    table = np.zeros((len(idx), len(idx)), dtype=np.int64)
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            (k,) = ring.support(i, j)
            table[a, b] = pos[k]
    return PointedPart(idx, table, tuple(pos[ring.dual[i]] for i in idx))


def generated_subring(ring: FusionRing, S: Iterable[int]) -> tuple[int, ...]:
    seen = {0}
    for s in S:
        seen.add(int(s))
        seen.add(ring.dual[int(s)])
    queue = deque(seen)
    while queue:
        a = queue.popleft()
        for b in list(seen):
            for c in ring.support(a, b):
                if c not in seen:
                    seen.add(c)
                    seen.add(ring.dual[c])
                    queue.append(c)
                    queue.append(ring.dual[c])
    return tuple(sorted(seen))


def is_subring(ring: FusionRing, S: Iterable[int]) -> bool:
    S = set(S)
    if 0 not in S or any(ring.dual[i] not in S for i in S):
        return False
    return all(ring.support(a, b) <= S for a in S for b in S)


def adjoint_subring(ring: FusionRing, within: Optional[Iterable[int]] = None) -> tuple[int, ...]:
    objs = range(ring.rank) if within is None else within
    gens = set()
    for x in objs:
        gens |= ring.support(x, ring.dual[x])
    return generated_subring(ring, gens)


def subrings(ring: FusionRing, max_rank: int = 16) -> list[tuple[int, ...]]:
    """All fusion subrings, via closure of single-element extensions."""
    if ring.rank > max_rank:
        raise ValueError(f"subring enumeration limited to rank <= {max_rank}")
    start = generated_subring(ring, [])
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for i in range(ring.rank):
                if i in S:
                    continue
                T = generated_subring(ring, S + (i,))
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), s))


# -- gradings ------------------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    components: tuple[tuple[int, ...], ...]  # ordered by least member
    component_of: tuple[int, ...]
    table: np.ndarray  # component multiplication, component 0 trivial

    @property
    def order(self) -> int:
        return len(self.components)

    def group_type(self) -> tuple[int, ...]:
        return primary_type_of_table(self.table)


def _grading_from_classes(ring: FusionRing, classes: list[list[int]]) -> Grading:
    classes = sorted((sorted(c) for c in classes), key=lambda c: c[0])
    comp = [0] * ring.rank
    for ci, c in enumerate(classes):
        for x in c:
            comp[x] = ci
    n = len(classes)
    table = np.full((n, n), -1, dtype=np.int64)
    for x in range(ring.rank):
        for y in range(ring.rank):
            cs = {comp[z] for z in ring.support(x, y)}
            if len(cs) != 1:
                raise GradingError(f"{x}*{y} spans components {sorted(cs)}")
            (c,) = cs
            if table[comp[x], comp[y]] not in (-1, c):
                raise GradingError("component product not well defined")
            table[comp[x], comp[y]] = c
    if not is_abelian_group_table(table):
        raise GradingError("components do not form an abelian group")
    return Grading(tuple(tuple(c) for c in classes), tuple(comp), table)


def universal_grading(ring: FusionRing) -> Grading:
    ad = set(adjoint_subring(ring))
    parent = list(range(ring.rank))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(ring.rank):
        for y in range(x + 1, ring.rank):
            if ring.support(x, ring.dual[y]) & ad:
                parent[find(x)] = find(y)
    classes: dict[int, list[int]] = {}
    for x in range(ring.rank):
        classes.setdefault(find(x), []).append(x)
    return _grading_from_classes(ring, list(classes.values()))


def nilpotency_class(ring: FusionRing, max_depth: int = 64) -> Optional[int]:
    """Least n with the n-th iterated adjoint trivial; None if the chain stalls."""
    current = tuple(range(ring.rank))
    for n in range(max_depth + 1):
        if current == (0,):
            return n
        nxt = adjoint_subring(ring, current)
        if nxt == current:
            return None
        current = nxt
    return None


def _squarefree(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return out * n


def squared_dims(dims: Sequence[CycloNum]) -> list[int]:
    out = []
    for d in dims:
        sq = d * d
        if not sq.is_rational() or sq.to_fraction().denominator != 1:
            raise GradingError("ring is not weakly integral")
        out.append(int(sq.to_fraction()))
    return out


def dimension_grading(ring: FusionRing, dims: Sequence[CycloNum]) -> Grading:
    """Grading by the square class of d_i^2 (weakly integral rings only)."""
    sq = squared_dims(dims)
    classes: dict[int, list[int]] = {}
    for i, s in enumerate(sq):
        classes.setdefault(_squarefree(s), []).append(i)
    g = _grading_from_classes(ring, list(classes.values()))
    if np.any(np.diag(g.table) != 0):
        raise GradingError("dimension grading group is not elementary abelian 2-group")
    integral = set(g.components[0])
    if not set(invertible_indices(ring)) <= integral or not set(adjoint_subring(ring)) <= integral:
        raise GradingError("pointed or adjoint part leaves the integral component")
    return g


def integral_part(ring: FusionRing, dims: Sequence[CycloNum]) -> tuple[int, ...]:
    sq = squared_dims(dims)
    return tuple(i for i, s in enumerate(sq) if math.isqrt(s) ** 2 == s)


def is_integral(dims: Sequence[CycloNum]) -> bool:
    return all(math.isqrt(s) ** 2 == s for s in squared_dims(dims))


def is_weakly_integral(dims: Sequence[CycloNum]) -> bool:
    try:
        squared_dims(dims)
    except GradingError:
        return False
    return True


# -- products -------------------------------------------------------------------------


def deligne_product(a: FusionRing, b: FusionRing) -> FusionRing:
    ra, rb = a.rank, b.rank
    N = np.kron(a.N, b.N)  # index i*rb + j
    labels = [
        x if y == b.labels[0] else (y if x == a.labels[0] else f"{x}*{y}")
        for x in a.labels
        for y in b.labels
    ]
    if len(set(labels)) != len(labels):
        labels = [f"{x}*{y}" for x in a.labels for y in b.labels]
    dual = [a.dual[i] * rb + b.dual[j] for i in range(ra) for j in range(rb)]
    return FusionRing(labels, dual, N)
