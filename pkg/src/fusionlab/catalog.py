"""Constructors for concrete premodular data: pointed, sVec, Ising, TY rings, Rep rings, products."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactmat import CycloMatrix
from .exactnum import CycloNum, root_of_unity, root_of_unity_order, sqrt_int
from .fusering import FusionRing, deligne_product
from .groups import AbelianGroup, abelian_groups_of_order
from .premodular import CenterKind, PremodularData, classify_center
from .report import Report


class CatalogError(ValueError):
    pass


# -- metric groups ------------------------------------------------------------------------


def _element_label(g: tuple[int, ...]) -> str:
    if not any(g):
        return "1"
    return "g" + "_".join(map(str, g))


@dataclass(frozen=True)
class MetricGroup:
    """Finite abelian group with q(x) = zeta_level^Q[x], Q indexed like group.elements."""

    group: AbelianGroup
    level: int
    Q: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(int(v) % self.level for v in self.Q))
        if len(self.Q) != self.group.size:
            raise CatalogError("one exponent per group element required")

    @classmethod
    def cyclic(cls, n: int, q1: CycloNum) -> "MetricGroup":
        """Z_n with q(k) = q1^(k^2)."""
        L = root_of_unity_order(q1)
        if L is None:
            raise CatalogError("q(1) must be a root of unity")
        e = next(k for k in range(L) if root_of_unity(L, k) == q1)
        return cls(AbelianGroup((n,)), L, tuple(e * k * k for k in range(n)))

    def q(self, idx: int) -> CycloNum:
        return root_of_unity(self.level, self.Q[idx])

    def b_exp(self, g: int, h: int) -> int:
        gh = int(self.group.table[g, h])
        return (self.Q[gh] - self.Q[g] - self.Q[h]) % self.level

    @cached_property
    def b_table(self) -> np.ndarray:
        Q = np.array(self.Q)
        return (Q[self.group.table] - Q[:, None] - Q[None, :]) % self.level

    def validate(self) -> Report:
        rep = Report()
        n = self.group.size
        inv = [self.group.index(self.group.neg(g)) for g in self.group.elements]
        rep.add("metric.q_even", all(self.Q[inv[i]] == self.Q[i] for i in range(n)) and self.Q[0] == 0)
        B, T = self.b_table, self.group.table
        bil = (B[T[:, :, None], np.arange(n)[None, None, :]] - B[:, None, :] - B[None, :, :]) % self.level
        rep.add("metric.bicharacter", bool(np.all(bil == 0)))
        return rep

    def radical(self) -> tuple[int, ...]:
        return tuple(int(g) for g in np.nonzero(np.all(self.b_table == 0, axis=1))[0])

    def is_nondegenerate(self) -> bool:
        return self.radical() == (0,)

    def labels(self) -> list[str]:
        return [_element_label(g) for g in self.group.elements]

    def __str__(self) -> str:
        qs = ",".join(f"{e}/{self.level}" for e in self.Q)
        return f"MetricGroup(Z{self.group.orders}, q=[{qs}])"


@lru_cache(maxsize=None)
def quadratic_forms(orders: tuple[int, ...]) -> tuple[MetricGroup, ...]:
    """One quadratic form per isometry class on Z_{n_1} x ... x Z_{n_k} (exhaustive).

    Every form is sum_i a_i x_i^2 / (2 n_i) + sum_{i<j} c_ij x_i x_j / gcd(n_i, n_j) (mod 1)
    with a_i n_i even; classes are collected by marking Aut(G)-orbits.
    """
    G = AbelianGroup(orders)
    orders = G.orders
    k = len(orders)
    if k == 0:
        return (MetricGroup(G, 1, (0,)),)
    L = math.lcm(*(2 * n for n in orders))
    X = np.array(G.elements, dtype=np.int64)
    monos, ranges = [], []
    for i, n in enumerate(orders):
        monos.append(X[:, i] * X[:, i] * (L // (2 * n)))
        ranges.append([a for a in range(2 * n) if (a * n) % 2 == 0])
    for i, j in itertools.combinations(range(k), 2):
        g = math.gcd(orders[i], orders[j])
        monos.append(X[:, i] * X[:, j] * (L // g))
        ranges.append(list(range(g)))
    Mono = np.stack(monos, axis=1)  # (|G|, terms)
    coeffs = np.array(list(itertools.product(*ranges)), dtype=np.int64)
    allQ = (coeffs @ Mono.T) % L
    auts = np.array(G.automorphisms(), dtype=np.int64)
    seen: set[bytes] = set()
    reps = []
    for Q in allQ:
        key = Q.tobytes()
        if key in seen:
            continue
        for row in Q[auts]:
            seen.add(row.tobytes())
        reps.append(MetricGroup(G, L, tuple(int(v) for v in Q)))
    return tuple(reps)


def metric_groups(max_order: int = 16, nondegenerate: Optional[bool] = None) -> list[MetricGroup]:
    out = []
    for n in range(1, max_order + 1):
        for G in abelian_groups_of_order(n):
            for mg in quadratic_forms(G.orders):
                if nondegenerate is None or mg.is_nondegenerate() == nondegenerate:
                    out.append(mg)
    return out


def pointed_data(mg: MetricGroup, labels: Optional[Sequence[str]] = None) -> PremodularData:
    rep = mg.validate()
    if not rep.ok:
        raise CatalogError(f"not a quadratic form: {rep.failures}")
    ring = FusionRing.group_ring(mg.group.table, labels or mg.labels())
    n = mg.group.size
    return PremodularData(ring, tuple(CycloNum.rational(1) for _ in range(n)), tuple(mg.q(i) for i in range(n)))


def radical_split_check(mg: MetricGroup) -> Report:
    rep = Report()
    R = mg.radical()
    G = mg.group
    if len(R) != 2 or mg.q(R[1]) != -1:
        rep.add("radical_split", True, f"radical {[G.elements[r] for r in R]} is not sVec: vacuous")
        return rep
    chi = R[1]
    half = G.size // 2
    for H in G.subgroups():
        if len(H) != half or chi in H:
            continue
        Hl = sorted(H)
        sub = mg.b_table[np.ix_(Hl, Hl)]
        if all(np.any(sub[a] != 0) for a in range(1, len(Hl))):
            rep.add("radical_split", True, f"G = <{G.elements[chi]}> x H, H = {[G.elements[h] for h in Hl]}")
            rep.data["complement"] = Hl
            return rep
    rep.add("radical_split", False, "no complement with nondegenerate form")
    return rep


def svec() -> PremodularData:
    return pointed_data(MetricGroup(AbelianGroup((2,)), 2, (0, 1)), ["1", "chi"])


def semion(conjugate: bool = False) -> PremodularData:
    return pointed_data(MetricGroup(AbelianGroup((2,)), 4, (0, 3 if conjugate else 1)), ["1", "s"])


# -- Tambara-Yamagami and Ising ----------------------------------------------------------


def ty_ring(gamma: AbelianGroup) -> FusionRing:
    n = gamma.size
    labels = [_element_label(g) for g in gamma.elements] + ["X"]
    x = n
    N = np.zeros((n + 1, n + 1, n + 1), dtype=np.int64)
    T = gamma.table
    for a in range(n):
        for b in range(n):
            N[a, b, T[a, b]] = 1
        N[a, x, x] = N[x, a, x] = 1
        N[x, x, a] = 1
    dual = [gamma.index(gamma.neg(g)) for g in gamma.elements] + [x]
    return FusionRing(labels, dual, N)


def ty_dims(gamma: AbelianGroup) -> list[CycloNum]:
    return [CycloNum.rational(1)] * gamma.size + [sqrt_int(gamma.size)]


def braidable(gamma: AbelianGroup) -> bool:
    return gamma.is_elementary_2()


def ising_data(nu: int = 1, theta_g: int = -1) -> PremodularData:
    if nu % 2 == 0:
        raise CatalogError("nu must be odd")
    ring = FusionRing(["1", "g", "X"], [0, 1, 2], ty_ring(AbelianGroup((2,))).N)
    data = PremodularData(ring, (1, 1, sqrt_int(2)), (1, theta_g, root_of_unity(16, nu % 16)))
    kind = classify_center(data).kind
    if kind is not CenterKind.NON_DEGENERATE:
        raise CatalogError(f"Ising datum with theta_g={theta_g} is {kind.value}, not non-degenerate")
    return data


# -- representation rings ------------------------------------------------------------------


def rep_abelian(orders: Sequence[int]) -> PremodularData:
    G = AbelianGroup(tuple(orders))
    ring = FusionRing.group_ring(G.table, [_element_label(g) for g in G.elements])
    ones = tuple(CycloNum.rational(1) for _ in range(G.size))
    return PremodularData(ring, ones, ones)


def dihedral_character_table(d: int) -> tuple[list[str], list[int], list[list[CycloNum]]]:
    """Irreps of D_{2d} (d odd): labels, class sizes, character values per class."""
    if d % 2 == 0 or d < 3:
        raise CatalogError("dihedral rep rings need odd d >= 3")
    h = (d - 1) // 2
    sizes = [1] + [2] * h + [d]
    one = CycloNum.rational(1)
    rows = [[one] * (h + 2), [one] * (h + 1) + [-one]]
    labels = ["1", "sgn"]
    for k in range(1, h + 1):
        labels.append(f"rho{k}")
        row = [CycloNum.rational(2)]
        for m in range(1, h + 1):
            z = root_of_unity(d, (k * m) % d)
            row.append(z + z.conj())
        row.append(CycloNum.rational(0))
        rows.append(row)
    return labels, sizes, rows


def rep_dihedral(d: int) -> PremodularData:
    labels, sizes, chars = dihedral_character_table(d)
    r, order = len(labels), 2 * d
    N = np.zeros((r, r, r), dtype=np.int64)
    for i, j, k in itertools.product(range(r), repeat=3):
        total = sum((sizes[c] * chars[i][c] * chars[j][c] * chars[k][c].conj() for c in range(len(sizes))), CycloNum.rational(0))
        m = total / order
        if not m.is_rational() or m.to_fraction().denominator != 1 or m.to_fraction() < 0:
            raise CatalogError("character inner product is not a nonnegative integer")
        N[i, j, k] = int(m.to_fraction())
    ring = FusionRing(labels, list(range(r)), N)
    dims = tuple(row[0] for row in chars)
    return PremodularData(ring, dims, tuple(CycloNum.rational(1) for _ in range(r)))


def rep_group_ring(spec: str) -> PremodularData:
    """'Z2', 'Z2xZ4', 'D6', 'D10', ... (dihedral D_{2d} with d odd)."""
    s = spec.strip().upper()
    if s.startswith("D"):
        n = int(s[1:])
        if n % 2:
            raise CatalogError("dihedral group order must be even")
        return rep_dihedral(n // 2)
    if s.startswith("Z"):
        return rep_abelian([int(p.lstrip("Z")) for p in s.split("X")])
    raise CatalogError(f"unsupported group {spec!r}")


# -- products ---------------------------------------------------------------------------------


def _kron(A: CycloMatrix, B: CycloMatrix) -> CycloMatrix:
    M = math.lcm(A.N, B.N)
    A, B = A.embed(M), B.embed(M)
    (ra, _), (rb, _) = A.shape, B.shape
    Ad = np.repeat(np.repeat(A.data, rb, axis=0), rb, axis=1)
    Bd = np.tile(B.data, (ra, ra, 1))
    return CycloMatrix(M, Ad, A.den).hadamard(CycloMatrix(M, Bd, B.den))


def product_data(a: PremodularData, b: PremodularData) -> PremodularData:
    ring = deligne_product(a.ring, b.ring)
    dims = tuple(x * y for x in a.dims for y in b.dims)
    twists = tuple(x * y for x in a.twists for y in b.twists)
    out = PremodularData(ring, dims, twists)
    if out.s_matrix != _kron(a.s_matrix, b.s_matrix):
        raise CatalogError("S-matrix of the product does not factorize")
    return out


def product_many(parts: Iterable[PremodularData]) -> PremodularData:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = product_data(out, p)
    return out


# -- named collections --------------------------------------------------------------------------


def modular_pointed(max_order: int = 16) -> list[tuple[str, PremodularData]]:
    out = []
    for mg in metric_groups(max_order, nondegenerate=True):
        if mg.group.size == 1:
            continue
        out.append((f"pointed{mg.group.orders}[{','.join(map(str, mg.Q))}/{mg.level}]", pointed_data(mg)))
    return out


def supermodular_catalog(max_pointed: int = 16) -> list[tuple[str, PremodularData]]:
    """Slightly degenerate catalog data: sVec times each modular family."""
    sv = svec()
    out = [("sVec", sv)]
    for name, p in modular_pointed(max_pointed):
        out.append((f"sVec*{name}", product_data(sv, p)))
    for nu in range(1, 16, 2):
        out.append((f"sVec*Ising{nu}", product_data(sv, ising_data(nu))))
    out.append(("sVec*semion", product_data(sv, semion())))
    for nu in (1, 3, 5, 7):
        out.append((f"sVec*Ising{nu}*semion", product_many([sv, ising_data(nu), semion()])))
    for mg in quadratic_forms((3,)):
        if mg.is_nondegenerate():
            out.append((f"sVec*Ising1*pointed(3,)[{mg.Q[1]}/{mg.level}]", product_many([sv, ising_data(1), pointed_data(mg)])))
    return out


def premodular_catalog(max_rank: int = 8) -> list[tuple[str, PremodularData]]:
    """Every catalog premodular datum of rank <= max_rank (pointed ones from all metric groups)."""
    out: list[tuple[str, PremodularData]] = []
    for mg in metric_groups(max_rank):
        if mg.group.size == 1:
            continue
        out.append((f"pointed{mg.group.orders}[{','.join(map(str, mg.Q))}/{mg.level}]", pointed_data(mg)))
    for nu in range(1, 16, 2):
        out.append((f"Ising{nu}", ising_data(nu)))
    for d in (3, 5, 7):
        out.append((f"Rep(D{2 * d})", rep_dihedral(d)))
    small = [("sVec", svec()), ("semion", semion())] + [(f"Ising{nu}", ising_data(nu)) for nu in (1, 3)]
    for (na, a), (nb, b) in itertools.combinations_with_replacement(small, 2):
        if a.rank * b.rank <= max_rank:
            out.append((f"{na}*{nb}", product_data(a, b)))
    for name, p in modular_pointed(4):
        if 2 * p.rank <= max_rank:
            out.append((f"sVec*{name}", product_data(svec(), p)))
    return [(n, d) for n, d in out if d.rank <= max_rank]
