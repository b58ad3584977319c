"""Finite abelian groups in cyclic-factor presentation."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """Z_{n_1} x ... x Z_{n_k}; elements are tuples in lexicographic order."""

    orders: tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.orders):
            raise ValueError("cyclic factor orders must be positive")
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders if n != 1))

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(n) for n in self.orders)))

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    def __len__(self) -> int:
        return self.size

    def index(self, g) -> int:
        return self._index[tuple(x % n for x, n in zip(g, self.orders))]

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))

    def neg(self, g) -> tuple[int, ...]:
        return tuple((-a) % n for a, n in zip(g, self.orders))

    def scale(self, k: int, g) -> tuple[int, ...]:
        return tuple((k * a) % n for a, n in zip(g, self.orders))

    def order_of(self, g) -> int:
        o = 1
        for a, n in zip(g, self.orders):
            o = o * (n // math.gcd(a, n)) // math.gcd(o, n // math.gcd(a, n))
        return o

    @cached_property
    def table(self) -> np.ndarray:
        els = self.elements
        return np.array([[self.index(self.add(g, h)) for h in els] for g in els], dtype=np.int64)

    @property
    def identity(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.orders)

    def is_elementary_2(self) -> bool:
        return all(n == 2 for n in self.orders)

    def primary_type(self) -> tuple[int, ...]:
        return primary_type_of_table(self.table)

    def subgroup_generated(self, gens) -> frozenset[int]:
        return frozenset(closure(self.table, [self.index(g) for g in gens]))

    def subgroups(self) -> list[frozenset[int]]:
        return all_subgroups(self.table)

    def automorphisms(self) -> list[tuple[int, ...]]:
        """All automorphisms as permutations of element indices."""
        candidates = []
        for n in self.orders:
            candidates.append([g for g in self.elements if n % self.order_of(g) == 0])
        out = []
        for images in itertools.product(*candidates):
            perm = []
            for g in self.elements:
                img = self.identity
                for coef, im in zip(g, images):
                    img = self.add(img, self.scale(coef, im))
                perm.append(self.index(img))
            if len(set(perm)) == self.size:
                out.append(tuple(perm))
        return out


def closure(table: np.ndarray, gens) -> set[int]:
    """Subgroup of a finite group (given by Cayley table, identity 0) generated by gens."""
    seen = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(table[a, g])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def all_subgroups(table: np.ndarray) -> list[frozenset[int]]:
    n = table.shape[0]
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(n):
                if g in H:
                    continue
                K = frozenset(closure(table, list(H) + [g]))
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def element_orders(table: np.ndarray) -> list[int]:
    out = []
    for g in range(table.shape[0]):
        k, x = 1, g
        while x != 0:
            x = int(table[x, g])
            k += 1
        out.append(k)
    return out


def primary_type_of_table(table: np.ndarray) -> tuple[int, ...]:
    """Primary cyclic factors (sorted) of an abelian group given by its Cayley table.

    The count of elements with order dividing p^k pins down the p-part.
    """
    n = table.shape[0]
    orders = element_orders(table)
    out: list[int] = []
    for p, e in _factor(n).items():
        # c_k = log_p #{g : g^{p^k} = 1}
        c = [0]
        for k in range(1, e + 1):
            cnt = sum(1 for o in orders if (p ** k) % o == 0)
            c.append(round(math.log(cnt, p)))
        # number of cyclic factors of order >= p^k is c_k - c_{k-1}
        ge = [c[k] - c[k - 1] for k in range(1, e + 1)] + [0]
        for k in range(1, e + 1):
            out.extend([p ** k] * (ge[k - 1] - ge[k]))
    return tuple(sorted(out))


def is_abelian_group_table(table: np.ndarray) -> bool:
    n = table.shape[0]
    if not np.array_equal(table, table.T):
        return False
    if not all(sorted(row) == list(range(n)) for row in table.tolist()):
        return False
    if not np.array_equal(table[0], np.arange(n)):
        return False
    return _assoc(table)


def _assoc(table: np.ndarray) -> bool:
    n = table.shape[0]
    left = table[table[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
    right = table[np.arange(n)[:, None, None], table[None, :, :]]  # a(bc)
    return bool(np.array_equal(left, right))


def abelian_groups_of_order(n: int) -> list[AbelianGroup]:
    """One representative per isomorphism class, as products of primary cyclic groups."""
    def partitions(e, maxpart=None):
        maxpart = e if maxpart is None else maxpart
        if e == 0:
            yield ()
            return
        for k in range(min(e, maxpart), 0, -1):
            for rest in partitions(e - k, k):
                yield (k,) + rest

    per_prime = []
    for p, e in sorted(_factor(n).items()):
        per_prime.append([tuple(p ** k for k in part) for part in partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        orders = tuple(sorted(x for part in combo for x in part))
        out.append(AbelianGroup(orders))
    return out
