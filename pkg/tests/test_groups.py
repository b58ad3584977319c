import itertools

import numpy as np
import pytest

from fusionlab.groups import AbelianGroup, abelian_groups_of_order, all_subgroups, is_abelian_group_table


def brute_automorphisms(G: AbelianGroup) -> int:
    T = G.table
    n = G.size
    count = 0
    for p in itertools.permutations(range(1, n)):
        f = (0,) + p
        if all(f[T[a, b]] == T[f[a], f[b]] for a in range(n) for b in range(n)):
            count += 1
    return count


@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 4), (2, 2, 2), (8,)])
def test_automorphisms_match_brute_force(orders):
    G = AbelianGroup(orders)
    auts = G.automorphisms()
    assert len(set(auts)) == len(auts) == brute_automorphisms(G)


def test_large_automorphism_groups():
    assert len(AbelianGroup((2, 2, 2, 2)).automorphisms()) == 20160
    assert len(AbelianGroup((4, 4)).automorphisms()) == 96


@pytest.mark.parametrize("n,count", [(1, 1), (4, 2), (8, 3), (12, 2), (16, 5), (32, 7), (36, 4), (72, 6)])
def test_abelian_group_counts(n, count):
    assert len(abelian_groups_of_order(n)) == count
    assert all(G.size == n for G in abelian_groups_of_order(n))


@pytest.mark.parametrize("orders,count", [((2, 2), 5), ((2, 2, 2), 16), ((2, 4), 8), ((6,), 4), ((4, 4), 15)])
def test_subgroup_counts(orders, count):
    G = AbelianGroup(orders)
    subs = G.subgroups()
    assert len(subs) == count
    assert len(all_subgroups(G.table)) == count


def test_table_is_abelian_group():
    G = AbelianGroup((2, 6))
    assert is_abelian_group_table(G.table)
    assert G.primary_type() == (2, 2, 3)
    bad = G.table.copy()
    bad[1, 1] = 1
    assert not is_abelian_group_table(bad)


def test_element_order_and_scale():
    G = AbelianGroup((4, 6))
    g = (1, 1)
    assert G.order_of(g) == 12
    assert G.scale(12, g) == G.identity
    assert G.add(g, G.neg(g)) == G.identity
    assert np.all(np.sort(G.table, axis=1) == np.arange(G.size))
