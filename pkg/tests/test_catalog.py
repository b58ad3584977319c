import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionlab.catalog import (
    CatalogError,
    MetricGroup,
    ising_data,
    metric_groups,
    pointed_data,
    premodular_catalog,
    quadratic_forms,
    radical_split_check,
    rep_dihedral,
    semion,
    supermodular_catalog,
    svec,
    ty_dims,
    ty_ring,
)
from fusionlab.exactnum import root_of_unity
from fusionlab.fusering import validate_ring
from fusionlab.groups import AbelianGroup, abelian_groups_of_order
from fusionlab.premodular import CenterKind, classify_center


def brute_force_classes(orders):
    """All quadratic functions G -> Z/L, then Aut(G)-orbits, by exhaustion."""
    G = AbelianGroup(orders)
    n, T = G.size, G.table
    L = math.lcm(*(2 * m for m in G.orders))
    neg = np.array([G.index(G.neg(g)) for g in G.elements])
    keys = set()
    auts = np.array(G.automorphisms())
    for rest in itertools.product(range(L), repeat=n - 1):
        Q = np.array((0,) + rest)
        if np.any(Q[neg] != Q):
            continue
        B = (Q[T] - Q[:, None] - Q[None, :]) % L
        if np.any((B[T] - B[:, None, :] - B[None, :, :]) % L):
            continue
        keys.add(min(tuple(row) for row in Q[auts]))
    return keys, L


def orbit_key(mg: MetricGroup, L: int):
    auts = np.array(mg.group.automorphisms())
    Q = np.array(mg.Q) * (L // mg.level)
    return min(tuple(row) for row in Q[auts])


@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 2, 2)])
def test_quadratic_forms_match_brute_force(orders):
    expected, L = brute_force_classes(orders)
    got = [orbit_key(mg, L) for mg in quadratic_forms(orders)]
    assert len(got) == len(set(got)) == len(expected)
    assert set(got) == expected


def test_metric_group_totals():
    # frozen from the exhaustive enumeration, cross-checked above on small groups
    assert len(metric_groups(16)) == 393
    assert len(metric_groups(16, nondegenerate=True)) == 102


@pytest.mark.parametrize("orders,nondeg", [((2,), 2), ((4,), 4), ((2, 2), 5), ((2, 2, 2), 4), ((3, 3), 2)])
def test_nondegenerate_counts(orders, nondeg):
    assert sum(mg.is_nondegenerate() for mg in quadratic_forms(orders)) == nondeg


def test_radical_split_all_metric_groups():
    hits = 0
    for mg in metric_groups(16):
        rep = radical_split_check(mg)
        assert rep.ok, str(mg)
        hits += "complement" in rep.data
    assert hits > 0


def test_cyclic_constructor():
    mg = MetricGroup.cyclic(4, root_of_unity(8))
    assert mg.is_nondegenerate()
    with pytest.raises(CatalogError):
        MetricGroup(AbelianGroup((3,)), 6, (0, 1))
    with pytest.raises(CatalogError):
        pointed_data(MetricGroup(AbelianGroup((3,)), 6, (0, 1, 3)))


def test_named_data():
    assert classify_center(svec()).kind is CenterKind.SLIGHTLY_DEGENERATE
    assert semion().twists[1] == root_of_unity(4)
    assert semion(conjugate=True).twists[1] == root_of_unity(4, 3)
    assert ising_data(3).twists[2] == root_of_unity(16, 3)
    assert [int(d.to_fraction()) for d in rep_dihedral(3).dims] == [1, 1, 2]
    assert all(t == 1 for t in rep_dihedral(5).twists)


@pytest.mark.parametrize("orders", [(), (2,), (3,), (2, 2), (4,), (5,)])
def test_ty_rings(orders):
    G = AbelianGroup(orders)
    r = ty_ring(G)
    assert r.rank == G.size + 1 and validate_ring(r).ok
    X = r.rank - 1
    assert r.product(X, X) == {g: 1 for g in range(G.size)}
    assert ty_dims(G)[X] ** 2 == G.size


def test_catalog_sizes_and_validity():
    sm = supermodular_catalog()
    assert len(sm) == 117
    assert len({n for n, _ in sm}) == len(sm)
    pm = premodular_catalog(8)
    assert all(d.rank <= 8 for _, d in pm)


@given(st.sampled_from([G.orders for n in range(2, 13) for G in abelian_groups_of_order(n)]))
def test_forms_are_quadratic(orders):
    for mg in quadratic_forms(orders):
        assert mg.validate().ok
        data = pointed_data(mg)
        assert (classify_center(data).kind is CenterKind.NON_DEGENERATE) == mg.is_nondegenerate()
