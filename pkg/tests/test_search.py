import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionlab.catalog import ising_data, supermodular_catalog, svec, ty_dims, ty_ring
from fusionlab.exactnum import conductor_cap, root_of_unity
from fusionlab.fusering import FusionRing, deligne_product, validate_ring
from fusionlab.groups import AbelianGroup
from fusionlab.search.classify import admissible_dim_vectors, classify, family_kind
from fusionlab.search.csp import SAT, UNSAT, theta_csp
from fusionlab.search.enumerate import RingSpec, embeds, enumerate_rings, has_free_fermion
from fusionlab.search.obstruction import (
    LinearRelation,
    dim2_relations,
    dim2_triple,
    gamma_bound,
    obstruction_script,
)

# -- independent brute-force oracle for tiny commutative rings -----------------------------


def _splits(target, dims, k=0):
    if abs(target) < 1e-9:
        yield (0,) * (len(dims) - k)
        return
    if k == len(dims) or target < -1e-9:
        return
    for m in range(int(target / dims[k] + 1e-9) + 1):
        for rest in _splits(target - m * dims[k], dims, k + 1):
            yield (m,) + rest


def brute_force_rings(sq, fermion=False):
    sq = sorted(sq)
    r = len(sq)
    d = [math.sqrt(x) for x in sq]
    pairs = [(i, j) for i in range(1, r) for j in range(i, r)]
    options = [list(_splits(d[i] * d[j], d)) for i, j in pairs]
    perms = [p for p in itertools.permutations(range(1, r)) if all(sq[a] == sq[b] for a, b in zip(range(1, r), p))]
    found = {}
    for choice in itertools.product(*options):
        N = np.zeros((r, r, r), dtype=np.int64)
        for a in range(r):
            N[0, a, a] = N[a, 0, a] = 1
        for (i, j), v in zip(pairs, choice):
            N[i, j] = N[j, i] = v
        if not all(N[i, :, 0].sum() == 1 for i in range(r)):
            continue
        dual = [int(np.argmax(N[i, :, 0])) for i in range(r)]
        ring = FusionRing([str(i) for i in range(r)], dual, N)
        if not validate_ring(ring).ok:
            continue
        if fermion and not _free_order2(N):
            continue
        key = min(N[np.ix_(p0, p0, p0)].tobytes() for p0 in ([0] + list(p) for p in perms))
        found[key] = ring
    return list(found.values())


def _free_order2(N):
    r = N.shape[0]
    for g in range(1, r):
        if N[g].sum() != r:
            continue
        img = [int(np.argmax(N[g, x])) for x in range(r)]
        if img[g] == 0 and all(img[x] != x for x in range(r)):
            return True
    return False


ORACLE_SPECS = [(1, 1, 2), (1, 1, 4), (1, 1, 1), (1, 1, 1, 1), (1, 4), (1, 1, 9), (1, 1, 2, 2), (1, 2, 2)]


@pytest.mark.parametrize("sq", ORACLE_SPECS)
@pytest.mark.parametrize("fermion", [False, True])
def test_enumerator_matches_brute_force(sq, fermion):
    res = enumerate_rings(RingSpec(sq, fermion=fermion))
    assert res.complete
    assert len(res.rings) == len(brute_force_rings(sq, fermion))
    for ring in res.rings:
        assert validate_ring(ring).ok


@pytest.mark.parametrize(
    "sq,fermion,count",
    [
        ((1, 1, 1, 1, 4), False, 2),
        ((1, 1, 1, 1, 4), True, 0),
        ((1, 1, 1, 1, 2, 2), True, 2),
        ((1, 1, 1, 1, 2, 2), False, 4),
        ((1, 1, 1, 1, 2, 2, 2, 2), True, 0),
        ((1,) * 8 + (2, 2), True, 0),
        ((1,) * 6 + (3, 3), True, 2),
        ((1, 1, 2, 2, 3, 3), True, 0),
        ((1,) * 8, True, 3),
    ],
)
def test_enumerator_regression(sq, fermion, count):
    res = enumerate_rings(RingSpec(sq, fermion=fermion), max_rank=10)
    assert res.complete and len(res.rings) == count


def test_enumerate_parallel_is_deterministic():
    spec = RingSpec((1, 1, 1, 1, 2, 2))
    a = enumerate_rings(spec)
    b = enumerate_rings(spec, jobs=2)
    assert [r.N.tobytes() for r in a.rings] == [r.N.tobytes() for r in b.rings]


def test_enumerate_budget():
    res = enumerate_rings(RingSpec((1, 1, 1, 1)), budget=1)
    assert not res.complete


def test_ringspec_validation_and_json():
    with pytest.raises(ValueError):
        RingSpec((2, 2))
    spec = RingSpec((4, 1, 1), fermion=True)
    assert spec.dim_vector == (1, 1, 4) and spec.fpdim == 6
    assert RingSpec.from_json(spec.to_json()) == spec


def test_required_subring():
    ising = ising_data().ring
    res = enumerate_rings(RingSpec((1, 1, 1, 1, 2, 2), required_subring=ising))
    assert res.rings and all(embeds(ising, r) for r in res.rings)


def test_embeds_and_free_fermion():
    r = deligne_product(svec().ring, ising_data().ring)
    assert embeds(ising_data().ring, r)
    assert not embeds(r, ising_data().ring)
    assert [r.labels[i] for i in has_free_fermion(r)] == ["chi", "chi*g"]
    assert has_free_fermion(ising_data().ring) == []


# -- twist CSP ---------------------------------------------------------------------------------


def svec_ty(orders):
    G = AbelianGroup(orders)
    ring = deligne_product(svec().ring, ty_ring(G))
    dims = [a * b for a in svec().dims for b in ty_dims(G)]
    return ring, dims, ring.labels.index("chi")


def test_csp_finds_svec_ising():
    ring, dims, chi = svec_ty((2,))
    out = theta_csp(ring, dims, chi, 16)
    assert out.status == SAT and len(out.witnesses) == 16
    assert out.stats["exact"] == 16


@pytest.mark.parametrize("orders", [(3,), (2, 2), (4,)])
@pytest.mark.parametrize("bound", [16, 32])
def test_csp_unsat_large_gamma(orders, bound):
    out = theta_csp(*svec_ty(orders), bound)
    assert out.status == UNSAT and not out.witnesses and out.certificate


def test_csp_edge_cases():
    ring, dims, chi = svec_ty((2,))
    assert theta_csp(ring, dims, chi, 15).status == UNSAT
    with pytest.raises(ValueError):
        theta_csp(ring, dims, chi, 2 * conductor_cap())
    with pytest.raises(ValueError):
        theta_csp(ring, dims, ring.labels.index("X"), 16)
    out = theta_csp(ring, dims, ring.labels.index("g1"), 16)
    assert out.status == UNSAT and "fixes" in out.certificate[0]


def _exponents(data, B):
    out = []
    for t in data.twists:
        e = next((k for k in range(B) if root_of_unity(B, k) == t), None)
        if e is None:
            return None
        out.append(e)
    return tuple(out)


SMALL_SM = [(n, d) for n, d in supermodular_catalog(8) if d.rank <= 8]


@given(st.sampled_from(SMALL_SM))
def test_csp_recovers_catalog_twists(item):
    # completeness: the float prefilter never discards a genuine solution
    name, data = item
    B = 48
    target = _exponents(data, B)
    if target is None:
        return
    chi = data.ring.labels.index("chi")
    out = theta_csp(data.ring, data.dims, chi, B)
    assert out.sat and target in out.witnesses, name


# -- scripted obstructions ------------------------------------------------------------------------


def test_linear_relation_algebra():
    e1, _, _, e4 = dim2_relations()
    assert str(e1) == "4+s_{g,U}+s_{g,V}=0"
    assert str(e4) == "4-s_{g,U}-s_{g,V}=0"
    s = e1 + e4
    assert s.contradictory and str(s) == "8=0"
    assert not LinearRelation(0, {}).contradictory


def test_dim2_triple_certificate():
    out = obstruction_script("LEMMA_4_8")
    assert out.status == UNSAT
    text = "\n".join(out.certificate)
    assert "4+s_{g,U}+s_{g,V}=0" in text and "4-s_{g,U}-s_{g,V}=0" in text
    assert "8=0" in text
    assert out.stats["candidates"] == dim2_triple().stats["candidates"] > 0


@pytest.mark.parametrize("orders", [(3,), (2, 2), (4,)])
def test_gamma_bound_unsat(orders):
    out = gamma_bound(orders)
    assert out.status == UNSAT
    assert any("θ_gh" in line for line in out.certificate)


@pytest.mark.parametrize("orders,count", [((), 2), ((2,), 16)])
def test_gamma_bound_small_gamma(orders, count):
    out = obstruction_script("THM_4_3", gamma=orders)
    assert out.status == SAT and len(out.witnesses) == count


def test_unknown_script():
    with pytest.raises(ValueError):
        obstruction_script("nope")


# -- classification -----------------------------------------------------------------------------


def test_admissible_vectors():
    assert admissible_dim_vectors(4) == [(1, 1, 1, 1)]
    assert admissible_dim_vectors(6) == [(1,) * 6]
    assert admissible_dim_vectors(8) == [(1, 1, 1, 1, 2, 2), (1,) * 8]
    for v in admissible_dim_vectors(24, max_rank=10):
        assert sum(v) == 24 and v.count(1) >= 2 and 24 % v.count(1) == 0
        assert all(24 % (2 * n) == 0 and v.count(n) % 2 == 0 for n in set(v))


@pytest.mark.parametrize("fpdim", [4, 6])
def test_classify_small_is_pointed(fpdim):
    res = classify(fpdim)
    assert res.complete and res.survivors
    assert all(f.kind == "pointed" for f in res.survivors)


def test_family_kind():
    r = deligne_product(svec().ring, ising_data().ring)
    assert family_kind(r, (1, 1, 1, 1, 2, 2)) == "sVec x Ising"
    assert family_kind(svec().ring, (1, 1)) == "pointed"
