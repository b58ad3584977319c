import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionlab.catalog import ising_data, rep_dihedral, svec, ty_ring
from fusionlab.exactnum import as_cyclo, sqrt_int
from fusionlab.fusering import (
    FusionRing,
    adjoint_subring,
    deligne_product,
    dimension_grading,
    fp_character,
    invertible_indices,
    invertibles,
    is_integral,
    is_weakly_integral,
    nilpotency_class,
    subrings,
    universal_grading,
    validate_ring,
)
from fusionlab.groups import AbelianGroup

FIB = FusionRing.from_sparse(["1", "tau"], [0, 1], [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)])


def ising():
    return ising_data().ring


def small_rings():
    return [FIB, ising(), svec().ring, rep_dihedral(3).ring, ty_ring(AbelianGroup((3,))), ty_ring(AbelianGroup((2, 2)))]


ring_strategy = st.sampled_from(small_rings())


def test_fibonacci_fpdim_interval():
    iv = fp_character(FIB)[1]
    assert iv.width <= Fraction(1, 10**12)
    mp.mp.dps = 60
    assert iv.lo <= Fraction(str((1 + mp.sqrt(5)) / 2)) <= iv.hi


def test_fp_character_exact_claim():
    dims = fp_character(ising(), [1, 1, sqrt_int(2)])
    assert dims[2] * dims[2] == 2
    with pytest.raises(Exception):
        fp_character(ising(), [1, 1, 2])


@pytest.mark.parametrize("ring", small_rings(), ids=lambda r: ",".join(r.labels))
def test_known_rings_validate(ring):
    rep = validate_ring(ring)
    assert rep.ok, rep.dumps()


def test_nonassociative_mutation_is_caught():
    N = ising().N.copy()
    N[2, 2, 1] = 0
    rep = validate_ring(FusionRing(ising().labels, ising().dual, N))
    assert not rep.ok
    assert rep.status_of("ring.frobenius") == "FAIL" or rep.status_of("ring.associativity") == "FAIL"


def test_bad_unit_is_caught():
    N = FIB.N.copy()
    N[0, 1, 1] = 2
    assert validate_ring(FusionRing(FIB.labels, FIB.dual, N)).status_of("ring.unit") == "FAIL"


def test_ising_structure():
    r = ising()
    assert invertible_indices(r) == (0, 1)
    assert adjoint_subring(r) == (0, 1)
    g = universal_grading(r)
    assert g.order == 2 and g.components == ((0, 1), (2,))
    assert nilpotency_class(r) == 2


def test_fibonacci_not_nilpotent():
    assert nilpotency_class(FIB) is None
    assert universal_grading(FIB).order == 1


def test_rep_s3_subrings():
    r = rep_dihedral(3).ring
    subs = subrings(r)
    assert (0,) in subs and tuple(range(r.rank)) in subs
    assert len(subs) == 3


def test_dimension_grading_ty():
    r = ty_ring(AbelianGroup((2, 2)))
    dims = [as_cyclo(d) for d in (1, 1, 1, 1, 2)]
    assert is_integral(dims) and is_weakly_integral(dims)
    assert dimension_grading(r, dims).order == 1
    g = dimension_grading(ising(), [as_cyclo(1), as_cyclo(1), sqrt_int(2)])
    assert g.order == 2
    assert not is_weakly_integral([as_cyclo(1), (1 + sqrt_int(5)) / 2])


@given(st.lists(st.sampled_from([2, 3, 4]), min_size=1, max_size=3))
def test_group_rings(orders):
    G = AbelianGroup(tuple(orders))
    r = FusionRing.group_ring(G.table)
    assert validate_ring(r).ok
    assert invertibles(r).order == G.size
    assert adjoint_subring(r) == (0,)
    g = universal_grading(r)
    assert g.order == G.size and g.group_type() == G.primary_type()


@given(ring_strategy, ring_strategy)
def test_deligne_product_is_ring(a, b):
    p = deligne_product(a, b)
    if p.rank > 16:
        return
    assert validate_ring(p).ok
    assert len(invertible_indices(p)) == len(invertible_indices(a)) * len(invertible_indices(b))
    assert universal_grading(p).order == universal_grading(a).order * universal_grading(b).order


@given(ring_strategy, st.randoms(use_true_random=False))
def test_relabeling_invariance(ring, rnd):
    perm = [0] + rnd.sample(range(1, ring.rank), ring.rank - 1)
    q = ring.permute(perm)
    assert validate_ring(q).ok
    a = [float(x.mid) for x in fp_character(ring, eps=Fraction(1, 10**8))]
    b = [float(x.mid) for x in fp_character(q, eps=Fraction(1, 10**8))]
    assert sorted(a) == pytest.approx(sorted(b))
    assert len(subrings(q)) == len(subrings(ring))
    assert universal_grading(q).order == universal_grading(ring).order


@given(ring_strategy)
def test_fp_dims_are_a_character(ring):
    d = np.array([float(x.mid) for x in fp_character(ring, eps=Fraction(1, 10**10))])
    lhs = np.outer(d, d)
    rhs = ring.N @ d
    assert np.allclose(lhs, rhs, atol=1e-8)
    assert math.isclose(d[0], 1.0)


@given(ring_strategy)
def test_json_roundtrip(ring):
    back = FusionRing.from_json(ring.to_json())
    assert back.labels == ring.labels and back.dual == ring.dual and (back.N == ring.N).all()
