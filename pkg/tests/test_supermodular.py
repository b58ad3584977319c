import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionlab.catalog import ising_data, product_data, semion, supermodular_catalog, svec
from fusionlab.exactnum import CycloNum, sqrt_int
from fusionlab.supermodular import (
    CenterNotSVecError,
    DualClosureError,
    SuperModularError,
    data_level_suite,
    divisibility_check,
    divisibility_values,
    fermion_action,
    full_suite,
    naive_fusion_direct,
    naive_fusion_verlinde,
    naive_fusion_verlinde_tensor,
    promote,
    stabilizer_gamma,
    structural_report,
    unitarity_check,
    verlinde_check,
)

SMALL = [(n, d) for n, d in supermodular_catalog(8) if d.rank <= 16]
small_data = st.sampled_from([d for _, d in SMALL])


def svec_z3():
    return next(d for n, d in SMALL if n.startswith("sVec*pointed(3,)"))


def test_promote_svec():
    sm = promote(svec())
    assert sm.fermion == 1 and sm.pi0 == (0,) and sm.pi1 == (1,)
    assert sm.dim == 2


def test_promote_rejects_modular():
    with pytest.raises(CenterNotSVecError):
        promote(ising_data())
    with pytest.raises(CenterNotSVecError):
        promote(product_data(svec(), svec()))


def test_partition_validation():
    data = svec_z3()
    lab = data.ring.labels
    with pytest.raises(DualClosureError):
        promote(data, partition=[0, lab.index("g1"), lab.index("chi*g2")])
    with pytest.raises(SuperModularError):
        promote(data, partition=[0, lab.index("chi"), lab.index("g1"), lab.index("g2")])
    with pytest.raises(DualClosureError):
        promote(data, partition=[lab.index("chi"), lab.index("g1"), lab.index("g2")])


def test_fermion_must_be_invertible():
    data = product_data(svec(), ising_data())
    with pytest.raises(SuperModularError):
        fermion_action(data, data.ring.labels.index("X"))


def test_svec_ising_verlinde_scalar_and_tensor_agree():
    sm = promote(product_data(svec(), ising_data()))
    n = len(sm.pi0)
    V = naive_fusion_verlinde_tensor(sm)
    for a, x in enumerate(sm.pi0):
        for b, y in enumerate(sm.pi0):
            for c, z in enumerate(sm.pi0):
                v = naive_fusion_verlinde(sm, x, y, z)
                assert v == V.entry(a * n + b, c) == naive_fusion_direct(sm, x, y, z)


def test_svec_ising_dims():
    sm = promote(product_data(svec(), ising_data()))
    assert sm.dim == 8
    assert len(stabilizer_gamma(sm)) == 2
    assert structural_report(sm).ok


def test_divisibility_mutation_fails():
    ok = divisibility_values(["1", "X"], [CycloNum.rational(1), sqrt_int(2)], CycloNum.rational(8))
    assert ok.ok
    bad = divisibility_values(["1", "X"], [CycloNum.rational(1), sqrt_int(3)], CycloNum.rational(8))
    assert not bad.ok and bad.status_of("divisibility[X]") == "FAIL"


def test_broken_twist_fails_unitarity():
    from fusionlab.premodular import PremodularData
    from fusionlab.supermodular import promote_unchecked

    good = product_data(svec(), semion())
    tw = list(good.twists)
    s = good.ring.labels.index("s")
    cs = good.ring.labels.index("chi*s")
    tw[s], tw[cs] = CycloNum.rational(1), CycloNum.rational(-1)
    bad = PremodularData(good.ring, good.dims, tuple(tw))
    sm = promote_unchecked(bad, good.ring.labels.index("chi"), promote(good).pi0)
    assert not unitarity_check(sm).ok


@given(small_data)
def test_float_verlinde_oracle(data):
    sm = promote(data)
    S = np.array([[x.to_complex() for x in row] for row in sm.s_hat.tolist()])
    d = np.array([sm.dims[v].to_complex() for v in sm.pi0])
    dual_pos = [sm.pos(sm.ring.dual[v]) for v in sm.pi0]
    D = sm.dim.to_complex()
    assert np.allclose(S @ S.conj(), (D / 2) * np.eye(len(d)))
    V = np.einsum("xv,yv,zv->xyz", S, S / d, S[:, dual_pos]) * 2 / D
    assert np.allclose(V, sm.naive_fusion, atol=1e-9)


@given(small_data)
def test_catalog_passes_full_suite(data):
    sm = promote(data)
    rep = full_suite(sm)
    assert rep.ok, rep.dumps()
    assert divisibility_check(sm).ok


@given(small_data, st.integers(0, 2**32 - 1))
def test_partition_invariance(data, seed):
    a = full_suite(promote(data)).outcomes()
    sm = promote(data, rng=random.Random(seed))
    b = full_suite(sm).outcomes()
    assert a == b
    assert verlinde_check(sm).ok and data_level_suite(sm).ok
