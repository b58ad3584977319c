import cmath
import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionlab.exactnum import (
    ConductorOverflowError,
    CycloNum,
    NotRealError,
    certified_sign,
    certify_real,
    conductor_cap,
    cyclotomic_poly,
    is_algebraic_integer,
    root_of_unity,
    root_of_unity_order,
    set_conductor_cap,
    sqrt_int,
    totient,
)

CONDUCTORS = [1, 3, 4, 5, 7, 8, 12, 15, 16, 24]


@st.composite
def cyclonums(draw, conductors=CONDUCTORS, denominators=(1, 2, 3)):
    N = draw(st.sampled_from(conductors))
    terms = draw(st.dictionaries(st.integers(0, N - 1), st.integers(-5, 5), max_size=4))
    den = draw(st.sampled_from(denominators))
    return CycloNum.from_exponents(N, {k: Fraction(v, den) for k, v in terms.items()})


def close(x: CycloNum, z: complex, tol=1e-9) -> bool:
    return abs(x.to_complex() - z) < tol


def test_totient_and_cyclotomic_degree():
    for n in range(1, 40):
        assert totient(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
        assert len(cyclotomic_poly(n)) - 1 == totient(n)


def test_cyclotomic_poly_small():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 12, 16, 30])
def test_roots_of_unity_match_exp(n):
    for k in range(n):
        assert close(root_of_unity(n, k), cmath.exp(2j * cmath.pi * k / n))


def test_root_of_unity_order():
    assert root_of_unity_order(root_of_unity(12, 4)) == 3
    assert root_of_unity_order(root_of_unity(16, 1)) == 16
    assert root_of_unity_order(CycloNum.rational(-1)) == 2
    assert root_of_unity_order(sqrt_int(2)) is None
    assert root_of_unity_order(CycloNum.rational(0)) is None


def test_zeta8_regression():
    z = root_of_unity(8)
    assert (z + z.inverse()) ** 2 == 2
    assert z + z.inverse() == sqrt_int(2)


@pytest.mark.parametrize("n", [2, 3, 5, 6, 7, 8, 10, 12, 18, 20, 50, 98])
def test_sqrt_int(n):
    r = sqrt_int(n)
    assert r * r == n
    assert certified_sign(r) == 1
    assert close(r, math.sqrt(n))


def test_sqrt_of_square_is_rational():
    assert sqrt_int(36) == 6
    assert sqrt_int(0) == 0
    with pytest.raises(ValueError):
        sqrt_int(-1)


def test_golden_ratio_interval():
    phi = (1 + sqrt_int(5)) / 2
    iv = certify_real(phi, Fraction(1, 10**12))
    assert iv.width <= Fraction(1, 10**12)
    mp.mp.dps = 60
    exact = Fraction(str((1 + mp.sqrt(5)) / 2))
    assert iv.lo <= exact <= iv.hi
    assert phi * phi == phi + 1


def test_certify_real_rejects_nonreal():
    with pytest.raises(NotRealError):
        certify_real(root_of_unity(4))


def test_algebraic_integer():
    assert is_algebraic_integer((1 + sqrt_int(5)) / 2)
    assert not is_algebraic_integer((1 + sqrt_int(3)) / 2)
    assert not is_algebraic_integer(Fraction(1, 2))
    assert is_algebraic_integer(root_of_unity(7, 3) * 5)


def test_json_roundtrip():
    x = root_of_unity(12, 5) * Fraction(3, 7) + 2
    assert CycloNum.from_json(x.to_json()) == x


def test_conductor_cap():
    old = conductor_cap()
    try:
        set_conductor_cap(16)
        with pytest.raises(ConductorOverflowError):
            root_of_unity(32)
        with pytest.raises(ConductorOverflowError):
            root_of_unity(3) * root_of_unity(8)
    finally:
        set_conductor_cap(old)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        root_of_unity(5) / CycloNum.rational(0)


@given(cyclonums(), cyclonums())
def test_add_mul_agree_with_complex(a, b):
    assert close(a + b, a.to_complex() + b.to_complex())
    assert close(a * b, a.to_complex() * b.to_complex())
    assert close(a - b, a.to_complex() - b.to_complex())


@given(cyclonums(), cyclonums(), cyclonums())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a


@given(cyclonums())
def test_inverse(a):
    if a.is_zero():
        return
    assert a * a.inverse() == 1
    assert close(a.inverse(), 1 / a.to_complex(), tol=1e-6 * max(1.0, abs(1 / a.to_complex())))


@given(cyclonums())
def test_conj_is_complex_conjugate(a):
    assert close(a.conj(), a.to_complex().conjugate())
    assert (a * a.conj()).is_real()


@given(cyclonums(), st.sampled_from([1, 2, 3, 5]))
def test_embed_preserves_value(a, m):
    M = a.conductor * m
    if M > conductor_cap():
        return
    e = a.embed(M)
    assert e == a and e.conductor == M
    assert close(e, a.to_complex())


@given(cyclonums())
def test_galois_is_ring_map(a):
    N = a.conductor
    for k in range(1, N + 1):
        if math.gcd(k, N) != 1:
            continue
        assert (a * a).galois(k) == a.galois(k) * a.galois(k)
        assert (a + 1).galois(k) == a.galois(k) + 1


@given(cyclonums(denominators=(1,)), cyclonums(denominators=(1,)))
def test_integer_combinations_are_algebraic_integers(a, b):
    assert is_algebraic_integer(a * b + a)


@given(cyclonums())
def test_certified_interval_contains_float(a):
    r = a + a.conj()
    iv = certify_real(r, Fraction(1, 10**9))
    assert iv.lo - Fraction(1, 10**6) <= Fraction(r.to_complex().real) <= iv.hi + Fraction(1, 10**6)
    assert iv.width <= Fraction(1, 10**9)


@given(cyclonums())
def test_hash_consistent_with_eq(a):
    b = a.embed(a.conductor * 2) if a.conductor * 2 <= conductor_cap() else a
    assert a == b and hash(a) == hash(b)
