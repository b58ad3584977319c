"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) modulo the
N-th cyclotomic polynomial, as integer numerators over a single positive
denominator.  The power basis is an integral basis of Z[zeta_N], so an
element is an algebraic integer exactly when its denominator is 1.

Real elements can be enclosed in certified rational intervals; the interval
evaluation is delegated to mpmath's outward-rounded interval context and the
dyadic endpoints are converted to exact fractions.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from mpmath import iv
from mpmath.libmp import to_rational

__all__ = [
    "ConductorOverflowError",
    "NotRealError",
    "CycloNum",
    "Interval",
    "conductor_cap",
    "set_conductor_cap",
    "totient",
    "cyclotomic_poly",
    "field_ops",
    "is_algebraic_integer",
    "certify_real",
    "certified_sign",
    "is_positive",
    "sqrt_int",
    "root_of_unity",
    "root_of_unity_order",
    "as_cyclo",
    "common_conductor",
]


class ConductorOverflowError(ArithmeticError):
    """Raised when an operation would need a conductor above the configured cap."""


class NotRealError(ValueError):
    """Raised when a real-only operation receives a non-real element."""


_CAP = int(os.environ.get("FUSIONLAB_CONDUCTOR_CAP", 1 << 16))


def conductor_cap() -> int:
    return _CAP


def set_conductor_cap(n: int) -> int:
    """Set the conductor cap; returns the previous value."""
    global _CAP
    if n < 1:
        raise ValueError("conductor cap must be positive")
    old, _CAP = _CAP, int(n)
    return old


def _check_cap(n: int) -> None:
    if n > _CAP:
        raise ConductorOverflowError(f"conductor {n} exceeds cap {_CAP}")


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _mobius(n: int) -> int:
    sign, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    # den monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dn]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse reduced coordinates of zeta_n^e for 0 <= e < n."""
    phi = totient(n)
    poly = cyclotomic_poly(n)
    cur = [0] * phi
    cur[0] = 1
    rows = []
    for _ in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _ramanujan(n: int) -> tuple[int, ...]:
    # trace of zeta_n^i down to Q, i < phi(n)
    out = []
    for i in range(totient(n)):
        g = math.gcd(i, n)
        out.append(sum(_mobius(n // d) * d for d in _divisors(g)))
    return tuple(out)


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(a for a in range(1, n + 1) if math.gcd(a, n) == 1)


Number = Union[int, Fraction, "CycloNum"]


class CycloNum:
    """An exact element of Q(zeta_N).

    ``CycloNum(8, [0, 1, 0, 0])`` is zeta_8.  Instances are immutable.
    """

    __slots__ = ("N", "num", "den", "_hash")

    def __init__(self, N: int, coeffs: Sequence[Union[int, Fraction, str]]):
        if N < 1:
            raise ValueError("conductor must be positive")
        _check_cap(N)
        phi = totient(N)
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {N}, got {len(coeffs)}")
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for f in fr:
            den = den * f.denominator // math.gcd(den, f.denominator)
        self._set(N, [f.numerator * (den // f.denominator) for f in fr], den)

    def _set(self, N: int, num: list[int], den: int) -> None:
        g = den
        for c in num:
            if c:
                g = math.gcd(g, c)
                if g == 1:
                    break
        if den < 0:
            g = -g
        if g != 1:
            num = [c // g for c in num]
            den //= g
        self.N = N
        self.num = tuple(num)
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, N: int, num: list[int], den: int) -> "CycloNum":
        obj = cls.__new__(cls)
        obj._set(N, num, den)
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, q: Union[int, Fraction], N: int = 1) -> "CycloNum":
        q = Fraction(q)
        num = [0] * totient(N)
        num[0] = q.numerator
        return cls._raw(N, num, q.denominator)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycloNum":
        """zeta_N^k = exp(2 pi i k / N)."""
        _check_cap(N)
        num = [0] * totient(N)
        for i, c in _power_table(N)[k % N]:
            num[i] = c
        return cls._raw(N, num, 1)

    @classmethod
    def from_exponents(cls, N: int, terms: dict[int, Union[int, Fraction]]) -> "CycloNum":
        """Sum of c * zeta_N^e over the items (e, c)."""
        out = cls.rational(0, N)
        for e, c in terms.items():
            out = out + cls.zeta(N, e) * c
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNum":
        return cls(int(obj["N"]), [Fraction(c) for c in obj["coeffs"]])

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [str(c) for c in self.coeffs]}

    # -- views ----------------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.N

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def to_complex(self) -> complex:
        return sum(
            (c / self.den) * complex(math.cos(2 * math.pi * i / self.N), math.sin(2 * math.pi * i / self.N))
            for i, c in enumerate(self.num)
            if c
        ) + 0j

    def is_real(self) -> bool:
        return self == self.conj()

    # -- field structure -------------------------------------------------------

    def embed(self, M: int) -> "CycloNum":
        """The same number written at conductor M (N must divide M)."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot embed conductor {self.N} into {M}")
        _check_cap(M)
        step = M // self.N
        table = _power_table(M)
        acc = [0] * totient(M)
        for i, c in enumerate(self.num):
            if c:
                for j, t in table[i * step]:
                    acc[j] += c * t
        return CycloNum._raw(M, acc, self.den)

    def galois(self, a: int) -> "CycloNum":
        """Apply the automorphism zeta_N -> zeta_N^a (gcd(a, N) = 1)."""
        if math.gcd(a, self.N) != 1:
            raise ValueError(f"{a} is not a unit mod {self.N}")
        table = _power_table(self.N)
        acc = [0] * len(self.num)
        for i, c in enumerate(self.num):
            if c:
                for j, t in table[(a * i) % self.N]:
                    acc[j] += c * t
        return CycloNum._raw(self.N, acc, self.den)

    def conj(self) -> "CycloNum":
        return self.galois(-1 % self.N) if self.N > 2 else self

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycloNum.rational(1 / self.to_fraction(), self.N)
        rest = CycloNum.rational(1, self.N)
        for a in _units(self.N):
            if a % self.N != 1:
                rest = rest * self.galois(a)
        norm = (self * rest).to_fraction()
        return rest * CycloNum.rational(1 / norm)

    # -- arithmetic --------------------------------------------------------------

    def _lift(self, other: Number) -> tuple["CycloNum", "CycloNum"]:
        if not isinstance(other, CycloNum):
            other = CycloNum.rational(other, self.N)
        if other.N == self.N:
            return self, other
        M = self.N * other.N // math.gcd(self.N, other.N)
        return self.embed(M), other.embed(M)

    def __add__(self, other: Number) -> "CycloNum":
        if not isinstance(other, (CycloNum, int, Fraction)):
            return NotImplemented
        a, b = self._lift(other)
        if a.den == b.den:
            return CycloNum._raw(a.N, [x + y for x, y in zip(a.num, b.num)], a.den)
        return CycloNum._raw(a.N, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum._raw(self.N, [-x for x in self.num], self.den)

    def __sub__(self, other: Number) -> "CycloNum":
        if not isinstance(other, (CycloNum, int, Fraction)):
            return NotImplemented
        return self + (-as_cyclo(other))

    def __rsub__(self, other: Number) -> "CycloNum":
        return as_cyclo(other) + (-self)

    def __mul__(self, other: Number) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloNum._raw(self.N, [x * q.numerator for x in self.num], self.den * q.denominator)
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self._lift(other)
        if a.is_rational():
            return CycloNum._raw(b.N, [x * a.num[0] for x in b.num], a.den * b.den)
        if b.is_rational():
            return CycloNum._raw(a.N, [x * b.num[0] for x in a.num], a.den * b.den)
        phi = len(a.num)
        prod = [0] * (2 * phi - 1)
        bnz = [(j, y) for j, y in enumerate(b.num) if y]
        for i, x in enumerate(a.num):
            if x:
                for j, y in bnz:
                    prod[i + j] += x * y
        acc = prod[:phi]
        table = _power_table(a.N)
        for e in range(phi, 2 * phi - 1):
            c = prod[e]
            if c:
                for j, t in table[e % a.N]:
                    acc[j] += c * t
        return CycloNum._raw(a.N, acc, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> "CycloNum":
        return as_cyclo(other) * self.inverse()

    def __pow__(self, k: int) -> "CycloNum":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNum.rational(1, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, CycloNum):
            return NotImplemented
        if self.N == other.N:
            return self.den == other.den and self.num == other.num
        a, b = self._lift(other)
        return a.den == b.den and a.num == b.num

    def __hash__(self) -> int:
        # the degree-normalised trace does not depend on the conductor
        if self._hash is None:
            tr = sum(c * t for c, t in zip(self.num, _ramanujan(self.N)))
            self._hash = hash(Fraction(tr, self.den * len(self.num)))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CycloNum({self.N}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.N}" + (f"^{i}" if i > 1 else "")
                terms.append(z if c == 1 else f"-{z}" if c == -1 else f"{c}*{z}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def as_cyclo(x: Number, N: int = 1) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    return CycloNum.rational(x, N)


def common_conductor(values: Iterable[CycloNum]) -> int:
    M = 1
    for v in values:
        M = M * v.N // math.gcd(M, v.N)
    _check_cap(M)
    return M


def field_ops(a: CycloNum, b: CycloNum, op: str):
    """Dispatch one of add, sub, mul, div, conj (unary on a), eq."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "conj":
        return a.conj()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")


def is_algebraic_integer(x: Union[CycloNum, int, Fraction]) -> bool:
    return as_cyclo(x).den == 1


# -- roots of unity ---------------------------------------------------------


def root_of_unity(n: int, k: int = 1) -> CycloNum:
    return CycloNum.zeta(n, k)


@lru_cache(maxsize=None)
def _roots_at(N: int) -> dict[tuple[int, ...], int]:
    # Q(zeta_N) contains exactly the lcm(2, N)-th roots of unity
    M = N if N % 2 == 0 else 2 * N
    out = {}
    for k in range(M):
        if M == N:
            z = CycloNum.zeta(N, k)
        else:
            # odd N: zeta_{2N}^k = (-1)^k zeta_N^(k (N+1)/2)
            z = CycloNum.zeta(N, k * ((N + 1) // 2))
            if k % 2:
                z = -z
        out[z.num] = M // math.gcd(k, M)
    return out


def root_of_unity_order(x: Number) -> int | None:
    """Multiplicative order of x if x is a root of unity, else None."""
    x = as_cyclo(x)
    if x.den != 1:
        return None
    return _roots_at(x.N).get(x.num)


# -- real enclosures --------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @classmethod
    def point(cls, q: Union[int, Fraction]) -> "Interval":
        q = Fraction(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Union[int, Fraction, "Interval"]) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __mul__(self, other: "Interval") -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        ps = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __float__(self) -> float:
        return float(self.mid)

    def __str__(self) -> str:
        return f"[{float(self.lo):.15g}, {float(self.hi):.15g}]"


def _iv_to_fractions(v) -> tuple[Fraction, Fraction]:
    lo, hi = v._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


def _enclose(x: CycloNum, prec: int) -> Interval:
    old = iv.prec
    try:
        iv.prec = prec
        total = iv.mpf(0)
        two_pi = 2 * iv.pi
        for i, c in enumerate(x.num):
            if c:
                total += iv.mpf(c) * iv.cos(two_pi * i / x.N)
        total /= x.den
        lo, hi = _iv_to_fractions(total)
    finally:
        iv.prec = old
    return Interval(lo, hi)


def certify_real(x: Number, eps: Union[Fraction, int, str] = Fraction(1, 10**12)) -> Interval:
    """A rational interval of width <= eps containing the real number x.

    Precision doubles from 64 bits until the width target is met; the result
    is the intersection of all enclosures computed on the way, so a smaller
    eps always yields a sub-interval.
    """
    x = as_cyclo(x)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not x.is_real():
        raise NotRealError(f"{x} is not real")
    if x.is_rational():
        return Interval.point(x.to_fraction())
    lo, hi = None, None
    prec = 64
    while True:
        enc = _enclose(x, prec)
        lo = enc.lo if lo is None else max(lo, enc.lo)
        hi = enc.hi if hi is None else min(hi, enc.hi)
        if hi - lo <= eps:
            return Interval(lo, hi)
        prec *= 2
        if prec > 1 << 20:
            raise ArithmeticError("interval refinement did not converge")


def certified_sign(x: Number) -> int:
    """Sign of a real cyclotomic number, decided by refining an enclosure."""
    x = as_cyclo(x)
    if x.is_zero():
        return 0
    eps = Fraction(1, 1 << 8)
    while True:
        enc = certify_real(x, eps)
        if enc.lo > 0:
            return 1
        if enc.hi < 0:
            return -1
        eps /= 1 << 16


def is_positive(x: Number) -> bool:
    return certified_sign(x) > 0


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = k^2 * m with m squarefree; returns (k, m)."""
    k, m, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            m *= p
        p += 1
    return k, m * n


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CycloNum:
    if p == 2:
        return CycloNum.zeta(8, 1) + CycloNum.zeta(8, 7)
    gauss = CycloNum.rational(0, p)
    for a in range(1, p):
        legendre = pow(a, (p - 1) // 2, p)
        gauss = gauss + (CycloNum.zeta(p, a) if legendre == 1 else -CycloNum.zeta(p, a))
    root = gauss if p % 4 == 1 else -CycloNum.zeta(4, 1) * gauss
    return root if certified_sign(root) > 0 else -root


def sqrt_int(n: int) -> CycloNum:
    """The positive square root of a non-negative integer, as a cyclotomic number."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return CycloNum.rational(0)
    k, m = _squarefree_split(n)
    out = CycloNum.rational(k)
    p = 2
    while m > 1:
        if m % p == 0:
            out = out * _sqrt_prime(p)
            m //= p
        p += 1
    return out
