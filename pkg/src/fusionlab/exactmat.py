"""Dense exact matrices over Q(zeta_N), vectorised with numpy.

A matrix is an integer tensor of shape (rows, cols, phi(N)) holding
power-basis coordinates, plus one positive common denominator.  Products
are polynomial convolutions followed by reduction modulo the cyclotomic
polynomial.  int64 is used when a worst-case bound on intermediate values
fits; otherwise the computation falls back to Python integers (dtype=object).
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .exactnum import CycloNum, _check_cap, _power_table, as_cyclo, common_conductor, totient

_SAFE = 1 << 62


@lru_cache(maxsize=None)
def _reduction(N: int) -> np.ndarray:
    phi = totient(N)
    table = _power_table(N)
    R = np.zeros((max(2 * phi - 1, 1), phi), dtype=np.int64)
    for e in range(R.shape[0]):
        for j, c in table[e % N]:
            R[e, j] = c
    return R


@lru_cache(maxsize=None)
def _reduction_l1(N: int) -> int:
    return int(np.abs(_reduction(N)).sum(axis=1).max())


@lru_cache(maxsize=None)
def _embedding(N: int, M: int) -> np.ndarray:
    rows = [CycloNum.zeta(N, i).embed(M).num for i in range(totient(N))]
    return np.array(rows, dtype=np.int64).reshape(totient(N), totient(M))


@lru_cache(maxsize=None)
def _galois_perm(N: int, a: int) -> np.ndarray:
    rows = [CycloNum.zeta(N, (a * i) % N).num for i in range(totient(N))]
    return np.array(rows, dtype=np.int64).reshape(totient(N), totient(N))


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def _as_object(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def _maybe_int64(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and _maxabs(a) < _SAFE:
        return a.astype(np.int64)
    return a


class CycloMatrix:
    """Exact matrix over Q(zeta_N)."""

    __slots__ = ("N", "data", "den")

    def __init__(self, N: int, data: np.ndarray, den: int = 1):
        _check_cap(N)
        if data.ndim != 3 or data.shape[2] != totient(N):
            raise ValueError("data must have shape (rows, cols, phi(N))")
        self.N = N
        self.data, self.den = self._normalize(_maybe_int64(data), int(den))

    @staticmethod
    def _normalize(data: np.ndarray, den: int):
        if den < 0:
            data, den = -data, -den
        if den == 1 or data.size == 0:
            return data, den
        if data.dtype == object:
            g = den
            for v in data.flat:
                g = math.gcd(g, int(v))
                if g == 1:
                    break
        else:
            g = math.gcd(den, int(np.gcd.reduce(data.ravel())))
        if g > 1:
            data = data // g
            den //= g
        return data, den

    # -- construction -----------------------------------------------------------

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[Union[CycloNum, int]]], N: int | None = None) -> "CycloMatrix":
        entries = [[as_cyclo(x) for x in row] for row in rows]
        if N is None:
            N = common_conductor(x for row in entries for x in row)
        n = len(entries)
        m = len(entries[0]) if n else 0
        den = 1
        for row in entries:
            for x in row:
                den = den * x.den // math.gcd(den, x.den)
        data = np.zeros((n, m, totient(N)), dtype=object)
        for i, row in enumerate(entries):
            for j, x in enumerate(row):
                y = x.embed(N)
                scale = den // y.den
                data[i, j, :] = [c * scale for c in y.num]
        return cls(N, data, den)

    @classmethod
    def identity(cls, n: int, N: int = 1, scale: int = 1) -> "CycloMatrix":
        data = np.zeros((n, n, totient(N)), dtype=np.int64)
        data[np.arange(n), np.arange(n), 0] = scale
        return cls(N, data)

    @classmethod
    def from_int(cls, a: np.ndarray, N: int = 1) -> "CycloMatrix":
        a = np.asarray(a)
        data = np.zeros(a.shape + (totient(N),), dtype=a.dtype if a.dtype == object else np.int64)
        data[..., 0] = a
        return cls(N, data)

    # -- views -------------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    def entry(self, i: int, j: int) -> CycloNum:
        return CycloNum._raw(self.N, [int(c) for c in self.data[i, j]], self.den)

    def tolist(self) -> list[list[CycloNum]]:
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def __getitem__(self, idx) -> CycloNum:
        return self.entry(*idx)

    def sub(self, rows: Sequence[int], cols: Sequence[int]) -> "CycloMatrix":
        return CycloMatrix(self.N, self.data[np.ix_(list(rows), list(cols))], self.den)

    @property
    def T(self) -> "CycloMatrix":
        return CycloMatrix(self.N, self.data.transpose(1, 0, 2), self.den)

    def is_integer_matrix(self) -> bool:
        return self.den == 1 and not np.any(self.data[:, :, 1:])

    def to_int(self) -> np.ndarray:
        if not self.is_integer_matrix():
            raise ValueError("matrix has non-integer entries")
        return self.data[:, :, 0].copy()

    def is_rational(self) -> bool:
        return not np.any(self.data[:, :, 1:])

    # -- field maps --------------------------------------------------------------

    def embed(self, M: int) -> "CycloMatrix":
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot embed conductor {self.N} into {M}")
        return CycloMatrix(M, self._lin(self.data, _embedding(self.N, M)), self.den)

    def galois(self, a: int) -> "CycloMatrix":
        return CycloMatrix(self.N, self._lin(self.data, _galois_perm(self.N, a % self.N)), self.den)

    def conj(self) -> "CycloMatrix":
        return self if self.N <= 2 else self.galois(-1)

    @staticmethod
    def _lin(data: np.ndarray, E: np.ndarray) -> np.ndarray:
        if data.dtype != object and _maxabs(data) * _maxabs(E) * E.shape[0] < _SAFE:
            return data @ E
        return _as_object(data) @ _as_object(E)

    def _lift(self, other: "CycloMatrix"):
        if self.N == other.N:
            return self, other
        M = self.N * other.N // math.gcd(self.N, other.N)
        return self.embed(M), other.embed(M)

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other: "CycloMatrix") -> "CycloMatrix":
        a, b = self._lift(other)
        da, db = self._widen(a.data, b.den), self._widen(b.data, a.den)
        return CycloMatrix(a.N, da * b.den + db * a.den, a.den * b.den)

    def __neg__(self) -> "CycloMatrix":
        return CycloMatrix(self.N, -self.data, self.den)

    def __sub__(self, other: "CycloMatrix") -> "CycloMatrix":
        return self + (-other)

    @staticmethod
    def _widen(data: np.ndarray, factor: int) -> np.ndarray:
        if data.dtype != object and (_maxabs(data) + 1) * abs(factor) * 2 < _SAFE:
            return data
        return _as_object(data)

    def _convolve(self, A: np.ndarray, B: np.ndarray, inner: int, contract: bool) -> np.ndarray:
        phi = A.shape[-1]
        bound = _maxabs(A) * _maxabs(B) * max(inner, 1) * phi * _reduction_l1(self.N)
        if A.dtype == object or B.dtype == object or bound >= _SAFE:
            A, B = _as_object(A), _as_object(B)
        if contract:
            out_shape = (A.shape[0], B.shape[1], 2 * phi - 1)
        else:
            out_shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-1]) + (2 * phi - 1,)
        out = np.zeros(out_shape, dtype=A.dtype)
        for a in range(phi):
            col = A[..., a]
            if not np.any(col):
                continue
            if contract:
                out[..., a : a + phi] += np.tensordot(col, B, axes=(1, 0))
            else:
                out[..., a : a + phi] += col[..., None] * B
        R = _reduction(self.N)
        if out.dtype == object:
            R = _as_object(R)
        return out @ R

    def __matmul__(self, other: "CycloMatrix") -> "CycloMatrix":
        a, b = self._lift(other)
        if a.shape[1] != b.shape[0]:
            raise ValueError("shape mismatch")
        data = a._convolve(a.data, b.data, a.shape[1], contract=True)
        return CycloMatrix(a.N, data, a.den * b.den)

    def hadamard(self, other: "CycloMatrix") -> "CycloMatrix":
        """Entrywise product (broadcasting over rows/cols is allowed)."""
        a, b = self._lift(other)
        data = a._convolve(a.data, b.data, 1, contract=False)
        return CycloMatrix(a.N, data, a.den * b.den)

    def scale(self, c: Union[CycloNum, int]) -> "CycloMatrix":
        c = as_cyclo(c)
        M = self.N * c.N // math.gcd(self.N, c.N)
        a = self.embed(M)
        cv = c.embed(M)
        cdata = np.array(cv.num, dtype=object).reshape(1, 1, -1)
        cdata = _maybe_int64(cdata)
        data = a._convolve(a.data, cdata, 1, contract=False)
        return CycloMatrix(M, data, a.den * cv.den)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloMatrix):
            if self.shape != other.shape:
                return False
            a, b = self._lift(other)
            return a.den == b.den and np.array_equal(a.data, b.data)
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"CycloMatrix(N={self.N}, shape={self.shape}, den={self.den})"

    def entrywise_equal(self, other: "CycloMatrix") -> np.ndarray:
        """Boolean (rows, cols) array of exact entry equality."""
        a, b = self._lift(other)
        lhs = self._widen(a.data, b.den) * b.den
        rhs = self._widen(b.data, a.den) * a.den
        return np.all(lhs == rhs, axis=2)


def outer(u: Sequence[CycloNum], v: Sequence[CycloNum]) -> CycloMatrix:
    col = CycloMatrix.from_entries([[x] for x in u])
    row = CycloMatrix.from_entries([list(v)])
    return col @ row


def det(M: Union[CycloMatrix, Sequence[Sequence[CycloNum]]]) -> CycloNum:
    """Exact determinant by Gaussian elimination over the cyclotomic field."""
    rows = M.tolist() if isinstance(M, CycloMatrix) else [[as_cyclo(x) for x in r] for r in M]
    n = len(rows)
    result = CycloNum.rational(1)
    rows = [list(r) for r in rows]
    for c in range(n):
        p = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if p is None:
            return CycloNum.rational(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            result = -result
        piv = rows[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if rows[i][c].is_zero():
                continue
            f = rows[i][c] * inv
            rows[i] = [rows[i][k] - f * rows[c][k] for k in range(n)]
    return result
