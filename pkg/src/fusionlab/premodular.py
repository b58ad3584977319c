"""Premodular data: dims + twists over a fusion ring, S-matrix, centralizers, center type."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactmat import CycloMatrix, det, outer
from .exactnum import CycloNum, as_cyclo, common_conductor, is_algebraic_integer, root_of_unity_order
from .fusering import (
    FPDimError,
    FusionRing,
    fp_character,
    generated_subring,
    global_fpdim,
    is_subring,
    subrings,
    validate_ring,
)
from .report import Report


class PremodularError(ValueError):
    pass


class InconsistentDataError(PremodularError):
    """Data passes the local checks but violates a structural consequence."""


class CenterKind(enum.Enum):
    NON_DEGENERATE = "NonDegenerate"
    SLIGHTLY_DEGENERATE = "SlightlyDegenerate"
    TANNAKIAN = "Tannakian"
    SUPER_TANNAKIAN = "SuperTannakianNontrivial"
    SYMMETRIC_OTHER = "SymmetricOther"
    MIXED = "Mixed"


@dataclass(frozen=True)
class CenterClassification:
    kind: CenterKind
    center: tuple[int, ...]

    def __str__(self) -> str:
        if self.kind is CenterKind.MIXED:
            return f"Mixed{list(self.center)}"
        return self.kind.value


@dataclass(eq=False)
class PremodularData:
    ring: FusionRing
    dims: tuple[CycloNum, ...]
    twists: tuple[CycloNum, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.dims = tuple(as_cyclo(x) for x in self.dims)
        self.twists = tuple(as_cyclo(x) for x in self.twists)
        if self.check:
            self._validate()

    def _validate(self) -> None:
        r = self.ring.rank
        if len(self.dims) != r or len(self.twists) != r:
            raise PremodularError("dims and twists must have one entry per simple")
        rep = validate_ring(self.ring)
        if not rep.ok:
            raise PremodularError("invalid fusion ring: " + "; ".join(str(x) for x in rep.failures))
        try:
            fp_character(self.ring, self.dims)
        except FPDimError as exc:
            raise PremodularError(f"dims rejected: {exc}") from exc
        if self.twists[0] != 1:
            raise PremodularError("twist of the unit must be 1")
        for i, t in enumerate(self.twists):
            if root_of_unity_order(t) is None:
                raise PremodularError(f"twist {i} is not a root of unity")
            if self.twists[self.ring.dual[i]] != t:
                raise PremodularError(f"twist {i} differs from the twist of its dual")

    @property
    def rank(self) -> int:
        return self.ring.rank

    @cached_property
    def conductor(self) -> int:
        return common_conductor(list(self.dims) + list(self.twists))

    @cached_property
    def s_matrix(self) -> CycloMatrix:
        """Balancing equation: s_ij = (theta_i theta_j)^-1 sum_k N_ij^k theta_k d_k."""
        r, M = self.rank, self.conductor
        v = CycloMatrix.from_entries([[t * d] for t, d in zip(self.twists, self.dims)], M)
        NN = CycloMatrix.from_int(self.ring.N.reshape(r * r, r), M)
        inner = NN @ v
        inner = CycloMatrix(inner.N, inner.data.reshape(r, r, -1), inner.den)
        tinv = [t.conj() for t in self.twists]
        return inner.hadamard(outer(tinv, tinv))

    def s(self, i: int, j: int) -> CycloNum:
        return self.s_matrix.entry(i, j)

    @cached_property
    def _dd(self) -> CycloMatrix:
        return outer(self.dims, self.dims)

    @cached_property
    def centralizing(self) -> np.ndarray:
        """Boolean r x r matrix: s_ij == d_i d_j."""
        return self.s_matrix.entrywise_equal(self._dd)

    @cached_property
    def fpdim(self) -> CycloNum:
        return global_fpdim(self.ring, self.dims)

    def fpdim_of(self, subset: Iterable[int]) -> CycloNum:
        return global_fpdim(self.ring, self.dims, list(subset))

    def to_json(self) -> dict:
        M = self.conductor
        out = self.ring.to_json()
        out["dims"] = [d.embed(M).to_json() for d in self.dims]
        out["twists"] = [t.embed(M).to_json() for t in self.twists]
        return out

    @classmethod
    def from_json(cls, obj: dict, check: bool = True) -> "PremodularData":
        ring = FusionRing.from_json(obj)
        dims = [CycloNum.from_json(x) for x in obj["dims"]]
        twists = [CycloNum.from_json(x) for x in obj["twists"]]
        return cls(ring, tuple(dims), tuple(twists), check=check)


def s_matrix(data: PremodularData) -> CycloMatrix:
    return data.s_matrix


def s_matrix_checks(data: PremodularData) -> Report:
    rep = Report()
    S = data.s_matrix
    rep.add("s.symmetric", S == S.T)
    unit_row = CycloMatrix.from_entries([list(data.dims)])
    rep.add("s.unit_row_is_dims", S.sub([0], range(data.rank)) == unit_row)
    dual = list(data.ring.dual)
    rep.add("s.dual_is_conj", S.sub(range(data.rank), dual) == S.conj())
    return rep


def character_check(data: PremodularData) -> Report:
    """Each column s_{-,Y}/d_Y is a ring character: s_XY s_ZY = d_Y sum_W N_XZ^W s_WY."""
    rep = Report()
    r = data.rank
    S = data.s_matrix
    # rows (X, Z) of the pair products, columns Y
    A = CycloMatrix(S.N, np.repeat(S.data, r, axis=0), S.den)
    B = CycloMatrix(S.N, np.tile(S.data, (r, 1, 1)), S.den)
    d = CycloMatrix.from_entries([list(data.dims)], S.N)
    lhs = A.hadamard(B)
    rhs = CycloMatrix.from_int(data.ring.N.reshape(r * r, r), S.N) @ S
    rhs = rhs.hadamard(d)
    rep.add("s.columns_are_characters", lhs == rhs)
    return rep


def centralizes(data: PremodularData, i: int, j: int) -> bool:
    return bool(data.centralizing[i, j])


def centralizer(data: PremodularData, D: Iterable[int]) -> tuple[int, ...]:
    D = list(D)
    C = data.centralizing
    out = tuple(i for i in range(data.rank) if bool(np.all(C[i, D])))
    if not is_subring(data.ring, out):
        raise InconsistentDataError(f"centralizer of {D} is not closed: {out}")
    return out


def muger_center(data: PremodularData) -> tuple[int, ...]:
    return centralizer(data, range(data.rank))


def _twist_sign(t: CycloNum) -> Optional[int]:
    if t == 1:
        return 1
    if t == -1:
        return -1
    return None


def classify_center(data: PremodularData) -> CenterClassification:
    center = muger_center(data)
    signs = {}
    for i in center:
        s = _twist_sign(data.twists[i])
        if s is None:
            raise InconsistentDataError(f"center object {data.ring.labels[i]} has twist outside {{1,-1}}")
        signs[i] = s
    if center == (0,):
        return CenterClassification(CenterKind.NON_DEGENERATE, center)
    if len(center) == 2 and signs[center[1]] == -1 and data.dims[center[1]] == 1:
        return CenterClassification(CenterKind.SLIGHTLY_DEGENERATE, center)
    if len(center) == data.rank:
        if all(s == 1 for s in signs.values()):
            return CenterClassification(CenterKind.TANNAKIAN, center)
        ring = data.ring
        graded = all(signs[k] == signs[i] * signs[j] for i in center for j in center for k in ring.support(i, j))
        kind = CenterKind.SUPER_TANNAKIAN if graded else CenterKind.SYMMETRIC_OTHER
        return CenterClassification(kind, center)
    return CenterClassification(CenterKind.MIXED, center)


def is_nondegenerate_by_det(data: PremodularData) -> bool:
    return not det(data.s_matrix).is_zero()


def check_dimension_theorem(data: PremodularData, D: Sequence[int], center: Optional[Sequence[int]] = None) -> Report:
    rep = Report()
    D = tuple(D)
    Dp = centralizer(data, D)
    Cp = tuple(center) if center is not None else muger_center(data)
    meet = tuple(sorted(set(D) & set(Cp)))
    lhs = data.fpdim_of(D) * data.fpdim_of(Dp)
    rhs = data.fpdim * data.fpdim_of(meet)
    rep.add("dimension_theorem", lhs == rhs, f"D={list(D)} lhs={lhs} rhs={rhs}")
    rep.data["dimension_theorem"] = {"D": list(D), "D'": list(Dp), "lhs": str(lhs), "rhs": str(rhs)}
    return rep


def double_centralizer_check(data: PremodularData, D: Sequence[int]) -> Report:
    rep = Report()
    dd = centralizer(data, centralizer(data, D))
    joined = generated_subring(data.ring, list(D) + list(muger_center(data)))
    rep.add("double_centralizer", dd == joined, f"D={list(D)} D''={list(dd)} D|C'={list(joined)}")
    return rep


@dataclass(frozen=True)
class TannakianScan:
    subrings: tuple[tuple[int, ...], ...]
    report: Report


def tannakian_subrings(data: PremodularData, max_rank: int = 16) -> TannakianScan:
    rep = Report()
    found = []
    for E in subrings(data.ring, max_rank=max_rank):
        if not all(data.twists[i] == 1 for i in E):
            continue
        if not set(E) <= set(centralizer(data, E)):
            continue
        found.append(E)
        ratio = data.fpdim / (data.fpdim_of(E) ** 2)
        rep.add("tannakian_ratio", is_algebraic_integer(ratio), f"E={list(E)} ratio={ratio}")
    return TannakianScan(tuple(found), rep)
