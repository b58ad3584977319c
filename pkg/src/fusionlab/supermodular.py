"""Slightly degenerate (super-modular) data: partition, S-hat, naive fusion, Verlinde check."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exactmat import CycloMatrix
from .exactnum import CycloNum, is_algebraic_integer
from .fusering import (
    adjoint_subring,
    generated_subring,
    invertible_indices,
    is_integral,
    is_subring,
    is_weakly_integral,
)
from .premodular import (
    CenterKind,
    InconsistentDataError,
    PremodularData,
    PremodularError,
    centralizer,
    classify_center,
    muger_center,
)
from .report import Report


class SuperModularError(PremodularError):
    pass


class CenterNotSVecError(SuperModularError):
    pass


class FermionFixedPointError(SuperModularError):
    pass


class DualClosureError(SuperModularError):
    pass


def fermion_action(data: PremodularData, chi: int) -> tuple[int, ...]:
    """chi (x) X for every X; chi must be invertible so each product is simple."""
    out = []
    for x in range(data.rank):
        prod = data.ring.product(chi, x)
        if len(prod) != 1 or next(iter(prod.values())) != 1:
            raise SuperModularError(f"{data.ring.labels[chi]} is not invertible")
        out.append(next(iter(prod)))
    return tuple(out)


def _orbits(action: Sequence[int]) -> list[tuple[int, int]]:
    seen, out = set(), []
    for x in range(len(action)):
        if x not in seen:
            y = action[x]
            seen.update((x, y))
            out.append((x, y))
    return out


def default_partition(data: PremodularData, action: Sequence[int]) -> tuple[int, ...]:
    dual = data.ring.dual
    chosen: dict[int, int] = {}  # least index of orbit -> representative
    orbit_of = {}
    for a, b in _orbits(action):
        orbit_of[a] = orbit_of[b] = a
    for a, b in _orbits(action):
        d_orbit = orbit_of[dual[a]]
        if d_orbit != a and d_orbit in chosen:
            chosen[a] = dual[chosen[d_orbit]]
        else:
            chosen[a] = min(a, b)
    return tuple(sorted(chosen.values()))


def random_partition(data: PremodularData, action: Sequence[int], rng: random.Random) -> tuple[int, ...]:
    dual = data.ring.dual
    orbit_of = {}
    for a, b in _orbits(action):
        orbit_of[a] = orbit_of[b] = a
    chosen: dict[int, int] = {}
    for a, b in _orbits(action):
        if a in chosen:
            continue
        rep = 0 if a == 0 else rng.choice((a, b))
        chosen[a] = rep
        chosen[orbit_of[dual[a]]] = dual[rep]
    return tuple(sorted(chosen.values()))


@dataclass(eq=False)
class SuperModularData:
    base: PremodularData
    fermion: int
    pi0: tuple[int, ...]
    action: tuple[int, ...] = field(repr=False)

    @property
    def pi1(self) -> tuple[int, ...]:
        return tuple(self.action[x] for x in self.pi0)

    @property
    def ring(self):
        return self.base.ring

    @property
    def dims(self):
        return self.base.dims

    @property
    def dim(self) -> CycloNum:
        return self.base.fpdim

    @cached_property
    def s_hat(self) -> CycloMatrix:
        return self.base.s_matrix.sub(self.pi0, self.pi0)

    @cached_property
    def naive_fusion(self) -> np.ndarray:
        """Nhat[a, b, c] over positions in pi0."""
        p0 = list(self.pi0)
        N = self.ring.N
        partner = [self.action[z] for z in p0]
        return N[np.ix_(p0, p0, p0)] + N[np.ix_(p0, p0, partner)]

    def pos(self, x: int) -> int:
        return self.pi0.index(x)


def validate_partition(data: PremodularData, action: Sequence[int], pi0: Sequence[int]) -> None:
    pi0 = set(pi0)
    if 0 not in pi0:
        raise DualClosureError("unit must lie in Pi_0")
    if any(data.ring.dual[x] not in pi0 for x in pi0):
        raise DualClosureError("Pi_0 is not closed under duality")
    for a, b in _orbits(action):
        if (a in pi0) == (b in pi0):
            raise SuperModularError(f"orbit {{{a},{b}}} must meet Pi_0 exactly once")


def promote(
    base: PremodularData,
    partition: Optional[Sequence[int]] = None,
    rng: Optional[random.Random] = None,
) -> SuperModularData:
    """Certify the fermion and choose Pi_0 (given, random via rng, or the deterministic default)."""
    cls = classify_center(base)
    if cls.kind is not CenterKind.SLIGHTLY_DEGENERATE:
        raise CenterNotSVecError(f"center is {cls}, not sVec")
    chi = cls.center[1]
    action = fermion_action(base, chi)
    fixed = [x for x in range(base.rank) if action[x] == x]
    if fixed:
        raise FermionFixedPointError(f"fermion fixes {[base.ring.labels[x] for x in fixed]}")
    for x in range(base.rank):
        if base.twists[action[x]] != -base.twists[x]:
            raise InconsistentDataError(f"twist of chi*{base.ring.labels[x]} is not minus the twist of {base.ring.labels[x]}")
        if base.ring.dual[x] == action[x]:
            raise DualClosureError(f"dual of {base.ring.labels[x]} equals its fermion partner")
    if partition is None:
        partition = random_partition(base, action, rng) if rng is not None else default_partition(base, action)
    partition = tuple(sorted(partition))
    validate_partition(base, action, partition)
    return SuperModularData(base, chi, partition, action)


def promote_unchecked(base: PremodularData, fermion: int, partition: Sequence[int]) -> SuperModularData:
    """No center/partition verification; for constructing deliberately broken data."""
    action = fermion_action(base, fermion)
    return SuperModularData(base, fermion, tuple(sorted(partition)), action)


# -- S-hat ---------------------------------------------------------------------------


def s_hat(sm: SuperModularData) -> CycloMatrix:
    return sm.s_hat


def unitarity_check(sm: SuperModularData) -> Report:
    rep = Report()
    Sh = sm.s_hat
    n = len(sm.pi0)
    half = sm.dim / 2
    ok = (Sh @ Sh.conj()) == CycloMatrix.identity(n).scale(half)
    rep.add("s_hat.unitarity", ok, f"S^ conj(S^) = ({half}) I, |Pi_0|={n}")
    rep.add("s_hat.nondegenerate", ok and not half.is_zero(), "follows from unitarity with dim != 0")
    order = list(sm.pi0) + list(sm.pi1)
    S = sm.base.s_matrix.sub(order, order)
    blocks_ok = all(S.sub(range(a * n, (a + 1) * n), range(b * n, (b + 1) * n)) == Sh for a in (0, 1) for b in (0, 1))
    rep.add("s_hat.block_form", blocks_ok)
    return rep


# -- naive fusion ---------------------------------------------------------------------


def naive_fusion_direct(sm: SuperModularData, x: int, y: int, z: int) -> int:
    N = sm.ring.N
    return int(N[x, y, z] + N[x, y, sm.action[z]])


def naive_fusion_verlinde(sm: SuperModularData, x: int, y: int, z: int) -> CycloNum:
    S = sm.base.s_matrix
    dual = sm.ring.dual
    c = 2 / sm.dim
    total = CycloNum.rational(0)
    for v in sm.pi0:
        total = total + S.entry(x, v) * S.entry(v, y) * S.entry(z, dual[v]) / S.entry(v, 0)
    return c * total


def _pair_rows(M: CycloMatrix) -> tuple[CycloMatrix, CycloMatrix]:
    """(A, B) of shape (n*n, m) with A[(i,j), v] = M[i, v], B[(i,j), v] = M[j, v]."""
    n, m = M.shape
    A = np.repeat(M.data, n, axis=0)
    B = np.tile(M.data, (n, 1, 1))
    return CycloMatrix(M.N, A, M.den), CycloMatrix(M.N, B, M.den)


def naive_fusion_verlinde_tensor(sm: SuperModularData) -> CycloMatrix:
    """All triples at once, as an (n*n, n) matrix indexed [(X, Y), Z] over Pi_0 positions."""
    Sh = sm.s_hat
    n = len(sm.pi0)
    A, B = _pair_rows(Sh)
    w = [(2 / sm.dim) * sm.dims[v].inverse() for v in sm.pi0]
    W = CycloMatrix.from_entries([w])
    AB = A.hadamard(B).hadamard(W)
    dual_pos = [sm.pos(sm.ring.dual[v]) for v in sm.pi0]
    # C[V, Z] = s_hat[Z, V*]
    C = Sh.sub(range(n), dual_pos).T
    return AB @ C


def verlinde_check(sm: SuperModularData) -> Report:
    rep = Report()
    n = len(sm.pi0)
    V = naive_fusion_verlinde_tensor(sm)
    direct = CycloMatrix.from_int(sm.naive_fusion.reshape(n * n, n))
    eq = V.entrywise_equal(direct)
    bad = [(sm.pi0[r // n], sm.pi0[r % n], sm.pi0[c]) for r, c in np.argwhere(~eq)]
    rep.add("verlinde.equality", not bad, f"{n ** 3} triples" + (f", mismatches {bad[:5]}" if bad else ""))
    rep.add("verlinde.integral", V.is_integer_matrix())
    return rep


# -- characters -------------------------------------------------------------------------


def character_checks(sm: SuperModularData) -> Report:
    rep = Report()
    n = len(sm.pi0)
    Nh = sm.naive_fusion  # Nh[x, y, z]
    L = Nh.transpose(0, 2, 1)  # (L_x)[z, y]
    comm = np.einsum("xab,ybc->xyac", L, L)
    rep.add("naive.commutative", bool(np.array_equal(comm, comm.transpose(1, 0, 2, 3))))
    Sh = sm.s_hat
    A, B = _pair_rows(Sh)
    lhs = A.hadamard(B)  # s[x, y] s[x', y]
    drow = CycloMatrix.from_entries([[sm.dims[v] for v in sm.pi0]])
    rhs = (CycloMatrix.from_int(Nh.reshape(n * n, n)) @ Sh).hadamard(drow)
    rep.add("characters.multiplicative", lhs == rhs)
    G = Sh.T @ Sh.conj()
    ortho = G == CycloMatrix.identity(n).scale(sm.dim / 2)
    rep.add("characters.orthogonal", ortho, "sum_X phi_Y(X) conj(phi_Y'(X)) = delta dim/(2 d_Y^2)")
    return rep


# -- divisibility -------------------------------------------------------------------------


def divisibility_values(labels: Sequence[str], dims: Sequence, total) -> Report:
    rep = Report()
    for lab, d in zip(labels, dims):
        if not isinstance(d, CycloNum) or not isinstance(total, CycloNum):
            rep.add(f"divisibility[{lab}]", None, "interval dims: integrality is not interval-decidable")
            continue
        q = total / (2 * d * d)
        rep.add(f"divisibility[{lab}]", is_algebraic_integer(q), f"dim/(2d^2) = {q}")
    return rep


def divisibility_check(sm: SuperModularData) -> Report:
    return divisibility_values(sm.ring.labels, sm.dims, sm.dim)


# -- structure ------------------------------------------------------------------------------


def _odd_squarefree(n: int) -> bool:
    if n % 2 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def stabilizer_gamma(sm: SuperModularData) -> tuple[int, ...]:
    ring = sm.ring
    pt = invertible_indices(ring)
    nonpt = [x for x in range(ring.rank) if x not in pt]
    return tuple(g for g in pt if all(ring.product(g, x) == {x: 1} for x in nonpt))


def is_generalized_ty(sm_or_ring) -> bool:
    ring = getattr(sm_or_ring, "ring", sm_or_ring)
    pt = set(invertible_indices(ring))
    nonpt = [x for x in range(ring.rank) if x not in pt]
    if not nonpt:
        return False
    return all(ring.support(x, y) <= pt for x in nonpt for y in nonpt)


def find_ising_factor(data: PremodularData) -> Optional[tuple[int, int, int]]:
    """A non-degenerate Ising subring {1, g, X} whose centralizer is pointed of complementary dimension."""
    ring = data.ring
    two = CycloNum.rational(2)
    for x in range(1, ring.rank):
        if ring.dual[x] != x or data.dims[x] * data.dims[x] != two:
            continue
        prod = ring.product(x, x)
        if len(prod) != 2 or set(prod.values()) != {1}:
            continue
        g = max(prod)
        sub = (0, g, x) if g < x else (0, x, g)
        if not is_subring(ring, sub):
            continue
        cen = centralizer(data, sub)
        if set(cen) & set(sub) != {0}:
            continue
        if set(cen) <= set(invertible_indices(ring)) and data.fpdim_of(cen) * 4 == data.fpdim:
            return (0, g, x)
    return None


def structural_report(sm: SuperModularData) -> Report:
    rep = Report()
    base, ring = sm.base, sm.ring
    pt = invertible_indices(ring)
    ad = adjoint_subring(ring)
    center = muger_center(base)
    rep.add("centralizer.adjoint_is_pointed", centralizer(base, ad) == pt)
    rep.add(
        "centralizer.pointed_is_adjoint_join_center",
        centralizer(base, pt) == generated_subring(ring, list(ad) + list(center)),
    )
    rep.add(
        "fermion.twist_antisymmetry",
        all(base.twists[sm.action[x]] == -base.twists[x] for x in range(ring.rank)),
    )
    total = sm.dim
    if is_weakly_integral(sm.dims) and total.is_rational():
        fp = int(total.to_fraction())
        integral = is_integral(sm.dims)
        strict = not integral
        rep.data["fpdim"] = fp
        rep.data["strictly_weakly_integral"] = strict
        rep.add("dim.eight_divides", fp % 8 == 0 if strict else True, f"FPdim={fp}" + ("" if strict else " (integral: vacuous)"))
        rep.add("dim.integral_when_4_nmid", integral if fp % 4 else True, f"FPdim={fp}")
        pt_dim = len(pt)
        if strict and fp % 8 == 0 and _odd_squarefree(fp // 8):
            d = fp // 8
            ok = pt_dim % 4 == 0 and d % (pt_dim // 4) == 0
            rep.add("pointed.dim_divides", ok, f"FPdim(C_pt)={pt_dim}, d={d}")
        else:
            rep.add("pointed.dim_divides", True, "not of the form 8d: vacuous")
    else:
        rep.add("dim.eight_divides", None, "not weakly integral")
    gamma = stabilizer_gamma(sm)
    if len(pt) == ring.rank:
        rep.add("gamma.at_most_2", True, "pointed: vacuous")
    else:
        rep.add("gamma.at_most_2", len(gamma) <= 2, f"|Gamma|={len(gamma)}")
    rep.data["gamma"] = [ring.labels[g] for g in gamma]
    gty = is_generalized_ty(ring)
    rep.data["generalized_ty"] = gty
    if gty:
        ising = find_ising_factor(base)
        rep.add(
            "gty.ising_factor",
            ising is not None,
            "sVec x Ising x pointed" + (f" via {[ring.labels[i] for i in ising]}" if ising else ": no Ising factor found"),
        )
    return rep


def full_suite(sm: SuperModularData) -> Report:
    rep = Report()
    rep.extend(unitarity_check(sm))
    rep.extend(verlinde_check(sm))
    rep.extend(character_checks(sm))
    rep.extend(divisibility_check(sm))
    rep.extend(structural_report(sm))
    return rep


def data_level_suite(sm: SuperModularData) -> Report:
    """Everything except the structural consequences; used by the twist search as its SAT criterion."""
    rep = Report()
    rep.extend(unitarity_check(sm))
    rep.extend(verlinde_check(sm))
    rep.extend(character_checks(sm))
    rep.extend(divisibility_check(sm))
    return rep
