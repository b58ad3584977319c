"""Scripted obstructions: short chains of forced twist relations ending in a contradiction.

gamma_bound(G): in sVec x TY(G)-shaped data, orthogonality of the unit row against
each stabilizing invertible pins its twist to -1; multiplicativity on the symmetric
pointed part then forces theta_gh = theta_g theta_h = 1, impossible once G has two
nontrivial elements with nontrivial product.

dim2_triple(): Pi_0 = {I, g, h, gh, X, U, V} with dims (1,1,1,1,2,2,2), X x X = I+g+h+gh,
symmetric <g,h>, theta_g = 1.  Four orthogonality relations are encoded exactly as
constraints; summing the first and last leaves 8 = 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..catalog import svec, ty_dims, ty_ring
from ..exactnum import CycloNum, root_of_unity, root_of_unity_order
from ..fusering import adjoint_subring, deligne_product, invertible_indices
from ..groups import AbelianGroup
from .csp import SAT, UNSAT, CSPOutcome, theta_csp
from .enumerate import has_free_fermion


@dataclass
class LinearRelation:
    """const + sum coeff * symbol = 0."""

    const: Fraction
    coeffs: dict[str, Fraction] = field(default_factory=dict)

    def __add__(self, other: "LinearRelation") -> "LinearRelation":
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return LinearRelation(self.const + other.const, {k: v for k, v in c.items() if v})

    def evaluate(self, values: dict[str, CycloNum]) -> CycloNum:
        total = CycloNum.rational(self.const)
        for k, v in self.coeffs.items():
            total = total + values[k] * v
        return total

    @property
    def contradictory(self) -> bool:
        return not self.coeffs and self.const != 0

    def __str__(self) -> str:
        parts = [str(self.const)] if self.const or not self.coeffs else []
        for k, v in self.coeffs.items():
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            term = k if mag == 1 else f"{mag}*{k}"
            parts.append(f"{sign}{term}" if parts else (f"-{term}" if v < 0 else term))
        return "".join(parts) + "=0"


# -- gamma bound ----------------------------------------------------------------------------


def gamma_bound(gamma: Union[AbelianGroup, tuple[int, ...]], order_bound: int = 16) -> CSPOutcome:
    G = gamma if isinstance(gamma, AbelianGroup) else AbelianGroup(tuple(gamma))
    sv = svec()
    ring = deligne_product(sv.ring, ty_ring(G))
    dims = [a * b for a in sv.dims for b in ty_dims(G)]
    labels = ring.labels
    cert: list[str] = []
    chi = labels.index("chi")
    assert chi in has_free_fermion(ring)
    pt = invertible_indices(ring)
    nonpt = [x for x in range(ring.rank) if x not in pt]
    stab = [g for g in pt if g != 0 and nonpt and all(ring.product(g, x) == {x: 1} for x in nonpt)]
    # Pi_0: the sVec-trivial half, which contains the stabilizer
    pi0 = [x for x in range(ring.rank) if "chi" not in labels[x]]
    assert set(stab) <= set(pi0) and chi not in pi0
    ad = set(adjoint_subring(ring))
    theta: dict[int, CycloNum] = {0: CycloNum.rational(1)}
    for g in stab:
        if g not in ad:
            raise AssertionError(f"{labels[g]} not adjoint")
        const = sum((dims[v] * dims[v] for v in pi0 if v in pt), CycloNum.rational(0))
        coef = sum((dims[v] * dims[v] for v in pi0 if v not in pt), CycloNum.rational(0))
        inv = -const / coef
        cert.append(
            f"sum_V d_V s_(V,{labels[g]}) over Pi_0: {const}+{coef}*theta_{labels[g]}^-1=0 -> theta_{labels[g]}^-1={inv}"
        )
        if root_of_unity_order(inv) is None:
            cert.append(f"theta_{labels[g]}^-1={inv} is not a root of unity")
            return CSPOutcome(UNSAT, order_bound, certificate=cert)
        theta[g] = inv.inverse()
    for g, h in itertools.combinations_with_replacement(stab, 2):
        prod = ring.product(g, h)
        (gh,) = prod
        if gh == 0:
            continue
        lhs, rhs = theta[gh], theta[g] * theta[h]
        if lhs != rhs:
            cert.append(f"{lhs}=θ_gh=θ_gθ_h={rhs} (g={labels[g]}, h={labels[h]}, gh={labels[gh]})")
            return CSPOutcome(UNSAT, order_bound, certificate=cert)
    return theta_csp(ring, dims, chi, order_bound)


# -- rank-7 Pi_0 with three 2-dimensional simples --------------------------------------------


def _s_g(W: str) -> str:
    return f"s_{{g,{W}}}"


def dim2_relations() -> list[LinearRelation]:
    """The four orthogonality relations, in the s_{g,U}, s_{g,V}, t_U, t_V variables.

    t_W stands for theta_h^-1 theta_W^-1 theta_{h W}; theta_h^-1 is kept symbolic as u.
    """
    one = Fraction(1)
    e1 = LinearRelation(Fraction(4), {_s_g("U"): one, _s_g("V"): one})
    e2 = LinearRelation(one, {"u": one, "t_U": one, "t_V": one})
    e3 = LinearRelation(one, {"u": one, "t_U": -one, "t_V": -one})
    e4 = LinearRelation(Fraction(4), {_s_g("U"): -one, _s_g("V"): -one})
    return [e1, e2, e3, e4]


def dim2_triple(order_bound: int = 16) -> CSPOutcome:
    B = order_bound
    e1, e2, e3, e4 = dim2_relations()
    cert = [f"E1: {e1}", f"E2: {e2}", f"E3: {e3}", f"E4: {e4}"]
    combo = e1 + e4
    cert.append(f"E1+E4: {combo}")
    # candidates: g acts on the 2-dim simples outside {X, chi X} by an involution commuting with chi
    others = ("U", "V", "chiU", "chiV")
    partner = dict(zip(others, ("chiU", "chiV", "U", "V")))
    actions = []
    for img in itertools.permutations(others):
        act = dict(zip(others, img))
        if all(act[act[w]] == w and act[partner[w]] == partner[act[w]] for w in others):
            actions.append(act)
    theta_g = CycloNum.rational(1)
    two = CycloNum.rational(2)
    checked = satisfied = 0
    for act in actions:
        for a, b in itertools.product(range(B), repeat=2):
            th = {"U": root_of_unity(B, a), "V": root_of_unity(B, b)}
            th["chiU"], th["chiV"] = -th["U"], -th["V"]
            vals = {_s_g(W): theta_g.inverse() * th[W].inverse() * th[act[W]] * two for W in ("U", "V")}
            checked += 1
            if e1.evaluate(vals).is_zero() and e4.evaluate(vals).is_zero():
                satisfied += 1
    cert.append(f"{checked} candidates (g-action on U,V x twists of order | {B}); {satisfied} satisfy E1 and E4")
    if combo.contradictory and satisfied == 0:
        return CSPOutcome(UNSAT, B, certificate=cert, stats={"candidates": checked})
    return CSPOutcome(SAT if satisfied else UNSAT, B, certificate=cert, stats={"candidates": checked})


SCRIPTS = {
    "gamma_bound": gamma_bound,
    "THM_4_3": gamma_bound,
    "dim2_triple": dim2_triple,
    "LEMMA_4_8": dim2_triple,
}


def obstruction_script(name: str, **params) -> CSPOutcome:
    try:
        fn = SCRIPTS[name]
    except KeyError:
        raise ValueError(f"unknown script {name!r}; choose from {sorted(SCRIPTS)}") from None
    return fn(**params)
