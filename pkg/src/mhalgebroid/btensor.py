"""Balanced tensor products of two or three copies of A and maps between them.

Legs are numbered from 1.  The ambient basis of A^{(x)k} is ordered with
leg 1 most significant, so the tuple (i1, ..., ik) sits at index
((i1 n + i2) n + ...) .
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .algebra import Algebra, ModuleStruct
from .linalg import LabeledSpace, QuotientSpace
from .report import Report, failed, passed

__all__ = [
    "BaseMismatch", "Balancing", "BalancedTensorSpace", "DecoratedArrow", "btensor", "plain",
    "check_A3", "flip_sigma", "leg_map", "mult_arrow", "contract_arrow", "ambient_arrow",
    "apply_on_legs", "compose", "compare", "arrow_from_quotient_map",
]


class BaseMismatch(Exception):
    pass


@dataclass(frozen=True, eq=False)
class Balancing:
    """Relations act_i(x) on leg i minus act_j(x) on leg j, for x in the base basis."""
    leg_i: int
    mod_i: ModuleStruct
    leg_j: int
    mod_j: ModuleStruct

    def describe(self) -> str:
        return f"{self.leg_i}{self.mod_i.tag or self.mod_i.decoration}~{self.leg_j}{self.mod_j.tag or self.mod_j.decoration}"


def _same_base(a: ModuleStruct, b: ModuleStruct) -> bool:
    return a.base is b.base


def ambient_labels(A: Algebra, k: int) -> tuple[str, ...]:
    return tuple("⊗".join(t) for t in product(A.labels, repeat=k))


def apply_on_legs(n: int, k_in: int, legs_in: Sequence[int], k_out: int, legs_out: Sequence[int],
                  M: DomainMatrix) -> DomainMatrix:
    """Ambient matrix acting by M on the given legs and as identity elsewhere.

    M has shape n^len(legs_out) x n^len(legs_in); the untouched legs keep
    their relative order.
    """
    K = M.domain
    legs_in = [l - 1 for l in legs_in]
    legs_out = [l - 1 for l in legs_out]
    rest_in = [l for l in range(k_in) if l not in legs_in]
    rest_out = [l for l in range(k_out) if l not in legs_out]
    if len(rest_in) != len(rest_out):
        raise ValueError("leg bookkeeping mismatch")
    cols = la.columns(M)
    decoded_out = {}
    rows: dict[int, dict[int, object]] = {}
    w_in = [n ** (k_in - 1 - l) for l in range(k_in)]
    w_out = [n ** (k_out - 1 - l) for l in range(k_out)]
    for tup in product(range(n), repeat=k_in):
        src = sum(t * w for t, w in zip(tup, w_in))
        cidx = 0
        for l in legs_in:
            cidx = cidx * n + tup[l]
        base_out = sum(tup[ri] * w_out[ro] for ri, ro in zip(rest_in, rest_out))
        for r, v in cols[cidx].items():
            off = decoded_out.get(r)
            if off is None:
                digits = []
                rr = r
                for _ in range(len(legs_out)):
                    digits.append(rr % n)
                    rr //= n
                digits.reverse()
                off = sum(d * w_out[l] for d, l in zip(digits, legs_out))
                decoded_out[r] = off
            rows.setdefault(base_out + off, {})[src] = v
    return la.sparse(rows, (n ** k_out, n ** k_in), K)


class BalancedTensorSpace:
    """Quotient of A^{(x)k} by the span of the balancing relations."""

    def __init__(self, A: Algebra, arity: int, balancings: Sequence[Balancing], name: str = ""):
        if arity not in (1, 2, 3):
            raise ValueError("arity must be 1, 2 or 3")
        self.A = A
        self.arity = arity
        self.balancings = tuple(balancings)
        self.name = name or (" ; ".join(b.describe() for b in self.balancings) or f"A^{arity}")
        n, K = A.dim, A.K
        for b in self.balancings:
            if not _same_base(b.mod_i, b.mod_j):
                raise BaseMismatch(f"balancing {b.describe()} pairs modules over different bases")
            if not (1 <= b.leg_i <= arity and 1 <= b.leg_j <= arity) or b.leg_i == b.leg_j:
                raise ValueError(f"invalid legs in balancing {b.describe()}")
        self.ambient = LabeledSpace(ambient_labels(A, arity))
        blocks = []
        for b in self.balancings:
            for x in range(b.mod_i.base.dim):
                Oi = apply_on_legs(n, arity, [b.leg_i], arity, [b.leg_i], b.mod_i.actions[x])
                Oj = apply_on_legs(n, arity, [b.leg_j], arity, [b.leg_j], b.mod_j.actions[x])
                blocks.append((Oi - Oj).transpose())
        rel = la.vstack(*blocks) if blocks else la.zeros(0, n ** arity, K)
        self.q: QuotientSpace = la.make_quotient(self.ambient, rel, K)

    @property
    def dim(self) -> int:
        return self.q.dim

    @property
    def K(self):
        return self.A.K

    def same_as(self, other: "BalancedTensorSpace") -> bool:
        return self.arity == other.arity and self.q.same_as(other.q)

    def __repr__(self):
        return f"BalancedTensorSpace({self.name}, dim={self.dim})"


def btensor(A: Algebra, arity: int, balancings: Sequence = (), name: str = "") -> BalancedTensorSpace:
    """Build a balanced tensor space.

    ``balancings`` holds Balancing objects or (leg_i, mod_i, leg_j, mod_j) tuples.
    """
    bal = [b if isinstance(b, Balancing) else Balancing(*b) for b in balancings]
    return BalancedTensorSpace(A, arity, bal, name)


def plain(A: Algebra, arity: int) -> BalancedTensorSpace:
    return BalancedTensorSpace(A, arity, (), f"A^{arity}" if arity > 1 else "A")


@dataclass(eq=False)
class DecoratedArrow:
    dom: BalancedTensorSpace
    cod: BalancedTensorSpace
    map: DomainMatrix
    lift: DomainMatrix | None = None
    name: str = ""

    def __post_init__(self):
        if self.map.shape != (self.cod.dim, self.dom.dim):
            raise ValueError(f"arrow {self.name}: map shape {self.map.shape} vs {self.cod.dim}x{self.dom.dim}")

    def __matmul__(self, other: "DecoratedArrow") -> "DecoratedArrow":
        return compose(self, other)


def compose(g: DecoratedArrow, f: DecoratedArrow) -> DecoratedArrow:
    if not f.cod.same_as(g.dom):
        raise ValueError(f"cannot compose {g.name} after {f.name}: {f.cod.name} is not {g.dom.name}")
    lift = g.lift * f.lift if (g.lift is not None and f.lift is not None) else None
    return DecoratedArrow(f.dom, g.cod, g.map * f.map, lift, f"{g.name}∘{f.name}")


def ambient_arrow(lift: DomainMatrix, dom: BalancedTensorSpace, cod: BalancedTensorSpace, name: str = "") -> DecoratedArrow:
    """Descend an ambient map; raises WellDefinednessViolated if it does not respect the relations."""
    g = la.descend_map(lift, dom.q, cod.q)
    return DecoratedArrow(dom, cod, g.matrix, lift, name)


def arrow_from_quotient_map(M: DomainMatrix, dom: BalancedTensorSpace, cod: BalancedTensorSpace, name: str = "") -> DecoratedArrow:
    return DecoratedArrow(dom, cod, M, None, name)


def canonical_lift(arrow: DecoratedArrow) -> DomainMatrix:
    """section_cod . map . projection_dom on the ambient spaces."""
    return arrow.cod.q.section.matrix * arrow.map * arrow.dom.q.projection.matrix


def leg_map(arrow: DecoratedArrow, legs: Sequence[int], dom3: BalancedTensorSpace,
            cod3: BalancedTensorSpace | None = None, legs_out: Sequence[int] | None = None,
            name: str = "") -> DecoratedArrow:
    """Place an arity-2 arrow on the given legs of a triple space.

    The ambient lift section.map.projection is applied on ``legs`` (in that
    order, so legs (3, 1) means the arrow's first factor reads leg 3) and the
    result is descended.  Relations of the arrow's codomain placed on those
    legs must vanish in cod3, otherwise the leg map depends on the chosen
    representative and WellDefinednessViolated is raised.
    """
    if cod3 is None:
        cod3 = dom3
    legs_out = list(legs if legs_out is None else legs_out)
    a_in, a_out = arrow.dom.arity, arrow.cod.arity
    n = arrow.dom.A.dim
    k_out = dom3.arity - a_in + a_out
    if k_out != cod3.arity:
        raise ValueError("codomain arity does not match the leg map")
    L = apply_on_legs(n, dom3.arity, legs, k_out, legs_out, canonical_lift(arrow))
    if arrow.cod.q.pivots:
        K = arrow.dom.A.K
        X = la.eye(n ** a_out, K) - arrow.cod.q.section.matrix * arrow.cod.q.projection.matrix
        Y = cod3.q.projection.matrix * apply_on_legs(n, k_out, legs_out, k_out, legs_out, X)
        if not la.is_zero(Y):
            col = min(j for r in Y.rep.values() for j, v in r.items() if v)
            raise la.WellDefinednessViolated(
                f"codomain relations of {arrow.name or 'arrow'} on legs {tuple(legs_out)}",
                f"the one through {cod3.ambient.labels[col]} does not vanish in {cod3.name}")
    out = ambient_arrow(L, dom3, cod3, name or f"({arrow.name})_{''.join(map(str, legs))}")
    return out


def flip_sigma(dom: BalancedTensorSpace, name: str = "Σ") -> DecoratedArrow:
    if dom.arity != 2:
        raise ValueError("flip needs an arity-2 space")
    A = dom.A
    cod = btensor(A, 2, [Balancing(3 - b.leg_i, b.mod_i, 3 - b.leg_j, b.mod_j) for b in dom.balancings])
    n = A.dim
    S = apply_on_legs(n, 2, [1, 2], 2, [2, 1], la.eye(n * n, A.K))
    return ambient_arrow(S, dom, cod, name)


def flip_matrix(n: int, K) -> DomainMatrix:
    return apply_on_legs(n, 2, [1, 2], 2, [2, 1], la.eye(n * n, K))


MULT_KINDS = ("m", "m_op", "m_B", "m^B", "m_B^op", "m^B^op", "m_C", "m^C", "m_C^op", "m^C^op")


def mult_arrow(kind: str, dom: BalancedTensorSpace) -> DecoratedArrow:
    """Multiplication (or opposite multiplication) descended from dom to A."""
    if kind not in MULT_KINDS:
        raise ValueError(f"unknown multiplication kind {kind!r}")
    A = dom.A
    if dom.arity != 2:
        raise ValueError("multiplication arrows start from an arity-2 space")
    M = A.mult_op if kind.endswith("op") else A.mult
    return ambient_arrow(M, dom, plain(A, 1), kind)


def contract_arrow(dom: BalancedTensorSpace, cod: BalancedTensorSpace, leg: int, op: bool = False,
                   name: str = "") -> DecoratedArrow:
    """Multiply legs (leg, leg+1) of dom, with m or m^op."""
    A = dom.A
    M = A.mult_op if op else A.mult
    L = apply_on_legs(A.dim, dom.arity, [leg, leg + 1], dom.arity - 1, [leg], M)
    return ambient_arrow(L, dom, cod, name or f"{'m^op' if op else 'm'}@{leg}{leg + 1}")


def compare(lhs: DecoratedArrow, rhs: DecoratedArrow):
    """None if equal, else the label of the first domain basis vector where they differ."""
    if not lhs.dom.same_as(rhs.dom) or not lhs.cod.same_as(rhs.cod):
        raise ValueError(f"comparing arrows with different domains or codomains: {lhs.name} vs {rhs.name}")
    d = la.first_difference(lhs.map, rhs.map)
    if d is None:
        return None
    col, row = d
    return {"input": lhs.dom.q.space.labels[col], "output_coordinate": lhs.cod.q.space.labels[row]}


def check_A3(bt: BalancedTensorSpace, side: str = "right") -> Report:
    """Non-degeneracy of an arity-2 space under multiplication by A (x) 1 and 1 (x) A.

    side="right" tests w(c (x) 1) = 0 for all c implies w = 0 (and likewise
    1 (x) c); side="left" tests the mirrored left module structure.
    """
    if bt.arity != 2:
        raise ValueError("A3 is defined for arity-2 spaces")
    A = bt.A
    n, K = A.dim, A.K
    rep = Report()
    I = la.eye(n, K)
    for pos, label in ((1, "FIRST"), (2, "SECOND")):
        blocks = []
        for c in range(n):
            Mc = A.R[c] if side == "right" else A.L[c]
            op = la.kron(Mc, I) if pos == 1 else la.kron(I, Mc)
            blocks.append(la.descend_map(op, bt.q, bt.q).matrix)
        code = f"A3.{side.upper()}_{label}"
        if bt.dim == 0:
            rep.add(passed(code, dim_zero=True))
            continue
        ker = la.kernel_basis(la.vstack(*blocks))
        if ker:
            rep.add(failed(code, {"element": {bt.q.space.labels[k]: la.scalar_to_json(v, K) for k, v in ker[0].items()}}))
        else:
            rep.add(passed(code))
    return rep


def descend_to(arrow: DecoratedArrow, dom: BalancedTensorSpace, name: str = "") -> DecoratedArrow:
    """Re-read an arrow on a more strongly balanced domain of the same arity.

    Checks that the arrow kills the extra relations and returns the
    induced map on dom.
    """
    if dom.arity != arrow.dom.arity:
        raise ValueError("arity mismatch")
    F = arrow.map * arrow.dom.q.projection.matrix
    if dom.q.pivots:
        bad = F * dom.q.reduced.transpose()
        if not la.is_zero(bad):
            r = min(j for row in bad.rep.values() for j, v in row.items() if v)
            rel = dom.q.relations[r]
            raise la.WellDefinednessViolated(
                {dom.ambient.labels[k]: la.scalar_to_json(v, dom.K) for k, v in rel.items()},
                f"{arrow.name or 'arrow'} does not vanish on it")
    lift = None if arrow.lift is None else arrow.lift
    return DecoratedArrow(dom, arrow.cod, F * dom.q.section.matrix, lift, name or arrow.name)


def endo(space: BalancedTensorSpace, ops: dict, name: str = "") -> DecoratedArrow:
    """Descend a tensor product of one-leg operators {leg: matrix} to an endomorphism of space."""
    A = space.A
    n = A.dim
    M = la.eye(n ** space.arity, A.K)
    for leg, op in sorted(ops.items()):
        M = apply_on_legs(n, space.arity, [leg], space.arity, [leg], op) * M
    return ambient_arrow(M, space, space, name)
