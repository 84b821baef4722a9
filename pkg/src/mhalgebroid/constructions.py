"""Builders for finite examples: groupoid function and convolution algebroids,
the tensor product C (x) B, and the two-sided crossed product C (x) H (x) B.

Arrow orientation: an arrow g: src -> tgt has s(g) = src and t(g) = tgt, and
the product gh is defined iff s(g) = t(h).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Sequence

from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .algebra import A1Violated, Algebra, check_A1, embedding_from_elements, make_algebra
from .hopf import MultiplierBialgebroid, StarStructure, make_multiplier_bialgebroid
from .linalg import QQ

__all__ = [
    "ParseError", "NotACategory", "NotAGroupoid", "NotAGroup", "ActionInvalid",
    "FiniteCategory", "FiniteGroupoid", "parse_category", "parse_groupoid",
    "one_point", "cyclic_group_groupoid", "pair_groupoid", "monoid_category",
    "FinHopf", "make_fin_hopf", "group_table", "cyclic_group",
    "unital_bialgebroid", "function_algebroid", "convolution_algebroid",
    "tensor_algebroid", "crossed_product_algebroid", "ActionData",
    "function_star", "convolution_star",
]


class ParseError(ValueError):
    pass


class NotACategory(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotAGroupoid(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotAGroup(ValueError):
    pass


class ActionInvalid(ValueError):
    def __init__(self, which: str, witness=None):
        super().__init__(f"ActionInvalid({which}): {witness}")
        self.which = which
        self.witness = witness


# ------------------------------------------------------------------ categories

@dataclass
class FiniteCategory:
    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    src: dict
    tgt: dict
    compose: dict            # (g, h) -> gh, defined iff src[g] == tgt[h]
    units: dict              # object -> identity arrow

    def composable(self):
        return [(g, h) for g in self.arrows for h in self.arrows if self.src[g] == self.tgt[h]]


@dataclass
class FiniteGroupoid(FiniteCategory):
    inverse: dict = field(default_factory=dict)


def _load(text_or_obj):
    if isinstance(text_or_obj, (str, bytes)):
        try:
            return json.loads(text_or_obj)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from None
    return text_or_obj


def parse_category(text_or_obj) -> FiniteCategory:
    """Parse and validate {objects, arrows:[{id,src,tgt}], compose?:[{left,right,result}]}.

    Missing products are filled in when exactly one arrow has the right
    endpoints; otherwise the file must list them.
    """
    d = _load(text_or_obj)
    try:
        objects = tuple(str(o) for o in d["objects"])
        arrows = tuple(str(a["id"]) for a in d["arrows"])
        src = {str(a["id"]): str(a["src"]) for a in d["arrows"]}
        tgt = {str(a["id"]): str(a["tgt"]) for a in d["arrows"]}
        given = {(str(c["left"]), str(c["right"])): str(c["result"]) for c in d.get("compose", [])}
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed category description: missing {e}") from None
    if not objects:
        raise ParseError("no objects")
    if len(set(objects)) != len(objects) or len(set(arrows)) != len(arrows):
        raise ParseError("duplicate object or arrow identifiers")
    for g in arrows:
        if src[g] not in objects or tgt[g] not in objects:
            raise ParseError(f"arrow {g} has an unknown endpoint")
    for (g, h), r in given.items():
        for x in (g, h, r):
            if x not in src:
                raise ParseError(f"compose entry refers to unknown arrow {x}")
        if src[g] != tgt[h]:
            raise NotACategory(f"{g}{h} listed but {g}, {h} are not composable", {"left": g, "right": h})
    comp = {}
    for g in arrows:
        for h in arrows:
            if src[g] != tgt[h]:
                continue
            if (g, h) in given:
                comp[(g, h)] = given[(g, h)]
                continue
            cands = [k for k in arrows if src[k] == src[h] and tgt[k] == tgt[g]]
            if len(cands) != 1:
                raise ParseError(f"product {g}{h} is not listed and not determined by its endpoints "
                                 f"({len(cands)} candidates)")
            comp[(g, h)] = cands[0]
    for (g, h), k in comp.items():
        if src[k] != src[h] or tgt[k] != tgt[g]:
            raise NotACategory(f"{g}{h} = {k} has the wrong endpoints", {"left": g, "right": h, "result": k})
    for g, h, k in iproduct(arrows, repeat=3):
        if src[g] == tgt[h] and src[h] == tgt[k]:
            if comp[(comp[(g, h)], k)] != comp[(g, comp[(h, k)])]:
                raise NotACategory("composition is not associative", {"arrows": [g, h, k]})
    units = {}
    for x in objects:
        loops = [u for u in arrows if src[u] == x and tgt[u] == x]
        ids = [u for u in loops
               if all(comp[(u, h)] == h for h in arrows if tgt[h] == x)
               and all(comp[(g, u)] == g for g in arrows if src[g] == x)]
        if not ids:
            raise NotACategory(f"object {x} has no identity arrow", {"object": x})
        units[x] = ids[0]
    return FiniteCategory(objects, arrows, src, tgt, comp, units)


def parse_groupoid(text_or_obj) -> FiniteGroupoid:
    """Parse a category and require inverses; an ``inverse`` list is optional."""
    d = _load(text_or_obj)
    cat = parse_category(d)
    try:
        given = {str(e["arrow"]): str(e["result"]) for e in d.get("inverse", [])}
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed inverse entry: missing {e}") from None
    inv = {}
    for g in cat.arrows:
        cands = [h for h in cat.arrows if cat.src[h] == cat.tgt[g] and cat.tgt[h] == cat.src[g]
                 and cat.compose[(h, g)] == cat.units[cat.src[g]] and cat.compose[(g, h)] == cat.units[cat.tgt[g]]]
        if not cands:
            raise NotAGroupoid(f"arrow {g} has no inverse", {"arrow": g})
        if g in given and given[g] not in cands:
            raise NotAGroupoid(f"listed inverse of {g} is not an inverse", {"arrow": g, "listed": given[g]})
        inv[g] = given.get(g, cands[0])
    return FiniteGroupoid(cat.objects, cat.arrows, cat.src, cat.tgt, cat.compose, cat.units, inv)


def category_to_json(g: FiniteCategory) -> dict:
    out = {"objects": list(g.objects),
           "arrows": [{"id": a, "src": g.src[a], "tgt": g.tgt[a]} for a in g.arrows],
           "compose": [{"left": l, "right": r, "result": k} for (l, r), k in g.compose.items()]}
    if isinstance(g, FiniteGroupoid):
        out["inverse"] = [{"arrow": a, "result": b} for a, b in g.inverse.items()]
    return out


def one_point() -> FiniteGroupoid:
    return parse_groupoid({"objects": ["o"], "arrows": [{"id": "e", "src": "o", "tgt": "o"}]})


def cyclic_group_groupoid(n: int) -> FiniteGroupoid:
    """Z/n as a one-object groupoid with arrows g0..g{n-1}."""
    arrows = [{"id": f"g{i}", "src": "o", "tgt": "o"} for i in range(n)]
    comp = [{"left": f"g{i}", "right": f"g{j}", "result": f"g{(i + j) % n}"} for i in range(n) for j in range(n)]
    return parse_groupoid({"objects": ["o"], "arrows": arrows, "compose": comp})


def pair_groupoid(k: int) -> FiniteGroupoid:
    """Pair groupoid on objects 1..k; arrow "ij" goes from j to i."""
    objs = [str(i) for i in range(1, k + 1)]
    arrows = [{"id": f"{i}{j}", "src": j, "tgt": i} for i in objs for j in objs]
    return parse_groupoid({"objects": objs, "arrows": arrows})


def monoid_category() -> FiniteCategory:
    """The monoid {1, z} with z z = z as a one-object category."""
    return parse_category({
        "objects": ["o"],
        "arrows": [{"id": "1", "src": "o", "tgt": "o"}, {"id": "z", "src": "o", "tgt": "o"}],
        "compose": [{"left": "1", "right": "1", "result": "1"}, {"left": "1", "right": "z", "result": "z"},
                    {"left": "z", "right": "1", "result": "z"}, {"left": "z", "right": "z", "result": "z"}],
    })


# ------------------------------------------------------------------ Hopf algebras

@dataclass
class FinHopf:
    algebra: Algebra
    comult: DomainMatrix      # n^2 x n
    counit: DomainMatrix      # 1 x n
    antipode: DomainMatrix    # n x n

    def delta(self, h: int) -> dict:
        return la.column(self.comult, h)


def group_table(d) -> tuple[list[str], dict]:
    """{elements: [...], table: [[...]]} with table[i][j] the label of e_i e_j."""
    d = _load(d)
    try:
        els = [str(x) for x in d["elements"]]
        table = {(els[i], els[j]): str(d["table"][i][j]) for i in range(len(els)) for j in range(len(els))}
    except (KeyError, TypeError, IndexError) as e:
        raise ParseError(f"malformed group description: {e}") from None
    return els, table


def cyclic_group(n: int) -> dict:
    els = [f"g{i}" for i in range(n)]
    return {"elements": els, "table": [[els[(i + j) % n] for j in range(n)] for i in range(n)]}


def make_fin_hopf(group, K=QQ) -> FinHopf:
    """Group algebra with group-like comultiplication, counit 1 and S = inversion."""
    els, table = group_table(group)
    n = len(els)
    if n == 0:
        raise NotAGroup("empty group")
    idx = {g: i for i, g in enumerate(els)}
    if len(idx) != n:
        raise NotAGroup("duplicate elements")
    for v in table.values():
        if v not in idx:
            raise NotAGroup(f"product {v} is not an element")
    for a, b, c in iproduct(els, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise NotAGroup(f"not associative at ({a}, {b}, {c})")
    e = [u for u in els if all(table[(u, g)] == g and table[(g, u)] == g for g in els)]
    if not e:
        raise NotAGroup("no identity element")
    e = e[0]
    inv = {}
    for g in els:
        c = [h for h in els if table[(g, h)] == e and table[(h, g)] == e]
        if not c:
            raise NotAGroup(f"{g} has no inverse")
        inv[g] = c[0]
    consts = {(idx[a], idx[b]): {idx[table[(a, b)]]: 1} for a in els for b in els}
    unit = {idx[e]: 1}
    H = make_algebra(els, consts, unit, K, "kG")
    comult = la.sparse({i * n + i: {i: K.one} for i in range(n)}, (n * n, n), K)
    counit = la.sparse({0: {i: K.one for i in range(n)}}, (1, n), K)
    S = la.sparse({idx[inv[g]]: {idx[g]: K.one} for g in els}, (n, n), K)
    hopf = FinHopf(H, comult, counit, S)
    _check_hopf(hopf)
    return hopf


def _check_hopf(h: FinHopf) -> None:
    H, K = h.algebra, h.algebra.K
    n = H.dim
    I = la.eye(n, K)
    D, e, S = h.comult, h.counit, h.antipode
    if not la.equal(la.kron(D, I) * D, la.kron(I, D) * D):
        raise NotAGroup("comultiplication is not coassociative")
    if not la.equal(la.kron(e, I) * D, I) or not la.equal(la.kron(I, e) * D, I):
        raise NotAGroup("counit law fails")
    DD = la.kron(la.kron(I, la.sparse({j * n + i: {i * n + j: K.one} for i in range(n) for j in range(n)},
                                      (n * n, n * n), K)), I)
    if not la.equal(D * H.mult, la.kron(H.mult, H.mult) * DD * la.kron(D, D)):
        raise NotAGroup("comultiplication is not multiplicative")
    if not la.equal(e * H.mult, la.kron(e, e)):
        raise NotAGroup("counit is not multiplicative")
    u = la.from_columns([H.unit], n, K)
    if not la.equal(H.mult * la.kron(S, I) * D, u * e) or not la.equal(H.mult * la.kron(I, S) * D, u * e):
        raise NotAGroup("antipode axiom fails")


# ------------------------------------------------------------------ unital builder

def _proj_cols(space, vecs: Sequence[dict]) -> DomainMatrix:
    """Quotient coordinates of ambient vectors, as columns."""
    P = space.q.projection.matrix
    return P * la.from_columns(vecs, P.shape[1], space.K)


def unital_bialgebroid(A: Algebra, B: Algebra, C: Algebra, iB: Sequence[dict], iC: Sequence[dict],
                       S_B: DomainMatrix, S_C: DomainMatrix, w: Sequence[dict], w2: Sequence[dict],
                       name: str = "", meta=None, certified: bool = True, pentagon: bool = True) -> MultiplierBialgebroid:
    """Two-sided bialgebroid on a unital A from representatives of Δ_B(a), Δ_C(a).

    ``iB``/``iC`` give the elements of A representing the base embeddings and
    ``w[a]``, ``w2[a]`` ambient vectors in A (x) A (index i*n + j) whose classes
    are Δ_B(e_a) and Δ_C(e_a).  The lifts are
    T~λ(a⊗b) = Δ_B(b)(a⊗1), T~ρ(a⊗b) = Δ_B(a)(1⊗b),
    λT~(a⊗b) = (a⊗1)Δ_C(b), ρT~(a⊗b) = (1⊗b)Δ_C(a).
    """
    if A.unit is None:
        raise ValueError("unital_bialgebroid needs a unital algebra")
    K, n = A.K, A.dim
    ib = embedding_from_elements(A, B, iB, "hom")
    ic = embedding_from_elements(A, C, iC, "hom")
    I = la.eye(n, K)

    def lifts(ops_first, ops_second, reps, by_second):
        cols = [None] * (n * n)
        for a in range(n):
            for b in range(n):
                src = reps[b] if by_second else reps[a]
                op = la.kron(ops_first[a], I) if ops_first is not None else la.kron(I, ops_second[b])
                cols[a * n + b] = la.column(op * la.from_columns([src], n * n, K), 0)
        return la.from_columns(cols, n * n, K)

    Tl = lifts(A.R, None, w, True)      # (a_R ⊗ I) Δ_B(b)
    Tr = lifts(None, A.R, w, False)     # (I ⊗ b_R) Δ_B(a)
    lT = lifts(A.L, None, w2, True)     # (a_L ⊗ I) Δ_C(b)
    rT = lifts(None, A.L, w2, False)    # (I ⊗ b_L) Δ_C(a)
    if certified:
        return make_multiplier_bialgebroid(A, B, C, ib, ic, S_B, S_C, Tl, Tr, lT, rT, name, meta,
                                           certified=True, pentagon=pentagon)
    return MultiplierBialgebroid(A, B, C, ib, ic, S_B, S_C, Tl, Tr, lT, rT, name, meta)


# ------------------------------------------------------------------ groupoid algebroids

def _objects_algebra(g: FiniteCategory, K, name: str) -> Algebra:
    m = len(g.objects)
    return make_algebra([f"δ{x}" for x in g.objects], {(i, i): {i: 1} for i in range(m)},
                        [1] * m, K, name)


def function_algebroid(g: FiniteCategory, K=QQ, certified: bool = True, pentagon: bool = True) -> MultiplierBialgebroid:
    """Pointwise functions on arrows with B = s*, C = t* and Δ the pullback of composition.

    Categories that are not groupoids are accepted: the result is a
    bialgebroid whose canonical maps fail to be bijective.
    """
    arrows = list(g.arrows)
    n = len(arrows)
    idx = {a: i for i, a in enumerate(arrows)}
    A = make_algebra([f"δ{a}" for a in arrows], {(i, i): {i: 1} for i in range(n)}, [1] * n, K, "C(G)")
    B = _objects_algebra(g, K, "B")
    C = _objects_algebra(g, K, "C")
    iB = [{idx[a]: K.one for a in arrows if g.src[a] == x} for x in g.objects]
    iC = [{idx[a]: K.one for a in arrows if g.tgt[a] == x} for x in g.objects]
    m = len(g.objects)
    S = la.eye(m, K)
    w = [dict() for _ in range(n)]
    for (a, b), c in g.compose.items():
        k = idx[c]
        w[k][idx[a] * n + idx[b]] = w[k].get(idx[a] * n + idx[b], K.zero) + K.one
    kind = "groupoid-fn" if isinstance(g, FiniteGroupoid) else "category-fn"
    meta = {"kind": kind, "source": category_to_json(g)}
    return unital_bialgebroid(A, B, C, iB, iC, S, S, w, w, "function algebroid", meta, certified, pentagon)


def convolution_algebroid(g: FiniteGroupoid, K=QQ, certified: bool = True, pentagon: bool = True) -> MultiplierBialgebroid:
    """Convolution algebra of arrows with B = C = functions on units and Δ(δ_g) = δ_g ⊗ δ_g."""
    arrows = list(g.arrows)
    n = len(arrows)
    idx = {a: i for i, a in enumerate(arrows)}
    consts = {(idx[a], idx[b]): {idx[c]: 1} for (a, b), c in g.compose.items()}
    unit = {idx[g.units[x]]: 1 for x in g.objects}
    A = make_algebra([f"u{a}" for a in arrows], consts, unit, K, "C*(G)")
    B = _objects_algebra(g, K, "B")
    C = _objects_algebra(g, K, "C")
    iB = [{idx[g.units[x]]: K.one} for x in g.objects]
    S = la.eye(len(g.objects), K)
    w = [{i * n + i: K.one} for i in range(n)]
    meta = {"kind": "groupoid-conv", "source": category_to_json(g)}
    return unital_bialgebroid(A, B, C, iB, iB, S, S, w, w, "convolution algebroid", meta, certified, pentagon)


def function_star(M: MultiplierBialgebroid) -> StarStructure:
    """Pointwise conjugation f*(g) = conj f(g)."""
    return StarStructure(la.eye(M.A.dim, M.K))


def convolution_star(M: MultiplierBialgebroid, g: FiniteGroupoid) -> StarStructure:
    """f*(g) = conj f(g^-1), i.e. u_g* = u_{g^-1}."""
    idx = {a: i for i, a in enumerate(g.arrows)}
    n = len(g.arrows)
    return StarStructure(la.sparse({idx[g.inverse[a]]: {idx[a]: M.K.one} for a in g.arrows}, (n, n), M.K))


# ------------------------------------------------------------------ tensor product

def _require_A1(X: Algebra, which: str) -> None:
    rep = check_A1(X)
    if not rep.ok:
        raise A1Violated(f"{which}: " + ", ".join(e.code for e in rep.failures()))
    if X.unit is None:
        raise ValueError(f"{which} must be unital")


def tensor_algebroid(B: Algebra, C: Algebra, S_B: DomainMatrix, S_C: DomainMatrix,
                     certified: bool = True, pentagon: bool = True) -> MultiplierBialgebroid:
    """A = C (x) B with Δ_B(c⊗b) and Δ_C(c⊗b) both represented by (c⊗1) ⊗ (1⊗b).

    Basis label "c⊗b", index i*dim(B) + j.
    """
    _require_A1(B, "B")
    _require_A1(C, "C")
    K = B.K
    nb, nc = B.dim, C.dim
    n = nb * nc
    ix = lambda i, j: i * nb + j
    consts = {}
    for (i, i2), cc in C.constants.items():
        for (j, j2), cb in B.constants.items():
            out = consts.setdefault((ix(i, j), ix(i2, j2)), {})
            for k, x in cc.items():
                for l, y in cb.items():
                    out[ix(k, l)] = out.get(ix(k, l), K.zero) + x * y
    unit = {ix(i, j): x * y for i, x in C.unit.items() for j, y in B.unit.items()}
    labels = [f"{c}⊗{b}" for c in C.labels for b in B.labels]
    A = make_algebra(labels, consts, unit, K, "C⊗B")
    iB = [{ix(i, j): x for i, x in C.unit.items()} for j in range(nb)]
    iC = [{ix(i, j): y for j, y in B.unit.items()} for i in range(nc)]
    w = []
    for i in range(nc):
        for j in range(nb):
            v = {}
            for jj, y in B.unit.items():
                for ii, x in C.unit.items():
                    k = ix(i, jj) * n + ix(ii, j)
                    v[k] = v.get(k, K.zero) + x * y
            w.append(v)
    meta = {"kind": "tensor"}
    return unital_bialgebroid(A, B, C, iB, iC, S_B, S_C, w, w, "tensor algebroid", meta, certified, pentagon)


# ------------------------------------------------------------------ crossed product

@dataclass
class ActionData:
    """h ▷ c = left[h] c on C and b ◁ h = right[h] b on B (matrices per basis element of H)."""
    left: list[DomainMatrix]
    right: list[DomainMatrix]


def _check_actions(B: Algebra, C: Algebra, H: FinHopf, act: ActionData, S_B, S_C) -> None:
    Hal, K = H.algebra, H.algebra.K
    nh = Hal.dim
    if len(act.left) != nh or len(act.right) != nh:
        raise ActionInvalid("shape", "one action matrix per basis element of H is required")

    def lin(mats, v):
        out = la.zeros(mats[0].shape[0], mats[0].shape[1], K)
        for i, x in v.items():
            out = out + DomainMatrix.from_rep(mats[i].rep.mul(x))
        return out

    # unital modules: left(h h') = left(h) left(h'), right(h h') = right(h') right(h)
    one = Hal.unit
    if not la.equal(lin(act.left, one), la.eye(C.dim, K)) or not la.equal(lin(act.right, one), la.eye(B.dim, K)):
        raise ActionInvalid("module", "the unit of H does not act trivially")
    for h, k in iproduct(range(nh), repeat=2):
        hk = Hal.constants.get((h, k), {})
        if not la.equal(lin(act.left, hk), act.left[h] * act.left[k]):
            raise ActionInvalid("module", {"side": "left", "h": Hal.labels[h], "k": Hal.labels[k]})
        if not la.equal(lin(act.right, hk), act.right[k] * act.right[h]):
            raise ActionInvalid("module", {"side": "right", "h": Hal.labels[h], "k": Hal.labels[k]})
    # module algebras: h ▷ (c c') = (h1 ▷ c)(h2 ▷ c'), h ▷ 1 = ε(h) 1; same for ◁
    for h in range(nh):
        d = H.delta(h)
        eps = la.column(H.counit, h).get(0, K.zero)
        for X, mats, side in ((C, act.left, "left"), (B, act.right, "right")):
            for i, j in iproduct(range(X.dim), repeat=2):
                lhs = la.column(mats[h] * la.from_columns([X.constants.get((i, j), {})], X.dim, K), 0)
                rhs: dict = {}
                for idx2, x in d.items():
                    h1, h2 = divmod(idx2, nh)
                    p = X.mul(la.column(mats[h1], i), la.column(mats[h2], j))
                    for k, y in p.items():
                        rhs[k] = rhs.get(k, K.zero) + x * y
                rhs = {k: v for k, v in rhs.items() if v}
                if lhs != rhs:
                    raise ActionInvalid("module-algebra", {"side": side, "h": Hal.labels[h],
                                                           "x": X.labels[i], "y": X.labels[j]})
            u = la.column(mats[h] * la.from_columns([X.unit], X.dim, K), 0)
            if u != {k: eps * v for k, v in X.unit.items() if eps * v}:
                raise ActionInvalid("module-algebra", {"side": side, "h": Hal.labels[h], "reason": "unit"})
    # antipode compatibility: S_B(b ◁ h) = S_H(h) ▷ S_B(b), S_C(h ▷ c) = S_C(c) ◁ S_H(h)
    for h in range(nh):
        Sh = la.column(H.antipode, h)
        if not la.equal(S_B * act.right[h], lin(act.left, Sh) * S_B):
            raise ActionInvalid("antipode", {"identity": "S_B(b◁h) = S_H(h)▷S_B(b)", "h": Hal.labels[h]})
        if not la.equal(S_C * act.left[h], lin(act.right, Sh) * S_C):
            raise ActionInvalid("antipode", {"identity": "S_C(h▷c) = S_C(c)◁S_H(h)", "h": Hal.labels[h]})


def crossed_product_algebroid(B: Algebra, C: Algebra, S_B: DomainMatrix, S_C: DomainMatrix, H: FinHopf,
                              act: ActionData, certified: bool = True, pentagon: bool = True) -> MultiplierBialgebroid:
    """A = C ⊗ H ⊗ B with (c⊗h⊗b)(c'⊗h'⊗b') = c(h1▷c') ⊗ h2 h'1 ⊗ (b◁h'2) b'.

    Basis label "c⊗h⊗b", index (i*dim H + k)*dim B + j.
    """
    _require_A1(B, "B")
    _require_A1(C, "C")
    K = B.K
    S_B, S_C = la.convert(S_B, K), la.convert(S_C, K)
    _check_actions(B, C, H, act, S_B, S_C)
    Hal = H.algebra
    nb, nc, nh = B.dim, C.dim, Hal.dim
    n = nb * nc * nh
    ix = lambda i, k, j: (i * nh + k) * nb + j
    consts: dict = {}
    for i, k, j in iproduct(range(nc), range(nh), range(nb)):
        dk = H.delta(k)
        for i2, k2, j2 in iproduct(range(nc), range(nh), range(nb)):
            dk2 = H.delta(k2)
            out: dict = {}
            for a, x in dk.items():
                h1, h2 = divmod(a, nh)
                cpart = C.mul({i: K.one}, la.column(act.left[h1], i2))
                for b_, y in dk2.items():
                    g1, g2 = divmod(b_, nh)
                    hpart = Hal.mul({h2: K.one}, {g1: K.one})
                    bpart = B.mul(la.column(act.right[g2], j), {j2: K.one})
                    for (ci, cv), (hi, hv), (bi, bv) in iproduct(cpart.items(), hpart.items(), bpart.items()):
                        key = ix(ci, hi, bi)
                        out[key] = out.get(key, K.zero) + x * y * cv * hv * bv
            out = {key: v for key, v in out.items() if v}
            if out:
                consts[(ix(i, k, j), ix(i2, k2, j2))] = out
    unit = {ix(i, k, j): x * y * z for i, x in C.unit.items() for k, y in Hal.unit.items() for j, z in B.unit.items()}
    labels = [f"{c}⊗{h}⊗{b}" for c in C.labels for h in Hal.labels for b in B.labels]
    A = make_algebra(labels, consts, unit, K, "C⊗H⊗B")
    iB = [{ix(i, k, j): x * y for i, x in C.unit.items() for k, y in Hal.unit.items()} for j in range(nb)]
    iC = [{ix(i, k, j): y * z for k, y in Hal.unit.items() for j, z in B.unit.items()} for i in range(nc)]
    # Δ(c⊗h⊗b) = Σ (c⊗h1⊗1) ⊗ (1⊗h2⊗b)
    w = []
    for i, k, j in iproduct(range(nc), range(nh), range(nb)):
        v: dict = {}
        for a, x in H.delta(k).items():
            h1, h2 = divmod(a, nh)
            for jj, y in B.unit.items():
                for ii, z in C.unit.items():
                    key = ix(i, h1, jj) * n + ix(ii, h2, j)
                    v[key] = v.get(key, K.zero) + x * y * z
        w.append({key: val for key, val in v.items() if val})
    meta = {"kind": "crossed"}
    return unital_bialgebroid(A, B, C, iB, iC, S_B, S_C, w, w, "crossed product algebroid", meta, certified, pentagon)
