"""Finite-dimensional algebras, multipliers, base embeddings, decorated modules."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .linalg import QQ, LabeledSpace
from .report import Report, failed, passed

__all__ = [
    "AlgebraError", "NotAssociative", "UnitInvalid", "A1Violated", "NotMultiplicative",
    "NotInjective", "ImagesDoNotCommute", "DecorationMismatch", "Algebra", "make_algebra",
    "algebra_from_json", "algebra_to_json", "check_A1", "MultiplierPair", "multiplier_algebra",
    "BaseEmbedding", "make_base_embedding", "embedding_from_elements", "check_commute",
    "ModuleStruct", "module_from_embedding", "check_A2", "DECORATIONS",
]


class AlgebraError(Exception):
    pass


class NotAssociative(AlgebraError):
    def __init__(self, i, j, k, q):
        self.witness = (i, j, k, q)
        super().__init__(f"NotAssociative: ((e{i} e{j}) e{k}) and (e{i} (e{j} e{k})) differ at coordinate {q}")


class UnitInvalid(AlgebraError):
    pass


class A1Violated(AlgebraError):
    pass


class NotMultiplicative(AlgebraError):
    pass


class NotInjective(AlgebraError):
    pass


class ImagesDoNotCommute(AlgebraError):
    pass


class DecorationMismatch(AlgebraError):
    pass


Vec = dict  # sparse vector {index: scalar}


class Algebra:
    """Associative algebra given by structure constants e_i e_j = sum_k c[i][j][k] e_k.

    ``L[i]`` and ``R[j]`` are the left and right multiplication matrices of
    the basis vectors; ``mult`` is the n x n^2 matrix of the product on A (x) A.
    """

    def __init__(self, labels: Sequence[str], constants: Mapping[tuple[int, int], Mapping[int, object]],
                 K=QQ, unit: Vec | None = None, name: str = ""):
        self.space = LabeledSpace(tuple(labels))
        self.K = K
        self.name = name
        n = self.space.dim
        self.constants = {(i, j): {k: v for k, v in sorted(c.items()) if v}
                          for (i, j), c in sorted(constants.items())}
        self.constants = {key: c for key, c in self.constants.items() if c}
        Lrows = [dict() for _ in range(n)]
        Rrows = [dict() for _ in range(n)]
        mrows: dict[int, dict[int, object]] = {}
        for (i, j), c in self.constants.items():
            for k, v in c.items():
                Lrows[i].setdefault(k, {})[j] = v
                Rrows[j].setdefault(k, {})[i] = v
                mrows.setdefault(k, {})[i * n + j] = v
        self.L = [la.sparse(r, (n, n), K) for r in Lrows]
        self.R = [la.sparse(r, (n, n), K) for r in Rrows]
        self.mult = la.sparse(mrows, (n, n * n), K)
        self.unit = dict(unit) if unit is not None else None

    # basic access
    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    def basis(self, i: int) -> Vec:
        return {i: self.K.one}

    def element(self, coeffs: Mapping) -> Vec:
        """Element from {label or index: scalar}."""
        out = {}
        for key, v in coeffs.items():
            idx = key if isinstance(key, int) else self.space.index(key)
            s = la.scalar(v, self.K)
            if s:
                out[idx] = out.get(idx, self.K.zero) + s
        return {k: v for k, v in sorted(out.items()) if v}

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: dict[int, object] = {}
        for i, a in u.items():
            for j, b in v.items():
                c = self.constants.get((i, j))
                if c:
                    ab = a * b
                    for k, w in c.items():
                        out[k] = out.get(k, self.K.zero) + ab * w
        return {k: v for k, v in sorted(out.items()) if v}

    def left(self, u: Vec) -> DomainMatrix:
        """Matrix of b -> u b."""
        M = la.zeros(self.dim, self.dim, self.K)
        for i, a in u.items():
            M = M + _scale(self.L[i], a)
        return M

    def right(self, u: Vec) -> DomainMatrix:
        """Matrix of b -> b u."""
        M = la.zeros(self.dim, self.dim, self.K)
        for i, a in u.items():
            M = M + _scale(self.R[i], a)
        return M

    @property
    def mult_op(self) -> DomainMatrix:
        """a (x) b -> b a."""
        n = self.dim
        return self.mult * swap_matrix(n, self.K)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def opposite(self) -> "Algebra":
        c = {(j, i): v for (i, j), v in self.constants.items()}
        return Algebra(self.labels, c, self.K, self.unit, (self.name + "^op") if self.name else "")

    def with_field(self, K) -> "Algebra":
        if K == self.K:
            return self
        c = {key: {k: K.convert_from(v, self.K) for k, v in cc.items()} for key, cc in self.constants.items()}
        u = None if self.unit is None else {k: K.convert_from(v, self.K) for k, v in self.unit.items()}
        return Algebra(self.labels, c, K, u, self.name)

    def vec_matrix(self, v: Vec) -> DomainMatrix:
        return la.from_columns([v], self.dim, self.K)

    def __repr__(self):
        return f"Algebra(dim={self.dim}, name={self.name!r})"


def _scale(M: DomainMatrix, a) -> DomainMatrix:
    if a == 1:
        return M
    return DomainMatrix.from_rep(M.rep.mul(a))


def swap_matrix(n: int, K=QQ) -> DomainMatrix:
    """The flip a (x) b -> b (x) a on the n^2-dimensional tensor square."""
    return la.sparse({j * n + i: {i * n + j: K.one} for i in range(n) for j in range(n)}, (n * n, n * n), K)


def make_algebra(labels: Sequence[str], constants, unit=None, K=QQ, name: str = "") -> Algebra:
    """Validate and build an algebra.

    ``constants`` is either ``{(i, j): {k: value}}`` or a list of dicts with
    keys i, j, k, value (indices or labels).  ``unit`` is an optional
    coefficient list or {label: value} mapping.
    """
    labels = tuple(labels)
    if not labels:
        raise la.DimensionZero("zero-dimensional algebras are not supported")
    sp = LabeledSpace(labels)
    n = sp.dim

    def idx(x):
        if isinstance(x, int):
            if not 0 <= x < n:
                raise ValueError(f"basis index {x} out of range")
            return x
        return sp.index(x)

    table: dict[tuple[int, int], dict[int, object]] = {}
    if isinstance(constants, Mapping):
        items = [(i, j, k, v) for (i, j), c in constants.items() for k, v in c.items()]
    else:
        items = [(e["i"], e["j"], e["k"], e["value"]) for e in constants]
    for i, j, k, v in items:
        s = la.scalar(v, K)
        key = (idx(i), idx(j))
        c = table.setdefault(key, {})
        kk = idx(k)
        c[kk] = c.get(kk, K.zero) + s
    u = None
    if unit is not None:
        if isinstance(unit, Mapping):
            u = {idx(k): la.scalar(v, K) for k, v in unit.items()}
        else:
            if len(unit) != n:
                raise UnitInvalid("unit vector has the wrong length")
            u = {i: la.scalar(v, K) for i, v in enumerate(unit)}
        u = {k: v for k, v in sorted(u.items()) if v}
    A = Algebra(labels, table, K, u, name)
    _check_assoc(A)
    if u is not None:
        I = la.eye(n, K)
        if not la.equal(A.left(u), I) or not la.equal(A.right(u), I):
            raise UnitInvalid("given unit does not act as the identity")
    return A


def _check_assoc(A: Algebra) -> None:
    n = A.dim
    for i in range(n):
        for j in range(n):
            lhs = A.L[i] * A.L[j]
            rhs = A.left(A.constants.get((i, j), {}))
            d = la.first_difference(rhs, lhs)
            if d is not None:
                k, q = d
                raise NotAssociative(i, j, k, q)


def algebra_from_json(d: Mapping, K=QQ, name: str = "") -> Algebra:
    try:
        labels = [str(x) for x in d["labels"]]
        constants = d.get("constants", [])
        unit = d.get("unit")
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed algebra description: {e}") from None
    return make_algebra(labels, constants, unit, K, name or d.get("name", ""))


def algebra_to_json(A: Algebra) -> dict:
    out = {"labels": list(A.labels),
           "constants": [{"i": i, "j": j, "k": k, "value": la.scalar_to_json(v, A.K)}
                         for (i, j), c in A.constants.items() for k, v in c.items()]}
    if A.unit is not None:
        out["unit"] = [la.scalar_to_json(A.unit.get(i, A.K.zero), A.K) for i in range(A.dim)]
    return out


def check_A1(A: Algebra) -> Report:
    """Idempotency span(AA) = A and non-degeneracy of both multiplications."""
    n = A.dim
    rep = Report()
    r = la.rank(A.mult)
    if r == n:
        rep.add(passed("A1.IDEMPOTENT"))
    else:
        rep.add(failed("A1.IDEMPOTENT", {"rank_AA": r, "dim": n}))
    # {a : aA = 0} is the joint kernel of the right multiplications
    kl = la.kernel_basis(la.vstack(*A.R))
    rep.add(passed("A1.LEFT_NONDEGENERATE") if not kl else
            failed("A1.LEFT_NONDEGENERATE", {"annihilator": _vec_json(kl[0], A)}))
    kr = la.kernel_basis(la.vstack(*A.L))
    rep.add(passed("A1.RIGHT_NONDEGENERATE") if not kr else
            failed("A1.RIGHT_NONDEGENERATE", {"annihilator": _vec_json(kr[0], A)}))
    return rep


def _vec_json(v: Vec, A: Algebra) -> dict:
    return {A.labels[k]: la.scalar_to_json(x, A.K) for k, x in sorted(v.items())}


@dataclass(frozen=True, eq=False)
class MultiplierPair:
    """(left, right): x b = left(b), a x = right(a)."""
    left: DomainMatrix
    right: DomainMatrix

    def __mul__(self, other: "MultiplierPair") -> "MultiplierPair":
        return MultiplierPair(self.left * other.left, other.right * self.right)

    def __add__(self, other: "MultiplierPair") -> "MultiplierPair":
        return MultiplierPair(self.left + other.left, self.right + other.right)

    def scale(self, a) -> "MultiplierPair":
        return MultiplierPair(_scale(self.left, a), _scale(self.right, a))

    def equals(self, other: "MultiplierPair") -> bool:
        return la.equal(self.left, other.left) and la.equal(self.right, other.right)

    def is_compatible(self, A: Algebra) -> bool:
        # a left(b) = right(a) b for basis a, b
        n = A.dim
        for i in range(n):
            if not la.equal(A.L[i] * self.left, _right_cols(A, self.right, i)):
                return False
        return True

    @classmethod
    def of(cls, A: Algebra, u: Vec) -> "MultiplierPair":
        return cls(A.left(u), A.right(u))


def _right_cols(A: Algebra, right: DomainMatrix, i: int) -> DomainMatrix:
    # matrix of b -> right(e_i) b
    return A.left(la.column(right, i))


def multiplier_algebra(A: Algebra) -> list[MultiplierPair]:
    """Basis of M(A): all pairs (l, r) with a l(b) = r(a) b, l right A-linear, r left A-linear."""
    if not check_A1(A).ok:
        raise A1Violated("multiplier algebra requires an idempotent non-degenerate algebra")
    n, K = A.dim, A.K
    nn = n * n
    # variables: l[k, j] -> k*n + j ; r[k, i] -> nn + k*n + i
    eqs: dict[int, dict[int, object]] = {}
    row = 0

    def add(e):
        nonlocal row
        e = {k: v for k, v in e.items() if v}
        if e:
            eqs[row] = e
            row += 1

    C = A.constants
    for i in range(n):
        for j in range(n):
            # e_i l(e_j) - r(e_i) e_j = 0, coordinate q
            coeff: dict[int, dict[int, object]] = {}
            for k in range(n):
                for q, v in C.get((i, k), {}).items():
                    d = coeff.setdefault(q, {})
                    var = k * n + j
                    d[var] = d.get(var, K.zero) + v
                for q, v in C.get((k, j), {}).items():
                    d = coeff.setdefault(q, {})
                    var = nn + k * n + i
                    d[var] = d.get(var, K.zero) - v
            for q in sorted(coeff):
                add(coeff[q])
    # l(a b) = l(a) b : l R_b = R_b l ; r(a b) = a r(b) : r L_a = L_a r
    for b in range(n):
        for M, off in ((A.R[b], 0), (A.L[b], nn)):
            block: dict[tuple[int, int], dict[int, object]] = {}
            Mc = la.columns(M)
            for k, mk in enumerate(Mc):
                for r_, mv in mk.items():
                    for c in range(n):
                        e = block.setdefault((r_, c), {})
                        var = off + k * n + c
                        e[var] = e.get(var, K.zero) + mv
            for k, rk in M.rep.items():
                for c, mv in rk.items():
                    for r_ in range(n):
                        e = block.setdefault((r_, c), {})
                        var = off + r_ * n + k
                        e[var] = e.get(var, K.zero) - mv
            for key in sorted(block):
                add(block[key])
    E = la.sparse(eqs, (row, 2 * nn), K)
    out = []
    for v in la.kernel_basis(E):
        lrows: dict[int, dict[int, object]] = {}
        rrows: dict[int, dict[int, object]] = {}
        for var, x in v.items():
            if var < nn:
                lrows.setdefault(var // n, {})[var % n] = x
            else:
                w = var - nn
                rrows.setdefault(w // n, {})[w % n] = x
        out.append(MultiplierPair(la.sparse(lrows, (n, n), K), la.sparse(rrows, (n, n), K)))
    return out


@dataclass(eq=False)
class BaseEmbedding:
    A: Algebra
    base: Algebra
    images: list[MultiplierPair]
    kind: str  # "hom" or "anti"

    def image(self, x: Vec) -> MultiplierPair:
        n, K = self.A.dim, self.A.K
        out = MultiplierPair(la.zeros(n, n, K), la.zeros(n, n, K))
        for i, a in x.items():
            out = out + self.images[i].scale(a)
        return out

    def left_of(self, x: Vec) -> DomainMatrix:
        return self.image(x).left

    def right_of(self, x: Vec) -> DomainMatrix:
        return self.image(x).right


def make_base_embedding(A: Algebra, base: Algebra, images: Sequence[MultiplierPair], kind: str = "hom") -> BaseEmbedding:
    if kind not in ("hom", "anti"):
        raise ValueError("kind must be 'hom' or 'anti'")
    if len(images) != base.dim:
        raise ValueError("one image per base basis element required")
    for x, im in enumerate(images):
        if not im.is_compatible(A):
            raise NotMultiplicative(f"image of {base.labels[x]} is not a multiplier of A")
    emb = BaseEmbedding(A, base, list(images), kind)
    for i in range(base.dim):
        for j in range(base.dim):
            lhs = emb.image(base.constants.get((i, j), {}))
            rhs = images[i] * images[j] if kind == "hom" else images[j] * images[i]
            if not lhs.equals(rhs):
                raise NotMultiplicative(f"{kind} property fails on ({base.labels[i]}, {base.labels[j]})")
    if base.unit is not None and A.unit is not None:
        if not la.equal(emb.left_of(base.unit), la.eye(A.dim, A.K)):
            raise NotMultiplicative("unit of the base is not sent to the identity multiplier")
    # injectivity on the stacked vectorisation of the pairs
    n = A.dim
    cols = []
    for im in images:
        v = {}
        for r, row in im.left.rep.items():
            for c, x in row.items():
                v[r * n + c] = x
        for r, row in im.right.rep.items():
            for c, x in row.items():
                v[n * n + r * n + c] = x
        cols.append(v)
    if la.rank(la.from_columns(cols, 2 * n * n, A.K)) < base.dim:
        raise NotInjective("base embedding has a nonzero kernel")
    return emb


def embedding_from_elements(A: Algebra, base: Algebra, elements: Sequence[Vec], kind: str = "hom") -> BaseEmbedding:
    return make_base_embedding(A, base, [MultiplierPair.of(A, e) for e in elements], kind)


def check_commute(s: BaseEmbedding, t: BaseEmbedding) -> None:
    for i, p in enumerate(s.images):
        for j, q in enumerate(t.images):
            if not (p * q).equals(q * p):
                raise ImagesDoNotCommute(f"s({s.base.labels[i]}) and t({t.base.labels[j]}) do not commute")


# decoration -> (side, which multiplication, required kind)
DECORATIONS = {
    "lower-left": ("left", "left", "hom"),     # _X A : x.a = s(x) a
    "lower-right": ("right", "right", "hom"),  # A_X : a.x = a s(x)
    "upper-right": ("right", "left", "anti"),  # A^X : a.x = t(x) a
    "upper-left": ("left", "right", "anti"),   # ^X A : x.a = a t(x)
}


@dataclass(eq=False)
class ModuleStruct:
    base: Algebra
    carrier: LabeledSpace
    actions: list[DomainMatrix]  # one matrix per base basis element
    side: str
    decoration: str
    tag: str = ""

    def act(self, x: Vec) -> DomainMatrix:
        n = self.carrier.dim
        K = self.base.K
        M = la.zeros(n, n, K)
        for i, a in x.items():
            M = M + _scale(self.actions[i], a)
        return M


def module_from_embedding(emb: BaseEmbedding, decoration: str, tag: str = "") -> ModuleStruct:
    try:
        side, which, kind = DECORATIONS[decoration]
    except KeyError:
        raise DecorationMismatch(f"unknown decoration {decoration!r}") from None
    if emb.kind != kind:
        raise DecorationMismatch(f"decoration {decoration} needs a {'homomorphism' if kind == 'hom' else 'anti-homomorphism'}")
    acts = [im.left if which == "left" else im.right for im in emb.images]
    mod = ModuleStruct(emb.base, emb.A.space, acts, side, decoration, tag)
    B = emb.base
    for i in range(B.dim):
        for j in range(B.dim):
            lhs = mod.act(B.constants.get((i, j), {}))
            rhs = acts[i] * acts[j] if side == "left" else acts[j] * acts[i]
            if not la.equal(lhs, rhs):
                raise DecorationMismatch(f"action is not associative over the base at ({B.labels[i]}, {B.labels[j]})")
    return mod


def check_A2(left: ModuleStruct, right: ModuleStruct) -> Report:
    """Faithfulness and idempotency of a left and a right module over a common base."""
    from .btensor import BaseMismatch
    if left.base is not right.base and left.base.constants != right.base.constants:
        raise BaseMismatch("modules are over different base algebras")
    rep = Report()
    for mod, label in ((left, "LEFT"), (right, "RIGHT")):
        n = mod.carrier.dim
        cols = []
        for M in mod.actions:
            v = {}
            for r, row in M.rep.items():
                for c, x in row.items():
                    v[r * n + c] = x
            cols.append(v)
        ker = la.kernel_basis(la.from_columns(cols, n * n, mod.base.K))
        rep.add(passed(f"A2.{label}_FAITHFUL") if not ker else
                failed(f"A2.{label}_FAITHFUL", {"base_element": {mod.base.labels[k]: la.scalar_to_json(x, mod.base.K) for k, x in ker[0].items()}}))
        r = la.rank(la.hstack(*mod.actions))
        rep.add(passed(f"A2.{label}_IDEMPOTENT") if r == n else failed(f"A2.{label}_IDEMPOTENT", {"rank": r, "dim": n}))
    return rep
