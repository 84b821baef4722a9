"""Exact linear algebra over Q and Q(i).

Matrices are sympy ``DomainMatrix`` objects in sparse (SDM) format.  Every
routine here is deterministic: echelon forms use the leftmost pivot, kernels
and quotient sections are read off the reduced row echelon form.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.sdm import SDM

__all__ = [
    "QQ", "QQ_I", "FIELDS", "LinalgError", "InconsistentSystem",
    "WellDefinednessViolated", "NotBijective", "DimensionZero",
    "field", "field_tag", "scalar", "scalar_to_json", "scalar_str", "conj",
    "conj_matrix", "sparse", "zeros", "eye", "from_rows", "to_rows",
    "from_columns", "columns", "column", "is_zero", "equal", "first_difference",
    "kron", "hstack", "vstack", "rref", "rank", "kernel_basis", "kernel_matrix",
    "image_basis", "solve", "inverse", "is_bijective", "LabeledSpace", "LinMap",
    "QuotientSpace", "make_quotient", "descend_map", "hom_space", "matrix_to_json",
    "matrix_from_json", "convert",
]

FIELDS = {"q": QQ, "qi": QQ_I}


class LinalgError(Exception):
    """Base class for errors raised by the exact linear algebra layer."""


class InconsistentSystem(LinalgError):
    """A linear system has no solution."""


class NotBijective(LinalgError):
    """A linear map that should be invertible is not."""

    def __init__(self, which: str, rank: int | None = None, shape=None):
        self.which = which
        self.rank = rank
        self.shape = shape
        msg = f"NotBijective: {which}"
        if rank is not None:
            msg += f" (rank {rank}, shape {shape[0]}x{shape[1]})"
        super().__init__(msg)


class DimensionZero(LinalgError):
    """Zero-dimensional algebras and spaces are rejected where they would be vacuous."""


class WellDefinednessViolated(LinalgError):
    """A map on ambient spaces does not respect the quotient relations."""

    def __init__(self, relation, detail: str = ""):
        self.relation = relation
        self.detail = detail
        super().__init__(f"WellDefinednessViolated: relation {relation}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------- scalars

def field(tag: str):
    try:
        return FIELDS[tag]
    except KeyError:
        raise ValueError(f"unknown field tag {tag!r}; expected 'q' or 'qi'") from None


def field_tag(K) -> str:
    return "qi" if K == QQ_I else "q"


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return Fraction(int(v.numerator), int(v.denominator))
    raise TypeError(f"cannot read {v!r} as an exact rational")


def scalar(v, K=QQ):
    """Convert ints, Fractions, "p/q" strings or {re, im} dicts into K."""
    if K == QQ_I:
        if isinstance(v, Mapping):
            re, im = _rat(v.get("re", 0)), _rat(v.get("im", 0))
        elif isinstance(v, complex):
            raise TypeError("floating complex numbers are not exact")
        elif hasattr(v, "x") and hasattr(v, "y"):
            return v
        else:
            re, im = _rat(v), Fraction(0)
        return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))
    if isinstance(v, Mapping):
        if _rat(v.get("im", 0)) != 0:
            raise ValueError("non-real scalar given for a rational field")
        v = v.get("re", 0)
    r = _rat(v)
    return QQ(r.numerator, r.denominator)


def scalar_str(q) -> str:
    n, d = int(q.numerator), int(q.denominator)
    return f"{n}/{d}"


def scalar_to_json(v, K=QQ):
    if K == QQ_I:
        return {"re": scalar_str(v.x), "im": scalar_str(v.y)}
    return scalar_str(v)


def conj(v, K=QQ_I):
    if K == QQ_I:
        return QQ_I(v.x, -v.y)
    return v


def convert(M: DomainMatrix, K) -> DomainMatrix:
    return M if M.domain == K else M.convert_to(K)


# ---------------------------------------------------------------- matrices

def sparse(rows: Mapping[int, Mapping[int, object]], shape, K=QQ) -> DomainMatrix:
    """Build a sparse matrix from ``{row: {col: value}}``, dropping zeros."""
    clean = {}
    for i, r in rows.items():
        rr = {j: v for j, v in r.items() if v}
        if rr:
            clean[i] = rr
    return DomainMatrix.from_rep(SDM(clean, tuple(shape), K))


def zeros(m: int, n: int, K=QQ) -> DomainMatrix:
    return DomainMatrix.from_rep(SDM({}, (m, n), K))


def eye(n: int, K=QQ) -> DomainMatrix:
    return DomainMatrix.from_rep(SDM({i: {i: K.one} for i in range(n)}, (n, n), K))


def from_rows(rows: Sequence[Sequence], K=QQ, ncols: int | None = None) -> DomainMatrix:
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    return sparse({i: {j: scalar(v, K) for j, v in enumerate(r)} for i, r in enumerate(rows)}, (m, n), K)


def from_columns(cols: Sequence[Mapping[int, object]], nrows: int, K=QQ) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for j, c in enumerate(cols):
        for i, v in c.items():
            if v:
                rows.setdefault(i, {})[j] = v
    return DomainMatrix.from_rep(SDM(rows, (nrows, len(cols)), K))


def to_rows(M: DomainMatrix) -> list[list]:
    m, n = M.shape
    rep = M.rep
    K = M.domain
    return [[rep.get(i, {}).get(j, K.zero) for j in range(n)] for i in range(m)]


def columns(M: DomainMatrix) -> list[dict[int, object]]:
    m, n = M.shape
    cols: list[dict[int, object]] = [dict() for _ in range(n)]
    for i, r in M.rep.items():
        for j, v in r.items():
            if v:
                cols[j][i] = v
    return cols


def column(M: DomainMatrix, j: int) -> dict[int, object]:
    return {i: r[j] for i, r in M.rep.items() if j in r and r[j]}


def _nonzero(M: DomainMatrix) -> bool:
    return any(v for r in M.rep.values() for v in r.values())


def is_zero(M: DomainMatrix) -> bool:
    return not _nonzero(M)


def equal(A: DomainMatrix, B: DomainMatrix) -> bool:
    if A.shape != B.shape:
        return False
    if A.domain != B.domain:
        K = QQ_I if QQ_I in (A.domain, B.domain) else A.domain
        A, B = convert(A, K), convert(B, K)
    return is_zero(A - B)


def first_difference(A: DomainMatrix, B: DomainMatrix):
    """Lowest (column, row) where A and B differ, or None."""
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    D = A - B
    best = None
    for i, r in D.rep.items():
        for j, v in r.items():
            if v and (best is None or (j, i) < best):
                best = (j, i)
    return best


def kron(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    (ma, na), (mb, nb) = A.shape, B.shape
    K = A.domain
    out: dict[int, dict[int, object]] = {}
    for i, ra in A.rep.items():
        for j, va in ra.items():
            for k, rb in B.rep.items():
                row = out.setdefault(i * mb + k, {})
                for l, vb in rb.items():
                    row[j * nb + l] = va * vb
    return sparse(out, (ma * mb, na * nb), K)


def hstack(*Ms: DomainMatrix) -> DomainMatrix:
    return Ms[0].hstack(*Ms[1:]) if len(Ms) > 1 else Ms[0]


def vstack(*Ms: DomainMatrix) -> DomainMatrix:
    return Ms[0].vstack(*Ms[1:]) if len(Ms) > 1 else Ms[0]


def rref(M: DomainMatrix):
    """Reduced row echelon form (leftmost pivots) and pivot tuple."""
    if M.shape[0] == 0:
        return M, ()
    R, piv = M.rref()
    return R, tuple(piv)


def rank(M: DomainMatrix) -> int:
    return len(rref(M)[1])


def kernel_basis(M: DomainMatrix) -> list[dict[int, object]]:
    """Null space basis, one vector per free column in increasing order.

    Each vector has a 1 in its free column and zero in the other free columns.
    """
    n = M.shape[1]
    K = M.domain
    R, piv = rref(M)
    pivset = set(piv)
    row_of = {p: r for r, p in enumerate(piv)}
    rep = R.rep
    out = []
    for f in range(n):
        if f in pivset:
            continue
        v = {f: K.one}
        for p, r in row_of.items():
            c = rep.get(r, {}).get(f)
            if c:
                v[p] = -c
        out.append(dict(sorted(v.items())))
    return out


def kernel_matrix(M: DomainMatrix) -> DomainMatrix:
    return from_columns(kernel_basis(M), M.shape[1], M.domain)


def image_basis(M: DomainMatrix) -> DomainMatrix:
    """Rows of the rref of M^T, returned as columns: a canonical image basis."""
    R, piv = rref(M.transpose())
    rows = {r: R.rep.get(r, {}) for r in range(len(piv))}
    return sparse(rows, (len(piv), M.shape[0]), M.domain).transpose()


def solve(M: DomainMatrix, b: DomainMatrix):
    """Solve M X = b.  Returns (particular, homogeneous kernel basis).

    The particular solution sets every free variable to zero.  Raises
    InconsistentSystem if some column of b is outside the image of M.
    """
    m, n = M.shape
    K = M.domain
    k = b.shape[1]
    aug = hstack(M, convert(b, K))
    R, piv = rref(aug)
    for p in piv:
        if p >= n:
            raise InconsistentSystem(f"right-hand side column {p - n} is not in the image")
    rows = {}
    for r, p in enumerate(piv):
        rr = R.rep.get(r, {})
        entries = {j - n: v for j, v in rr.items() if j >= n}
        if entries:
            rows[p] = entries
    X = sparse(rows, (n, k), K)
    return X, kernel_basis(M)


def inverse(M: DomainMatrix, which: str = "map") -> DomainMatrix:
    m, n = M.shape
    if m != n:
        raise NotBijective(which, rank(M), M.shape)
    aug = hstack(M, eye(n, M.domain))
    R, piv = rref(aug)
    r = sum(1 for p in piv if p < n)
    if r < n:
        raise NotBijective(which, r, M.shape)
    rows = {r: {j - n: v for j, v in R.rep.get(r, {}).items() if j >= n} for r in range(n)}
    return sparse(rows, (n, n), M.domain)


def is_bijective(f) -> bool:
    M = f.matrix if isinstance(f, LinMap) else f
    m, n = M.shape
    return m == n and rank(M) == n


# ---------------------------------------------------------------- spaces

@dataclass(frozen=True)
class LabeledSpace:
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be pairwise distinct")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class LinMap:
    dom: LabeledSpace
    cod: LabeledSpace
    matrix: DomainMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.cod.dim, self.dom.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {self.cod.dim}x{self.dom.dim}")

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if other.cod.dim != self.dom.dim:
            raise ValueError("composition of incompatible maps")
        return LinMap(other.dom, self.cod, self.matrix * other.matrix)

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and equal(self.matrix, other.matrix)

    __hash__ = None

    @classmethod
    def identity(cls, space: LabeledSpace, K=QQ) -> "LinMap":
        return cls(space, space, eye(space.dim, K))


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """Ambient space modulo a span of relations, in canonical coordinates.

    The quotient basis is indexed by the non-pivot columns of the reduced
    echelon form of the relation span; the section sends a quotient basis
    vector to the ambient basis vector of its column.  Two quotients of the
    same ambient by the same span therefore have identical coordinates.
    """
    ambient: LabeledSpace
    reduced: DomainMatrix
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    space: LabeledSpace
    projection: LinMap
    section: LinMap
    relations_count: int = 0
    _key: tuple = dc_field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def relations(self) -> list[dict[int, object]]:
        """The reduced relation basis (rows of the echelon form)."""
        return [dict(sorted(self.reduced.rep.get(r, {}).items())) for r in range(len(self.pivots))]

    def same_as(self, other: "QuotientSpace") -> bool:
        return self.ambient.dim == other.ambient.dim and self._key == other._key

    def project(self, vec: Mapping[int, object]) -> dict[int, object]:
        P = self.projection.matrix.rep
        out: dict[int, object] = {}
        for i, row in P.items():
            s = None
            for j, c in row.items():
                v = vec.get(j)
                if v:
                    s = c * v if s is None else s + c * v
            if s:
                out[i] = s
        return out


def make_quotient(ambient: LabeledSpace, relations, K=QQ) -> QuotientSpace:
    """Quotient by the span of ``relations``.

    ``relations`` is either a matrix whose rows are relation vectors or an
    iterable of sparse ``{index: value}`` vectors.
    """
    N = ambient.dim
    if isinstance(relations, DomainMatrix):
        Rm = convert(relations, K)
        count = Rm.shape[0]
    else:
        rows = {}
        for r, v in enumerate(relations):
            rows[r] = dict(v)
        count = len(rows)
        Rm = sparse(rows, (count, N), K)
    R, piv = rref(Rm)
    pivset = set(piv)
    free = tuple(j for j in range(N) if j not in pivset)
    col_of = {f: q for q, f in enumerate(free)}
    prows: dict[int, dict[int, object]] = {q: {f: K.one} for q, f in enumerate(free)}
    for r, p in enumerate(piv):
        for j, c in R.rep.get(r, {}).items():
            if j != p and c:
                prows[col_of[j]][p] = -c
    P = sparse(prows, (len(free), N), K)
    S = sparse({f: {q: K.one} for q, f in enumerate(free)}, (N, len(free)), K)
    space = LabeledSpace(tuple(f"[{ambient.labels[f]}]" for f in free))
    reduced = sparse({r: R.rep.get(r, {}) for r in range(len(piv))}, (len(piv), N), K)
    key = tuple(tuple(sorted((j, str(v)) for j, v in reduced.rep.get(r, {}).items())) for r in range(len(piv)))
    return QuotientSpace(ambient, reduced, tuple(piv), free, space,
                         LinMap(ambient, space, P), LinMap(space, ambient, S), count, key)


def descend_map(f, qdom: QuotientSpace, qcod: QuotientSpace) -> LinMap:
    """Descend an ambient map to the quotients, checking every relation.

    Raises WellDefinednessViolated naming the first relation (by pivot
    column) whose image does not vanish in the codomain quotient.
    """
    F = f.matrix if isinstance(f, LinMap) else f
    if F.shape != (qcod.ambient.dim, qdom.ambient.dim):
        raise ValueError("ambient map does not match the quotient ambients")
    PF = qcod.projection.matrix * F
    if qdom.pivots:
        bad = PF * qdom.reduced.transpose()
        d = None
        for i, r in bad.rep.items():
            for j, v in r.items():
                if v and (d is None or j < d):
                    d = j
        if d is not None:
            rel = qdom.relations[d]
            raise WellDefinednessViolated(
                {qdom.ambient.labels[k]: str(v) for k, v in rel.items()},
                "image does not vanish in the codomain quotient")
    M = PF * qdom.section.matrix
    return LinMap(qdom.space, qcod.space, M)


def hom_space(dom_dim: int, cod_dim: int, constraints: Iterable, K=QQ) -> list[DomainMatrix]:
    """Basis of {h : L_i h = h R_i for all i}, with h a cod_dim x dom_dim matrix.

    Each constraint is a pair (L, R) of square matrices acting on the
    codomain and domain respectively.  The basis is the kernel basis of the
    stacked intertwiner equations in row-major variable order.
    """
    nv = cod_dim * dom_dim
    eqs: dict[int, dict[int, object]] = {}
    row = 0
    for L, R in constraints:
        L = L.matrix if isinstance(L, LinMap) else L
        R = R.matrix if isinstance(R, LinMap) else R
        Lc = columns(L)  # Lc[k] = {r: L[r,k]}
        Rrows = R.rep    # R[k] row dicts
        block: dict[tuple[int, int], dict[int, object]] = {}
        # (L h)[r,c] = sum_k L[r,k] h[k,c]
        for k, lk in enumerate(Lc):
            for r, lv in lk.items():
                for c in range(dom_dim):
                    e = block.setdefault((r, c), {})
                    idx = k * dom_dim + c
                    e[idx] = e.get(idx, K.zero) + lv
        # (h R)[r,c] = sum_k h[r,k] R[k,c]
        for k, rk in Rrows.items():
            for c, rv in rk.items():
                for r in range(cod_dim):
                    e = block.setdefault((r, c), {})
                    idx = r * dom_dim + k
                    e[idx] = e.get(idx, K.zero) - rv
        for key in sorted(block):
            e = {j: v for j, v in block[key].items() if v}
            if e:
                eqs[row] = e
                row += 1
    E = sparse(eqs, (row, nv), K)
    out = []
    for v in kernel_basis(E):
        rows: dict[int, dict[int, object]] = {}
        for idx, val in v.items():
            rows.setdefault(idx // dom_dim, {})[idx % dom_dim] = val
        out.append(sparse(rows, (cod_dim, dom_dim), K))
    return out


# ---------------------------------------------------------------- json

def matrix_to_json(M: DomainMatrix) -> dict:
    K = M.domain
    entries = []
    for i in sorted(M.rep):
        r = M.rep[i]
        for j in sorted(r):
            if r[j]:
                entries.append([i, j, scalar_to_json(r[j], K)])
    return {"shape": list(M.shape), "entries": entries}


def matrix_from_json(d: Mapping, K=QQ) -> DomainMatrix:
    m, n = d["shape"]
    rows: dict[int, dict[int, object]] = {}
    for i, j, v in d["entries"]:
        if not (0 <= i < m and 0 <= j < n):
            raise ValueError(f"entry ({i}, {j}) outside shape {m}x{n}")
        rows.setdefault(int(i), {})[int(j)] = scalar(v, K)
    return sparse(rows, (m, n), K)


def conj_matrix(M: DomainMatrix) -> DomainMatrix:
    if M.domain != QQ_I:
        return M
    return sparse({i: {j: conj(v) for j, v in r.items()} for i, r in M.rep.items()}, M.shape, QQ_I)
