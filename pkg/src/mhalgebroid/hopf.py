"""Two-sided multiplier bialgebroids, regularity, antipodes, symmetries and stars.

Operators on one tensor leg are written ``X.op`` with X in {B, C}:

    B.sL  left mult by x       B.sR  right mult by x        (x in B)
    B.tL  left mult by S_B(x)  B.tR  right mult by S_B(x)
    C.sL  left mult by y       C.sR  right mult by y        (y in C)
    C.tL  left mult by S_C(y)  C.tR  right mult by S_C(y)

so that the left bialgebroid lives on Q_L = (1 B.sL, 2 B.tL) and the right
one on Q_R = (1 C.tR, 2 C.sR).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .algebra import (Algebra, BaseEmbedding, ModuleStruct, MultiplierPair, module_from_embedding)
from .bialgebroid import (ANCHORS, LEFT_AXIOMS, RIGHT_AXIOMS, AxiomFailed, LeftBialgebroid,
                          RightBialgebroid, check_axiom, check_counit, check_right_counit,
                          delta_of, derive_counit, derive_right_counit)
from .btensor import (BalancedTensorSpace, Balancing, DecoratedArrow, ambient_arrow, compare,
                      compose, flip_matrix)
from .linalg import QQ_I, InconsistentSystem, NotBijective, WellDefinednessViolated
from .report import CheckResult, Report, failed, passed

__all__ = [
    "NotRegular", "InverseCheckFailed", "FieldMismatch", "MultiplierBialgebroid",
    "make_multiplier_bialgebroid", "HopfCertificate", "check_regular", "Antipode",
    "derive_antipode", "verify_antipode", "check_galois_inverses", "check_antipode_aux",
    "check_antipode_comult", "symmetries", "transport_counits", "StarStructure", "check_star",
    "unitality_report", "antipode_solution_space", "MB_ANCHORS", "certify", "check_mb_axiom",
    "regularity_report", "co_bialgebroid", "op_bialgebroid", "derive_counits",
]


class NotRegular(Exception):
    def __init__(self, certificate: "HopfCertificate"):
        self.certificate = certificate
        bad = [k for k, v in certificate.flags().items() if not v]
        super().__init__("NotRegular: " + ", ".join(bad))


class InverseCheckFailed(Exception):
    pass


class FieldMismatch(Exception):
    pass


MB_ANCHORS = {
    "MB.BASES": "S_B, S_C are anti-isomorphisms and B, C commute in M(A)",
    "MB.MIXED": "mixed coassociativity of the left and right comultiplications",
    "MH.BIJECTIVE": "Tλ, Tρ, λT, ρT are bijective",
    "MH.FULL": "S_B(_B I)A = I^B A = A S_C(I_C) = A ^C I = A",
    "MH1.ANTI": "S is an anti-automorphism of A",
    "MH1.BIMOD": "S(xyax'y') = S_C(y')S_B(x')S(a)S_C(y)S_B(x)",
    "MH1.DIAGRAMS": "m_C(S⊗ι)Tρ = S_Cε_C⊗ι and m_B(ι⊗S)λT = ι⊗S_Bε_B",
    "MH1.COUNITS": "ε_B and ε_C are left and right counits",
    "GAL.IDENTITIES": "Tρ(ι⊗S)ρT = ι⊗S, λT(S⊗ι)Tλ = S⊗ι, Tλ(S⁻¹⊗ι)λT = S⁻¹⊗ι, ρT(ι⊗S⁻¹)Tρ = ι⊗S⁻¹",
    "GAL.INVERSES": "inverse formulas reproduce the matrix inverses of the four canonical maps",
    "AUX.SQUARES": "the two antipode squares relating Tλ, Tρ, λT, ρT commute",
    "COMULT.SQUARES": "S⊗S intertwines Tλ with ρT and λT with Tρ up to flips",
    "COMULT.COUNITS": "S_Bε_B = ε_C S and S_Cε_C = ε_B S",
    "STAR.ALGEBRA": "∗ is an involutive conjugate-linear anti-homomorphism of A",
    "STAR.BASES": "S_B∗S_C∗ = ι_C and S_C∗S_B∗ = ι_B",
    "STAR.CANONICAL": "(∗⊗∗)Tλ = λT(∗⊗∗) and (∗⊗∗)Tρ = ρT(∗⊗∗)",
    "STAR.ANTIPODE": "ε_C∗ = ∗S_Bε_B, ε_B∗ = ∗S_Cε_C, S∗S∗ = ι",
}


def _anchor(code: str) -> str:
    return MB_ANCHORS.get(code) or ANCHORS.get(code, "")


class MultiplierBialgebroid:
    """(A, B, C, S_B, S_C) with the canonical quartet of lifted maps.

    ``iota_B``, ``iota_C`` are homomorphic embeddings into M(A); ``S_B`` is a
    dim C x dim B matrix, ``S_C`` a dim B x dim C matrix.  Tl, Tr map
    A (x) A to Q_L, lT, rT map A (x) A to Q_R (quotient coordinates, or
    ambient representatives which are projected).
    """

    def __init__(self, A: Algebra, B: Algebra, C: Algebra, iota_B: BaseEmbedding, iota_C: BaseEmbedding,
                 S_B: DomainMatrix, S_C: DomainMatrix, Tl, Tr, lT, rT, name: str = "", meta: dict | None = None):
        self.A, self.B, self.C = A, B, C
        self.K = A.K
        self.iota_B, self.iota_C = iota_B, iota_C
        self.S_B = la.convert(S_B, self.K)
        self.S_C = la.convert(S_C, self.K)
        self.name = name
        self.meta = dict(meta or {})
        # the one-sided structures below already need S_B, S_C to be anti-isomorphisms
        w = _check_bases(self)
        if w is not None:
            raise AxiomFailed("MB.BASES", w, w.get("reason"))
        tB = BaseEmbedding(A, B, [iota_C.image(la.column(self.S_B, x)) for x in range(B.dim)], "anti")
        tC = BaseEmbedding(A, C, [iota_B.image(la.column(self.S_C, y)) for y in range(C.dim)], "anti")
        self.t_B, self.t_C = tB, tC
        self.left = LeftBialgebroid(A, B, iota_B, tB, Tl, Tr, name)
        self.right = RightBialgebroid(A, C, iota_C, tC, lT, rT, name)
        L = self.left
        self.mods: dict[str, ModuleStruct] = {("B." + k): v for k, v in L.mods.items()}
        self.mods.update({
            "C.sL": module_from_embedding(iota_C, "lower-left", "C.sL"),
            "C.sR": module_from_embedding(iota_C, "lower-right", "C.sR"),
            "C.tL": module_from_embedding(tC, "upper-right", "C.tL"),
            "C.tR": module_from_embedding(tC, "upper-left", "C.tR"),
        })
        self._cache: dict = {}

    # spaces and arrows ----------------------------------------------------
    def space(self, arity: int, *spec) -> BalancedTensorSpace:
        key = (arity, tuple(spec))
        sp = self._cache.get(key)
        if sp is None:
            bal = [Balancing(i, self.mods[a], j, self.mods[b]) for i, a, j, b in spec]
            name = " ; ".join(f"{i}{a}~{j}{b}" for i, a, j, b in spec) or f"A^{arity}"
            sp = BalancedTensorSpace(self.A, arity, bal, name)
            self._cache[key] = sp
        return sp

    @property
    def n(self) -> int:
        return self.A.dim

    @property
    def QL(self):
        return self.space(2, (1, "B.sL", 2, "B.tL"))

    @property
    def QR(self):
        return self.space(2, (1, "C.tR", 2, "C.sR"))

    @property
    def D_Tl(self):  # A^B (x) ^B A = _C A (x) A_C
        return self.space(2, (1, "B.tL", 2, "B.tR"))

    @property
    def D_Tr(self):  # A_B (x) _B A
        return self.space(2, (1, "B.sR", 2, "B.sL"))

    @property
    def D_lT(self):  # A_C (x) _C A
        return self.space(2, (1, "C.sR", 2, "C.sL"))

    @property
    def D_rT(self):  # _B A (x) A_B
        return self.space(2, (1, "C.tL", 2, "C.tR"))

    def _arrow(self, key: str) -> DecoratedArrow:
        a = self._cache.get(key)
        if a is not None:
            return a
        if key == "Tl":
            a = DecoratedArrow(self.D_Tl, self.QL, self.left.T_lambda.map, None, "Tλ")
        elif key == "Tr":
            a = DecoratedArrow(self.D_Tr, self.QL, self.left.T_rho.map, None, "Tρ")
        elif key == "lT":
            a = DecoratedArrow(self.D_lT, self.QR, self.right.lambda_T.map, None, "λT")
        elif key == "rT":
            a = DecoratedArrow(self.D_rT, self.QR, self.right.rho_T.map, None, "ρT")
        elif key == "Tl~":
            a = DecoratedArrow(self.space(2), self.QL, self.left.Tl, None, "T̃λ")
        elif key == "Tr~":
            a = DecoratedArrow(self.space(2), self.QL, self.left.Tr, None, "T̃ρ")
        elif key == "lT~":
            a = DecoratedArrow(self.space(2), self.QR, self.right.lT, None, "λT̃")
        elif key == "rT~":
            a = DecoratedArrow(self.space(2), self.QR, self.right.rT, None, "ρT̃")
        else:
            raise KeyError(key)
        self._cache[key] = a
        return a

    T_lambda = property(lambda self: self._arrow("Tl"))
    T_rho = property(lambda self: self._arrow("Tr"))
    lambda_T = property(lambda self: self._arrow("lT"))
    rho_T = property(lambda self: self._arrow("rT"))

    def inverse_arrow(self, key: str) -> DecoratedArrow:
        ck = key + "^-1"
        a = self._cache.get(ck)
        if a is None:
            f = self._arrow(key)
            M = la.inverse(f.map, {"Tl": "T_lambda", "Tr": "T_rho", "lT": "lambda_T", "rT": "rho_T"}[key])
            a = DecoratedArrow(f.cod, f.dom, M, None, f.name + "⁻¹")
            self._cache[ck] = a
        return a

    def tensor_arrow(self, left: DomainMatrix | None, right: DomainMatrix | None, dom, cod, flip=False,
                     name: str = "") -> DecoratedArrow:
        """Descend (left (x) right) from dom to cod; ``flip`` composes with Σ after it, or before if "first"."""
        n, K = self.n, self.K
        I = la.eye(n, K)
        M = la.kron(left if left is not None else I, right if right is not None else I)
        if flip == "first":
            M = M * flip_matrix(n, K)
        elif flip:
            M = flip_matrix(n, K) * M
        return ambient_arrow(M, dom, cod, name)

    def sigma(self, dom, cod) -> DecoratedArrow:
        return ambient_arrow(flip_matrix(self.n, self.K), dom, cod, "Σ")

    def flipped(self, sp: BalancedTensorSpace) -> BalancedTensorSpace:
        spec = None
        for key, val in self._cache.items():
            if val is sp and isinstance(key, tuple):
                spec = key[1]
        if spec is None:
            raise ValueError("space not registered with this bialgebroid")
        return self.space(2, *[(3 - i, a, 3 - j, b) for i, a, j, b in spec])

    def base_left(self, which: str, v: dict) -> DomainMatrix:
        """Left multiplication by iota_B(v) (which='B') or iota_C(v) (which='C')."""
        emb = self.iota_B if which == "B" else self.iota_C
        return emb.left_of(v)

    def base_right(self, which: str, v: dict) -> DomainMatrix:
        emb = self.iota_B if which == "B" else self.iota_C
        return emb.right_of(v)

    def __repr__(self):
        return f"MultiplierBialgebroid({self.name or 'unnamed'}, dim A={self.A.dim}, dim B={self.B.dim}, dim C={self.C.dim})"


def _cmp(lhs: DecoratedArrow, rhs: DecoratedArrow, **param):
    w = compare(lhs, rhs)
    if w is not None and param:
        w = dict(w, **param)
    return w


def _result(code: str, body) -> CheckResult:
    try:
        w = body()
    except WellDefinednessViolated as e:
        return failed(code, {"relation": e.relation}, _anchor(code), f"WellDefinednessViolated: {e.detail}")
    except NotBijective as e:
        return failed(code, {"map": e.which}, _anchor(code), str(e))
    return passed(code, _anchor(code)) if w is None else failed(code, w, _anchor(code))


# ---------------------------------------------------------------- MB axioms

def _check_bases(M: MultiplierBialgebroid):
    B, C, SB, SC = M.B, M.C, M.S_B, M.S_C
    if not la.is_bijective(SB):
        return {"map": "S_B", "reason": "not bijective"}
    if not la.is_bijective(SC):
        return {"map": "S_C", "reason": "not bijective"}
    for X, Y, S, name in ((B, C, SB, "S_B"), (C, B, SC, "S_C")):
        for i in range(X.dim):
            for j in range(X.dim):
                lhs = la.from_columns([S_apply(S, X.constants.get((i, j), {}))], Y.dim, M.K)
                rhs = la.from_columns([Y.mul(la.column(S, j), la.column(S, i))], Y.dim, M.K)
                if not la.equal(lhs, rhs):
                    return {"map": name, "reason": "not anti-multiplicative", "x": X.labels[i], "y": X.labels[j]}
    for i, p in enumerate(M.iota_B.images):
        for j, q in enumerate(M.iota_C.images):
            if not (p * q).equals(q * p):
                return {"reason": "B and C do not commute", "x": B.labels[i], "y": C.labels[j]}
    return None


def S_apply(S: DomainMatrix, v: dict) -> dict:
    out: dict = {}
    for j, a in v.items():
        for i, c in la.column(S, j).items():
            out[i] = out.get(i, 0) + a * c
    return {k: x for k, x in sorted(out.items()) if x}


def _check_mixed(M: MultiplierBialgebroid):
    from .btensor import leg_map
    P3 = M.space(3)
    lT, rT, Tl, Tr = M._arrow("lT~"), M._arrow("rT~"), M._arrow("Tl~"), M._arrow("Tr~")
    Y = M.space(3, (2, "B.sL", 3, "B.tL"))
    X = M.space(3, (1, "C.tR", 2, "C.sR"))
    target = M.space(3, (1, "C.tR", 2, "C.sR"), (2, "B.sL", 3, "B.tL"))
    lhs = compose(leg_map(lT, [1, 2], Y, target), leg_map(Tr, [2, 3], P3, Y))
    rhs = compose(leg_map(Tr, [2, 3], X, target), leg_map(lT, [1, 2], P3, X))
    w = _cmp(lhs, rhs, identity="(λT̃⊗ι)(ι⊗T̃ρ) = (ι⊗T̃ρ)(λT̃⊗ι)")
    if w:
        return w
    Y = M.space(3, (2, "C.tR", 3, "C.sR"))
    X = M.space(3, (1, "B.sL", 2, "B.tL"))
    target = M.space(3, (1, "B.sL", 2, "B.tL"), (2, "C.tR", 3, "C.sR"))
    lhs = compose(leg_map(Tl, [1, 2], Y, target), leg_map(rT, [2, 3], P3, Y))
    rhs = compose(leg_map(rT, [2, 3], X, target), leg_map(Tl, [1, 2], P3, X))
    return _cmp(lhs, rhs, identity="(T̃λ⊗ι)(ι⊗ρT̃) = (ι⊗ρT̃)(T̃λ⊗ι)")


def check_mb_axiom(M: MultiplierBialgebroid, code: str) -> CheckResult:
    """MB.BASES or MB.MIXED as a single check result."""
    body = {"MB.BASES": _check_bases, "MB.MIXED": _check_mixed}[code]
    return _result(code, lambda: body(M))


def certify(M: MultiplierBialgebroid, pentagon: bool = True) -> Report:
    """All one-sided axioms plus MB.BASES and MB.MIXED."""
    rep = Report()
    for c in LEFT_AXIOMS:
        if c == "LB.PENTAGON" and not pentagon:
            continue
        rep.add(check_axiom(M.left, c))
    for c in RIGHT_AXIOMS:
        if c == "RB.PENTAGON" and not pentagon:
            continue
        rep.add(check_axiom(M.right, c))
    rep.add(check_mb_axiom(M, "MB.BASES"))
    rep.add(check_mb_axiom(M, "MB.MIXED"))
    return rep


def make_multiplier_bialgebroid(A, B, C, iota_B, iota_C, S_B, S_C, Tl, Tr, lT, rT, name: str = "",
                                meta=None, certified: bool = True, pentagon: bool = False) -> MultiplierBialgebroid:
    """Build and certify; raises AxiomFailed on the first failing axiom.

    MB.BASES is enforced by the constructor itself, before anything else.
    """
    M = MultiplierBialgebroid(A, B, C, iota_B, iota_C, S_B, S_C, Tl, Tr, lT, rT, name, meta)
    if certified:
        rep = certify(M, pentagon=pentagon)
        for e in rep:
            if e.status == "fail":
                raise AxiomFailed(e.code, e.witness, e.reason)
        M.meta["certificate"] = rep
    return M


# ---------------------------------------------------------------- regularity

@dataclass
class HopfCertificate:
    bijective: dict          # name -> bool for the four canonical maps
    fullness: dict           # name -> bool for the four spans in condition (1)
    ideals: dict             # name -> matrix whose columns span the ideal

    def flags(self) -> dict:
        return {**{f"bijective[{k}]": v for k, v in self.bijective.items()},
                **{f"full[{k}]": v for k, v in self.fullness.items()}}

    @property
    def regular(self) -> bool:
        return all(self.flags().values())


def _ideal(M: MultiplierBialgebroid, base: Algebra, constraints) -> DomainMatrix:
    homs = la.hom_space(M.n, base.dim, constraints, M.K)
    if not homs:
        return la.zeros(base.dim, 0, M.K)
    return la.image_basis(la.hstack(*homs))


def check_regular(M: MultiplierBialgebroid) -> HopfCertificate:
    bij = {}
    for key, name in (("Tl", "T_lambda"), ("Tr", "T_rho"), ("lT", "lambda_T"), ("rT", "rho_T")):
        bij[name] = la.is_bijective(M._arrow(key).map)
    B, C = M.B, M.C
    mods = M.mods
    I_sB = _ideal(M, B, [(B.L[x], mods["B.sL"].actions[x]) for x in range(B.dim)])   # Hom(_B A, _B B)
    I_tB = _ideal(M, B, [(B.R[x], mods["B.tL"].actions[x]) for x in range(B.dim)])   # Hom(A^B, B_B)
    I_sC = _ideal(M, C, [(C.R[y], mods["C.sR"].actions[y]) for y in range(C.dim)])   # Hom(A_C, C_C)
    I_tC = _ideal(M, C, [(C.L[y], mods["C.tR"].actions[y]) for y in range(C.dim)])   # Hom(^C A, _C C)
    n = M.n

    def spans(mats):
        return bool(mats) and la.rank(la.hstack(*mats)) == n

    full = {
        "S_B(_B I) A": spans([M.iota_C.left_of(S_apply(M.S_B, la.column(I_sB, j))) for j in range(I_sB.shape[1])]),
        "I^B A": spans([M.iota_B.left_of(la.column(I_tB, j)) for j in range(I_tB.shape[1])]),
        "A S_C(I_C)": spans([M.iota_B.right_of(S_apply(M.S_C, la.column(I_sC, j))) for j in range(I_sC.shape[1])]),
        "A ^C I": spans([M.iota_C.right_of(la.column(I_tC, j)) for j in range(I_tC.shape[1])]),
    }
    return HopfCertificate(bij, full, {"_B I": I_sB, "I^B": I_tB, "I_C": I_sC, "^C I": I_tC})


def regularity_report(M: MultiplierBialgebroid, cert: HopfCertificate | None = None) -> Report:
    cert = cert or check_regular(M)
    rep = Report()
    bad = [k for k, v in cert.bijective.items() if not v]
    rep.add(passed("MH.BIJECTIVE", _anchor("MH.BIJECTIVE")) if not bad else
            failed("MH.BIJECTIVE", {"not_bijective": bad}, _anchor("MH.BIJECTIVE"), "NotBijective"))
    bad = [k for k, v in cert.fullness.items() if not v]
    rep.add(passed("MH.FULL", _anchor("MH.FULL")) if not bad else
            failed("MH.FULL", {"proper": bad}, _anchor("MH.FULL")))
    return rep


# ---------------------------------------------------------------- antipode

@dataclass
class Antipode:
    S: DomainMatrix
    S_inv: DomainMatrix
    eps_B: DomainMatrix
    eps_C: DomainMatrix
    trace: dict = field(default_factory=dict)


def _left_mult_of(M: MultiplierBialgebroid, which: str, S_base: DomainMatrix, eps: DomainMatrix, col: int) -> DomainMatrix:
    """Left multiplication by iota_which(S_base eps(e_col))."""
    return M.base_left(which, S_apply(S_base, la.column(eps, col)))


def _solve_in_A(M: MultiplierBialgebroid, lefts, rights, what: str) -> DomainMatrix:
    """Find s_b in A with L_{s_b} = lefts[b] and R_{s_b} = rights[b]; columns s_b."""
    A, K, n = M.A, M.K, M.n
    cols = []
    for i in range(n):
        v = {}
        for r, row in A.L[i].rep.items():
            for c, x in row.items():
                v[r * n + c] = x
        for r, row in A.R[i].rep.items():
            for c, x in row.items():
                v[n * n + r * n + c] = x
        cols.append(v)
    basis = la.from_columns(cols, 2 * n * n, K)
    rhs_cols = []
    for Lm, Rm in zip(lefts, rights):
        v = {}
        for r, row in Lm.rep.items():
            for c, x in row.items():
                v[r * n + c] = x
        for r, row in Rm.rep.items():
            for c, x in row.items():
                v[n * n + r * n + c] = x
        rhs_cols.append(v)
    try:
        X, ker = la.solve(basis, la.from_columns(rhs_cols, 2 * n * n, K))
    except InconsistentSystem:
        raise InconsistentSystem(f"{what} does not take values in A") from None
    return X


def _antipode_core(M: MultiplierBialgebroid, eps_B: DomainMatrix, eps_C: DomainMatrix):
    """S from S_rho and lambda_S; returns (S, Mb list, Nb list)."""
    A, K, n = M.A, M.K, M.n
    # S_rho = (a (x) b -> S_C(eps_C(a)) b) o T_rho^-1, read on A (x) A through Q_L
    amb = {}
    for a in range(n):
        Lm = _left_mult_of(M, "B", M.S_C, eps_C, a)
        for r, row in Lm.rep.items():
            for b, x in row.items():
                amb.setdefault(r, {})[a * n + b] = x
    slice_rho = ambient_arrow(la.sparse(amb, (n, n * n), K), M.D_Tr, M.space(1), "S_Cε_C⊗ι")
    S_rho = slice_rho.map * M.inverse_arrow("Tr").map * M.QL.q.projection.matrix
    amb = {}
    for b in range(n):
        Rm = M.base_right("C", S_apply(M.S_B, la.column(eps_B, b)))
        for r, row in Rm.rep.items():
            for a, x in row.items():
                amb.setdefault(r, {})[a * n + b] = x
    slice_lam = ambient_arrow(la.sparse(amb, (n, n * n), K), M.D_lT, M.space(1), "ι⊗S_Bε_B")
    lam_S = slice_lam.map * M.inverse_arrow("lT").map * M.QR.q.projection.matrix
    rc, lc = la.columns(S_rho), la.columns(lam_S)
    Mb = [la.from_columns([rc[b * n + c] for c in range(n)], n, K) for b in range(n)]   # c -> S(b)c
    Nb = [la.from_columns([lc[a * n + b] for a in range(n)], n, K) for b in range(n)]   # a -> aS(b)
    for b in range(n):
        # a (Mb c) = (Nb a) c for all a, c
        for a in range(n):
            if not la.equal(A.L[a] * Mb[b], A.left(la.column(Nb[b], a))):
                raise InconsistentSystem(f"S_rho and lambda_S are not compatible at {A.labels[b]}")
    S = _solve_in_A(M, Mb, Nb, "S")
    return S, Mb, Nb


def co_bialgebroid(M: MultiplierBialgebroid, certified: bool = False) -> MultiplierBialgebroid:
    """(A, C, B, S_B^-1, S_C^-1) with flipped comultiplications."""
    n, K = M.n, M.K
    Sw = flip_matrix(n, K)
    sL, sR = M.QL.q.section.matrix, M.QR.q.section.matrix
    co = MultiplierBialgebroid(M.A, M.C, M.B, M.iota_C, M.iota_B,
                               la.inverse(M.S_B, "S_B"), la.inverse(M.S_C, "S_C"),
                               Sw * sL * M.left.Tr * Sw, Sw * sL * M.left.Tl * Sw,
                               Sw * sR * M.right.rT * Sw, Sw * sR * M.right.lT * Sw,
                               (M.name + "^co") if M.name else "", {})
    if certified:
        for e in certify(co, pentagon=False):
            if e.status == "fail":
                raise AxiomFailed(e.code, e.witness, e.reason)
    return co


def derive_counits(M: MultiplierBialgebroid):
    eps_B, tr_B = derive_counit(M.left)
    eps_C, tr_C = derive_right_counit(M.right)
    return eps_B, eps_C, {"left": tr_B, "right": tr_C}


def derive_antipode(M: MultiplierBialgebroid, cert: HopfCertificate | None = None) -> Antipode:
    cert = cert or check_regular(M)
    if not cert.regular:
        raise NotRegular(cert)
    A, K, n = M.A, M.K, M.n
    eps_C, tr_C = derive_right_counit(M.right)
    eps_B, tr_B = derive_counit(M.left)
    S, Mb, Nb = _antipode_core(M, eps_B, eps_C)
    # S^co from the co-opposite data
    co = co_bialgebroid(M)
    eps_Bco = M.S_B * eps_B
    eps_Cco = M.S_C * eps_C
    S_co, _, _ = _antipode_core(co, eps_Bco, eps_Cco)
    # cross-check: S^co(a) b = (ι⊗ε_C)(T_lambda^-1(b (x) a)) with u (x) v -> ε_C(v) u
    amb = {}
    for v in range(n):
        Lm = M.base_left("C", la.column(eps_C, v))
        for r, row in Lm.rep.items():
            for u, x in row.items():
                amb.setdefault(r, {})[u * n + v] = x
    slc = ambient_arrow(la.sparse(amb, (n, n * n), K), M.D_Tl, M.space(1), "ι⊗ε_C")
    F = slc.map * M.inverse_arrow("Tl").map * M.QL.q.projection.matrix
    Fc = la.columns(F)
    for a in range(n):
        lhs = A.left(la.column(S_co, a))
        rhs = la.from_columns([Fc[b * n + a] for b in range(n)], n, K)
        if not la.equal(lhs, rhs):
            raise InverseCheckFailed(f"S^co({A.labels[a]}) disagrees with the slice of T_lambda^-1")
    I = la.eye(n, K)
    if not la.equal(S * S_co, I) or not la.equal(S_co * S, I):
        raise InverseCheckFailed("S and S^co are not mutually inverse")
    for i in range(n):
        for j in range(n):
            if not la.equal(S * A.mult * la.from_columns([{i * n + j: K.one}], n * n, K),
                            la.from_columns([A.mul(la.column(S, j), la.column(S, i))], n, K)):
                raise InverseCheckFailed(f"S is not anti-multiplicative at ({A.labels[i]}, {A.labels[j]})")
    return Antipode(S, S_co, eps_B, eps_C, {"counit_B": tr_B, "counit_C": tr_C, "S_rho": Mb, "lambda_S": Nb,
                                            "S_co": S_co})


# ---------------------------------------------------------------- verification

def _S_arrow(M, left, right, dom, cod, flip=False, name=""):
    return M.tensor_arrow(left, right, dom, cod, flip, name)


def verify_antipode(M: MultiplierBialgebroid, ant: Antipode) -> Report:
    A, B, C, K, n = M.A, M.B, M.C, M.K, M.n
    S, Sinv = la.convert(ant.S, K), la.convert(ant.S_inv, K)
    rep = Report()

    def anti():
        I = la.eye(n, K)
        if not la.equal(S * Sinv, I) or not la.equal(Sinv * S, I):
            return {"reason": "S is not invertible with the given inverse"}
        for i in range(n):
            for j in range(n):
                lhs = la.from_columns([S_apply(S, A.constants.get((i, j), {}))], n, K)
                rhs = la.from_columns([A.mul(la.column(S, j), la.column(S, i))], n, K)
                if not la.equal(lhs, rhs):
                    return {"a": A.labels[i], "b": A.labels[j]}
        return None

    rep.add(_result("MH1.ANTI", anti))

    def bimod():
        for x in range(B.dim):
            SBx = la.column(M.S_B, x)
            e = {x: K.one}
            if not la.equal(S * M.base_left("B", e), M.base_right("C", SBx) * S):
                return {"identity": "S(xa) = S(a)S_B(x)", "x": B.labels[x]}
            if not la.equal(S * M.base_right("B", e), M.base_left("C", SBx) * S):
                return {"identity": "S(ax) = S_B(x)S(a)", "x": B.labels[x]}
        for y in range(C.dim):
            SCy = la.column(M.S_C, y)
            e = {y: K.one}
            if not la.equal(S * M.base_left("C", e), M.base_right("B", SCy) * S):
                return {"identity": "S(ya) = S(a)S_C(y)", "y": C.labels[y]}
            if not la.equal(S * M.base_right("C", e), M.base_left("B", SCy) * S):
                return {"identity": "S(ay) = S_C(y)S(a)", "y": C.labels[y]}
        return None

    rep.add(_result("MH1.BIMOD", bimod))

    def diagrams():
        A1 = M.space(1)
        # m_C (S (x) ι) T_rho = S_C ε_C (x) ι on A_B (x) _B A
        mS = ambient_arrow(A.mult * la.kron(S, la.eye(n, K)), M.QL, A1, "m_C(S⊗ι)")
        amb = {}
        for a in range(n):
            Lm = M.base_left("B", S_apply(M.S_C, la.column(ant.eps_C, a)))
            for r, row in Lm.rep.items():
                for b, x in row.items():
                    amb.setdefault(r, {})[a * n + b] = x
        rhs = ambient_arrow(la.sparse(amb, (n, n * n), K), M.D_Tr, A1, "S_Cε_C⊗ι")
        w = _cmp(compose(mS, M.T_rho), rhs, identity="m_C(S⊗ι)Tρ = S_Cε_C⊗ι")
        if w:
            return w
        mS = ambient_arrow(A.mult * la.kron(la.eye(n, K), S), M.QR, A1, "m_B(ι⊗S)")
        amb = {}
        for b in range(n):
            Rm = M.base_right("C", S_apply(M.S_B, la.column(ant.eps_B, b)))
            for r, row in Rm.rep.items():
                for a, x in row.items():
                    amb.setdefault(r, {})[a * n + b] = x
        rhs = ambient_arrow(la.sparse(amb, (n, n * n), K), M.D_lT, A1, "ι⊗S_Bε_B")
        return _cmp(compose(mS, M.lambda_T), rhs, identity="m_B(ι⊗S)λT = ι⊗S_Bε_B")

    rep.add(_result("MH1.DIAGRAMS", diagrams))
    cu = check_counit(M.left, ant.eps_B)
    cr = check_right_counit(M.right, ant.eps_C)
    bad = [e for e in list(cu) + list(cr) if e.status == "fail"]
    rep.add(passed("MH1.COUNITS", _anchor("MH1.COUNITS")) if not bad else
            failed("MH1.COUNITS", {"check": bad[0].code, "witness": bad[0].witness}, _anchor("MH1.COUNITS")))
    return rep


def check_galois_inverses(M: MultiplierBialgebroid, ant: Antipode) -> Report:
    K = M.K
    S, Si = la.convert(ant.S, K), la.convert(ant.S_inv, K)
    rep = Report()
    Tl, Tr, lT, rT = M.T_lambda, M.T_rho, M.lambda_T, M.rho_T

    def identities():
        # (a) T_rho (ι⊗S) rho_T = ι⊗S on _B A (x) A_B
        f = compose(Tr, compose(_S_arrow(M, None, S, M.QR, M.D_Tr), rT))
        w = _cmp(f, _S_arrow(M, None, S, M.D_rT, M.QL), identity="Tρ(ι⊗S)ρT = ι⊗S")
        if w:
            return w
        # (b) lambda_T (S⊗ι) T_lambda = S⊗ι on _C A (x) A_C
        f = compose(lT, compose(_S_arrow(M, S, None, M.QL, M.D_lT), Tl))
        w = _cmp(f, _S_arrow(M, S, None, M.D_Tl, M.QR), identity="λT(S⊗ι)Tλ = S⊗ι")
        if w:
            return w
        # (c) T_lambda (S^-1⊗ι) lambda_T = S^-1⊗ι on A_C (x) _C A
        f = compose(Tl, compose(_S_arrow(M, Si, None, M.QR, M.D_Tl), lT))
        w = _cmp(f, _S_arrow(M, Si, None, M.D_lT, M.QL), identity="Tλ(S⁻¹⊗ι)λT = S⁻¹⊗ι")
        if w:
            return w
        # (d) rho_T (ι⊗S^-1) T_rho = ι⊗S^-1 on A_B (x) _B A
        f = compose(rT, compose(_S_arrow(M, None, Si, M.QL, M.D_rT), Tr))
        return _cmp(f, _S_arrow(M, None, Si, M.D_Tr, M.QR), identity="ρT(ι⊗S⁻¹)Tρ = ι⊗S⁻¹")

    rep.add(_result("GAL.IDENTITIES", identities))

    def inverses():
        formulas = {
            "T_rho^-1 = (ι⊗S)ρT(ι⊗S⁻¹)": (compose(_S_arrow(M, None, S, M.QR, M.D_Tr), compose(rT, _S_arrow(M, None, Si, M.QL, M.D_rT))), "Tr"),
            "λT^-1 = (S⊗ι)Tλ(S⁻¹⊗ι)": (compose(_S_arrow(M, S, None, M.QL, M.D_lT), compose(Tl, _S_arrow(M, Si, None, M.QR, M.D_Tl))), "lT"),
            "T_lambda^-1 = (S⁻¹⊗ι)λT(S⊗ι)": (compose(_S_arrow(M, Si, None, M.QR, M.D_Tl), compose(lT, _S_arrow(M, S, None, M.QL, M.D_lT))), "Tl"),
            "ρT^-1 = (ι⊗S⁻¹)Tρ(ι⊗S)": (compose(_S_arrow(M, None, Si, M.QL, M.D_rT), compose(Tr, _S_arrow(M, None, S, M.QR, M.D_Tr))), "rT"),
        }
        for ident, (f, key) in formulas.items():
            w = _cmp(f, M.inverse_arrow(key), identity=ident)
            if w:
                return w
        return None

    rep.add(_result("GAL.INVERSES", inverses))
    return rep


def check_antipode_aux(M: MultiplierBialgebroid, ant: Antipode) -> Report:
    K = M.K
    S = la.convert(ant.S, K)
    rep = Report()

    def squares():
        flip = lambda d, c: M.sigma(d, c)
        # square 1: A_C (x) _C A -> _B A (x) A_B
        p1 = compose(M.inverse_arrow("rT"), _S_arrow(M, S, None, M.D_lT, M.QR, flip="first"))
        p2 = compose(flip(M.D_Tr, M.D_rT), compose(M.inverse_arrow("Tr"), compose(M.T_lambda, flip(M.D_lT, M.D_Tl))))
        fQR = M.flipped(M.QR)
        p3 = compose(M.tensor_arrow(S, None, fQR, M.D_rT), compose(flip(M.QR, fQR), M.lambda_T))
        for (na, a), (nb, b) in (((1, p1), (2, p2)), ((1, p1), (3, p3)), ((2, p2), (3, p3))):
            w = _cmp(a, b, square=1, paths=[na, nb])
            if w:
                return w
        # square 2: A_B (x) _B A -> _C A (x) A_C
        q1 = compose(M.inverse_arrow("Tl"), _S_arrow(M, None, S, M.D_Tr, M.QL, flip="first"))
        q2 = compose(flip(M.D_lT, M.D_Tl), compose(M.inverse_arrow("lT"), compose(M.rho_T, flip(M.D_Tr, M.D_rT))))
        fQL = M.flipped(M.QL)
        q3 = compose(M.tensor_arrow(None, S, fQL, M.D_Tl), compose(flip(M.QL, fQL), M.T_rho))
        for (na, a), (nb, b) in (((1, q1), (2, q2)), ((1, q1), (3, q3)), ((2, q2), (3, q3))):
            w = _cmp(a, b, square=2, paths=[na, nb])
            if w:
                return w
        return None

    rep.add(_result("AUX.SQUARES", squares))
    return rep


def check_antipode_comult(M: MultiplierBialgebroid, ant: Antipode) -> Report:
    K = M.K
    S = la.convert(ant.S, K)
    rep = Report()

    def squares():
        SS = lambda d, c: M.tensor_arrow(S, S, d, c, flip=True, name="Σ(S⊗S)")
        w = _cmp(compose(M.rho_T, SS(M.D_Tl, M.D_rT)), compose(SS(M.QL, M.QR), M.T_lambda),
                 identity="ρT Σ(S⊗S) = Σ(S⊗S) Tλ")
        if w:
            return w
        return _cmp(compose(M.T_rho, SS(M.D_lT, M.D_Tr)), compose(SS(M.QR, M.QL), M.lambda_T),
                    identity="Tρ Σ(S⊗S) = Σ(S⊗S) λT")

    rep.add(_result("COMULT.SQUARES", squares))

    def counits():
        if not la.equal(M.S_B * ant.eps_B, ant.eps_C * S):
            return {"identity": "S_B ε_B = ε_C S"}
        if not la.equal(M.S_C * ant.eps_C, ant.eps_B * S):
            return {"identity": "S_C ε_C = ε_B S"}
        return None

    rep.add(_result("COMULT.COUNITS", counits))
    return rep


def antipode_solution_space(M: MultiplierBialgebroid, eps_B: DomainMatrix, eps_C: DomainMatrix):
    """Solve the antipode equations for S as an unknown n x n matrix.

    Equations: the bimodule identities of S and both counit-cancellation
    diagrams (read through the quotient sections).  Returns
    (particular solution or None, dimension of the homogeneous space).
    """
    A, B, C, K, n = M.A, M.B, M.C, M.K, M.n
    I = la.eye(n, K)
    sQL, sQR = M.QL.q.section.matrix, M.QR.q.section.matrix
    TrD, lTD = sQL * M.T_rho.map, sQR * M.lambda_T.map
    gens = []
    for x in range(B.dim):
        e, SBx = {x: K.one}, la.column(M.S_B, x)
        gens.append((M.base_left("B", e), M.base_right("C", SBx)))
        gens.append((M.base_right("B", e), M.base_left("C", SBx)))
    for y in range(C.dim):
        e, SCy = {y: K.one}, la.column(M.S_C, y)
        gens.append((M.base_left("C", e), M.base_right("B", SCy)))
        gens.append((M.base_right("C", e), M.base_left("B", SCy)))

    def vec(X):
        return {i * X.shape[1] + j: v for i, r in X.rep.items() for j, v in r.items() if v}

    cols = []
    for p in range(n):
        for q in range(n):
            E = la.sparse({p: {q: K.one}}, (n, n), K)
            parts = [A.mult * la.kron(E, I) * TrD, A.mult * la.kron(I, E) * lTD]
            for Lg, Rg in gens:
                parts.append(E * Lg - Rg * E)
            v, off = {}, 0
            for X in parts:
                for k, val in vec(X).items():
                    v[off + k] = val
                off += X.shape[0] * X.shape[1]
            cols.append(v)
    amb = {}
    for a in range(n):
        Lm = M.base_left("B", S_apply(M.S_C, la.column(eps_C, a)))
        for r, row in Lm.rep.items():
            for b, x in row.items():
                amb.setdefault(r, {})[a * n + b] = x
    r1 = la.sparse(amb, (n, n * n), K) * M.D_Tr.q.section.matrix
    amb = {}
    for b in range(n):
        Rm = M.base_right("C", S_apply(M.S_B, la.column(eps_B, b)))
        for r, row in Rm.rep.items():
            for a, x in row.items():
                amb.setdefault(r, {})[a * n + b] = x
    r2 = la.sparse(amb, (n, n * n), K) * M.D_lT.q.section.matrix
    rv, off = {}, 0
    for X in [r1, r2] + [la.zeros(n, n, K)] * len(gens):
        for k, val in vec(X).items():
            rv[off + k] = val
        off += X.shape[0] * X.shape[1]
    system = la.from_columns(cols, off, K)
    ker = la.kernel_basis(system)
    try:
        X, _ = la.solve(system, la.from_columns([rv], off, K))
    except InconsistentSystem:
        return None, len(ker)
    rows = {}
    for idx, val in la.column(X, 0).items():
        rows.setdefault(idx // n, {})[idx % n] = val
    return la.sparse(rows, (n, n), K), len(ker)


# ---------------------------------------------------------------- symmetries

def _op_embedding(emb: BaseEmbedding, Aop: Algebra, base: Algebra, kind: str = "hom") -> BaseEmbedding:
    return BaseEmbedding(Aop, base, [MultiplierPair(p.right, p.left) for p in emb.images], kind)


def op_bialgebroid(M: MultiplierBialgebroid) -> MultiplierBialgebroid:
    """(A^op, B^op, C^op, S_C^-1, S_B^-1); left lifts are λT~, ρT~ and right lifts T~λ, T~ρ."""
    Aop, Bop, Cop = M.A.opposite(), M.B.opposite(), M.C.opposite()
    return MultiplierBialgebroid(Aop, Bop, Cop, _op_embedding(M.iota_B, Aop, Bop), _op_embedding(M.iota_C, Aop, Cop),
                                 la.inverse(M.S_C, "S_C"), la.inverse(M.S_B, "S_B"),
                                 M.right.lT, M.right.rT, M.left.Tl, M.left.Tr,
                                 (M.name + "^op") if M.name else "", {})


def symmetries(M: MultiplierBialgebroid):
    co = co_bialgebroid(M)
    op = op_bialgebroid(M)
    op_co = co_bialgebroid(op)
    if M.name:
        op_co.name = M.name + "^op,co"
    return co, op, op_co


def transport_counits(M: MultiplierBialgebroid, ant: Antipode) -> dict:
    """Expected (left, right) counits of co, op and op_co."""
    return {
        "co": (M.S_B * ant.eps_B, M.S_C * ant.eps_C),
        "op": (M.S_C * ant.eps_C, M.S_B * ant.eps_B),
        "op_co": (ant.eps_C, ant.eps_B),
    }


# ---------------------------------------------------------------- star

@dataclass
class StarStructure:
    """Conjugate-linear maps a* = K conj(a); star_B and star_C are induced."""
    star_A: DomainMatrix
    star_B: DomainMatrix | None = None
    star_C: DomainMatrix | None = None


def _induced_star(M: MultiplierBialgebroid, Kst: DomainMatrix, which: str) -> DomainMatrix:
    """Star on the base: lambda_{x*} = K conj(rho_x) conj(K), solved in base coordinates."""
    emb = M.iota_B if which == "B" else M.iota_C
    n, F = M.n, M.K
    cK = la.conj_matrix(Kst)
    targets = [Kst * la.conj_matrix(p.right) * cK for p in emb.images]
    basis = la.from_columns([{r * n + c: v for r, row in p.left.rep.items() for c, v in row.items()}
                             for p in emb.images], n * n, F)
    rhs = la.from_columns([{r * n + c: v for r, row in T.rep.items() for c, v in row.items()} for T in targets],
                          n * n, F)
    try:
        X, _ = la.solve(basis, rhs)
    except InconsistentSystem:
        raise InconsistentSystem(f"{which} is not closed under the induced involution") from None
    # X[:, x] = coordinates of x*, i.e. x* = X conj(x) on basis vectors (basis is real)
    return X


def _descend_conj(Mat: DomainMatrix, dom: BalancedTensorSpace, cod: BalancedTensorSpace) -> DomainMatrix:
    """Matrix Q with F(v) = Q conj(v) for the conjugate-linear v -> Mat conj(v) on quotients."""
    Pc = cod.q.projection.matrix
    if dom.q.pivots:
        bad = Pc * Mat * la.conj_matrix(dom.q.reduced.transpose())
        if not la.is_zero(bad):
            raise WellDefinednessViolated("star", f"∗⊗∗ does not map {dom.name} to {cod.name}")
    return Pc * Mat * la.conj_matrix(dom.q.section.matrix)


def check_star(M: MultiplierBialgebroid, star: StarStructure, ant: Antipode | None = None) -> Report:
    if M.K != QQ_I:
        raise FieldMismatch("star structures need the Gaussian rational field")
    A, n, F = M.A, M.n, M.K
    Kst = la.convert(star.star_A, F)
    cK = la.conj_matrix(Kst)
    rep = Report()

    def star_A_ok():
        if not la.equal(Kst * cK, la.eye(n, F)):
            return {"reason": "∗ is not involutive"}
        for i in range(n):
            for j in range(n):
                lhs = Kst * la.conj_matrix(la.from_columns([A.constants.get((i, j), {})], n, F))
                rhs = la.from_columns([A.mul(la.column(Kst, j), la.column(Kst, i))], n, F)
                if not la.equal(lhs, rhs):
                    return {"reason": "∗ is not anti-multiplicative", "a": A.labels[i], "b": A.labels[j]}
        return None

    rep.add(_result("STAR.ALGEBRA", star_A_ok))
    try:
        KB = _induced_star(M, Kst, "B")
        KC = _induced_star(M, Kst, "C")
    except InconsistentSystem as e:
        rep.add(failed("STAR.BASES", {"reason": str(e)}, _anchor("STAR.BASES")))
        return rep
    star.star_B, star.star_C = KB, KC

    def bases():
        if not la.equal(M.S_B * KB * la.conj_matrix(M.S_C) * la.conj_matrix(KC), la.eye(M.C.dim, F)):
            return {"identity": "S_B∗S_C∗ = ι_C"}
        if not la.equal(M.S_C * KC * la.conj_matrix(M.S_B) * la.conj_matrix(KB), la.eye(M.B.dim, F)):
            return {"identity": "S_C∗S_B∗ = ι_B"}
        return None

    rep.add(_result("STAR.BASES", bases))

    def canonical():
        KK = la.kron(Kst, Kst)
        for T, D, U, E, ident in ((M.T_lambda, M.D_Tl, M.lambda_T, M.D_lT, "(∗⊗∗)Tλ = λT(∗⊗∗)"),
                                  (M.T_rho, M.D_Tr, M.rho_T, M.D_rT, "(∗⊗∗)Tρ = ρT(∗⊗∗)")):
            lhs = _descend_conj(KK, M.QL, M.QR) * la.conj_matrix(T.map)
            rhs = U.map * _descend_conj(KK, D, E)
            d = la.first_difference(lhs, rhs)
            if d is not None:
                return {"identity": ident, "input": D.q.space.labels[d[0]]}
        return None

    rep.add(_result("STAR.CANONICAL", canonical))
    if ant is not None:
        def antipode():
            S = la.convert(ant.S, F)
            if not la.equal(ant.eps_C * Kst, KC * la.conj_matrix(M.S_B * ant.eps_B)):
                return {"identity": "ε_C∗ = ∗S_Bε_B"}
            if not la.equal(ant.eps_B * Kst, KB * la.conj_matrix(M.S_C * ant.eps_C)):
                return {"identity": "ε_B∗ = ∗S_Cε_C"}
            if not la.equal(S * Kst * la.conj_matrix(S) * cK, la.eye(n, F)):
                return {"identity": "S∗S∗ = ι"}
            return None

        rep.add(_result("STAR.ANTIPODE", antipode))
    return rep


# ---------------------------------------------------------------- unitality

def unitality_report(M: MultiplierBialgebroid) -> dict:
    A, B, C, K = M.A, M.B, M.C, M.K
    out = {"A": A.unit is not None, "B": B.unit is not None, "C": C.unit is not None}
    I = la.eye(A.dim, K)
    out["iota_B"] = bool(out["B"] and out["A"] and la.equal(M.iota_B.left_of(B.unit), I))
    out["iota_C"] = bool(out["C"] and out["A"] and la.equal(M.iota_C.left_of(C.unit), I))
    delta_ok = False
    if out["A"]:
        P = M.QL.q.projection.matrix
        u = A.unit
        # Δ_B(1)(b (x) c) must be the class of b (x) c, and likewise for Δ_C
        D = la.zeros(M.QL.dim, A.dim ** 2, K)
        for i, x in u.items():
            D = D + _scale(delta_of(M.left, i).map, x)
        PR = M.QR.q.projection.matrix
        Dr = la.zeros(M.QR.dim, A.dim ** 2, K)
        for i, x in u.items():
            Dr = Dr + _scale(_right_delta(M, i), x)
        delta_ok = la.equal(D, P) and la.equal(Dr, PR)
    out["Delta"] = delta_ok
    out["unital"] = all(out.values())
    out["note"] = ("all structure is unital: the instance is a Hopf algebroid in the unital sense"
                   if out["unital"] else "some structure is not unital")
    return out


def _scale(Mx: DomainMatrix, a) -> DomainMatrix:
    return DomainMatrix.from_rep(Mx.rep.mul(a))


def _right_delta(M: MultiplierBialgebroid, a: int) -> DomainMatrix:
    """b (x) c -> (b (x) c)Δ_C(e_a) built from ρT~ as (1 (x) c)Δ_C(a) then b on the left of leg 1."""
    A, K, n = M.A, M.K, M.n
    QR = M.QR
    from .btensor import endo
    LB = [endo(QR, {1: A.L[b]}).map for b in range(n)]
    rc = la.columns(M.right.rT)
    cols = []
    for b in range(n):
        for c in range(n):
            v = la.from_columns([rc[a * n + c]], QR.dim, K)
            cols.append(la.column(LB[b] * v, 0))
    return la.from_columns(cols, QR.dim, K)
