import pytest

from corpus import GROUPOID_INSTANCES, as_dict, closed_forms, groupoid_instance, monoid_instance
from mhalgebroid import linalg as la
from mhalgebroid.bialgebroid import (LEFT_AXIOMS, RIGHT_AXIOMS, AxiomFailed, check_axiom, check_counit,
                                     check_left_axioms, check_right_axioms, check_right_counit, co_opposite,
                                     counit_solution_space, derive_counit, derive_right_counit,
                                     make_left_bialgebroid, to_opposite, triple_hypothesis)
from mhalgebroid.hopf import MultiplierBialgebroid, certify


def corrupted(M, factor=2):
    """Copy of M with the first column of the T̃λ lift scaled."""
    sL, sR = M.QL.q.section.matrix, M.QR.q.section.matrix
    rows = la.to_rows(sL * M.left.Tl)
    bad = la.from_rows([[factor * x if j == 0 else x for j, x in enumerate(r)] for r in rows], M.K)
    return MultiplierBialgebroid(M.A, M.B, M.C, M.iota_B, M.iota_C, M.S_B, M.S_C, bad, sL * M.left.Tr,
                                 sR * M.right.lT, sR * M.right.rT, "corrupted", {})


@pytest.mark.parametrize("name,kind", [("pair2", "fn"), ("Z3", "conv"), ("one-point", "fn")])
def test_left_and_right_catalogs_pass(name, kind):
    M = groupoid_instance(name, kind)
    left = check_left_axioms(M.left)
    right = check_right_axioms(M.right)
    assert [e.code for e in left.entries] == list(LEFT_AXIOMS)
    assert [e.code for e in right.entries] == list(RIGHT_AXIOMS)
    assert left.ok and right.ok


def test_corrupted_lift_fails_with_witness():
    X = corrupted(groupoid_instance("pair2", "fn"))
    fails = {e.code: e for e in certify(X, pentagon=False).entries if e.status == "fail"}
    assert {"LB.COMPAT", "LB.MULT", "LB.COASSOC", "LB.TAKEUCHI", "MB.MIXED"} <= set(fails)
    assert not any(c.startswith("RB.") for c in fails)
    w = fails["LB.COMPAT"].witness
    assert set(w) == {"input", "output_coordinate"}
    assert w["input"].startswith("[") and "⊗" in w["input"]
    with pytest.raises(AxiomFailed) as exc:
        make_left_bialgebroid(X.A, X.B, X.left.s, X.left.t, X.left.Tl, X.left.Tr)
    assert exc.value.code == "LB.COMPAT"


def test_unknown_or_misdirected_axiom_codes():
    M = groupoid_instance("Z2", "fn")
    with pytest.raises(ValueError):
        check_axiom(M.left, "LB.NOPE")
    with pytest.raises(ValueError):
        check_axiom(M.left, "RB.MULT")
    with pytest.raises(ValueError):
        check_axiom(M.right, "LB.MULT")


@pytest.mark.parametrize("name,kind", GROUPOID_INSTANCES, ids=[f"{g}-{k}" for g, k in GROUPOID_INSTANCES])
def test_closed_form_counits_satisfy_the_counit_axioms(name, kind):
    M = groupoid_instance(name, kind)
    eB, eC, _ = closed_forms(name, kind)
    shape = (M.B.dim, M.n)
    epsB = la.sparse({i: {j: M.K.one for (ii, j) in eB if ii == i} for i, _ in eB}, shape, M.K)
    epsC = la.sparse({i: {j: M.K.one for (ii, j) in eC if ii == i} for i, _ in eC}, (M.C.dim, M.n), M.K)
    assert check_counit(M.left, epsB).ok
    assert check_right_counit(M.right, epsC).ok
    # and derivation lands on exactly these
    assert as_dict(derive_counit(M.left)[0]) == eB
    assert as_dict(derive_right_counit(M.right)[0]) == eC


def test_zero_counit_fails_the_slice_identity():
    M = groupoid_instance("pair2", "fn")
    rep = check_counit(M.left, la.zeros(M.B.dim, M.n, M.K))
    status = {e.code: e.status for e in rep.entries}
    assert status["CU.L.COUNIT"] == "fail" and status["CU.L.BIMOD"] == "pass"


def test_monoid_counit_exists_without_bijectivity():
    M = monoid_instance()
    with pytest.raises(la.NotBijective):
        derive_counit(M.left)
    eps, hom = counit_solution_space(M.left)
    # evaluation at the identity arrow, and nothing else
    assert hom == 0
    assert as_dict(eps) == {(0, M.A.labels.index("δ1")): 1}
    assert check_counit(M.left, eps).ok


def test_co_opposite_and_opposite_are_bialgebroids():
    L = groupoid_instance("pair2", "conv").left
    co = co_opposite(L)
    assert check_left_axioms(co).ok
    R = to_opposite(L)
    assert check_right_axioms(R).ok
    # co of co gives back the original lifts
    coco = co_opposite(co)
    assert la.equal(coco.Tl, L.Tl) and la.equal(coco.Tr, L.Tr)


@pytest.mark.parametrize("name,kind", [("pair2", "fn"), ("pair2", "conv"), ("Z2", "fn")])
def test_triple_hypothesis_holds_on_unital_instances(name, kind):
    M = groupoid_instance(name, kind)
    assert triple_hypothesis(M.left) and triple_hypothesis(M.right.left_opposite)
