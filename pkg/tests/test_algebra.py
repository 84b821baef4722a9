from itertools import product

import pytest

from mhalgebroid import linalg as la
from mhalgebroid.algebra import (A1Violated, DecorationMismatch, MultiplierPair, NotAssociative, NotInjective,
                                 NotMultiplicative, UnitInvalid, algebra_from_json, algebra_to_json, check_A1,
                                 embedding_from_elements, make_algebra, module_from_embedding, multiplier_algebra)
from mhalgebroid.linalg import QQ


def matrix_algebra(k):
    """M_k(Q) with basis E_ij, index i*k + j."""
    labels = [f"E{i}{j}" for i in range(k) for j in range(k)]
    consts = {(i * k + j, j * k + l): {i * k + l: 1} for i, j, l in product(range(k), repeat=3)}
    return make_algebra(labels, consts, [1 if i == j else 0 for i in range(k) for j in range(k)], QQ, f"M{k}")


def test_matrix_algebra_products_and_opposite():
    A = matrix_algebra(2)
    assert A.dim == 4 and A.is_unital
    # E01 E10 = E00, E10 E01 = E11
    assert A.mul({1: QQ.one}, {2: QQ.one}) == {0: QQ.one}
    Aop = A.opposite()
    assert Aop.mul({1: QQ.one}, {2: QQ.one}) == {3: QQ.one}
    for i, j in product(range(4), repeat=2):
        assert la.equal(A.L[i] * A.L[j], A.left(A.constants.get((i, j), {})))


def test_non_associative_table_is_rejected():
    # x*x = y, x*y = x, y*x = 0: (xx)x = yx = 0 but x(xx) = xy = x
    with pytest.raises(NotAssociative):
        make_algebra(["x", "y"], {(0, 0): {1: 1}, (0, 1): {0: 1}}, None, QQ)


def test_unit_must_act_as_identity():
    with pytest.raises(UnitInvalid):
        make_algebra(["p", "q"], {(0, 0): {0: 1}, (1, 1): {1: 1}}, [1, 0], QQ)
    with pytest.raises(UnitInvalid):
        make_algebra(["p"], {(0, 0): {0: 1}}, [1, 0], QQ)


def test_zero_dimensional_algebra_rejected():
    with pytest.raises(la.DimensionZero):
        make_algebra([], {}, None, QQ)


def test_json_round_trip_with_labels():
    d = {"labels": ["e", "f"], "constants": [{"i": "e", "j": "e", "k": "e", "value": "1"},
                                             {"i": "f", "j": "f", "k": "f", "value": 1}], "unit": {"e": 1, "f": 1}}
    A = algebra_from_json(d, QQ)
    B = algebra_from_json(algebra_to_json(A), QQ)
    assert B.constants == A.constants and B.unit == A.unit
    with pytest.raises(ValueError):
        algebra_from_json({"constants": []}, QQ)


def test_A1_counterexamples():
    zero = make_algebra(["x"], {}, None, QQ)
    codes = {e.code: e.status for e in check_A1(zero).entries}
    assert codes == {"A1.IDEMPOTENT": "fail", "A1.LEFT_NONDEGENERATE": "fail", "A1.RIGHT_NONDEGENERATE": "fail"}
    # e idempotent, e x = x, x e = 0: idempotent but x annihilates A from the left
    half = make_algebra(["e", "x"], {(0, 0): {0: 1}, (0, 1): {1: 1}}, None, QQ)
    rep = {e.code: e for e in check_A1(half).entries}
    assert rep["A1.IDEMPOTENT"].ok and rep["A1.RIGHT_NONDEGENERATE"].ok
    assert not rep["A1.LEFT_NONDEGENERATE"].ok
    assert rep["A1.LEFT_NONDEGENERATE"].witness == {"annihilator": {"x": "1/1"}}
    with pytest.raises(A1Violated):
        multiplier_algebra(half)


@pytest.mark.parametrize("k", [1, 2])
def test_multiplier_algebra_of_unital_algebra_is_itself(k):
    A = matrix_algebra(k)
    pairs = multiplier_algebra(A)
    assert len(pairs) == A.dim
    for p in pairs:
        assert p.is_compatible(A)
    # every basis element gives a multiplier in the span
    own = [MultiplierPair.of(A, A.basis(i)) for i in range(A.dim)]
    stack = lambda ps: la.hstack(*[la.from_columns([{r * A.dim + c: v for r, row in p.left.rep.items()
                                                       for c, v in row.items()}], A.dim ** 2, QQ) for p in ps])
    assert la.rank(stack(pairs)) == la.rank(stack(pairs + own)) == A.dim


def test_base_embedding_checks():
    A = matrix_algebra(2)
    D = make_algebra(["d0", "d1"], {(0, 0): {0: 1}, (1, 1): {1: 1}}, [1, 1], QQ)
    emb = embedding_from_elements(A, D, [{0: QQ.one}, {3: QQ.one}], "hom")
    assert la.equal(emb.left_of({0: QQ.one, 1: QQ.one}), la.eye(4, QQ))
    with pytest.raises(NotMultiplicative):
        embedding_from_elements(A, D, [{0: QQ.one}, {1: QQ.one}], "hom")
    # a one-dimensional base sent to 0 is not injective (and misses the unit)
    F = make_algebra(["z"], {}, None, QQ)
    with pytest.raises(NotInjective):
        embedding_from_elements(A, F, [{}], "hom")


def test_module_decorations():
    A = matrix_algebra(2)
    D = make_algebra(["d0", "d1"], {(0, 0): {0: 1}, (1, 1): {1: 1}}, [1, 1], QQ)
    emb = embedding_from_elements(A, D, [{0: QQ.one}, {3: QQ.one}], "hom")
    m = module_from_embedding(emb, "lower-left")
    assert la.equal(m.act({0: QQ.one}), A.L[0])
    with pytest.raises(DecorationMismatch):
        module_from_embedding(emb, "upper-right")
    with pytest.raises(DecorationMismatch):
        module_from_embedding(emb, "sideways")
