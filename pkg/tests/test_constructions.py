from itertools import product
import json

import pytest

import corpus
from corpus import QxQ, crossed_instance, derived, groupoid, tensor_instance
from mhalgebroid import linalg as la
from mhalgebroid.algebra import A1Violated, make_algebra
from mhalgebroid.constructions import (ActionData, ActionInvalid, NotACategory, NotAGroup, NotAGroupoid, ParseError,
                                       category_to_json, convolution_algebroid, crossed_product_algebroid,
                                       cyclic_group, function_algebroid, make_fin_hopf, monoid_category,
                                       parse_category, parse_groupoid, tensor_algebroid)
from mhalgebroid.linalg import QQ

ONE = {"objects": ["o"]}


def one_object(arrows, table):
    return {**ONE, "arrows": [{"id": a, "src": "o", "tgt": "o"} for a in arrows],
            "compose": [{"left": l, "right": r, "result": k} for (l, r), k in table.items()]}


@pytest.mark.parametrize("bad", [
    "{not json",
    {"arrows": []},
    {"objects": [], "arrows": []},
    {"objects": ["o", "o"], "arrows": []},
    {"objects": ["o"], "arrows": [{"id": "e", "src": "o", "tgt": "x"}]},
    {"objects": ["o"], "arrows": [{"id": "e", "src": "o"}]},
    # two loops on one object: products are not determined by endpoints
    {"objects": ["o"], "arrows": [{"id": "e", "src": "o", "tgt": "o"}, {"id": "a", "src": "o", "tgt": "o"}]},
    one_object(["e"], {("e", "x"): "e"}),
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_category(bad)


def test_non_composable_product_listed():
    d = {"objects": ["1", "2"], "arrows": [{"id": "a", "src": "1", "tgt": "2"}, {"id": "i1", "src": "1", "tgt": "1"},
                                           {"id": "i2", "src": "2", "tgt": "2"}],
         "compose": [{"left": "i1", "right": "a", "result": "a"}]}
    with pytest.raises(NotACategory) as exc:
        parse_category(d)
    assert exc.value.witness == {"left": "i1", "right": "a"}


def test_non_associative_table():
    t = {("a", "a"): "a", ("a", "b"): "b", ("b", "a"): "a", ("b", "b"): "a"}
    with pytest.raises(NotACategory) as exc:
        parse_category(one_object(["a", "b"], t))
    assert "associative" in str(exc.value)


def test_missing_identity():
    t = {(x, y): "b" for x, y in product("ab", repeat=2)}
    with pytest.raises(NotACategory) as exc:
        parse_category(one_object(["a", "b"], t))
    assert exc.value.witness == {"object": "o"}


def test_groupoid_requirements():
    with pytest.raises(NotAGroupoid) as exc:
        parse_groupoid(category_to_json(monoid_category()))
    assert exc.value.witness == {"arrow": "z"}
    d = category_to_json(groupoid("Z3"))
    d["inverse"] = [{"arrow": "g1", "result": "g1"}]
    with pytest.raises(NotAGroupoid):
        parse_groupoid(d)


@pytest.mark.parametrize("name", list(corpus.GROUPOIDS))
def test_category_json_round_trip(name):
    g = groupoid(name)
    h = parse_groupoid(json.dumps(category_to_json(g)))
    assert (h.objects, h.arrows, h.compose, h.units, h.inverse) == (g.objects, g.arrows, g.compose, g.units, g.inverse)


def test_pair_groupoid_composition():
    g = groupoid("pair3")
    for (a, b), c in g.compose.items():
        # (ij)(jk) = ik
        assert a[1] == b[0] and c == a[0] + b[1]
    assert len(g.composable()) == 27


def test_group_validation():
    with pytest.raises(NotAGroup):
        make_fin_hopf({"elements": ["1", "z"], "table": [["1", "z"], ["z", "z"]]})
    with pytest.raises(NotAGroup):
        make_fin_hopf({"elements": ["a", "b"], "table": [["a", "c"], ["b", "a"]]})
    with pytest.raises(ParseError):
        make_fin_hopf({"elements": ["a"]})
    H = make_fin_hopf(cyclic_group(3))
    assert la.to_rows(H.antipode) == [[1, 0, 0], [0, 0, 1], [0, 1, 0]]


def test_convolution_product_is_composition():
    g = groupoid("pair3")
    M = convolution_algebroid(g, certified=False)
    idx = {a: i for i, a in enumerate(g.arrows)}
    for a, b in product(g.arrows, repeat=2):
        want = {idx[g.compose[(a, b)]]: 1} if (a, b) in g.compose else {}
        assert M.A.mul({idx[a]: QQ.one}, {idx[b]: QQ.one}) == want


def test_category_function_algebroid_kind():
    M = function_algebroid(monoid_category())
    assert M.meta["kind"] == "category-fn"
    assert function_algebroid(groupoid("Z2")).meta["kind"] == "groupoid-fn"


def test_tensor_needs_A1_and_units():
    zero = make_algebra(["x"], {}, None, QQ)
    with pytest.raises(A1Violated):
        tensor_algebroid(zero, zero, la.eye(1, QQ), la.eye(1, QQ))


def test_tensor_algebra_structure():
    M = tensor_instance("kZ2")
    H = corpus.z2_hopf().algebra
    # (c⊗b)(c'⊗b') = cc' ⊗ bb' in C ⊗ B
    for (i, j), (k, l) in product(product(range(2), repeat=2), repeat=2):
        c, b = H.mul({i: QQ.one}, {k: QQ.one}), H.mul({j: QQ.one}, {l: QQ.one})
        want = {p * 2 + q: x * y for p, x in c.items() for q, y in b.items()}
        assert M.A.mul({i * 2 + j: QQ.one}, {k * 2 + l: QQ.one}) == want


def test_crossed_product_with_trivial_group_is_the_tensor_product():
    X, T = crossed_instance("trivial"), tensor_instance("QxQ")
    assert X.A.constants == T.A.constants and X.A.unit == T.A.unit
    for a, b in ((X.left.Tl, T.left.Tl), (X.left.Tr, T.left.Tr), (X.right.lT, T.right.lT),
                 (X.right.rT, T.right.rT)):
        assert la.equal(a, b)
    _, ax = derived(("crossed", "trivial", ""))
    _, at = derived(("tensor", "QxQ", ""))
    assert la.equal(ax.S, at.S) and la.equal(ax.eps_B, at.eps_B) and la.equal(ax.eps_C, at.eps_C)


def _crossed(left, right):
    X = QxQ()
    I2 = la.eye(2, QQ)
    return crossed_product_algebroid(X, X, I2, I2, corpus.z2_hopf(), ActionData(left, right), certified=False)


def test_action_validation():
    I2 = la.eye(2, QQ)
    sw = la.from_rows(corpus.SWAP, QQ)
    with pytest.raises(ActionInvalid) as exc:
        _crossed([I2], [I2])
    assert exc.value.which == "shape"
    with pytest.raises(ActionInvalid) as exc:
        _crossed([I2, la.from_rows([[2, 0], [0, 2]], QQ)], [I2, I2])
    assert exc.value.which == "module"
    sign = la.from_rows([[1, 0], [0, -1]], QQ)
    with pytest.raises(ActionInvalid) as exc:
        _crossed([I2, sign], [I2, I2])
    assert exc.value.which == "module-algebra"
    # acting on one side only breaks S_B(b◁h) = S_H(h)▷S_B(b) with S_B the identity
    with pytest.raises(ActionInvalid) as exc:
        _crossed([I2, sw], [I2, I2])
    assert exc.value.which == "antipode"


def test_crossed_product_is_associative_and_unital():
    A = crossed_instance("swap").A
    one = A.unit
    for x in range(A.dim):
        e = {x: QQ.one}
        assert A.mul(one, e) == e and A.mul(e, one) == e
    for x, y, z in product(range(A.dim), repeat=3):
        ex, ey, ez = {x: QQ.one}, {y: QQ.one}, {z: QQ.one}
        assert A.mul(A.mul(ex, ey), ez) == A.mul(ex, A.mul(ey, ez))
