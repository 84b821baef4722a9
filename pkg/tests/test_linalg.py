from fractions import Fraction
import random

import pytest

from mhalgebroid import linalg as la
from mhalgebroid.linalg import QQ, QQ_I


def frac_rank(rows):
    """Plain Gaussian elimination on Fractions; independent oracle for rank."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def random_rows(rng, m, n, density=0.5):
    return [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < density else 0 for _ in range(n)]
            for _ in range(m)]


@pytest.mark.parametrize("seed", range(12))
def test_rank_kernel_against_fraction_elimination(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 6), rng.randint(1, 6)
    rows = random_rows(rng, m, n)
    M = la.from_rows(rows, QQ)
    r = la.rank(M)
    assert r == frac_rank(rows)
    ker = la.kernel_basis(M)
    assert len(ker) == n - r
    for v in ker:
        assert la.is_zero(M * la.from_columns([v], n, QQ))


@pytest.mark.parametrize("seed", range(8))
def test_solve_and_inverse(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(1, 5)
    while True:
        rows = random_rows(rng, n, n, 0.8)
        if frac_rank(rows) == n:
            break
    M = la.from_rows(rows, QQ)
    Minv = la.inverse(M)
    assert la.equal(M * Minv, la.eye(n, QQ))
    b = la.from_rows(random_rows(rng, n, 2, 1.0), QQ)
    X, ker = la.solve(M, b)
    assert not ker
    assert la.equal(M * X, b)


def test_inverse_of_singular_raises():
    M = la.from_rows([[1, 2], [2, 4]], QQ)
    with pytest.raises(la.NotBijective):
        la.inverse(M, "M")
    assert not la.is_bijective(M)


def test_inconsistent_system():
    M = la.from_rows([[1, 1], [1, 1]], QQ)
    b = la.from_rows([[1], [2]], QQ)
    with pytest.raises(la.InconsistentSystem):
        la.solve(M, b)


def test_scalars_round_trip():
    assert la.scalar("3/6") == QQ(1, 2)
    assert la.scalar_to_json(QQ(-4, 6)) == "-2/3"
    z = la.scalar({"re": "1/2", "im": "-1"}, QQ_I)
    assert la.scalar_to_json(z, QQ_I) == {"re": "1/2", "im": "-1/1"}
    assert la.conj(z) == QQ_I(QQ(1, 2), QQ(1))
    with pytest.raises(TypeError):
        la.scalar(0.5)
    with pytest.raises(ValueError):
        la.scalar({"re": 1, "im": 1}, QQ)


def test_matrix_json_round_trip():
    M = la.from_rows([[0, "1/3"], [2, 0], [0, 0]], QQ)
    d = la.matrix_to_json(M)
    assert d == {"shape": [3, 2], "entries": [[0, 1, "1/3"], [1, 0, "2/1"]]}
    assert la.equal(la.matrix_from_json(d, QQ), M)
    with pytest.raises(ValueError):
        la.matrix_from_json({"shape": [1, 1], "entries": [[1, 0, "1"]]}, QQ)


def test_kron_matches_definition():
    A = la.from_rows([[1, 2], [0, 3]], QQ)
    B = la.from_rows([[0, 1], [5, 0]], QQ)
    K = la.kron(A, B)
    a, b = la.to_rows(A), la.to_rows(B)
    for i in range(4):
        for j in range(4):
            assert la.to_rows(K)[i][j] == a[i // 2][j // 2] * b[i % 2][j % 2]


def test_quotient_coordinates_are_canonical():
    amb = la.LabeledSpace(("x", "y", "z"))
    q1 = la.make_quotient(amb, [{0: QQ(1), 1: QQ(-1)}], QQ)
    q2 = la.make_quotient(amb, [{0: QQ(2), 1: QQ(-2)}, {0: QQ(0)}], QQ)
    assert q1.same_as(q2)
    assert q1.dim == 2
    assert q1.project({0: QQ(1)}) == q1.project({1: QQ(1)})
    # section followed by projection is the identity on the quotient
    assert la.equal(q1.projection.matrix * q1.section.matrix, la.eye(2, QQ))


def test_descend_map_detects_ill_defined_maps():
    amb = la.LabeledSpace(("x", "y"))
    q = la.make_quotient(amb, [{0: QQ(1), 1: QQ(-1)}], QQ)
    full = la.make_quotient(amb, [], QQ)
    ok = la.LinMap(amb, amb, la.from_rows([[1, 1], [1, 1]], QQ))
    assert la.descend_map(ok, q, full).matrix.shape == (2, 1)
    bad = la.LinMap(amb, amb, la.eye(2, QQ))
    with pytest.raises(la.WellDefinednessViolated):
        la.descend_map(bad, q, full)


def test_hom_space_of_commuting_constraint():
    # matrices h with L h = h R for L = R = diag(1, 0): the diagonal ones
    D = la.from_rows([[1, 0], [0, 0]], QQ)
    homs = la.hom_space(2, 2, [(D, D)], QQ)
    assert len(homs) == 2
    for h in homs:
        assert la.equal(D * h, h * D)
