"""Exact linear algebra over Q and over Q(eps)."""

import random
from fractions import Fraction

import pytest
import sympy

from waring import EpsScalar, PoleAtZero, SingularMatrixError
from waring.linalg import (
    EpsMatrix,
    rat_inverse,
    rat_nullspace,
    rat_rank,
    rat_rref,
    rat_solve,
    solve_vandermonde,
)
from conftest import F, esc


def rand_matrix(rng, rows, cols, height=6):
    return [[F(rng.randint(-height, height)) for _ in range(cols)] for _ in range(rows)]


def test_rref_shape_and_pivots():
    rng = random.Random(7)
    for _ in range(30):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = rand_matrix(rng, m, n)
        R, pivots = rat_rref(A)
        assert len(pivots) == rat_rank(A)
        assert pivots == sorted(pivots)
        for k, j in enumerate(pivots):
            assert R[k][j] == 1
            assert all(R[i][j] == 0 for i in range(m) if i != k)
        # idempotent
        R2, p2 = rat_rref(R)
        assert R2 == R and p2 == pivots


def test_rank_matches_sympy():
    rng = random.Random(19)
    for _ in range(25):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = rand_matrix(rng, m, n)
        expected = sympy.Matrix([[sympy.Rational(x) for x in row] for row in A]).rank()
        assert rat_rank(A) == expected


def test_nullspace_is_a_basis_of_the_kernel():
    rng = random.Random(29)
    for _ in range(25):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        A = rand_matrix(rng, m, n, height=3)
        ker = rat_nullspace(A)
        assert len(ker) == n - rat_rank(A)
        for v in ker:
            assert all(sum(row[j] * v[j] for j in range(n)) == 0 for row in A)
        if ker:
            assert rat_rank(ker) == len(ker)


def test_solve_unique_and_underdetermined():
    A = [[F(2), F(1)], [F(1), F(3)]]
    b = [F(5), F(10)]
    x = rat_solve(A, b)
    assert x == [F(1), F(3)]
    # consistent singular system still gets a solution
    A2 = [[F(1), F(2)], [F(2), F(4)]]
    x2 = rat_solve(A2, [F(3), F(6)])
    assert x2 is not None
    assert all(sum(r[j] * x2[j] for j in range(2)) == rhs for r, rhs in zip(A2, [F(3), F(6)]))
    # inconsistent system
    assert rat_solve(A2, [F(3), F(7)]) is None


def test_solve_random_roundtrip():
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        xs = [F(rng.randint(-5, 5)) for _ in range(n)]
        b = [sum(A[i][j] * xs[j] for j in range(n)) for i in range(n)]
        sol = rat_solve(A, b)
        assert sol is not None
        assert [sum(A[i][j] * sol[j] for j in range(n)) for i in range(n)] == b


def test_inverse():
    rng = random.Random(37)
    for _ in range(20):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        if rat_rank(A) < n:
            with pytest.raises(SingularMatrixError):
                rat_inverse(A)
            continue
        Ainv = rat_inverse(A)
        prod = [
            [sum(A[i][k] * Ainv[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        assert prod == [[F(1 if i == j else 0) for j in range(n)] for i in range(n)]


def test_vandermonde_interpolation_identity():
    rng = random.Random(41)
    for _ in range(20):
        n = rng.randint(1, 6)
        nodes = rng.sample(range(-8, 9), n)
        nodes = [F(t) for t in nodes]
        rhs = [F(rng.randint(-9, 9)) for _ in range(n)]
        c = solve_vandermonde(nodes, rhs)
        # moments sum_j c_j t_j^i reproduce the right-hand side
        for i in range(n):
            assert sum(cj * t**i for cj, t in zip(c, nodes)) == rhs[i]


def test_vandermonde_rejects_repeated_nodes():
    with pytest.raises(ValueError):
        solve_vandermonde([F(1), F(1)], [F(0), F(0)])


def test_eps_matrix_inverse_over_the_field():
    one = EpsScalar.one()
    e = EpsScalar.eps()
    M = EpsMatrix([[one, e], [EpsScalar.zero(), one]])
    assert M.is_unit_at_zero()
    Minv = M.inverse()
    assert M * Minv == EpsMatrix.identity(2)
    assert Minv.rows[0][1] == -e
    # eps on the diagonal: invertible over Q(eps), but not a unit at zero
    N = EpsMatrix([[e]])
    assert not N.is_unit_at_zero()
    assert N.inverse().rows[0][0] == EpsScalar.eps(-1)
    with pytest.raises(PoleAtZero):
        N.inverse().at_zero()


def test_eps_matrix_singular():
    one = EpsScalar.one()
    M = EpsMatrix([[one, one], [one, one]])
    with pytest.raises(SingularMatrixError):
        M.inverse()


def test_eps_matrix_at_zero_and_lifting():
    M = EpsMatrix([[1, F(1, 2)], [0, esc((0, 1), (1, 3))]])
    assert M.at_zero() == [[F(1), F(1, 2)], [F(0), F(1)]]
    assert M.is_unit_at_zero()


def test_eps_matrix_product_random():
    rng = random.Random(43)
    for _ in range(10):
        n = rng.randint(1, 3)
        def draw():
            return EpsMatrix(
                [[esc((0, rng.randint(-3, 3)), (1, rng.randint(-3, 3))) + EpsScalar.one()
                  for _ in range(n)] for _ in range(n)]
            )
        A, B = draw(), draw()
        left = (A * B).rows
        for i in range(n):
            for j in range(n):
                s = EpsScalar.zero()
                for k in range(n):
                    s = s + A.rows[i][k] * B.rows[k][j]
                assert left[i][j] == s
