"""Exact linear algebra: checked against sympy and hand-verified examples."""

import random
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from spherica import _linalg as la


def test_rref_rank_nullspace():
    a = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert la.rank(a) == 2
    ns = la.nullspace(a)
    assert len(ns) == 1
    for row in a:
        assert la.dot(row, ns[0]) == 0


def test_solve_and_inverse():
    a = [[2, 1], [1, 3]]
    x = la.solve(a, (5, 5))
    assert x == (Fraction(2), Fraction(1))
    inv = la.inverse(a)
    assert la.matmul(a, inv) == la.identity(2)
    assert la.solve([[1, 1], [1, 1]], (0, 1)) is None


@pytest.mark.parametrize("seed", range(8))
def test_smith_normal_form_against_sympy(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 4)
    n = rng.randint(1, 4)
    A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
    U, S, V, Vinv = la.smith_normal_form(A)
    # U A V = S
    left = la.matmul(la.matmul(U, A), V)
    assert [[int(x) for x in row] for row in left] == [list(r) for r in S]
    # V Vinv = I
    assert la.matmul(V, Vinv) == la.identity(n)
    # unimodular
    assert abs(sympy.Matrix(U).det()) == 1
    assert abs(sympy.Matrix(V).det()) == 1
    # diagonal, divisibility chain, matches sympy's invariant factors
    diag = [S[i][i] for i in range(min(m, n))]
    for i in range(m):
        for j in range(n):
            if i != j:
                assert S[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a != 0 and b != 0:
            assert b % a == 0
    expected = sympy_snf(sympy.Matrix(A))
    exp_diag = [int(expected[i, i]) for i in range(min(m, n))]
    assert [abs(d) for d in diag] == [abs(d) for d in exp_diag]


def test_integer_kernel_saturated():
    ker = la.integer_kernel([[2, 4]])
    assert len(ker) == 1
    assert la.content(ker[0]) == 1
    assert 2 * ker[0][0] + 4 * ker[0][1] == 0


def test_integer_row_basis_and_membership():
    rows = [[2, 0], [0, 3], [2, 3]]
    basis = la.integer_row_basis(rows)
    for r in rows:
        assert la.in_row_lattice(r, basis)
    assert la.in_row_lattice((2, 3), rows)
    assert not la.in_row_lattice((1, 0), rows)
    assert not la.in_row_lattice((0, 1), rows)


def test_saturate_rows():
    sat = la.saturate_rows([[2, 2]])
    assert len(sat) == 1
    assert tuple(map(abs, sat[0])) == (1, 1)


def test_simplex_basic():
    # min -x - y st x + y = 1, x,y >= 0  ->  value -1
    status, x, val = la.simplex_min([[1, 1]], [1], [-1, -1])
    assert status == "optimal"
    assert val == -1
    # infeasible: x + y = -1 with x,y >= 0
    status, _, _ = la.simplex_min([[1, 1]], [-1], [0, 0])
    assert status == "infeasible"
    # unbounded: min -x st x - y = 0
    status, _, _ = la.simplex_min([[1, -1]], [0], [-1, 0])
    assert status == "unbounded"


def test_cone_member():
    gens = [(1, 0), (1, 1)]
    assert la.cone_member(gens, [], (2, 1))
    assert la.cone_member(gens, [], (0, 0))
    assert not la.cone_member(gens, [], (0, 1))
    assert not la.cone_member(gens, [], (-1, 0))
    assert la.cone_member([], [(1, 1)], (-2, -2))
    assert not la.cone_member([], [(1, 1)], (1, 2))


def test_strict_negative_point():
    p = la.strict_negative_point([(1, 0), (0, 1)], [], 2)
    assert p is not None and p[0] < 0 and p[1] < 0
    assert la.strict_negative_point([(1, 0), (-1, 0)], [], 2) is None
    p = la.strict_negative_point([(1, 0, 0)], [(0, 0, 1)], 3)
    assert p is not None and p[0] < 0 and p[2] == 0


def test_cone_rays_quadrant():
    rays, lin = la.cone_rays([(1, 0), (0, 1)], 2)
    assert lin == []
    assert sorted(rays) == [(-1, 0), (0, -1)]


def test_cone_rays_halfplane():
    rays, lin = la.cone_rays([(1, 0)], 2)
    assert lin == [(0, 1)] or lin == [(0, -1)]
    assert rays == [(-1, 0)]
