import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from levelmat.errors import RingMismatchError, ShapeError
from levelmat.matrices import (
    GradedMap,
    PolyMatrix,
    adjugate,
    compound,
    determinant,
    ideal_of_minors,
    minor,
    minors,
    rank_at_most,
    rank_ff,
    rank_symbolic,
    signed_maximal_minors,
)
from levelmat.ring import Field, PolyRing
from levelmat.selftest import random_matrix
from oracles import from_sympy, leibniz_det, sympy_matrix

R = PolyRing("x y z")
RP = PolyRing("x y z", Field(32003))


def matrices(ring, rows, cols, max_degree=1):
    return st.integers(0, 2**32).map(lambda s: random_matrix(ring, rows, cols, random.Random(s), max_degree))


def square(ring, max_n=5):
    return st.integers(1, max_n).flatmap(lambda n: matrices(ring, n, n))


def test_construction_and_access():
    M = PolyMatrix(R, [["x", "y"], [1, "z^2"]])
    assert M.shape == (2, 2)
    assert M[1, 0] == R.one
    assert M.T[0, 1] == M[1, 0]
    with pytest.raises(ShapeError):
        PolyMatrix(R, [["x"], ["x", "y"]])


def test_matmul_checks_shapes_and_rings():
    A = PolyMatrix(R, [["x", "y"]])
    with pytest.raises(ShapeError):
        A @ A
    with pytest.raises(RingMismatchError):
        A @ PolyMatrix(RP, [["x"], ["y"]])


@given(square(R))
def test_determinant_matches_leibniz(M):
    assert determinant(M) == leibniz_det(M)


@given(square(RP))
def test_determinant_methods_agree_mod_p(M):
    assert determinant(M, "cofactor") == determinant(M, "bareiss")


@given(square(R, 4))
def test_determinant_matches_sympy(M):
    assert determinant(M) == from_sympy(R, sympy_matrix(M).det(method="berkowitz"))


@pytest.mark.parametrize("p", [1, 2, 3])
@given(seed=st.integers(0, 2**32))
def test_cauchy_binet(p, seed):
    rng = random.Random(seed)
    r, s, t = (rng.randint(p, 4) for _ in range(3))
    M, N = random_matrix(R, r, s, rng), random_matrix(R, s, t, rng)
    assert compound(M @ N, p) == compound(M, p) @ compound(N, p)


def test_compound_indexing_is_lexicographic():
    M = PolyMatrix(R, [["x", "y", "z"], ["1", "x", "y"], ["0", "1", "x"]])
    C = compound(M, 2)
    assert C[0, 0] == minor(M, [0, 1], [0, 1])
    assert C[2, 1] == minor(M, [1, 2], [0, 2])
    assert compound(M, 3)[0, 0] == determinant(M)


def test_minor_requires_increasing_indices():
    M = PolyMatrix(R, [["x", "y"], ["z", "1"]])
    with pytest.raises(ShapeError):
        minor(M, [1, 0], [0, 1])
    with pytest.raises(ShapeError):
        minors(M, 3)


def test_ideal_of_minors_is_nonzero_and_deduplicated():
    M = PolyMatrix(R, [["x", "x", "0"]])
    assert ideal_of_minors(M, 1) == [R.parse("x")]


@given(st.integers(1, 4).flatmap(lambda c: matrices(R, c + 1, c)))
def test_signed_maximal_minors_annihilate(M):
    p = signed_maximal_minors(M)
    assert (PolyMatrix(R, [p]) @ M).is_zero()
    assert p[0] == determinant(M.delete_row(0))
    if M.rows > 1:
        assert p[1] == -determinant(M.delete_row(1))


def test_signed_minors_need_one_extra_row():
    with pytest.raises(ShapeError):
        signed_maximal_minors(PolyMatrix(R, [["x"]]))


@given(square(R, 4))
def test_adjugate_identity(M):
    adj = adjugate(M)
    I = PolyMatrix.identity(R, M.rows).scale(determinant(M))
    assert M @ adj == I
    assert adj @ M == I


@given(st.integers(0, 2**32))
def test_rank_over_fraction_field_matches_sympy(seed):
    rng = random.Random(seed)
    r, c, k = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 3)
    U = random_matrix(R, r, k, rng)
    V = random_matrix(R, k, c, rng)
    M = U @ V
    expected = sympy_matrix(M).rank()
    assert rank_ff(M, seed=seed) == expected
    assert rank_symbolic(M) == expected
    assert rank_at_most(M, expected)


def test_rank_examples():
    x, y, z = R.gens()
    skew = PolyMatrix(R, [[0, z, -y], [-z, 0, x], [y, -x, 0]])
    assert rank_ff(skew) == 2
    assert rank_ff(PolyMatrix.zeros(R, 2, 3)) == 0


def test_graded_map_checks_degrees():
    M = PolyMatrix(R, [["x^2", "y"]])
    g = GradedMap(M, [0], [2, 1])
    assert g.conforms()
    with pytest.raises(ShapeError):
        GradedMap(M, [0], [2, 2])
    assert GradedMap(M, [0], [2, 2], check=False).degree_violations() == [(0, 1, 2, 1)]


def test_json_round_trip():
    M = PolyMatrix(R, [["x^2 - 1/2*y*z", "0"], ["3", "z"]])
    assert PolyMatrix.from_json(R, M.to_json()) == M
