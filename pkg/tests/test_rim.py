import random
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from levelmat.corpus import build_level
from levelmat.errors import ShapeError
from levelmat.latent import LatentData
from levelmat.level import certify_level, monomial_level
from levelmat.matrices import PolyMatrix
from levelmat.rim import (
    build_K,
    height_equivalences,
    vasconcelos_identity_a,
    vasconcelos_identity_b,
    verify_rank2_compound,
)
from levelmat.ring import PolyRing
from levelmat.selftest import random_lower_block, random_matrix, rank2_skew
from oracles import leibniz_det, sympy_matrix

R = PolyRing("x y z")


@settings(max_examples=15)
@given(st.integers(3, 5), st.integers(0, 2**32))
def test_K_entries_match_independent_minors(m, seed):
    B = random_lower_block(R, m, random.Random(seed))
    K = build_K(B).K
    SB = sympy_matrix(B)
    for i, j in combinations(range(m), 2):
        keep = [k for k in range(m) if k not in (i, j)]
        delta = leibniz_det(B.submatrix(range(m - 2), keep))
        assert K[i, j] == (delta if (i + j) % 2 == 0 else -delta)
        assert K[j, i] == -K[i, j]
    assert sympy.expand(SB * sympy_matrix(K)) == sympy.zeros(m - 2, m)


def test_K_rejects_wrong_shape():
    with pytest.raises(ShapeError):
        build_K(PolyMatrix(R, [["x", "y"]]))


@given(st.integers(2, 6), st.integers(0, 2**32))
def test_rank_two_skew_compound(size, seed):
    M = rank2_skew(R, size, random.Random(seed))
    report = verify_rank2_compound(M)
    assert report.ok, report.to_json()
    assert len(report.columns) == size * (size - 1) // 2


def test_rank_two_identity_fails_for_rank_four():
    x, y, z = R.gens()
    M = PolyMatrix(R, [[0, x, y, z], [-x, 0, z, y], [-y, -z, 0, x], [-z, -y, -x, 0]])
    report = verify_rank2_compound(M)
    assert report.skew and report.rank_at_most_2 is False
    assert not report.ok


def test_rank_two_rejects_non_skew():
    M = random_matrix(R, 3, 3, random.Random(1))
    assert verify_rank2_compound(M).reason == "not skew-symmetric"


@pytest.fixture(
    scope="module",
    params=[
        ("monomial", (3, 3, (2, 2, 3), (1,))),
        ("monomial", (2, 4, (2, 2, 2, 2), (1, 1))),
        ("cuspidal", 2),
        ("nodal", 2),
    ],
    ids=["mono-m3", "mono-m4", "cuspidal-2", "nodal-2"],
)
def level(request):
    kind, arg = request.param
    if kind == "monomial":
        return monomial_level(LatentData.checked(*arg))
    return build_level(kind, arg)


def test_I2_of_AK_equals_product_ideal(level):
    assert vasconcelos_identity_a(level).holds()


def test_minor_times_delta_lies_in_p_ideal(level):
    report = vasconcelos_identity_b(level)
    assert report.ok
    assert report.checked == (level.latent.m + 1) * len(list(combinations(range(level.latent.m), 2)))


def test_height_conditions_agree(level):
    h = height_equivalences(level)
    assert h["consistent"]
    assert h["ht_Im_eta"] == 2 and h["ht_p"] == 2


def test_height_conditions_agree_on_a_non_level_candidate():
    # a repeated row in the upper block kills one fixed-block minor and pairs the others
    eta = monomial_level(LatentData.checked(3, 3, (2, 2, 3), (1,)))
    A = PolyMatrix(R, [eta.A.row(0), eta.A.row(1), eta.A.row(1)])
    h = height_equivalences(certify_level(eta.latent, A, eta.B, strict=False))
    assert h["consistent"]
    assert not h["p_height_2"]
