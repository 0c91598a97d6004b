import pytest

from levelmat.corpus import build_level
from levelmat.errors import CertificationError, PreconditionError, ShapeError
from levelmat.latent import LatentData
from levelmat.level import (
    LevelMatrix,
    admissible_pattern,
    certify_level,
    check_degree_shape,
    embed_identity_level,
    lower_block_identity,
    minors_fixing_lower_block,
    monomial_level,
    random_candidate,
)
from levelmat.matrices import PolyMatrix, signed_maximal_minors
from levelmat.ring import Field, PolyRing

R = PolyRing("x y z")
RP = PolyRing("x y z", Field(32003))
L3 = LatentData.checked(3, 3, (2, 2, 3), (1,))


@pytest.fixture(scope="module")
def mono3():
    return monomial_level(L3)


def test_monomial_level_matches_expected_minors(mono3):
    assert mono3.certified
    assert mono3.certification.ht_eta == 2 and mono3.certification.ht_B == 3
    expected = [R.parse(s) for s in ("x^3+y^3-y*z^2", "-x*y^2+x*z^2", "x^2*y")]
    assert list(minors_fixing_lower_block(mono3)) == expected


@pytest.mark.parametrize(
    "d, m, delta, epsilon", [(2, 4, (2, 2, 2, 2), (1, 1)), (3, 4, (3, 3, 3, 3), (1, 2))]
)
def test_monomial_level_is_certified_for_larger_m(d, m, delta, epsilon):
    eta = monomial_level(LatentData.checked(d, m, delta, epsilon))
    assert eta.certified
    assert lower_block_identity(eta)


def test_monomial_level_rejects_nonpositive_band():
    with pytest.raises(PreconditionError):
        monomial_level(LatentData.checked(2, 4, (2, 2, 2, 3), (1, 1)))


def test_minor_relation_and_degrees(mono3):
    ps = signed_maximal_minors(mono3.eta)
    assert len(ps) == mono3.latent.m + 1
    assert (PolyMatrix(R, [ps]) @ mono3.eta).is_zero()
    assert lower_block_identity(mono3)


def test_degree_shape_reports_each_bad_entry(mono3):
    rows = [list(row) for row in mono3.A.entries]
    rows[0][0] = R.parse("x + y^2")
    rows[0][2] = R.parse("x^2")
    A = PolyMatrix(R, rows)
    report = check_degree_shape(L3, A, mono3.B)
    assert not report.ok
    bad = {(f["block"], f["row"], f["col"]): f["got"] for f in report.failures}
    assert bad == {("A", 1, 1): "inhomogeneous", ("A", 1, 3): 2}


def test_degree_shape_checks_block_sizes(mono3):
    with pytest.raises(ShapeError):
        check_degree_shape(L3, mono3.A.delete_row(0), mono3.B)


def test_zero_rule_for_negative_degrees():
    latent = LatentData.checked(2, 4, (2, 2, 2, 3), (1, 1))
    a_mask, b_mask = admissible_pattern(latent)
    assert a_mask[0] == [True, True, True, False]
    assert not b_mask[0][3]


def test_non_level_candidate_is_rejected():
    x, y, z = R.gens()
    A = PolyMatrix.identity(R, 3)
    B = PolyMatrix(R, [[x, x, y]])
    latent = LatentData.checked(1, 3, (1, 1, 1), (1,))
    with pytest.raises(CertificationError) as info:
        certify_level(latent, A, B)
    assert "ht" in str(info.value)
    lax = certify_level(latent, A, B, strict=False)
    assert not lax.certified


def test_authoritative_certification_over_rationals(mono3):
    eta = certify_level(L3, mono3.A, mono3.B, authoritative=True)
    assert eta.certification.field == "QQ"


def test_random_candidate_has_the_right_shape():
    A, B = random_candidate(L3, RP, seed=3)
    assert check_degree_shape(L3, A, B).ok


def test_identity_embedding_needs_a_proper_ideal():
    # with m = 3 the identity block has a unit maximal minor
    x, y, z = R.gens()
    latent = LatentData.checked(1, 3, (1, 1, 1), (1,))
    with pytest.raises(CertificationError, match="inf"):
        embed_identity_level(PolyMatrix(R, [[x, y, z]]), latent, 1)


def test_identity_embedding_nodal():
    eta = build_level("nodal", 2)
    assert eta.certified
    assert eta.A[0, 1].is_constant() and eta.A[0, 1]


def test_identity_embedding_preconditions(mono3):
    with pytest.raises(PreconditionError):
        embed_identity_level(mono3.B, L3, 4)
    with pytest.raises(PreconditionError):
        embed_identity_level(mono3.B, L3, 1)


def test_json_round_trip(mono3):
    again = LevelMatrix.from_json(mono3.to_json())
    assert again.A == mono3.A and again.B == mono3.B
    assert again.certification.shape
    assert not again.certified
