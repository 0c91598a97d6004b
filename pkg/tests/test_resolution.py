import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelmat.corpus import build_level
from levelmat.errors import CertificationError, ResolutionShapeError
from levelmat.groebner import ideal_equal
from levelmat.latent import LatentData, validate_latent
from levelmat.level import minors_fixing_lower_block, monomial_level, with_certification
from levelmat.matrices import GradedMap, PolyMatrix
from levelmat.resolution import (
    GradedComplex,
    HilbertNumerator,
    buchsbaum_eisenbud_check,
    build_resolution,
    hilbert_numerator,
    proportionality,
    recover_level_matrix,
    resolve_3generated,
    verify_complex,
)
from levelmat.ring import Field, PolyRing
from oracles import hilbert_function, series_from_numerator

R = PolyRing("x y z")
RP = PolyRing("x y z", Field(32003))

LEVELS = {
    "mono-m3": lambda: monomial_level(LatentData.checked(3, 3, (2, 2, 3), (1,))),
    "mono-m4": lambda: monomial_level(LatentData.checked(2, 4, (2, 2, 2, 2), (1, 1))),
    "mono-m5": lambda: monomial_level(LatentData.checked(3, 5, (3, 3, 3, 3, 3), (1, 1, 1))),
    "cuspidal-3": lambda: build_level("cuspidal", 3),
    "nodal-2": lambda: build_level("nodal", 2),
}


@pytest.fixture(scope="module", params=sorted(LEVELS))
def level(request):
    return LEVELS[request.param]()


@pytest.fixture(scope="module")
def complex_(level):
    return build_resolution(level)


def test_shifts_follow_the_latent_data(level, complex_):
    assert complex_.modules == level.latent.resolution_shifts()
    assert verify_complex(complex_)["ok"]


def test_acyclicity_criterion_holds(complex_):
    be = buchsbaum_eisenbud_check(complex_)
    assert be["acyclic"], be["diagnostics"]
    assert be["ranks"] == [1, 2, complex_.m - 2]


def test_hilbert_series_matches_standard_monomial_count(level, complex_):
    N = hilbert_numerator(complex_)
    gens = [f for f in minors_fixing_lower_block(level) if f]
    top = len(N.coefficients) + 4
    assert series_from_numerator(N.coefficients, 3, top) == hilbert_function(gens, top, 32003)


def test_multiplicity_matches_hilbert_function_growth(level, complex_):
    N = hilbert_numerator(complex_)
    gens = [f for f in minors_fixing_lower_block(level) if f]
    top = len(N.coefficients) + 4
    hf = hilbert_function(gens, top, 32003)
    assert N.value_at_one == 0 and N.first_derivative_at_one == 0
    # dim R/I = 1, so the Hilbert function settles at the multiplicity
    assert N.e == hf[top] == hf[top - 1]
    assert N.codimension == 2 and N.degree == N.e


def test_resolution_requires_certification(level):
    with pytest.raises(CertificationError):
        build_resolution(with_certification(level, ht_B=2))


def test_non_exact_complex_fails_the_criterion(complex_):
    d1, d2, d3 = complex_.maps
    zero = GradedMap(PolyMatrix.zeros(complex_.ring, d3.matrix.rows, d3.matrix.cols), d3.target_shifts, d3.source_shifts, check=False)
    broken = GradedComplex(complex_.ring, complex_.modules, (d1, d2, zero))
    be = buchsbaum_eisenbud_check(broken)
    assert not be["acyclic"]
    assert be["diagnostics"]


def test_complex_json_round_trip(complex_):
    again = GradedComplex.from_json(complex_.to_json())
    assert again.modules == complex_.modules
    assert all(a.matrix == b.matrix for a, b in zip(again.maps, complex_.maps))


def test_resolve_and_recover(level, complex_):
    gens = list(minors_fixing_lower_block(level))
    gens_p = [g.change_ring(RP) for g in gens]
    cx = resolve_3generated(gens_p)
    assert cx.modules == complex_.modules
    assert cx.certification["ok"]
    eta = recover_level_matrix(cx)
    assert eta.certified
    assert eta.latent == level.latent
    assert proportionality(list(minors_fixing_lower_block(eta)), cx.generators) is not None


def test_recover_regenerates_the_generators():
    level = LEVELS["mono-m3"]()
    gens = [g.change_ring(RP) for g in minors_fixing_lower_block(level)]
    eta = recover_level_matrix(resolve_3generated(gens))
    p = minors_fixing_lower_block(eta)
    assert ideal_equal(list(p), gens)


@pytest.mark.parametrize(
    "gens, message",
    [
        (["x^2", "y^2"], "three generators"),
        (["x^2", "y^3", "z^2"], "common degree"),
        (["x", "y", "z"], "at least 2"),
        (["x^2", "y^2", "z^2"], "height 3"),
        (["x^2", "x*y", "y^2"], "homological dimension 1"),
    ],
)
def test_resolve_3generated_rejects(gens, message):
    with pytest.raises(ResolutionShapeError, match=message):
        resolve_3generated([RP.parse(g) for g in gens])


def test_hilbert_numerator_of_twisted_cubic():
    N = hilbert_numerator([[0], [2, 2, 2], [3, 3]])
    assert N.coefficients == (1, 0, -3, 2)
    assert str(N) == "1 - 3*t^2 + 2*t^3"
    assert N.e == 3 and N.codimension == 2


def test_hilbert_numerator_rejects_negative_shifts():
    with pytest.raises(ValueError):
        hilbert_numerator([[0], [-1]])


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=8))
def test_derivatives_at_one_match_direct_sums(coeffs):
    N = HilbertNumerator(tuple(coeffs))
    assert N.value_at_one == sum(coeffs)
    assert N.first_derivative_at_one == sum(k * c for k, c in enumerate(coeffs))
    assert 2 * N.e == sum(k * (k - 1) * c for k, c in enumerate(coeffs))


@given(st.integers(2, 5), st.integers(3, 6), st.integers(0, 2**16))
def test_shift_sum_relation_on_valid_latent_data(d, m, seed):
    rng = random.Random(seed)
    delta = sorted(rng.randint(1, d) for _ in range(m))
    epsilon = [rng.randint(0, 3) for _ in range(m - 2)]
    latent = validate_latent(d, m, delta, epsilon)
    if isinstance(latent, LatentData):
        N = hilbert_numerator(latent.resolution_shifts())
        assert N.value_at_one == 0 and N.first_derivative_at_one == 0
