import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelmat.errors import ResourceLimitError, ShapeError
from levelmat.groebner import (
    Limits,
    MonomialOrder,
    buchberger,
    dimension,
    height,
    ideal_contains,
    ideal_equal,
    minimal_generators,
    syzygies,
)
from levelmat.level import random_form
from levelmat.matrices import PolyMatrix
from levelmat.ring import Field, PolyRing
from oracles import groebner_leading_exponents, krull_dimension

P = 32003
RP = PolyRing("x y z", Field(P))
R = PolyRing("x y z")


def random_forms(ring, rng, count, max_degree=3, density=0.5):
    return [random_form(ring, rng.randint(1, max_degree), rng, density) for _ in range(count)]


def nonzero_forms(ring, seed, count):
    forms = [f for f in random_forms(ring, random.Random(seed), count) if f]
    return forms or [ring.gens()[0]]


@settings(max_examples=25)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_leading_terms_match_sympy_mod_p(seed, count):
    gens = nonzero_forms(RP, seed, count)
    gb = buchberger(gens)
    assert sorted(gb.leading_exponents()) == sorted(groebner_leading_exponents(gens, P))


@settings(max_examples=15)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_leading_terms_match_sympy_over_rationals(seed, count):
    gens = [f for f in random_forms(R, random.Random(seed), count, max_degree=2) if f] or [R.gens()[1]]
    assert sorted(buchberger(gens).leading_exponents()) == sorted(groebner_leading_exponents(gens))


@settings(max_examples=25)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_dimension_matches_independent_oracle(seed, count):
    gens = nonzero_forms(RP, seed, count)
    assert dimension(gens) == krull_dimension(gens, P)


@settings(max_examples=25)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_generators_reduce_to_zero(seed, count):
    gens = nonzero_forms(RP, seed, count)
    gb = buchberger(gens)
    assert all(gb.contains(g) for g in gens)
    assert ideal_equal(list(gb.basis), gens)


def test_heights_of_standard_ideals():
    x, y, z = RP.gens()
    assert height([x, y]) == 2
    assert height([x * y, x * z]) == 1
    assert height([x**2, y**2, z**2]) == 3
    assert height([RP.one]) == math.inf
    assert dimension([RP.one]) == -1
    assert dimension([RP.zero]) == 3


def test_dimension_requires_homogeneous_input():
    with pytest.raises(ShapeError):
        dimension([RP.parse("x + y^2")])


def test_membership_and_normal_form():
    x, y, z = R.gens()
    gb = buchberger([x * y - z**2, y**2])
    assert ideal_contains(gb, (x * y - z**2) * x + y**2 * z)
    assert not ideal_contains(gb, x)
    assert gb.normal_form(x * y) == z**2


def test_orders_give_consistent_ideals():
    gens = [R.parse("x^2 - y*z"), R.parse("y^2 - x*z")]
    for kind in ("lex", "deglex", "degrevlex", "grevlex"):
        gb = buchberger(gens, order=kind)
        assert all(gb.contains(g) for g in gens)
    with pytest.raises(ValueError):
        MonomialOrder("weird")


def test_buchberger_is_deterministic():
    gens = nonzero_forms(RP, 11, 4)
    assert buchberger(gens).to_json() == buchberger(gens).to_json()


def test_pair_cap_raises_with_partial_stats():
    gens = [RP.parse("x^3 + y^2*z"), RP.parse("y^3 + x*z^2"), RP.parse("z^3 + x^2*y")]
    with pytest.raises(ResourceLimitError) as info:
        buchberger(gens, limits=Limits(max_pairs=1))
    assert info.value.stats


def test_koszul_syzygies_of_variables():
    x, y, z = R.gens()
    syz = syzygies([x, y, z])
    assert syz.count == 3
    assert syz.degrees == (2, 2, 2)
    assert (PolyMatrix(R, [[x, y, z]]) @ syz.matrix).is_zero()


def test_syzygies_of_complete_intersection():
    x, y, _ = R.gens()
    syz = syzygies([x**2, y**3])
    assert syz.count == 1 and syz.degrees == (5,)


def test_syzygy_shift_mismatch_is_rejected():
    x, y, _ = R.gens()
    with pytest.raises(ShapeError):
        syzygies([x, y * y], shifts=(1, 1))


@settings(max_examples=15)
@given(st.integers(0, 2**32))
def test_syzygies_annihilate_random_forms(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    gens = [random_form(RP, d, rng) for _ in range(3)]
    gens = [g for g in gens if g]
    if not gens:
        return
    syz = syzygies(gens)
    if syz.matrix is not None:
        assert (PolyMatrix(RP, [gens]) @ syz.matrix).is_zero()


def test_minimal_generators_drop_redundant_forms():
    x, y, _ = R.gens()
    assert minimal_generators([x, y, x * y, x + y]) == [x, y]
