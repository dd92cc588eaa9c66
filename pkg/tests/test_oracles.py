import json
import random
from pathlib import Path

import pytest

from wlcover.errors import NotAKnot
from wlcover.fpgroups import branched_cover_h1
from wlcover.links import builtin_diagram, hopf_link, parse_braid, trefoil, unknot, whitehead_diagram
from wlcover.monodromy import Monodromy
from wlcover.oracles import (
    LaurentPoly,
    alexander_polynomial,
    cokernel_by_minors,
    cyclic_cover_h1_order,
    determinantal_divisors,
    goeritz_h1_double_cover,
    goeritz_matrix,
    integer_det,
)
from wlcover.perm import Permutation
from wlcover.smith import AbelianInvariants, abelian_invariants

FIXTURES = Path(__file__).parent / "fixtures"


def random_knots(seed, count, max_crossings=8):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice((2, 3, 4))
        word = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(1, max_crossings))]
        d = parse_braid(word, n)
        if len(d.components) == 1:
            out.append(d)
    return out


def test_alexander_examples():
    assert alexander_polynomial(unknot()).coefficient_list() == [1]
    assert alexander_polynomial(trefoil()).coefficient_list() == [1, -1, 1]
    fig8 = parse_braid([1, -2, 1, -2], 3)
    assert alexander_polynomial(fig8).coefficient_list() == [1, -3, 1]
    assert alexander_polynomial(builtin_diagram("figure-eight")).coefficient_list() == [1, -3, 1]


def test_alexander_needs_a_knot():
    with pytest.raises(NotAKnot):
        alexander_polynomial(hopf_link())


def test_alexander_normalization_properties():
    for d in random_knots(11, 25):
        p = alexander_polynomial(d)
        coeffs = p.coefficient_list()
        assert abs(sum(coeffs)) == 1
        assert coeffs == coeffs[::-1]


def test_laurent_arithmetic():
    t = LaurentPoly.monomial(1, 1)
    one = LaurentPoly.monomial(1, 0)
    p = t * t - t + one
    assert p(2) == 3
    assert (p - p).coeffs == ()
    assert (LaurentPoly.monomial(1, -2) * p).canonical() == p.canonical()


def test_cyclic_orders():
    for n in range(2, 7):
        assert cyclic_cover_h1_order(unknot(), n) == 1
    assert cyclic_cover_h1_order(trefoil(), 2) == 3
    assert cyclic_cover_h1_order(trefoil(), 6) == 0
    assert cyclic_cover_h1_order(parse_braid([1, -2, 1, -2], 3), 2) == 5


def test_cyclic_oracle_matches_pipeline_on_random_knots():
    for d in random_knots(5, 12):
        for n in range(2, 7):
            rho = Permutation.from_cycles([list(range(1, n + 1))], n)
            h1 = branched_cover_h1(Monodromy.constant(d, rho))
            assert h1.order == cyclic_cover_h1_order(d, n)


def test_goeritz_examples():
    assert goeritz_h1_double_cover(unknot()).is_trivial
    assert goeritz_h1_double_cover(hopf_link()) == AbelianInvariants(0, (2,))
    assert goeritz_h1_double_cover(trefoil()) == AbelianInvariants(0, (3,))


def test_goeritz_matches_frozen_whitehead_fixture():
    frozen = json.loads((FIXTURES / "whitehead_goeritz.json").read_text())
    w = whitehead_diagram()
    assert goeritz_matrix(w) == frozen["matrix"]
    got = goeritz_h1_double_cover(w)
    assert got.to_json() == frozen["h1"]
    assert got == AbelianInvariants(0, (8,))


def test_goeritz_matches_pipeline_on_random_links():
    rng = random.Random(8)
    done = 0
    while done < 25:
        n = rng.choice((2, 3, 4))
        word = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(1, 8))]
        if {abs(x) for x in word} != set(range(1, n)):
            continue  # split diagram
        done += 1
        d = parse_braid(word, n)
        m = Monodromy.constant(d, Permutation.from_cycles([[1, 2]], 2))
        assert goeritz_h1_double_cover(d) == branched_cover_h1(m)


def test_minor_gcds_and_determinants():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert integer_det(A) == -144
    assert determinantal_divisors(A) == [2, 12, 144]
    assert cokernel_by_minors(A) == abelian_invariants(A, 3)
    assert cokernel_by_minors([[0, 0]], 2) == AbelianInvariants(2)
