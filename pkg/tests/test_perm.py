import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlcover.errors import CapExceeded, DegreeMismatch, ParseError
from wlcover.perm import (
    CycleType,
    Permutation,
    canonical_representative,
    compose,
    cycle_decomposition,
    cycle_type,
    generate_group,
    is_transitive,
    orbit,
    parse_permutation,
    partitions,
    permutations_of_type,
    regular_representation,
)


def P(text, degree=None):
    return parse_permutation(text, degree)


def perms(degree):
    return st.permutations(list(range(1, degree + 1))).map(Permutation)


def test_construction_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([1, 1, 3])
    with pytest.raises(ValueError):
        Permutation([0, 1])


def test_right_factor_applies_first():
    # p sends 1 -> 2, q sends 2 -> 3; p(q(2)) must be p(3) = 3 and q(p(1)) = 3
    p = Permutation([2, 1, 3])
    q = Permutation([1, 3, 2])
    assert compose(p, q)(2) == p(q(2)) == 3
    assert compose(p, q)(1) == p(q(1)) == 2
    assert (p * q) == compose(p, q)
    assert compose(p, q) != compose(q, p)


def test_compose_examples():
    assert compose(Permutation.identity(2), P("(1 2)")) == P("(1 2)")
    p, q = P("(1 2)(3 4)"), P("(2 4)", 4)
    r = compose(p, q)
    # pointwise oracle
    assert [p(q(i)) for i in range(1, 5)] == list(r.images)
    assert list(r.images) == [2, 3, 4, 1]
    assert r == P("(1 2 3 4)")
    assert compose(P("(1 2)"), P("(1 2)")).is_identity()


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        compose(Permutation.identity(2), Permutation.identity(3))
    with pytest.raises(DegreeMismatch):
        generate_group([Permutation.identity(2), Permutation.identity(3)])


def test_cycle_types():
    assert cycle_type(Permutation.identity(3)) == CycleType((1, 1, 1))
    assert cycle_type(P("(1 2)(3 4 5 6)", 7)).lengths == (1, 2, 4)
    assert cycle_type(P("(1 2 3 4 5 6 7 8)")).lengths == (8,)
    assert cycle_decomposition(P("(1 3)", 3)) == [(1, 3), (2,)]


def test_cycle_type_over():
    assert CycleType((2, 2, 4)).over({1, 2, 4})
    assert not CycleType((2,)).over({4, 8})


def test_parse_forms_and_errors():
    assert P("[2,1,3]") == P("(1 2)", 3)
    assert P("()", 2).is_identity()
    assert P("(1 2)").to_cycle_string() == "(1 2)"
    with pytest.raises(ParseError):
        P("(1 2")
    with pytest.raises(ParseError):
        P("(1 x)")
    with pytest.raises(ParseError):
        P("(1 2)(2 3)")


def test_generate_group_examples():
    assert generate_group([P("(1 2)")]).order == 2
    s3 = generate_group([P("(1 2)", 3), P("(1 2 3)")])
    brute = {tuple(x) for x in itertools.permutations(range(1, 4))}
    assert {g.images for g in s3.elements} == brute
    c8 = generate_group([P("(1 2 3 4 5 6 7 8)")])
    assert c8.order == 8


def test_generate_group_identity_first_and_sorted():
    g = generate_group([P("(1 2 3 4)"), P("(1 3)", 4)])
    assert g.elements[0].is_identity()
    assert g.elements == sorted(g.elements)


def test_generate_group_cap():
    with pytest.raises(CapExceeded):
        generate_group([P("(1 2)", 6), P("(1 2 3 4 5 6)")], cap=100)


def test_transitivity():
    assert is_transitive([P("(1 2)")], 2)
    assert not is_transitive([P("(1 2)", 3)], 3)
    assert not is_transitive([P("(1 2)(3 4)"), P("(1 2)", 4)], 4)
    assert orbit([P("(1 2)(3 4)")], 1, 4) == {1, 2}


def test_partitions_count():
    # partition numbers p(n)
    assert [len(partitions(n)) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


def test_permutations_of_type_count():
    ct = CycleType((2, 2, 1))
    found = list(permutations_of_type(ct))
    brute = [p for p in itertools.permutations(range(1, 6)) if Permutation(p).cycle_type() == ct]
    assert len(found) == len(set(found)) == len(brute) == 15
    assert canonical_representative(ct).cycle_type() == ct


def test_regular_representation_examples():
    z2 = generate_group([P("(1 2)")])
    eta = regular_representation(z2)
    assert eta[z2.elements[0]].is_identity()
    assert eta[P("(1 2)")] == P("(1 2)")
    c8 = generate_group([P("(1 2 3 4 5 6 7 8)")])
    eta = regular_representation(c8)
    assert eta[P("(1 2 3 4 5 6 7 8)")].cycle_type().lengths == (8,)


def test_regular_representation_against_multiplication_table():
    g = generate_group([P("(1 2)", 4), P("(1 2 3 4)")])
    eta = regular_representation(g)
    idx = {x: i for i, x in enumerate(g.elements)}
    for y in g.elements:
        for i, x in enumerate(g.elements):
            # sheet x goes to "x then y"
            assert eta[y](i + 1) == idx[compose(y, x)] + 1
    for y, z in itertools.product(g.elements, repeat=2):
        assert eta[compose(y, z)] == compose(eta[y], eta[z])


@given(perms(6), perms(6), perms(6))
def test_associativity(p, q, r):
    assert compose(compose(p, q), r) == compose(p, compose(q, r))
    assert compose(p.inverse(), p).is_identity()


@given(perms(8))
def test_order_is_lcm(p):
    ct = p.cycle_type()
    assert sum(ct.lengths) == 8
    assert p.order() == math.lcm(*ct.lengths)
    assert (p ** p.order()).is_identity()


@settings(max_examples=40)
@given(st.lists(perms(5), min_size=1, max_size=3))
def test_regular_action_cycle_structure(gens):
    g = generate_group(gens)
    eta = regular_representation(g)
    assert len(set(eta.values())) == g.order
    for y in g.elements:
        k = y.order()
        assert eta[y].cycle_type().lengths == (k,) * (g.order // k)
