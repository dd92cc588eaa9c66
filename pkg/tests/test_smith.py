import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wlcover.errors import ParseError
from wlcover.smith import (
    AbelianInvariants,
    abelian_invariants,
    abelianization_of_words,
    diagonal,
    smith_normal_form,
)
from wlcover.words import FpGroup, cyclic_reduce, invert_word, power_word, reduce_word


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(M):
    # Leibniz expansion, fine for the small sizes used here
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        total += (-1) ** inv * math.prod(M[i][perm[i]] for i in range(n))
    return total


def minor_gcds(A):
    m, n = len(A), len(A[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, det([[A[r][c] for c in cols] for r in rows]))
        out.append(g)
    return out


def check_certificate(A):
    D, U, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    m, n = len(A), len(A[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    d = diagonal(D)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert b == 0 if a == 0 else b % a == 0
    return d


def test_word_reduction():
    assert reduce_word([1, -1, 2]) == (2,)
    assert reduce_word([1, 2, -2, -1]) == ()
    assert cyclic_reduce([-1, 2, 1]) == (2,)
    assert invert_word([1, -2]) == (2, -1)
    assert power_word([1, 2], 2) == (1, 2, 1, 2)
    assert power_word([1, 2], -1) == (-2, -1)


def test_fpgroup_text_round_trip():
    g = FpGroup(["a", "b"], [(1, 2, -1, -2), (1, 1, 1)])
    assert g.to_text() == "gens: a b; rels: abAB, aaa"
    assert FpGroup.from_text(g.to_text()) == g
    assert FpGroup.from_json(g.to_json()) == g
    with pytest.raises(ParseError):
        FpGroup.from_text("gens: a; rels: ab")
    with pytest.raises(ValueError):
        FpGroup(["a"], [(2,)])


def test_examples():
    assert diagonal(smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0]) == [1, 1, 1]
    assert abelian_invariants([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3).is_trivial
    assert check_certificate([[2, 0], [0, 3]]) == [1, 6]
    assert abelian_invariants([[0]], 1) == AbelianInvariants(1)


def test_invariants_normalization_and_text():
    ab = AbelianInvariants.from_diagonal([1, 2, 0], 4)
    assert ab.rank == 2 and ab.torsion == (2,)
    assert str(AbelianInvariants(0, (4, 8))) == "Z/4 + Z/8"
    assert AbelianInvariants(0, (4, 8)).order == 32
    assert AbelianInvariants(1).order == 0


def test_random_certificates_match_minor_gcds():
    rng = random.Random(7)
    for _ in range(60):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        d = check_certificate(A)
        prods = list(itertools.accumulate(d, lambda a, b: a * b))
        assert prods[: len(minor_gcds(A))] == minor_gcds(A)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=1, max_size=8), min_size=0, max_size=6), st.integers(1, 4))
def test_sparse_abelianization_agrees_with_dense(words, ngens):
    words = [[((abs(x) - 1) % ngens + 1) * (1 if x > 0 else -1) for x in w if x] for w in words]
    g = FpGroup([f"g{i}" for i in range(ngens)], [tuple(w) for w in words])
    assert abelianization_of_words(g.relators, ngens) == abelian_invariants(g.relation_matrix(), ngens)
