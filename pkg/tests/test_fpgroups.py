import itertools
import random

import pytest

from wlcover.errors import IncompleteTable, NotTransitive
from wlcover.fpgroups import (
    CosetTable,
    OrbifoldGroupSpec,
    branched_cover_h1,
    branched_cover_pi1,
    coset_table_from_monodromy,
    find_permutation_quotient,
    orbifold_group,
    reidemeister_schreier,
    tietze_simplify,
    try_trivialize,
    unbranched_cover_h1,
)
from wlcover.links import parse_braid, trefoil, unknot, whitehead_diagram
from wlcover.monodromy import Monodromy, search_monodromies
from wlcover.perm import Permutation, parse_permutation
from wlcover.smith import AbelianInvariants
from wlcover.words import FpGroup


def table_from_perms(perms):
    """Right action on points 0..n-1 where generator j sends i to perms[j](i+1)-1."""
    n = perms[0].degree
    rows = []
    for i in range(n):
        row = []
        for p in perms:
            row += [p(i + 1) - 1, p.inverse()(i + 1) - 1]
        rows.append(row)
    return CosetTable(rows, len(perms))


def test_orbifold_examples():
    for n in (1, 2, 5):
        g = orbifold_group(OrbifoldGroupSpec(unknot(), {"K1": n}))
        expect = AbelianInvariants(0, (n,)) if n > 1 else AbelianInvariants(0)
        assert g.abelian_invariants() == expect
    w = whitehead_diagram()
    assert orbifold_group(OrbifoldGroupSpec(w, {"W1": 4, "W2": 8})).abelian_invariants() == AbelianInvariants(0, (4, 8))
    assert orbifold_group(OrbifoldGroupSpec(w, {"W1": 1, "W2": 1})).abelian_invariants().is_trivial
    with pytest.raises(ValueError):
        OrbifoldGroupSpec(w, {"W1": 4})


def test_coset_tables_from_monodromies():
    w = whitehead_diagram()
    t = coset_table_from_monodromy(Monodromy.trivial(w))
    assert t.index == 1 and t.complete
    t = coset_table_from_monodromy(Monodromy.constant(w, parse_permutation("(1 2)")))
    assert t.index == 2
    assert all(row == [1, 1] * 5 for row in t.table[:1]) and all(row == [0, 0] * 5 for row in t.table[1:])
    for m in search_monodromies(w, 4, limit=5):
        t = coset_table_from_monodromy(m)
        t.check()
        for j, p in enumerate(m.images):
            # the inverse column holds the arc image itself
            assert [t.table[i][2 * j + 1] + 1 for i in range(4)] == list(p.images)
    with pytest.raises(NotTransitive):
        coset_table_from_monodromy(Monodromy.constant(trefoil(), parse_permutation("(1 2)", 3)))


def test_incomplete_table_rejected():
    g = FpGroup(["a"], [])
    with pytest.raises(IncompleteTable):
        reidemeister_schreier(g, CosetTable([[None, 0]], 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_nielsen_schreier_rank(n):
    rng = random.Random(n)
    free2 = FpGroup(["a", "b"], [])
    while True:
        a = Permutation(rng.sample(range(1, n + 1), n))
        b = Permutation(rng.sample(range(1, n + 1), n))
        table = table_from_perms([a, b])
        from wlcover.perm import is_transitive
        if is_transitive([a, b], n):
            break
    h = reidemeister_schreier(free2, table, simplify=False)
    assert h.rank == n + 1 and h.relators == []
    assert tietze_simplify(h).rank == n + 1


def test_index_one_recovers_presentation():
    g = FpGroup(["a", "b"], [(1, 2, -1, -2), (1, 1, 1)])
    h = reidemeister_schreier(g, table_from_perms([Permutation.identity(1)] * 2), simplify=False)
    assert h.rank == 2 and sorted(h.relators) == sorted(g.relators)


def test_branched_examples():
    for d in (whitehead_diagram(), trefoil()):
        assert branched_cover_pi1(Monodromy.trivial(d)).rank == 0
    tre = Monodromy.constant(trefoil(), parse_permutation("(1 2)"))
    assert branched_cover_h1(tre) == AbelianInvariants(0, (3,))
    w2 = Monodromy.constant(whitehead_diagram(), parse_permutation("(1 2)"))
    assert branched_cover_h1(w2).order == 8


def test_presentation_and_fast_h1_agree():
    for m in itertools.islice(search_monodromies(whitehead_diagram(), 5), 15):
        assert branched_cover_pi1(m).abelian_invariants() == branched_cover_h1(m)


def peripheral_orbits(m, name):
    """Preimage components of one component: orbits of its meridian and longitude."""
    d = m.diagram
    a0 = a = d.meridian_arc(name)
    lon = Permutation.identity(m.degree)
    by_under = {x.under_in: x for x in d.arc_crossings}
    while a in by_under:
        x = by_under[a]
        o = m.images[x.over]
        lon = lon * (o if x.sign > 0 else o.inverse())
        a = x.under_out
        if a == a0:
            break
    mer = m.meridian(name)
    assert lon * mer == mer * lon
    seen, count = set(), 0
    for i in range(1, m.degree + 1):
        if i not in seen:
            count += 1
            stack = [i]
            while stack:
                j = stack.pop()
                if j not in seen:
                    seen.add(j)
                    stack += [mer(j), lon(j)]
    return count


def test_unbranched_h1_rank_bounds_preimage_components():
    for m in itertools.islice(search_monodromies(parse_braid("1 1 -2 -2", 3), 4), 30):
        ncomp = sum(peripheral_orbits(m, n) for n in m.diagram.names)
        assert unbranched_cover_h1(m).rank >= ncomp


def test_try_trivialize_tristate():
    assert try_trivialize(FpGroup(["a"], [(1,)])).status == "trivial"
    r = try_trivialize(FpGroup(["a"], [(1, 1, 1)]))
    assert r.status == "nontrivial" and r.witness == AbelianInvariants(0, (3,))
    assert try_trivialize(branched_cover_pi1(Monodromy.trivial(trefoil()))).status == "trivial"
    # binary icosahedral-type perfect group: abelianization is trivial but A5 is a quotient
    g = FpGroup(["a", "b"], [(1, 1), (2, 2, 2), (1, 2) * 5])
    r = try_trivialize(g)
    assert r.status == "nontrivial" and r.witness is not None


def test_permutation_quotient_is_a_homomorphism():
    g = FpGroup(["a", "b"], [(1, 1), (2, 2, 2), (1, 2) * 5])
    images, _ = find_permutation_quotient(g, max_degree=5)
    assert len({p for p in images}) > 1 or not images[0].is_identity()
    for r in g.relators:
        acc = Permutation.identity(images[0].degree)
        for x in r:
            acc = acc * (images[abs(x) - 1] if x > 0 else images[abs(x) - 1].inverse())
        assert acc.is_identity()


def test_tietze_is_deterministic_and_keeps_abelianization():
    m = next(search_monodromies(whitehead_diagram(), 6))
    raw = branched_cover_pi1(m, simplify=False)
    a, b = tietze_simplify(raw), tietze_simplify(raw)
    assert a == b
    assert a.abelian_invariants() == raw.abelian_invariants()
