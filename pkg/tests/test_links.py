import random

import pytest

from wlcover.errors import ParseError, UnknownComponent
from wlcover.links import (
    LinkDiagram,
    annular_closure,
    builtin_diagram,
    diagram_faces,
    hopf_link,
    linking_number,
    parse_braid,
    parse_pd,
    split_union,
    trefoil,
    unknot,
    whitehead_diagram,
    wirtinger,
)
from wlcover.smith import AbelianInvariants


def test_braid_closures():
    hopf = parse_braid("1 1", 2)
    assert hopf.num_crossings == 2 and len(hopf.components) == 2
    tre = parse_braid("1 1 1", 2)
    assert tre.num_crossings == 3 and len(tre.components) == 1
    u = parse_braid("", 1)
    assert u.num_crossings == 0 and len(u.components) == 1


def test_braid_errors():
    with pytest.raises(ParseError):
        parse_braid("1 x", 2)
    with pytest.raises(ParseError):
        parse_braid("3", 2)


def test_whitehead_data():
    w = whitehead_diagram()
    assert w.names == ("W1", "W2")
    assert w.num_crossings == 5
    assert len(w.components) == 2
    assert linking_number(w, "W1", "W2") == 0


def test_arc_count_equals_crossing_count():
    for d in (whitehead_diagram(), trefoil(), builtin_diagram("figure-eight"), hopf_link()):
        assert len(d.arcs) == d.num_crossings
        edges = sorted(e for c in d.components for e in c)
        assert edges == sorted(d.edges)


def test_linking_numbers():
    h = hopf_link()
    assert abs(linking_number(h, *h.names)) == 1
    u = split_union(unknot(), unknot())
    assert linking_number(u, *u.names) == 0
    with pytest.raises(UnknownComponent):
        linking_number(h, "K1", "nope")


def test_wirtinger_abelianization_rank_is_component_count():
    g, mer = wirtinger(unknot())
    assert g.rank == 1 and g.relators == []
    for d in (trefoil(), whitehead_diagram(), hopf_link(), parse_braid("1 -2 1 -2", 3)):
        g, mer = wirtinger(d)
        assert g.rank == len(d.arcs)
        assert g.abelian_invariants() == AbelianInvariants(len(d.components))
        assert set(mer) == set(d.names)


def test_pd_parse_and_print_round_trip():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(2, 4)
        word = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(1, 7))]
        d = parse_braid(word, n)
        if d.loops:
            continue
        e = parse_pd(d.to_pd())
        assert [x.sign for x in e.crossings] == [x.sign for x in d.crossings]
        assert len(e.components) == len(d.components)
        assert e.same_as(d) or e.normalized().to_pd() == d.normalized().to_pd()


def test_pd_comments_and_inferred_signs():
    text = "# trefoil\n\nX[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]\n"
    d = parse_pd(text)
    assert d.num_crossings == 3 and len(d.components) == 1
    assert len({x.sign for x in d.crossings}) == 1


def test_pd_errors():
    with pytest.raises(ParseError):
        parse_pd("X[1,2,3]")
    with pytest.raises(ParseError):
        parse_pd("Y[1,2,3,4] 1")


def test_json_round_trip():
    for d in (whitehead_diagram(), annular_closure((1, -1), 2, 2)):
        e = LinkDiagram.from_json(d.to_json())
        assert e.to_json() == d.to_json()
        assert e.annulus == d.annulus


def test_faces_euler_characteristic():
    for d in (whitehead_diagram(), trefoil(), annular_closure((1,), 2, 3)):
        faces, _ = diagram_faces(d)
        assert len(faces) == d.num_crossings + 2


def test_annular_closure_links_axis():
    d = annular_closure((1,), 2, 2)
    assert d.names[-1] == "A"
    assert d.annulus.copies == 2
    total = sum(linking_number(d, "A", n) for n in d.names if n != "A")
    # the axis meets each of the 2 strands once
    assert total == -2


def test_builtins():
    assert builtin_diagram("figure_eight").num_crossings == 4
    with pytest.raises(KeyError):
        builtin_diagram("nothing")
