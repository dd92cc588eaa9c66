"""Random instance generators shared by the move tests and the acceptance suite."""

import random

from wlcover.errors import NotApplicable
from wlcover.links import parse_braid
from wlcover.monodromy import Monodromy, search_monodromies
from wlcover.moves import (
    MoveKind,
    add_trivial_sheets,
    applicable_sites,
    apply_move,
)
from wlcover.perm import CycleType, Permutation

CROSSING_KINDS = (
    MoveKind.MAKE_DISJOINT,
    MoveKind.POS_TO_NEG,
    MoveKind.CROSSING_TO_ANNULUS,
    MoveKind.DISJOINT_CROSSING_CHANGE,
    MoveKind.OVER_TO_UNDER_DISTINCT,
    MoveKind.OVER_TO_UNDER_EQUAL,
)


def random_braid(rng, strands, length):
    return [rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length)]


def simple_covers(rng, max_degree=6, limit=4):
    """Endless stream of simple (transposition) monodromies over random braid closures."""
    while True:
        n = rng.choice((2, 3, 4))
        d = parse_braid(random_braid(rng, n, rng.randint(2, 7)), n)
        deg = rng.randint(2, max_degree)
        ct = [CycleType((2,) + (1,) * (deg - 2))]
        found = list(search_monodromies(d, deg, {nm: ct for nm in d.names}, limit=limit))
        rng.shuffle(found)
        yield from found


def cyclic_branch_cases(rng, max_degree=8):
    """Monodromies with a component whose meridian is a single l-cycle, l >= 3."""
    while True:
        n = rng.choice((1, 2, 3))
        word = random_braid(rng, n, rng.randint(0, 4)) if n > 1 else []
        d = parse_braid(word, n)
        deg = rng.randint(3, max_degree)
        l = rng.randint(3, deg)
        ct = CycleType((l,) + (1,) * (deg - l))
        if rng.random() < 0.5 or deg == l:
            rho = Permutation.from_cycles([list(range(1, l + 1))], deg)
            found = [Monodromy.constant(d, rho)] if deg == l else []
        else:
            found = list(search_monodromies(d, deg, {d.names[0]: [ct]}, limit=3))
        for m in found:
            if not m.is_transitive():
                continue
            sites = applicable_sites(m, MoveKind.CYCLIC_BRANCH_SPLIT)
            if sites:
                yield m, rng.choice(sites)


def move_instances(kind, count, seed=0, max_degree=8):
    """``count`` successful applications of ``kind`` as (input, result, site) triples."""
    rng = random.Random(seed)
    kind = MoveKind(kind)
    out = []
    if kind is MoveKind.CYCLIC_BRANCH_SPLIT:
        for m, site in cyclic_branch_cases(rng, max_degree):
            try:
                res = apply_move(m, kind, site)
            except NotApplicable:
                continue
            out.append((m, res, site))
            if len(out) >= count:
                return out
    if kind is MoveKind.ADD_TRIVIAL_SHEETS:
        for m in simple_covers(rng, max_degree=5, limit=2):
            s = rng.randint(0, min(3, m.degree))
            targets = sorted(rng.sample(range(1, m.degree + 1), s))
            out.append((m, add_trivial_sheets(m, targets), targets))
            if len(out) >= count:
                return out
    top = max_degree - {MoveKind.OVER_TO_UNDER_DISTINCT: 1, MoveKind.OVER_TO_UNDER_EQUAL: 2}.get(kind, 0)
    for m in simple_covers(rng, max_degree=min(top, 6)):
        sites = applicable_sites(m, kind)
        rng.shuffle(sites)
        for site in sites[:2]:
            try:
                res = apply_move(m, kind, site)
            except NotApplicable:
                continue
            out.append((m, res, site))
            if len(out) >= count:
                return out
