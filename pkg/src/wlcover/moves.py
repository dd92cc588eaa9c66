"""Local moves on colored diagrams that keep the covering manifold.

Every move rewrites a small disc or ball of the diagram, recolors the new
arcs by Wirtinger propagation from the untouched outside, and returns a
``MoveResult`` whose certificate records the degree change, a component
map and the first homology of the branched cover before and after.

Moves of degree zero replace a rational tangle by another one whose
two-sheeted or three-sheeted lift is again a ball; moves that raise the
degree first attach fresh sheets through split trivial circles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from . import _kernels
from .errors import (
    AxisNotSplit,
    InconsistentOrientation,
    NotAnnular,
    NotApplicable,
    RelationViolated,
    RepeatedTarget,
    TargetOutOfRange,
    WLCoverError,
)
from .fpgroups import branched_cover_h1
from .links import Crossing, LinkDiagram, annular_closure, diagram_faces
from .monodromy import Monodromy, branching_indices
from .perm import Permutation
from .smith import AbelianInvariants


class MoveKind(str, Enum):
    MAKE_DISJOINT = "MAKE_DISJOINT"
    POS_TO_NEG = "POS_TO_NEG"
    CROSSING_TO_ANNULUS = "CROSSING_TO_ANNULUS"
    DISJOINT_CROSSING_CHANGE = "DISJOINT_CROSSING_CHANGE"
    OVER_TO_UNDER_DISTINCT = "OVER_TO_UNDER_DISTINCT"
    OVER_TO_UNDER_EQUAL = "OVER_TO_UNDER_EQUAL"
    CYCLIC_BRANCH_SPLIT = "CYCLIC_BRANCH_SPLIT"
    ADD_TRIVIAL_SHEETS = "ADD_TRIVIAL_SHEETS"


DEGREE_DELTA = {
    MoveKind.MAKE_DISJOINT: 0,
    MoveKind.POS_TO_NEG: 0,
    MoveKind.CROSSING_TO_ANNULUS: 0,
    MoveKind.DISJOINT_CROSSING_CHANGE: 0,
    MoveKind.OVER_TO_UNDER_DISTINCT: 1,
    MoveKind.OVER_TO_UNDER_EQUAL: 2,
    MoveKind.CYCLIC_BRANCH_SPLIT: 0,
}


@dataclass
class MoveCertificate:
    kind: str
    site: object
    old_degree: int
    new_degree: int
    component_map: dict[str, list[str]]
    indices_before: dict[str, list[int]]
    indices_after: dict[str, list[int]]
    h1_before: AbelianInvariants | None = None
    h1_after: AbelianInvariants | None = None

    @property
    def h1_preserved(self) -> bool | None:
        if self.h1_before is None or self.h1_after is None:
            return None
        return self.h1_before == self.h1_after

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "site": self.site,
            "old_degree": self.old_degree,
            "new_degree": self.new_degree,
            "component_map": self.component_map,
            "indices_before": self.indices_before,
            "indices_after": self.indices_after,
        }
        if self.h1_before is not None:
            out["h1_before"] = self.h1_before.to_json()
            out["h1_after"] = self.h1_after.to_json()
            out["h1_preserved"] = self.h1_preserved
        return out


@dataclass
class MoveResult:
    monodromy: Monodromy
    certificate: MoveCertificate


# -- diagram surgery ------------------------------------------------------------------

# PD slot directions in a local frame: slot 0 south, then counterclockwise.
_RAY = ((0, -1), (1, 0), (0, 1), (-1, 0))


def _cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


class _Surgery:
    """Mutable copy of a colored diagram; old edge labels keep their colors."""

    def __init__(self, m: Monodromy):
        d = m.diagram
        self.source = m
        self.crossings: list[list] = [[list(x.pd), x.sign] for x in d.crossings]
        self.loops = list(d.loops)
        self.degree = m.degree
        self.colors = {e: m.images[d.arc_of_edge[e]] for e in d.edges}
        self.label = max(d.edges, default=0)

    def fresh(self) -> int:
        self.label += 1
        return self.label

    def crossing(self, ci) -> Crossing:
        pd, sign = self.crossings[ci]
        return Crossing(tuple(pd), sign)

    def add(self, ui, uo, oi, oo, sign) -> int:
        x = Crossing.from_strands(ui, uo, oi, oo, sign)
        self.crossings.append([list(x.pd), x.sign])
        return len(self.crossings) - 1

    def put(self, ci, ui, uo, oi, oo, sign):
        x = Crossing.from_strands(ui, uo, oi, oo, sign)
        self.crossings[ci] = [list(x.pd), x.sign]

    def split_end(self, ci, k) -> tuple[int, int]:
        """Give the end at slot ``k`` of crossing ``ci`` a new label; returns (old, new)."""
        old = self.crossings[ci][0][k]
        new = self.fresh()
        self.crossings[ci][0][k] = new
        return old, new

    def head_of(self, e) -> tuple[int, int]:
        for ci, (pd, sign) in enumerate(self.crossings):
            x = Crossing(tuple(pd), sign)
            for k in range(4):
                if pd[k] == e and x.is_in_slot(k):
                    return ci, k
        raise KeyError(e)

    def add_sheets(self, count: int):
        self.colors = {e: p.extend(p.degree + count) for e, p in self.colors.items()}
        self.degree += count

    def diagram(self) -> LinkDiagram:
        return LinkDiagram(tuple(self.crossing(ci) for ci in range(len(self.crossings))), tuple(self.loops))

    def recolor(self, kind, site, seeds: dict[int, Permutation] | None = None):
        """Current diagram (unnormalized) and its propagated arc images."""
        try:
            d = self.diagram()
        except (InconsistentOrientation, ValueError) as exc:
            raise NotApplicable(kind, site, f"rewrite produced an inconsistent diagram: {exc}") from exc
        known = dict(self.colors)
        if seeds:
            known.update(seeds)
        imgs: list = [None] * len(d.arcs)
        for e, arc in d.arc_of_edge.items():
            p = known.get(e)
            if p is None:
                continue
            if imgs[arc] is None:
                imgs[arc] = p._a
            elif imgs[arc] != p._a:
                raise NotApplicable(kind, site, "outside colors disagree along an arc")
        bad = _kernels.propagate([(x.over, x.under_in, x.under_out, x.sign) for x in d.arc_crossings], imgs)
        if bad >= 0:
            raise NotApplicable(kind, site, f"no consistent recoloring (crossing {bad + 1})")
        if any(p is None for p in imgs):
            raise NotApplicable(kind, site, "recoloring left arcs undetermined")
        return d, imgs

    def finish(self, kind, site, seeds: dict[int, Permutation] | None = None) -> Monodromy:
        """Recolor by propagation and return the normalized monodromy."""
        d, imgs = self.recolor(kind, site, seeds)
        mapping = d.normalizing_map()
        nd = d.normalized()
        by_edge = {mapping[e]: imgs[d.arc_of_edge[e]] for e in d.edges}
        images = tuple(Permutation._raw(by_edge[a[0]]) for a in nd.arcs)
        m = Monodromy(nd, self.degree, images)
        if not m.is_valid():
            raise RelationViolated(m.violated_crossing())
        self._mapping = mapping
        return m


def _name_components(old: Monodromy, new: Monodromy, mapping: dict[int, int]) -> tuple[Monodromy, dict[str, list[str]]]:
    """Carry component names across a rewrite through surviving edge labels."""
    od, nd = old.diagram, new.diagram
    owners: dict[int, set[int]] = {}
    for e, ne in mapping.items():
        if e in od.component_of_edge:
            owners.setdefault(nd.component_of_edge[ne], set()).add(od.component_of_edge[e])
    images_of: dict[int, set[int]] = {}
    for nc, ocs in owners.items():
        for oc in ocs:
            images_of.setdefault(oc, set()).add(nc)
    names: list[str | None] = [None] * len(nd.components)
    for nc in range(len(nd.components)):
        ocs = owners.get(nc, set())
        if len(ocs) == 1:
            (oc,) = ocs
            if len(images_of[oc]) == 1:
                names[nc] = od.names[oc]
    used = set(n for n in names if n)
    counter = 0
    for nc in range(len(names)):
        if names[nc] is None:
            while True:
                counter += 1
                cand = f"N{counter}"
                if cand not in used and cand not in od.names:
                    break
            names[nc] = cand
            used.add(cand)
    nd = nd.with_names(names)
    cmap = {od.names[oc]: sorted(names[nc] for nc in ncs) for oc, ncs in images_of.items()}
    for oc, name in enumerate(od.names):
        cmap.setdefault(name, [])
    return Monodromy(nd, new.degree, new.images), cmap


def _indices(m: Monodromy) -> dict[str, list[int]]:
    return {name: list(branching_indices(m, name).lengths) for name in m.diagram.names}


def _certify(kind, site, old: Monodromy, new: Monodromy, cmap, with_h1: bool) -> MoveResult:
    cert = MoveCertificate(
        kind=kind.value if isinstance(kind, MoveKind) else str(kind),
        site=site,
        old_degree=old.degree,
        new_degree=new.degree,
        component_map=cmap,
        indices_before=_indices(old),
        indices_after=_indices(new),
    )
    if with_h1:
        cert.h1_before = branched_cover_h1(old)
        cert.h1_after = branched_cover_h1(new)
    return MoveResult(new, cert)


def _conclude(kind, site, m: Monodromy, s: _Surgery, with_h1: bool, seeds=None) -> MoveResult:
    new = s.finish(kind, site, seeds)
    new, cmap = _name_components(m, new, s._mapping)
    return _certify(kind, site, m, new, cmap, with_h1)


# -- colors at a crossing -------------------------------------------------------------


def crossing_colors(m: Monodromy, ci: int) -> tuple[Permutation, Permutation, Permutation]:
    """(over, under-in, under-out) images at crossing ``ci`` (0-based)."""
    x = m.diagram.arc_crossings[ci]
    return m.images[x.over], m.images[x.under_in], m.images[x.under_out]


def _check_site(kind, m: Monodromy, site) -> int:
    if not isinstance(site, int) or isinstance(site, bool) or not 1 <= site <= m.diagram.num_crossings:
        raise NotApplicable(kind, site, f"site must be a crossing number in 1..{m.diagram.num_crossings}")
    return site - 1


def _pairwise_different(a, b, c) -> bool:
    return a != b and b != c and a != c


def _noncommuting_transpositions(a: Permutation, b: Permutation) -> bool:
    return a.is_transposition() and b.is_transposition() and a != b and a * b != b * a


def _disjoint_transpositions(a: Permutation, b: Permutation) -> bool:
    return a.is_transposition() and b.is_transposition() and a != b and a * b == b * a


def _braid_frame(x: Crossing) -> tuple[int, int, int, int]:
    """Labels (bottom-left, bottom-right, top-left, top-right) with both strands going up."""
    if x.sign > 0:
        return x.over_in, x.under_in, x.under_out, x.over_out
    return x.under_in, x.over_in, x.over_out, x.under_out


def _replace_by_twists(s: _Surgery, ci: int, twists: int):
    """Replace crossing ``ci`` by ``sigma^twists`` on the same two strands."""
    bl, br, tl, tr = _braid_frame(s.crossing(ci))
    left, right = bl, br
    n = abs(twists)
    for step in range(n):
        last = step == n - 1
        nl = tl if last else s.fresh()
        nr = tr if last else s.fresh()
        if twists > 0:
            args = (right, nl, left, nr, 1)
        else:
            args = (left, nr, right, nl, -1)
        if step == 0:
            s.put(ci, *args)
        else:
            s.add(*args)
        left, right = nl, nr


def pos_to_neg(m: Monodromy, site: int, with_h1: bool = True) -> MoveResult:
    """Replace a positive crossing by two negative ones (sigma -> sigma^-2).

    The two strands must carry different, non-commuting transpositions; their
    conjugation then has period three, so both tangles lift to a ball.
    """
    kind = MoveKind.POS_TO_NEG
    ci = _check_site(kind, m, site)
    over, under, _ = crossing_colors(m, ci)
    if m.diagram.crossings[ci].sign < 0:
        raise NotApplicable(kind, site, "crossing is already negative")
    if not _noncommuting_transpositions(over, under):
        raise NotApplicable(kind, site, "strands need different, non-commuting transpositions")
    s = _Surgery(m)
    _replace_by_twists(s, ci, -2)
    return _conclude(kind, site, m, s, with_h1)


def crossing_to_annulus(m: Monodromy, site: int, with_h1: bool = True) -> MoveResult:
    """Replace a negative crossing by a full positive twist (sigma^-1 -> sigma^2).

    The twisted pair of parallel strands bounds an annulus near the site.
    Colors must be different, non-commuting transpositions.
    """
    kind = MoveKind.CROSSING_TO_ANNULUS
    ci = _check_site(kind, m, site)
    over, under, _ = crossing_colors(m, ci)
    if m.diagram.crossings[ci].sign > 0:
        raise NotApplicable(kind, site, "crossing must be negative")
    if not _noncommuting_transpositions(over, under):
        raise NotApplicable(kind, site, "strands need different, non-commuting transpositions")
    s = _Surgery(m)
    _replace_by_twists(s, ci, 2)
    return _conclude(kind, site, m, s, with_h1)


def disjoint_crossing_change(m: Monodromy, site: int, with_h1: bool = True) -> MoveResult:
    """Switch a crossing whose strands carry disjoint transpositions."""
    kind = MoveKind.DISJOINT_CROSSING_CHANGE
    ci = _check_site(kind, m, site)
    over, under, _ = crossing_colors(m, ci)
    if not _disjoint_transpositions(over, under):
        raise NotApplicable(kind, site, "strands need disjoint transpositions")
    s = _Surgery(m)
    _switch(s, ci)
    return _conclude(kind, site, m, s, with_h1)


def _switch(s: _Surgery, ci: int):
    x = s.crossing(ci)
    s.put(ci, x.over_in, x.over_out, x.under_in, x.under_out, -x.sign)


# -- finger moves ---------------------------------------------------------------------


def _finger(s: _Surgery, ci: int, corner: int, e: int, face_left: bool, loop: bool = False):
    """Push a finger of edge ``e`` from the face at ``corner`` of crossing ``ci``
    once around the crossing, between its two layers.

    The finger passes over the under-strand and under the over-strand, so the
    isotopy adds four crossings and conjugates the colors next to ``ci``.
    """
    x = s.crossing(ci)
    if face_left:
        order = [(corner - j) % 4 for j in range(4)]
        tangent = lambda r: (r[1], -r[0])  # noqa: E731
    else:
        order = [(corner + 1 + j) % 4 for j in range(4)]
        tangent = lambda r: (-r[1], r[0])  # noqa: E731
    pieces = [s.fresh() for _ in range(3)]
    if loop:
        s.loops.remove(e)
        chain = [e, *pieces, e]
    else:
        hc, hk = s.head_of(e)
        last = s.fresh()
        s.crossings[hc][0][hk] = last
        chain = [e, *pieces, last]
    for j, k in enumerate(order):
        r = _RAY[k]
        f = tangent(r)
        incoming = x.is_in_slot(k)
        sd = (-r[0], -r[1]) if incoming else r
        old, new = s.split_end(ci, k)
        s_in, s_out = (old, new) if incoming else (new, old)
        f_in, f_out = chain[j], chain[j + 1]
        if k in (0, 2):
            s.add(s_in, s_out, f_in, f_out, 1 if _cross(f, sd) > 0 else -1)
        else:
            s.add(f_in, f_out, s_in, s_out, 1 if _cross(sd, f) > 0 else -1)


def _face_edges(d: LinkDiagram, ci: int, corner: int):
    """Edges on the boundary of the face at a corner, with side information."""
    faces, face_of = diagram_faces(d)
    incident = set(d.crossings[ci].pd)
    out = []
    seen = set()
    for cj, k in faces[face_of[(ci, corner)]]:
        x = d.crossings[cj]
        e = x.pd[k]
        if e in incident or e in seen:
            continue
        seen.add(e)
        out.append((e, not x.is_in_slot(k)))
    return out


def _colors_at(d: LinkDiagram, imgs, ci: int):
    x = d.arc_crossings[ci]
    return tuple(Permutation._raw(imgs[a]) for a in (x.over, x.under_in, x.under_out))


def make_disjoint(m: Monodromy, site: int, corner: int | None = None, edge: int | None = None,
                  with_h1: bool = True) -> MoveResult:
    """Make the three colors at a monochromatic crossing pairwise different.

    An edge from a neighbouring face is fingered around the crossing between
    its layers (an isotopy). Its color must not commute with the crossing's.
    """
    kind = MoveKind.MAKE_DISJOINT
    ci = _check_site(kind, m, site)
    over, under, out = crossing_colors(m, ci)
    if not (over == under == out):
        raise NotApplicable(kind, site, "the crossing's colors are not all equal")
    d = m.diagram
    corners = range(4) if corner is None else [corner]
    for i in corners:
        for e, left in _face_edges(d, ci, i):
            if edge is not None and e != edge:
                continue
            p = m.images[d.arc_of_edge[e]]
            if p * over == over * p:
                continue
            s = _Surgery(m)
            _finger(s, ci, i, e, left)
            nd, imgs = s.recolor(kind, site)
            if _pairwise_different(*_colors_at(nd, imgs, ci)):
                return _conclude(kind, {"crossing": site, "corner": i, "edge": e}, m, s, with_h1)
    raise NotApplicable(kind, site, "no neighbouring edge has a non-commuting color")


def _fresh_ring(s: _Surgery, ci: int, corner: int, color: Permutation):
    """A split trivial circle in the face at ``corner``, fingered around ``ci``."""
    e = s.fresh()
    s.loops.append(e)
    s.colors[e] = color
    _finger(s, ci, corner, e, True, loop=True)


def _common_point(a: Permutation, b: Permutation) -> int:
    (pa,) = [c for c in a.cycles() if len(c) == 2]
    (pb,) = [c for c in b.cycles() if len(c) == 2]
    return (set(pa) & set(pb)).pop()


def over_to_under_distinct(m: Monodromy, site: int, with_h1: bool = True) -> MoveResult:
    """Switch a crossing with pairwise different colors at the cost of one sheet.

    A circle colored ``(p, d+1)``, with ``p`` the point both transpositions
    move, is fingered between the layers; afterwards the colors at the
    crossing are disjoint and the crossing may be changed.
    """
    kind = MoveKind.OVER_TO_UNDER_DISTINCT
    ci = _check_site(kind, m, site)
    over, under, out = crossing_colors(m, ci)
    if not (_pairwise_different(over, under, out) and _noncommuting_transpositions(over, under)):
        raise NotApplicable(kind, site, "colors must be pairwise different transpositions")
    p = _common_point(over, under)
    n = m.degree + 1
    for corner in range(4):
        s = _Surgery(m)
        s.add_sheets(1)
        _fresh_ring(s, ci, corner, Permutation.transposition(p, n, n))
        nd, imgs = s.recolor(kind, site)
        a, b, _ = _colors_at(nd, imgs, ci)
        if _disjoint_transpositions(a, b):
            _switch(s, ci)
            return _conclude(kind, {"crossing": site, "corner": corner}, m, s, with_h1)
    raise NotApplicable(kind, site, "no placement of the new circle separates the colors")


def over_to_under_equal(m: Monodromy, site: int, with_h1: bool = True) -> MoveResult:
    """Switch a crossing whose colors are one transposition, adding two sheets."""
    kind = MoveKind.OVER_TO_UNDER_EQUAL
    ci = _check_site(kind, m, site)
    over, under, out = crossing_colors(m, ci)
    if not (over == under == out and over.is_transposition()):
        raise NotApplicable(kind, site, "colors must be one and the same transposition")
    (pq,) = [c for c in over.cycles() if len(c) == 2]
    d = m.degree
    for p, q in (pq, pq[::-1]):
        for c1 in range(4):
            for c2 in range(4):
                s = _Surgery(m)
                s.add_sheets(2)
                _fresh_ring(s, ci, c1, Permutation.transposition(q, d + 1, d + 2))
                _fresh_ring(s, ci, c2, Permutation.transposition(p, d + 2, d + 2))
                nd, imgs = s.recolor(kind, site)
                a, b, _ = _colors_at(nd, imgs, ci)
                if _disjoint_transpositions(a, b):
                    _switch(s, ci)
                    return _conclude(kind, {"crossing": site, "corners": [c1, c2]}, m, s, with_h1)
    raise NotApplicable(kind, site, "no placement of the new circles separates the colors")


# -- splitting a cyclic branch curve --------------------------------------------------


def dihedral_factors(rho: Permutation) -> tuple[Permutation, Permutation]:
    """Involutions ``(sigma, tau)`` with ``sigma * tau == rho`` for a single cycle ``rho``.

    ``tau`` fixes the first point of the cycle and reflects the rest.
    """
    cycles = [c for c in rho.cycles() if len(c) > 1]
    if len(cycles) != 1:
        raise ValueError("expected exactly one nontrivial cycle")
    (c,) = cycles
    n = len(c)
    imgs = list(range(1, rho.degree + 1))
    for i in range(n):
        imgs[c[i] - 1] = c[(-i) % n]
    tau = Permutation(imgs)
    return rho * tau, tau


def _double(s: _Surgery, comp: set[int], twists: int):
    """Replace the edges in ``comp`` by two parallel copies (left, right).

    Returns ``{edge: (left_label, right_label)}``; ``twists`` full twists
    are inserted on the first doubled edge to fix the framing.
    """
    copies = {e: (s.fresh(), s.fresh()) for e in sorted(comp)}
    old = [s.crossing(ci) for ci in range(len(s.crossings))]
    s.crossings = []

    for x in old:
        under_doubled = x.under_in in comp
        over_doubled = x.over_in in comp
        odir = 1 if x.sign > 0 else -1
        # copies as (offset, in_port, out_port); offsets order the visits
        if under_doubled:
            (li, ri), (lo, ro) = copies[x.under_in], copies[x.under_out]
            ucopies = [(-1, li, lo), (1, ri, ro)]
        else:
            ucopies = [(0, x.under_in, x.under_out)]
        if over_doubled:
            (li, ri), (lo, ro) = copies[x.over_in], copies[x.over_out]
            ocopies = [(odir, li, lo), (-odir, ri, ro)]
        else:
            ocopies = [(0, x.over_in, x.over_out)]
        # under copies run north and meet over copies by increasing y;
        # over copies run along odir and meet under copies by increasing x*odir
        u_order = {id(u): sorted(ocopies, key=lambda o: o[0]) for u in ucopies}
        o_order = {id(o): sorted(ucopies, key=lambda u: u[0] * odir) for o in ocopies}
        labels = {}
        for u in ucopies:
            seq = u_order[id(u)]
            chain = [u[1]] + [s.fresh() for _ in range(len(seq) - 1)] + [u[2]]
            for j, o in enumerate(seq):
                labels[(id(u), id(o), "u")] = (chain[j], chain[j + 1])
        for o in ocopies:
            seq = o_order[id(o)]
            chain = [o[1]] + [s.fresh() for _ in range(len(seq) - 1)] + [o[2]]
            for j, u in enumerate(seq):
                labels[(id(u), id(o), "o")] = (chain[j], chain[j + 1])
        for u in ucopies:
            for o in ocopies:
                ui, uo = labels[(id(u), id(o), "u")]
                oi, oo = labels[(id(u), id(o), "o")]
                s.add(ui, uo, oi, oo, x.sign)

    loops = [e for e in s.loops if e in comp]
    for e in loops:
        s.loops.remove(e)
        s.loops.extend(copies[e])
    if twists:
        e0 = min(comp)
        left, right = copies[e0]
        # cut both copies just after their tail and splice the twist in
        nl, nr = s.fresh(), s.fresh()
        for lab, new in ((left, nl), (right, nr)):
            if lab in s.loops:
                s.loops.remove(lab)
                continue
            hc, hk = s.head_of(lab)
            s.crossings[hc][0][hk] = new
        if left not in {l for pd, _ in s.crossings for l in pd}:
            # a doubled loop: the copies close through the twist itself
            nl, nr = left, right
        a, b = left, right
        steps = 2 * abs(twists)
        for j in range(steps):
            last = j == steps - 1
            na = nl if last else s.fresh()
            nb = nr if last else s.fresh()
            # positions swap at every crossing; ``a`` is on the left
            if twists > 0:
                s.add(b, na, a, nb, 1)
            else:
                s.add(a, nb, b, na, -1)
            a, b = na, nb
    for e in comp:
        s.colors.pop(e, None)
    return copies


def _self_writhe(d: LinkDiagram, ci: int) -> int:
    comp = d.component_of_edge
    return sum(x.sign for x in d.crossings if comp[x.over_in] == ci and comp[x.under_in] == ci)


def cyclic_branch_split(m: Monodromy, component, with_h1: bool = True) -> MoveResult:
    """Replace a component whose meridian is one ``l``-cycle by two parallel,
    unlinked copies colored by involutions whose product is that cycle."""
    kind = MoveKind.CYCLIC_BRANCH_SPLIT
    d = m.diagram
    try:
        ci = d.component_index(component)
    except WLCoverError as exc:
        raise NotApplicable(kind, component, str(exc)) from exc
    rho = m.meridian(ci)
    cyc = [c for c in rho.cycles() if len(c) > 1]
    if len(cyc) != 1 or len(cyc[0]) < 3:
        raise NotApplicable(kind, component, "meridian must be a single cycle of length at least 3")
    sigma, tau = dihedral_factors(rho)
    edges = set(d.components[ci])
    first = d.components[ci][0]
    w = _self_writhe(d, ci)
    name = d.names[ci]
    # a strand passing under both copies meets the right copy first from
    # either side, so the composite conjugation is right * left
    for left_color, right_color in ((tau, sigma),):
        s = _Surgery(m)
        copies = _double(s, edges, -w)
        seeds = {copies[first][0]: left_color, copies[first][1]: right_color}
        try:
            new = s.finish(kind, component, seeds)
        except NotApplicable:
            continue
        new, cmap = _name_components(m, new, s._mapping)
        # name the two copies after the original component
        names = list(new.diagram.names)
        nd = new.diagram
        for side, lab in zip("ab", copies[first]):
            names[nd.component_of_edge[s._mapping[lab]]] = f"{name}{side}"
        new = Monodromy(nd.with_names(names), new.degree, new.images)
        cmap[name] = [f"{name}a", f"{name}b"]
        return _certify(kind, name, m, new, cmap, with_h1)
    raise NotApplicable(kind, component, "the longitude does not commute with the split colors")


# -- composing with a cyclic cover ----------------------------------------------------


def _block_lift(p: Permutation, block: int, d: int, l: int) -> list[int]:
    """0-based images of ``p`` acting on sheets ``block*d .. block*d+d-1``."""
    a = list(range(d * l))
    for i, v in enumerate(p._a):
        a[block * d + i] = block * d + v
    return a


def _composite_seeds(m: Monodromy, l: int):
    """Strand meridians and axis meridian of the composite, on sheets ``(j, i)``."""
    d = m.diagram
    ann = d.annulus
    k = ann.copies // l
    deg = m.degree
    strands = {}
    for p in range(ann.strands):
        a = list(range(deg * l))
        for j in range(l):
            sec = ann.sections[j * k][p]
            blk = _block_lift(m.images[d.arc_of_edge[sec]], j, deg, l)
            for i in range(deg):
                a[j * deg + i] = blk[j * deg + i]
        strands[p] = Permutation._raw(tuple(a))
    wrap = m.images[d.arc_of_edge[ann.axis_edge]]
    t = [0] * (deg * l)
    for j in range(l):
        for i in range(deg):
            if j + 1 < l:
                t[j * deg + i] = (j + 1) * deg + i
            else:
                t[j * deg + i] = wrap._a[i]
    return strands, Permutation._raw(tuple(t))


def compose_cyclic(m: Monodromy, l: int, with_h1: bool = True) -> MoveResult:
    """Compose the cover with the ``l``-fold cyclic cover branched over the braid axis.

    ``m`` lives on an annular diagram ``closure(w^(k*l))`` plus axis; the result
    is the degree ``l*d`` monodromy of the composite map over
    ``closure(w^k)`` plus axis. Sheet ``(j, i)`` is sheet ``i`` over sector
    ``j``; strand meridians act inside each sector and the axis meridian
    shifts sectors, closing up through the axis image of ``m``.
    """
    kind = "COMPOSE_CYCLIC"
    d = m.diagram
    ann = d.annulus
    if ann is None:
        raise NotAnnular("the diagram carries no annular presentation")
    if l < 1 or ann.copies % l:
        raise NotAnnular(f"{ann.copies} copies of the tangle cannot be divided into {l} sectors")
    axis_name = d.names[d.component_of_edge[ann.axis_edge]]
    axis_ci = d.component_of_edge[ann.axis_edge]
    # the axis must stay a single unknotted circle away from the tangle
    if any(d.component_of_edge[x.over_in] == axis_ci and d.component_of_edge[x.under_in] == axis_ci
           for x in d.crossings):
        raise AxisNotSplit("the axis crosses itself")
    k = ann.copies // l
    names = [n for n in d.names if n != axis_name]
    down = annular_closure(ann.word, ann.strands, k)
    down = down.with_names(_carry_names(down, names, axis_name))
    h_before = branched_cover_h1(m) if with_h1 and m.is_transitive() else None
    strands, t = _composite_seeds(m, l)
    imgs: list = [None] * len(down.arcs)
    da = down.annulus
    for p, e in enumerate(da.sections[0]):
        imgs[down.arc_of_edge[e]] = strands[p]._a
    imgs[down.arc_of_edge[da.axis_edge]] = t._a
    bad = _kernels.propagate([(x.over, x.under_in, x.under_out, x.sign) for x in down.arc_crossings], imgs)
    if bad < 0 and all(p is not None for p in imgs):
        new = Monodromy(down, m.degree * l, tuple(Permutation._raw(p) for p in imgs))
        if new.is_valid():
            cmap = {n: [n] for n in d.names}
            res = _certify(kind, {"sectors": l}, m, new, cmap, False)
            if h_before is not None:
                res.certificate.h1_before = h_before
                res.certificate.h1_after = branched_cover_h1(new)
            return res
    raise AxisNotSplit("no consistent lift: the axis is linked with the cover in an unsupported way")


def _carry_names(down: LinkDiagram, names, axis_name):
    """Names for the quotient diagram (tangle components keep their order)."""
    out = []
    it = iter(n for n in names)
    axis_ci = down.component_of_edge[down.annulus.axis_edge]
    for ci in range(len(down.components)):
        if ci == axis_ci:
            out.append(axis_name)
        else:
            out.append(next(it, None) or f"K{ci + 1}")
    if len(set(out)) != len(out):
        out = [f"K{i + 1}" if i != axis_ci else axis_name for i in range(len(out))]
    return out


# -- fresh sheets ----------------------------------------------------------------------


def add_trivial_sheets(m: Monodromy, targets, with_h1: bool = True) -> MoveResult:
    """Add a split unknot colored ``(i_1, d+1)(i_2, d+2)...(i_s, d+s)``.

    ``targets`` lists distinct old sheets ``i_k``; an int ``s`` means sheets
    ``1..s``. Each new sheet meets the cover only along the new circle, so the
    covering manifold is unchanged.
    """
    kind = MoveKind.ADD_TRIVIAL_SHEETS
    d = m.degree
    if isinstance(targets, int) and not isinstance(targets, bool):
        targets = list(range(1, targets + 1))
    targets = [int(i) for i in targets]
    if len(set(targets)) != len(targets):
        raise RepeatedTarget(f"targets must be distinct, got {targets}")
    for i in targets:
        if not 1 <= i <= d:
            raise TargetOutOfRange(f"target {i} is not a sheet of the degree-{d} cover")
    if not targets:
        cmap = {n: [n] for n in m.diagram.names}
        return _certify(kind, {"targets": []}, m, m, cmap, with_h1)
    top = d + len(targets)
    s = _Surgery(m)
    s.add_sheets(len(targets))
    e = s.fresh()
    s.loops.append(e)
    s.colors[e] = Permutation.from_cycles([[i, d + k + 1] for k, i in enumerate(targets)], top)
    return _conclude(kind, {"targets": targets}, m, s, with_h1)


def remove_split_circle(m: Monodromy, component, degree: int | None = None) -> Monodromy:
    """Drop a crossingless component and optionally restrict to sheets ``1..degree``."""
    d = m.diagram
    ci = d.component_index(component)
    (e,) = d.components[ci] if len(d.components[ci]) == 1 else (None,)
    if e is None or e not in d.loops:
        raise NotApplicable("REMOVE", component, "component has crossings")
    keep = [i for i in range(len(d.components)) if i != ci]
    nd = LinkDiagram(d.crossings, tuple(x for x in d.loops if x != e), tuple(d.names[i] for i in keep))
    by_edge = {f: m.images[d.arc_of_edge[f]] for f in nd.edges}
    images = [by_edge[a[0]] for a in nd.arcs]
    deg = m.degree
    if degree is not None:
        images = [p.restrict(degree) for p in images]
        deg = degree
    return Monodromy(nd, deg, tuple(images))


# -- dispatch and scripts ---------------------------------------------------------------

_MOVES = {
    MoveKind.MAKE_DISJOINT: make_disjoint,
    MoveKind.POS_TO_NEG: pos_to_neg,
    MoveKind.CROSSING_TO_ANNULUS: crossing_to_annulus,
    MoveKind.DISJOINT_CROSSING_CHANGE: disjoint_crossing_change,
    MoveKind.OVER_TO_UNDER_DISTINCT: over_to_under_distinct,
    MoveKind.OVER_TO_UNDER_EQUAL: over_to_under_equal,
    MoveKind.CYCLIC_BRANCH_SPLIT: cyclic_branch_split,
    MoveKind.ADD_TRIVIAL_SHEETS: add_trivial_sheets,
}


def apply_move(m: Monodromy, kind, site, with_h1: bool = True, **options) -> MoveResult:
    """Apply one move; ``site`` is a 1-based crossing, a component, or sheet data."""
    try:
        kind = MoveKind(kind.upper() if isinstance(kind, str) else kind)
    except ValueError as exc:
        raise NotApplicable(kind, site, "unknown move kind") from exc
    return _MOVES[kind](m, site, with_h1=with_h1, **options)


def applicable_sites(m: Monodromy, kind) -> list:
    """Sites where a move's color preconditions hold (placement may still fail)."""
    kind = MoveKind(kind)
    if kind is MoveKind.CYCLIC_BRANCH_SPLIT:
        out = []
        for name in m.diagram.names:
            cyc = [c for c in m.meridian(name).cycles() if len(c) > 1]
            if len(cyc) == 1 and len(cyc[0]) >= 3:
                out.append(name)
        return out
    if kind is MoveKind.ADD_TRIVIAL_SHEETS:
        return [[1]]
    out = []
    for ci, x in enumerate(m.diagram.crossings):
        over, under, uo = crossing_colors(m, ci)
        ok = {
            MoveKind.MAKE_DISJOINT: over == under == uo,
            MoveKind.POS_TO_NEG: x.sign > 0 and _noncommuting_transpositions(over, under),
            MoveKind.CROSSING_TO_ANNULUS: x.sign < 0 and _noncommuting_transpositions(over, under),
            MoveKind.DISJOINT_CROSSING_CHANGE: _disjoint_transpositions(over, under),
            MoveKind.OVER_TO_UNDER_DISTINCT: _noncommuting_transpositions(over, under),
            MoveKind.OVER_TO_UNDER_EQUAL: over == under and over.is_transposition(),
        }[kind]
        if ok:
            out.append(ci + 1)
    return out


def run_script(m: Monodromy, script, with_h1: bool = True) -> tuple[Monodromy, list[MoveCertificate]]:
    """Apply a move script: a JSON list (or ``{"moves": [...]}``) of
    ``{"kind": ..., "site": ...}`` steps; ``"COMPOSE_CYCLIC"`` takes ``"sectors"``."""
    if isinstance(script, str):
        script = json.loads(script)
    if isinstance(script, dict):
        script = script["moves"]
    certs = []
    for step in script:
        step = dict(step)
        kind = step.pop("kind")
        if str(kind).upper() == "COMPOSE_CYCLIC":
            res = compose_cyclic(m, int(step.pop("sectors")), with_h1=with_h1)
        else:
            site = step.pop("site", None)
            res = apply_move(m, kind, site, with_h1=with_h1, **step)
        m = res.monodromy
        certs.append(res.certificate)
    return m, certs
