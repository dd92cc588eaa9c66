"""Oriented link diagrams, PD/braid parsing and Wirtinger presentations.

A crossing is stored as its PD tuple ``X[a, b, c, d]``: the four edge labels
counterclockwise starting from the incoming under-edge, so ``a`` enters and
``c`` leaves along the under-strand. For a positive crossing the over-strand
enters at ``d`` and leaves at ``b``; for a negative one it enters at ``b``.

Edges are the segments between consecutive crossings. Arcs (the Wirtinger
generators) are maximal unions of edges glued across over-passes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import InconsistentOrientation, ParseError, UnknownComponent
from .words import FpGroup


@dataclass(frozen=True)
class Crossing:
    pd: tuple[int, int, int, int]
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("crossing sign must be +1 or -1")
        object.__setattr__(self, "pd", tuple(int(x) for x in self.pd))

    @property
    def under_in(self) -> int:
        return self.pd[0]

    @property
    def under_out(self) -> int:
        return self.pd[2]

    @property
    def over_in(self) -> int:
        return self.pd[3] if self.sign > 0 else self.pd[1]

    @property
    def over_out(self) -> int:
        return self.pd[1] if self.sign > 0 else self.pd[3]

    def is_in_slot(self, k: int) -> bool:
        """Whether PD slot ``k`` is an incoming end."""
        return k == 0 or (k == 3 if self.sign > 0 else k == 1)

    @classmethod
    def from_strands(cls, under_in, under_out, over_in, over_out, sign):
        if sign > 0:
            return cls((under_in, over_out, under_out, over_in), 1)
        return cls((under_in, over_in, under_out, over_out), -1)


@dataclass(frozen=True)
class ArcCrossing:
    """A crossing in terms of arc indices (0-based)."""

    over: int
    under_in: int
    under_out: int
    sign: int


@dataclass(frozen=True)
class AnnularData:
    """A closed braid ``word^copies`` drawn together with its axis.

    ``sections[j]`` lists the strand edges entering copy ``j`` of the word,
    by position; ``axis_edge`` is the axis edge that passes over the strands.
    """

    word: tuple[int, ...]
    strands: int
    copies: int
    sections: tuple[tuple[int, ...], ...]
    axis_edge: int

    def remap(self, mapping: dict[int, int]) -> "AnnularData":
        return AnnularData(
            self.word,
            self.strands,
            self.copies,
            tuple(tuple(mapping[e] for e in sec) for sec in self.sections),
            mapping[self.axis_edge],
        )

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "strands": self.strands,
            "copies": self.copies,
            "sections": [list(sec) for sec in self.sections],
            "axis_edge": self.axis_edge,
        }

    @classmethod
    def from_json(cls, data) -> "AnnularData":
        return cls(
            tuple(data["word"]),
            int(data["strands"]),
            int(data["copies"]),
            tuple(tuple(sec) for sec in data["sections"]),
            int(data["axis_edge"]),
        )


@dataclass(frozen=True, eq=False)
class LinkDiagram:
    """A closed oriented link projection.

    ``loops`` lists edge labels of crossingless components. ``names`` labels
    the components in their canonical order (by least edge label).
    """

    crossings: tuple[Crossing, ...]
    loops: tuple[int, ...] = ()
    names: tuple[str, ...] | None = None
    annulus: AnnularData | None = None

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "loops", tuple(self.loops))
        self._check()
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"K{i + 1}" for i in range(len(self.components))))
        else:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != len(self.components) or len(set(self.names)) != len(self.names):
                raise ValueError("component names must be distinct, one per component")

    # -- structure ---------------------------------------------------------

    def _check(self):
        ins: dict[int, tuple[int, int]] = {}
        outs: dict[int, tuple[int, int]] = {}
        for ci, x in enumerate(self.crossings):
            for k, e in enumerate(x.pd):
                target = ins if x.is_in_slot(k) else outs
                if e in target:
                    raise InconsistentOrientation(f"edge {e} enters or leaves twice (crossing {ci + 1})")
                target[e] = (ci, k)
        if set(ins) != set(outs):
            bad = sorted(set(ins) ^ set(outs))
            raise InconsistentOrientation(f"edges without consistent ends: {bad}")
        if set(self.loops) & set(ins) or len(set(self.loops)) != len(self.loops):
            raise ValueError("loop labels must be fresh and distinct")
        object.__setattr__(self, "_head", ins)
        object.__setattr__(self, "_tail", outs)

    @property
    def head(self) -> dict[int, tuple[int, int]]:
        """Edge -> (crossing index, PD slot) where the edge ends."""
        return self._head

    @property
    def tail(self) -> dict[int, tuple[int, int]]:
        return self._tail

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(set(self._head) | set(self.loops)))

    def next_edge(self, e: int) -> int:
        if e in self.loops:
            return e
        ci, k = self._head[e]
        return self.crossings[ci].pd[(k + 2) % 4]

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edge cycles, ordered by least label, each starting at its least label."""
        seen: set[int] = set()
        comps = []
        for e in self.edges:
            if e in seen:
                continue
            cyc = [e]
            seen.add(e)
            f = self.next_edge(e)
            while f != e:
                if f in seen:
                    raise InconsistentOrientation("edge cycles overlap")
                cyc.append(f)
                seen.add(f)
                f = self.next_edge(f)
            comps.append(tuple(cyc))
        return tuple(comps)

    @cached_property
    def component_of_edge(self) -> dict[int, int]:
        return {e: i for i, c in enumerate(self.components) for e in c}

    @cached_property
    def _arc_data(self):
        parent = {e: e for e in self.edges}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        for x in self.crossings:
            a, b = find(x.over_in), find(x.over_out)
            if a != b:
                parent[a] = b
        order: dict[int, int] = {}
        arcs: list[list[int]] = []
        for comp in self.components:
            for e in comp:
                r = find(e)
                if r not in order:
                    order[r] = len(arcs)
                    arcs.append([])
                arcs[order[r]].append(e)
        arc_of = {e: order[find(e)] for e in self.edges}
        return tuple(tuple(a) for a in arcs), arc_of

    @property
    def arcs(self) -> tuple[tuple[int, ...], ...]:
        """Arcs as edge tuples; arc ``i`` is Wirtinger generator ``i + 1``."""
        return self._arc_data[0]

    @property
    def arc_of_edge(self) -> dict[int, int]:
        return self._arc_data[1]

    @cached_property
    def arc_crossings(self) -> tuple[ArcCrossing, ...]:
        arc = self.arc_of_edge
        return tuple(ArcCrossing(arc[x.over_in], arc[x.under_in], arc[x.under_out], x.sign) for x in self.crossings)

    @cached_property
    def component_of_arc(self) -> tuple[int, ...]:
        return tuple(self.component_of_edge[a[0]] for a in self.arcs)

    def component_index(self, component) -> int:
        if isinstance(component, int) and not isinstance(component, bool):
            if 0 <= component < len(self.components):
                return component
        elif component in self.names:
            return self.names.index(component)
        raise UnknownComponent(component)

    def meridian_arc(self, component) -> int:
        """Arc index of the distinguished meridian of a component (its first edge's arc)."""
        ci = self.component_index(component)
        return self.arc_of_edge[self.components[ci][0]]

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    def __len__(self):
        return len(self.crossings)

    # -- derived quantities ---------------------------------------------------

    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    def with_names(self, names: Sequence[str]) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.loops, tuple(names), self.annulus)

    def same_as(self, other: "LinkDiagram") -> bool:
        """Equality of crossings, loops and names up to relabelling edges."""
        a, b = self.normalized(), other.normalized()
        return a.crossings == b.crossings and a.loops == b.loops and a.names == b.names

    def normalizing_map(self) -> dict[int, int]:
        mapping: dict[int, int] = {}
        for comp in self.components:
            for e in comp:
                mapping[e] = len(mapping) + 1
        return mapping

    def normalized(self) -> "LinkDiagram":
        """Relabel edges 1..n along components in canonical order."""
        mapping = self.normalizing_map()
        crossings = [Crossing(tuple(mapping[e] for e in x.pd), x.sign) for x in self.crossings]
        crossings.sort(key=lambda x: x.pd)
        annulus = self.annulus.remap(mapping) if self.annulus else None
        return LinkDiagram(tuple(crossings), tuple(mapping[e] for e in self.loops), self.names, annulus)

    # -- serialization ------------------------------------------------------

    def to_pd(self) -> str:
        lines = [f"X[{','.join(map(str, x.pd))}] {'+' if x.sign > 0 else '-'}" for x in self.crossings]
        lines += [f"O[{e}]" for e in self.loops]
        return "\n".join(lines) + ("\n" if lines else "")

    def to_json(self) -> dict:
        out = {
            "crossings": [{"pd": list(x.pd), "sign": x.sign} for x in self.crossings],
            "loops": list(self.loops),
            "arcs": [list(a) for a in self.arcs],
            "components": [{"name": n, "edges": list(c)} for n, c in zip(self.names, self.components)],
        }
        if self.annulus:
            out["annulus"] = self.annulus.to_json()
        return out

    @classmethod
    def from_json(cls, data) -> "LinkDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        crossings = tuple(Crossing(tuple(c["pd"]), int(c["sign"])) for c in data["crossings"])
        annulus = AnnularData.from_json(data["annulus"]) if data.get("annulus") else None
        d = cls(crossings, tuple(data.get("loops", ())), None, annulus)
        comps = data.get("components")
        if comps:
            by_edge = {min(c["edges"]): c["name"] for c in comps}
            names = tuple(by_edge.get(min(c), n) for c, n in zip(d.components, d.names))
            d = d.with_names(names)
        return d

    def __repr__(self):
        return f"LinkDiagram({len(self.crossings)} crossings, {len(self.components)} components)"


# -- parsing -------------------------------------------------------------------

_PD_LINE = re.compile(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*([+-]|[+-]?1)?\s*$")
_LOOP_LINE = re.compile(r"O\[\s*(\d+)\s*\]\s*$")


def infer_signs(pds: Sequence[tuple[int, int, int, int]], signs: Sequence[int | None]) -> list[int]:
    """Solve for crossing signs so every edge has one in-end and one out-end.

    Each edge whose two ends are both over-slots ties two signs together; free
    choices default to the KnotAtlas labelling rule (``b == d + 1`` positive).
    """
    n = len(pds)
    ends: dict[int, list[tuple[int, int]]] = {}
    for ci, pd in enumerate(pds):
        for k, e in enumerate(pd):
            ends.setdefault(e, []).append((ci, k))
    for e, lst in ends.items():
        if len(lst) != 2:
            raise ParseError(f"edge {e} appears {len(lst)} times; expected 2")

    # slot k of crossing c is "in" iff: k==0, or (k==3 and s=+), or (k==1 and s=-)
    def is_in(k, s):
        return k == 0 or (k == 3 if s > 0 else k == 1)

    result: list[int | None] = list(signs)
    adj: dict[int, list[tuple[int, int, int, int]]] = {i: [] for i in range(n)}
    for e, ((c1, k1), (c2, k2)) in ends.items():
        adj[c1].append((k1, c2, k2, e))
        adj[c2].append((k2, c1, k1, e))

    def default(ci):
        a, b, c, d = pds[ci]
        return -1 if d == b + 1 else 1

    order = [i for i in range(n) if result[i] is not None] + [i for i in range(n) if result[i] is None]
    for start in order:
        if result[start] is None:
            result[start] = default(start)
        stack = [start]
        while stack:
            ci = stack.pop()
            s = result[ci]
            for k, cj, kj, e in adj[ci]:
                mine = is_in(k, s)
                if kj in (0, 2):
                    if (kj == 0) == mine:
                        raise InconsistentOrientation(f"edge {e} has inconsistent orientation")
                    continue
                # the other end must have the opposite role
                sj = next(t for t in (1, -1) if is_in(kj, t) != mine)
                if result[cj] is None:
                    result[cj] = sj
                    stack.append(cj)
                elif result[cj] != sj:
                    raise InconsistentOrientation(f"crossing {cj + 1}: sign inconsistent with orientation along edge {e}")
    return [int(s) for s in result]


def parse_pd(text: str, names: Sequence[str] | None = None) -> LinkDiagram:
    """Parse ``X[a,b,c,d] sign`` lines (sign optional; ``O[e]`` for a free loop)."""
    pds, signs, loops = [], [], []
    offset = 0
    for line in text.splitlines(keepends=True):
        raw = line.split("#", 1)[0].strip()
        if raw:
            m = _PD_LINE.match(raw)
            if m:
                pd = tuple(int(m.group(i)) for i in range(1, 5))
                if any(x <= 0 for x in pd):
                    raise ParseError("arc labels must be positive integers", offset)
                pds.append(pd)
                s = m.group(5)
                signs.append(None if s is None else (1 if s.lstrip("+") in ("", "1") and not s.startswith("-") else -1))
            else:
                ml = _LOOP_LINE.match(raw)
                if not ml:
                    raise ParseError(f"cannot parse {raw!r}", offset)
                loops.append(int(ml.group(1)))
        offset += len(line)
    resolved = infer_signs(pds, signs)
    crossings = tuple(Crossing(pd, s) for pd, s in zip(pds, resolved))
    return LinkDiagram(crossings, tuple(loops), tuple(names) if names else None)


def parse_braid(word, strands: int, names: Sequence[str] | None = None) -> LinkDiagram:
    """Closure of a braid word (signed generator indices, ``i`` = sigma_i).

    Strands run upward; sigma_i crosses positions i and i+1 positively.
    """
    if isinstance(word, str):
        toks = word.split()
        try:
            gens = [int(t) for t in toks]
        except ValueError as exc:
            raise ParseError(f"bad braid token in {word!r}") from exc
    else:
        gens = [int(g) for g in word]
    if strands < 1:
        raise ParseError("need at least one strand")
    for pos, g in enumerate(gens):
        if g == 0 or abs(g) >= strands:
            raise ParseError(f"generator {g} out of range for {strands} strands", pos)
    label = strands
    pos = list(range(1, strands + 1))
    raw = []
    for g in gens:
        i = abs(g) - 1
        left, right = pos[i], pos[i + 1]
        nl, nr = label + 1, label + 2
        label += 2
        if g > 0:
            raw.append(Crossing.from_strands(right, nl, left, nr, 1))
        else:
            raw.append(Crossing.from_strands(left, nr, right, nl, -1))
        pos[i], pos[i + 1] = nl, nr
    # close: the final label at each position is the initial one
    alias = {pos[p]: p + 1 for p in range(strands)}
    crossings = tuple(Crossing(tuple(alias.get(e, e) for e in x.pd), x.sign) for x in raw)
    used = {e for x in crossings for e in x.pd}
    loops = tuple(p for p in range(1, strands + 1) if p not in used)
    d = LinkDiagram(crossings, loops).normalized()
    return d.with_names(names) if names else d


def annular_closure(word, strands: int, copies: int = 1, names: Sequence[str] | None = None) -> LinkDiagram:
    """Closure of ``word^copies`` together with its braid axis.

    The axis is drawn as a circle around the strands just below the braid:
    it passes under every strand and then back over every strand. It is the
    last component, named ``A`` unless ``names`` says otherwise.
    """
    gens = [int(g) for g in (word.split() if isinstance(word, str) else word)]
    if strands < 0 or copies < 1:
        raise ParseError("need a nonnegative strand count and at least one copy")
    if strands == 0:
        if gens:
            raise ParseError("an empty tangle has no generators")
        ann = AnnularData((), 0, copies, ((),) * copies, 1)
        return LinkDiagram((), (1,), tuple(names) if names else ("A",), ann)
    for pos, g in enumerate(gens):
        if g == 0 or abs(g) >= strands:
            raise ParseError(f"generator {g} out of range for {strands} strands", pos)
    n = strands
    # strand p enters the axis region on label p, passes over the axis
    # (label n+p between the two axis crossings) and leaves on 2n+p
    ring = [3 * n + 1 + i for i in range(2 * n)]  # ring[0] runs from top(1) back to bottom(1)
    raw = []
    for p in range(1, n + 1):
        a_in, a_out = ring[p - 1], ring[p]
        raw.append(Crossing.from_strands(a_in, a_out, p, n + p, -1))
    for p in range(n, 0, -1):
        a_in = ring[n + (n - p)]
        a_out = ring[(n + (n - p) + 1) % (2 * n)]
        raw.append(Crossing.from_strands(n + p, 2 * n + p, a_in, a_out, -1))
    label = 5 * n
    pos = [2 * n + p for p in range(1, n + 1)]
    sections = []
    for _ in range(copies):
        sections.append(tuple(pos))
        for g in gens:
            i = abs(g) - 1
            left, right = pos[i], pos[i + 1]
            nl, nr = label + 1, label + 2
            label += 2
            if g > 0:
                raw.append(Crossing.from_strands(right, nl, left, nr, 1))
            else:
                raw.append(Crossing.from_strands(left, nr, right, nl, -1))
            pos[i], pos[i + 1] = nl, nr
    alias = {pos[p]: p + 1 for p in range(n)}
    crossings = tuple(Crossing(tuple(alias.get(e, e) for e in x.pd), x.sign) for x in raw)
    sections = [tuple(alias.get(e, e) for e in sec) for sec in sections]
    axis_edge = ring[n]
    ann = AnnularData(tuple(gens), n, copies, tuple(sections), axis_edge)
    d = LinkDiagram(crossings, (), None, ann)
    axis_comp = d.component_of_edge[axis_edge]
    if names is None:
        names = [f"K{i + 1}" for i in range(len(d.components) - 1)]
        names.insert(axis_comp, "A")
    d = d.with_names(names)
    return d.normalized()


# -- invariants --------------------------------------------------------------------


def linking_number(d: LinkDiagram, c1, c2) -> int:
    i, j = d.component_index(c1), d.component_index(c2)
    if i == j:
        raise UnknownComponent(f"linking number needs two distinct components, got {c1!r} twice")
    comp = d.component_of_edge
    total = 0
    for x in d.crossings:
        if {comp[x.over_in], comp[x.under_in]} == {i, j}:
            total += x.sign
    if total % 2:
        raise InconsistentOrientation("odd signed crossing count between components")
    return total // 2


def wirtinger(d: LinkDiagram) -> tuple[FpGroup, dict[str, int]]:
    """Wirtinger presentation: one generator per arc, one relator per crossing.

    Positive crossing: ``out = over^-1 * in * over``; negative: ``out = over * in * over^-1``.
    Returns the group and a map from component name to its meridian generator (1-based).
    """
    gens = [f"a{i + 1}" for i in range(len(d.arcs))]
    rels = []
    for x in d.arc_crossings:
        o, a, b = x.over + 1, x.under_in + 1, x.under_out + 1
        if x.sign > 0:
            rels.append((-o, a, o, -b))
        else:
            rels.append((o, a, -o, -b))
    meridians = {name: d.meridian_arc(i) + 1 for i, name in enumerate(d.names)}
    return FpGroup(gens, rels), meridians


def diagram_faces(d: LinkDiagram) -> tuple[list[list[tuple[int, int]]], dict[tuple[int, int], int]]:
    """Faces of the projection as lists of corners ``(crossing, k)``.

    Corner ``k`` of a crossing lies between PD slots ``k`` and ``k+1``.
    """
    ends: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(d.crossings):
        for k, e in enumerate(x.pd):
            ends.setdefault(e, []).append((ci, k))

    def other_end(ci, k):
        e = d.crossings[ci].pd[k]
        a, b = ends[e]
        if a == (ci, k):
            return b
        return a

    face_of: dict[tuple[int, int], int] = {}
    faces = []
    for ci in range(len(d.crossings)):
        for k in range(4):
            if (ci, k) in face_of:
                continue
            face = []
            cur = (ci, k)
            while cur not in face_of:
                face_of[cur] = len(faces)
                face.append(cur)
                cj, l = other_end(*cur)
                cur = (cj, (l - 1) % 4)
            faces.append(face)
    return faces, face_of



# -- built-in diagrams -----------------------------------------------------------------

# Standard 5-crossing alternating projection (KnotAtlas L5a1 labelling).
_WHITEHEAD_PD = """
X[6,1,7,2]
X[10,7,5,8]
X[4,5,1,6]
X[2,10,3,9]
X[8,4,9,3]
"""


def whitehead_diagram() -> LinkDiagram:
    """Built-in Whitehead link with components ``W1`` (meridian x) and ``W2`` (meridian y)."""
    return parse_pd(_WHITEHEAD_PD, names=("W1", "W2"))


def unknot() -> LinkDiagram:
    return parse_braid("", 1)


def hopf_link() -> LinkDiagram:
    return parse_braid("1 1", 2)


def trefoil() -> LinkDiagram:
    return parse_braid("1 1 1", 2)


def figure_eight() -> LinkDiagram:
    return parse_braid("1 -2 1 -2", 3)


def split_union(a: LinkDiagram, b: LinkDiagram) -> LinkDiagram:
    """Disjoint union placed side by side (no crossings between them)."""
    shift = max(a.edges, default=0)
    crossings = a.crossings + tuple(Crossing(tuple(e + shift for e in x.pd), x.sign) for x in b.crossings)
    loops = a.loops + tuple(e + shift for e in b.loops)
    return LinkDiagram(crossings, loops)


BUILTIN_DIAGRAMS = {
    "whitehead": whitehead_diagram,
    "unknot": unknot,
    "hopf": hopf_link,
    "trefoil": trefoil,
    "figure-eight": figure_eight,
    "figure_eight": figure_eight,
}


def builtin_diagram(name: str) -> LinkDiagram:
    try:
        return BUILTIN_DIAGRAMS[name.lower()]()
    except KeyError:
        raise UnknownComponent(f"no built-in diagram named {name!r}") from None
