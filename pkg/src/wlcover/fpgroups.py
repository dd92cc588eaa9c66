"""Finitely presented groups attached to links and their covers.

Coset tables here always come from a permutation monodromy. Sheets act on
the right: sheet ``i`` times generator ``a`` is ``w(a)^-1(i)``, which makes
the stabilizer of sheet 1 the subgroup ``{g : w(g)(1) = 1}`` and turns the
``compose`` homomorphism ``w`` into a right action on cosets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import IncompleteTable, NotTransitive
from .links import LinkDiagram, wirtinger
from .monodromy import Monodromy
from .perm import Permutation, canonical_representative, partitions
from .smith import AbelianInvariants, abelian_invariants, abelianization_of_words
from .words import FpGroup, cyclic_reduce, invert_word, reduce_word

# -- orbifold groups -------------------------------------------------------------


@dataclass(frozen=True)
class OrbifoldGroupSpec:
    diagram: LinkDiagram
    indices: Mapping[str, int]

    def __post_init__(self):
        for name in self.diagram.names:
            if name not in self.indices:
                raise ValueError(f"no isotropy order for component {name}")
            if int(self.indices[name]) < 1:
                raise ValueError("isotropy orders must be positive")


def orbifold_group(spec: OrbifoldGroupSpec) -> FpGroup:
    """Wirtinger presentation plus ``meridian^order`` for every component."""
    g, meridians = wirtinger(spec.diagram)
    rels = list(g.relators)
    for name in spec.diagram.names:
        rels.append((meridians[name],) * int(spec.indices[name]))
    return FpGroup(list(g.generators), rels)


# -- coset tables ----------------------------------------------------------------


@dataclass
class CosetTable:
    """``table[i][2*j]`` is coset ``i`` times generator ``j+1``; ``[2*j+1]`` its inverse.

    Cosets are 0-based internally; coset 0 is the subgroup itself.
    """

    table: list[list[int | None]]
    ngens: int

    @property
    def index(self) -> int:
        return len(self.table)

    @property
    def complete(self) -> bool:
        return all(x is not None for row in self.table for x in row)

    def act(self, coset: int, letter: int) -> int:
        col = 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1
        nxt = self.table[coset][col]
        if nxt is None:
            raise IncompleteTable(f"undefined entry at coset {coset + 1}, letter {letter}")
        return nxt

    def act_word(self, coset: int, word) -> int:
        for x in word:
            coset = self.act(coset, x)
        return coset

    def check(self):
        for i, row in enumerate(self.table):
            for j in range(self.ngens):
                f, b = row[2 * j], row[2 * j + 1]
                if f is None or b is None:
                    raise IncompleteTable(f"coset {i + 1} lacks generator {j + 1}")
                if self.table[f][2 * j + 1] != i or self.table[b][2 * j] != i:
                    raise IncompleteTable(f"columns for generator {j + 1} are not mutually inverse")

    def to_json(self) -> dict:
        return {"index": self.index, "ngens": self.ngens, "rows": [[None if x is None else x + 1 for x in r] for r in self.table]}


def coset_table_from_monodromy(m: Monodromy) -> CosetTable:
    """Cosets of the sheet-1 stabilizer, read off the permutation action."""
    if not m.is_transitive():
        raise NotTransitive("coset table needs a transitive monodromy")
    cols = []
    for p in m.images:
        inv = p.inverse()
        cols.append((inv._a, p._a))
    table = [[c[k][i] for c in cols for k in (0, 1)] for i in range(m.degree)]
    return CosetTable(table, len(m.images))


# -- Reidemeister-Schreier -------------------------------------------------------


class SchreierRewriter:
    """Schreier transversal and rewriting process for a complete coset table."""

    def __init__(self, table: CosetTable):
        table.check()
        self.table = table
        n, g = table.index, table.ngens
        self.parent: list[tuple[int, int] | None] = [None] * n
        tree = set()
        seen = [False] * n
        seen[0] = True
        queue = [0]
        for i in queue:
            for j in range(g):
                for letter in (j + 1, -(j + 1)):
                    k = table.act(i, letter)
                    if not seen[k]:
                        seen[k] = True
                        self.parent[k] = (i, letter)
                        queue.append(k)
                        tree.add((i, j + 1) if letter > 0 else (k, j + 1))
        self.index_of: dict[tuple[int, int], int] = {}
        for i in range(n):
            for j in range(1, g + 1):
                if (i, j) not in tree:
                    self.index_of[(i, j)] = len(self.index_of) + 1
        self.names = [f"s{i + 1}_{j}" for (i, j) in self.index_of]

    def transversal(self, coset: int) -> tuple:
        word = []
        while self.parent[coset] is not None:
            prev, letter = self.parent[coset]
            word.append(letter)
            coset = prev
        return tuple(reversed(word))

    def rewrite(self, word, start: int = 0) -> tuple:
        out = []
        c = start
        act = self.table.act
        idx = self.index_of
        for x in word:
            if x > 0:
                s = idx.get((c, x))
                if s:
                    out.append(s)
                c = act(c, x)
            else:
                c = act(c, x)
                s = idx.get((c, -x))
                if s:
                    out.append(-s)
        return reduce_word(out)


def reidemeister_schreier(g: FpGroup, table: CosetTable, simplify: bool = True) -> FpGroup:
    """Presentation of the subgroup of ``g`` stabilizing coset 1."""
    if not table.complete:
        raise IncompleteTable("coset table is not complete")
    if table.ngens != g.rank:
        raise IncompleteTable("table and presentation have different generator counts")
    rw = SchreierRewriter(table)
    rels = [rw.rewrite(r, c) for r in g.relators for c in range(table.index)]
    h = FpGroup(list(rw.names), rels)
    return tietze_simplify(h) if simplify else h


def _branched_presentation(m: Monodromy) -> FpGroup:
    g, meridians = wirtinger(m.diagram)
    table = coset_table_from_monodromy(m)
    rw = SchreierRewriter(table)
    rels = [rw.rewrite(r, c) for r in g.relators for c in range(table.index)]
    for name in m.diagram.names:
        a = meridians[name]
        # cycles of the right action of the meridian on cosets
        seen = set()
        for c in range(table.index):
            if c in seen:
                continue
            k, d = 0, c
            while True:
                seen.add(d)
                d = table.act(d, a)
                k += 1
                if d == c:
                    break
            rels.append(rw.rewrite((a,) * k, c))
    return FpGroup(list(rw.names), rels)


def branched_cover_pi1(m: Monodromy, simplify: bool = True) -> FpGroup:
    """Fundamental group of the branched cover defined by ``m``.

    Subgroup presentation of the sheet-1 stabilizer, plus for every cycle of
    every component's meridian the rewritten power of the meridian that
    closes up that cycle.
    """
    h = _branched_presentation(m)
    return tietze_simplify(h) if simplify else h


def branched_cover_h1(m: Monodromy) -> AbelianInvariants:
    h = _branched_presentation(m)
    return abelianization_of_words(h.relators, h.rank)


def unbranched_cover_h1(m: Monodromy) -> AbelianInvariants:
    g, _ = wirtinger(m.diagram)
    h = reidemeister_schreier(g, coset_table_from_monodromy(m), simplify=False)
    return abelianization_of_words(h.relators, h.rank)


# -- Tietze transformations ---------------------------------------------------------


def _canonical_cyclic(word):
    w = cyclic_reduce(word)
    if not w:
        return w
    cands = []
    for v in (w, invert_word(w)):
        for i in range(len(v)):
            cands.append(v[i:] + v[:i])
    return min(cands)


def tietze_simplify(g: FpGroup, max_length: int = 20_000, max_passes: int = 10_000) -> FpGroup:
    """Deterministic Tietze cleanup.

    Drops trivial and duplicate relators, then repeatedly eliminates a
    generator occurring exactly once in some relator (shortest such relator
    first), as long as the total relator length stays below ``max_length``.
    """
    gens = list(g.generators)
    rels = [cyclic_reduce(r) for r in g.relators]
    alive = list(range(1, len(gens) + 1))
    for _ in range(max_passes):
        uniq = {}
        for r in rels:
            if r:
                uniq.setdefault(_canonical_cyclic(r), r)
        rels = sorted(uniq, key=lambda r: (len(r), r))
        best = None
        for ri, r in enumerate(rels):
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            singles = [a for a, c in counts.items() if c == 1]
            if singles:
                best = (ri, min(singles))
                break
        if best is None:
            break
        ri, a = best
        r = rels[ri]
        pos = next(i for i, x in enumerate(r) if abs(x) == a)
        # r = u a^e v  =>  a^e = u^-1 v^-1 (cyclically: a^e = (v u)^-1)
        e = r[pos]
        rest = r[pos + 1 :] + r[:pos]
        value = invert_word(rest) if e > 0 else rest
        new_rels = []
        total = 0
        for j, s in enumerate(rels):
            if j == ri:
                continue
            if any(abs(x) == a for x in s):
                t = []
                for x in s:
                    if x == a:
                        t.extend(value)
                    elif x == -a:
                        t.extend(invert_word(value))
                    else:
                        t.append(x)
                s = cyclic_reduce(t)
            total += len(s)
            new_rels.append(s)
        if total > max_length:
            break
        rels = new_rels
        alive.remove(a)
    mapping = {a: i + 1 for i, a in enumerate(alive)}
    out = [tuple(mapping[x] if x > 0 else -mapping[-x] for x in r) for r in rels if r]
    return FpGroup([gens[a - 1] for a in alive], out)


# -- triviality ----------------------------------------------------------------------


@dataclass
class TrivialityResult:
    status: str  # "trivial", "nontrivial" or "unknown"
    witness: object = None
    presentation: FpGroup | None = None

    def to_json(self) -> dict:
        out = {"status": self.status}
        if isinstance(self.witness, AbelianInvariants):
            out["witness"] = {"abelianization": self.witness.to_json()}
        elif self.witness is not None:
            out["witness"] = {"permutation_images": [p.to_oneline() for p in self.witness]}
        if self.presentation is not None:
            out["presentation"] = self.presentation.to_text()
        return out


def _eval(word, images, n):
    result = list(range(n))
    for x in word:
        p, inv = images[abs(x) - 1]
        q = p if x > 0 else inv
        result = [result[q[i]] for i in range(n)]
    return tuple(result)


def find_permutation_quotient(g: FpGroup, max_degree: int = 5, max_nodes: int = 2_000_000):
    """A homomorphism onto a nontrivial transitive group of degree <= ``max_degree``.

    Returns ``(images, exhausted)``; ``images`` is None when none was found,
    and ``exhausted`` tells whether the search finished within ``max_nodes``.
    """
    nodes = 0
    ngen = g.rank
    if ngen == 0:
        return None, True
    by_max = {}
    for r in g.relators:
        if r:
            by_max.setdefault(max(abs(x) for x in r), []).append(r)
    for n in range(2, max_degree + 1):
        perms = [tuple(p) for p in itertools.permutations(range(n))]
        inv = {p: tuple(sorted(range(n), key=lambda i: p[i])) for p in perms}
        ident = tuple(range(n))
        firsts = [canonical_representative(ct)._a for ct in partitions(n)]
        images: list = [None] * ngen

        def rec(k):
            nonlocal nodes
            if k == ngen:
                gens = [images[i][0] for i in range(ngen)]
                if all(p == ident for p in gens):
                    return False
                seen = {0}
                stack = [0]
                while stack:
                    i = stack.pop()
                    for p in gens:
                        if p[i] not in seen:
                            seen.add(p[i])
                            stack.append(p[i])
                return len(seen) == n
            pool = firsts if k == 0 else perms
            for p in pool:
                nodes += 1
                if nodes > max_nodes:
                    raise _Budget
                images[k] = (p, inv[p])
                if all(_eval(r, images, n) == ident for r in by_max.get(k + 1, ())):
                    if rec(k + 1):
                        return True
            images[k] = None
            return False

        try:
            if rec(0):
                return [Permutation._raw(images[i][0]) for i in range(ngen)], True
        except _Budget:
            return None, False
    return None, True


class _Budget(Exception):
    pass


def try_trivialize(g: FpGroup, max_length: int = 20_000, quotient_order_cap: int = 120, max_nodes: int = 2_000_000) -> TrivialityResult:
    """Decide triviality where cheap: "trivial", "nontrivial" or "unknown"."""
    h = tietze_simplify(g, max_length=max_length)
    if h.rank == 0:
        return TrivialityResult("trivial", presentation=h)
    ab = abelian_invariants(h.relation_matrix(), h.rank)
    if not ab.is_trivial:
        return TrivialityResult("nontrivial", ab, h)
    degree = 1
    while _factorial(degree + 1) <= quotient_order_cap:
        degree += 1
    images, _ = find_permutation_quotient(h, degree, max_nodes)
    if images is not None:
        return TrivialityResult("nontrivial", images, h)
    return TrivialityResult("unknown", presentation=h)


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
