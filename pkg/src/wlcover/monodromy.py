"""Permutation monodromies of link complements.

A monodromy assigns a permutation of the sheets ``1..t`` to every arc of a
diagram. It is a homomorphism for ``compose`` (right factor first), so at a
positive crossing ``w(out) = w(over)^-1 * w(in) * w(over)`` and at a negative
one ``w(out) = w(over) * w(in) * w(over)^-1``.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from . import _kernels
from .errors import CapExceeded, DegreeMismatch, RelationViolated, WrongDiagram
from .links import LinkDiagram, builtin_diagram, whitehead_diagram
from .perm import CycleType, Permutation, canonical_representative, is_transitive, parse_permutation, partitions, permutations_of_type

EXHAUSTIVE_CAP = 12
RANDOM_CAP = 16


@dataclass(frozen=True, eq=False)
class Monodromy:
    diagram: LinkDiagram
    degree: int
    images: tuple[Permutation, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != len(self.diagram.arcs):
            raise ValueError(f"expected {len(self.diagram.arcs)} arc images, got {len(imgs)}")
        for p in imgs:
            if p.degree != self.degree:
                raise DegreeMismatch(f"arc image of degree {p.degree} in a degree-{self.degree} monodromy")

    @classmethod
    def from_assignment(cls, diagram: LinkDiagram, assignment: Mapping, degree: int | None = None) -> "Monodromy":
        """Build from ``{arc_id: permutation}`` with 1-based arc ids (int or str)."""
        perms = {}
        for k, v in assignment.items():
            idx = int(k) - 1
            perms[idx] = v if isinstance(v, Permutation) else parse_permutation(str(v), degree)
        if degree is None:
            degree = next(iter(perms.values())).degree if perms else 1
        missing = [i + 1 for i in range(len(diagram.arcs)) if i not in perms]
        if missing:
            raise ValueError(f"assignment missing arcs {missing}")
        return cls(diagram, degree, tuple(perms[i] for i in range(len(diagram.arcs))))

    @classmethod
    def constant(cls, diagram: LinkDiagram, p: Permutation) -> "Monodromy":
        return cls(diagram, p.degree, (p,) * len(diagram.arcs))

    @classmethod
    def trivial(cls, diagram: LinkDiagram) -> "Monodromy":
        return cls.constant(diagram, Permutation.identity(1))

    def image_of_word(self, word) -> Permutation:
        result = Permutation.identity(self.degree)
        for x in word:
            p = self.images[abs(x) - 1]
            result = result * (p if x > 0 else p.inverse())
        return result

    def meridian(self, component) -> Permutation:
        return self.images[self.diagram.meridian_arc(component)]

    def violated_crossing(self) -> int | None:
        """1-based index of the first crossing whose relation fails."""
        imgs = self.images
        for idx, x in enumerate(self.diagram.arc_crossings):
            o, a = imgs[x.over], imgs[x.under_in]
            need = o.inverse() * a * o if x.sign > 0 else o * a * o.inverse()
            if need != imgs[x.under_out]:
                return idx + 1
        return None

    def is_valid(self) -> bool:
        return self.violated_crossing() is None

    def is_transitive(self) -> bool:
        return is_transitive(list(self.images), self.degree)

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram.to_json(),
            "degree": self.degree,
            "assignment": {str(i + 1): p.to_oneline() for i, p in enumerate(self.images)},
        }

    @classmethod
    def from_json(cls, data) -> "Monodromy":
        if isinstance(data, str):
            data = json.loads(data)
        d = data["diagram"]
        diagram = builtin_diagram(d) if isinstance(d, str) else LinkDiagram.from_json(d)
        return cls.from_assignment(diagram, data["assignment"], int(data["degree"]))

    def canonical_key(self):
        """Invariant of sheet relabelling (None when not transitive)."""
        return _kernels.canonical_form([p._a for p in self.images])

    def __repr__(self):
        return f"Monodromy(degree={self.degree}, {len(self.images)} arcs)"


@dataclass
class CoverReport:
    degree: int
    indices: dict[str, CycleType]
    preimage_components: dict[str, int]
    transitive: bool
    simple: bool
    h1: object = None
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "transitive": self.transitive,
            "simple": self.simple,
            "components": {
                n: {"indices": list(ct.lengths), "preimage_components": self.preimage_components[n]}
                for n, ct in self.indices.items()
            },
        }
        if self.h1 is not None:
            out["h1"] = self.h1.to_json()
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def validate(m: Monodromy, with_h1: bool = False) -> CoverReport:
    """Check every Wirtinger relation and summarize the cover.

    Raises RelationViolated on a bad crossing. A non-transitive assignment is
    reported through ``transitive=False`` and a warning, not an exception.
    """
    bad = m.violated_crossing()
    if bad is not None:
        raise RelationViolated(bad)
    d = m.diagram
    transitive = m.is_transitive()
    report = CoverReport(
        degree=m.degree,
        indices={n: branching_indices(m, n) for n in d.names},
        preimage_components={n: preimage_components(m, n) for n in d.names},
        transitive=transitive,
        simple=is_simple(m),
    )
    if not transitive:
        report.warnings.append("NotTransitive: the cover is disconnected")
    elif with_h1:
        from .fpgroups import branched_cover_h1

        report.h1 = branched_cover_h1(m)
    return report


def branching_indices(m: Monodromy, component) -> CycleType:
    return m.meridian(component).cycle_type()


def preimage_components(m: Monodromy, component) -> int:
    """Number of cycles of the meridian.

    This equals the number of preimage circles when the longitude preserves
    every meridian cycle; otherwise the longitude glues cycles and it is an
    upper bound.
    """
    return len(branching_indices(m, component))


def is_simple(m: Monodromy) -> bool:
    return bool(m.images) and all(p.is_transposition() for p in m.images)


X_LENGTHS = (1, 2, 4)
Y_LENGTHS = (4, 8)


def _whitehead_check(m: Monodromy):
    if not m.diagram.same_as(whitehead_diagram()):
        raise WrongDiagram("monodromy is not over the built-in Whitehead diagram")


def theorem2_validate(m: Monodromy) -> bool:
    """Meridian x has cycle lengths in {1,2,4} and meridian y in {4,8}."""
    _whitehead_check(m)
    x, y = m.meridian("W1"), m.meridian("W2")
    return x.cycle_type().over(X_LENGTHS) and y.cycle_type().over(Y_LENGTHS)


def theorem2_constraints(t: int) -> dict[str, list[CycleType]]:
    return {"W1": partitions(t, X_LENGTHS), "W2": partitions(t, Y_LENGTHS)}


# -- search ------------------------------------------------------------------------


def _closing_seeds(d: LinkDiagram) -> list[int]:
    """Meridian arcs plus whatever extra arcs propagation needs to reach every arc."""
    seeds = [d.meridian_arc(i) for i in range(len(d.components))]

    def reach(s):
        known = set(s)
        changed = True
        while changed:
            changed = False
            for x in d.arc_crossings:
                if x.over in known and (x.under_in in known) != (x.under_out in known):
                    known |= {x.under_in, x.under_out}
                    changed = True
        return known

    n = len(d.arcs)
    while len(reach(seeds)) < n:
        known = reach(seeds)
        best = max((a for a in range(n) if a not in known), key=lambda a: (len(reach(seeds + [a])), -a))
        seeds.append(best)
    return seeds


def _allowed(constraints, name, t):
    if constraints is None or name not in constraints:
        return partitions(t)
    allowed = constraints[name]
    if callable(allowed):
        return [ct for ct in partitions(t) if allowed(ct)]
    return sorted(ct if isinstance(ct, CycleType) else CycleType(tuple(ct)) for ct in allowed if sum(ct) == t)


class _Searcher:
    """Picklable worker evaluating chunks of seed candidates."""

    def __init__(self, d, t, seeds, type_filters):
        self.d = d
        self.t = t
        self.seeds = seeds
        self.cross = [(x.over, x.under_in, x.under_out, x.sign) for x in d.arc_crossings]
        # component index -> set of allowed length tuples
        self.filters = type_filters

    def __call__(self, chunk):
        out = []
        for seed_perms in chunk:
            images = [None] * len(self.d.arcs)
            ok = True
            for a, p in zip(self.seeds, seed_perms):
                if images[a] is not None and images[a] != p:
                    ok = False
                    break
                images[a] = p
            if not ok or _kernels.propagate(self.cross, images) >= 0 or any(p is None for p in images):
                continue
            good = True
            for ci, allowed in self.filters.items():
                a = self.d.meridian_arc(ci)
                if CycleType(_cycle_lengths(images[a])).lengths not in allowed:
                    good = False
                    break
            if not good:
                continue
            key = _kernels.canonical_form(images)
            if key is None:
                continue
            out.append((key, images))
        return out


def _cycle_lengths(a):
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = a[j]
                k += 1
            out.append(k)
    return tuple(out)


def search_monodromies(
    diagram: LinkDiagram,
    t: int,
    constraints: Mapping | None = None,
    limit: int | None = None,
    mode: str = "exhaustive",
    seed: int | None = None,
    jobs: int = 1,
    cap: int | None = None,
    max_tries: int = 200_000,
    chunk_size: int = 2000,
) -> Iterator[Monodromy]:
    """Yield valid transitive monodromies of degree ``t`` meeting cycle-type filters.

    ``constraints`` maps component names to allowed cycle types of their
    meridian. Exhaustive mode fixes the last component's meridian to the
    canonical representative of each allowed type, enumerates the other seed
    arcs, propagates through the Wirtinger relations and keeps one
    representative per simultaneous-conjugacy class, in a fixed order that
    does not depend on ``jobs``.
    """
    d = diagram
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")
    limit_cap = cap if cap is not None else (EXHAUSTIVE_CAP if mode == "exhaustive" else RANDOM_CAP)
    if t > limit_cap:
        raise CapExceeded(limit_cap, "degree")
    if t < 1:
        raise ValueError("degree must be positive")
    seeds = _closing_seeds(d)
    ncomp = len(d.components)
    allowed = {ci: _allowed(constraints, d.names[ci], t) for ci in range(ncomp)}
    filters = {ci: {ct.lengths for ct in allowed[ci]} for ci in range(ncomp)}
    worker = _Searcher(d, t, seeds, filters)
    if mode == "random":
        yield from _random_search(d, t, seeds, allowed, worker, limit, seed, max_tries)
        return

    last = ncomp - 1
    seen = set()
    count = 0

    def candidates():
        for yt in allowed[last]:
            y = canonical_representative(yt)._a
            pools = []
            for pos, a in enumerate(seeds):
                ci = d.component_of_arc[a]
                if pos < ncomp and ci == last:
                    pools.append(None)
                elif pos < ncomp:
                    pools.append([p._a for ct in allowed[ci] for p in permutations_of_type(ct)])
                else:
                    pools.append([tuple(p) for p in itertools.permutations(range(t))])
            lists = [[y] if pool is None else pool for pool in pools]
            yield from itertools.product(*lists)

    def chunks():
        it = candidates()
        while True:
            block = list(itertools.islice(it, chunk_size))
            if not block:
                return
            yield block

    if jobs > 1:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(worker, chunks())
    else:
        pool = None
        results = map(worker, chunks())
    try:
        for block in results:
            for key, images in block:
                if key in seen:
                    continue
                seen.add(key)
                yield Monodromy(d, t, tuple(Permutation._raw(a) for a in images))
                count += 1
                if limit is not None and count >= limit:
                    return
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def _random_perm_of_type(ct: CycleType, rng: random.Random):
    base = canonical_representative(ct)._a
    n = len(base)
    sigma = list(range(n))
    rng.shuffle(sigma)
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(sigma[base[inv[i]]] for i in range(n))


def _random_search(d, t, seeds, allowed, worker, limit, seed, max_tries):
    if seed is None:
        raise ValueError("random mode requires a seed")
    rng = random.Random(seed)
    limit = 10 if limit is None else limit
    ncomp = len(d.components)
    seen = set()
    count = 0
    for _ in range(max_tries):
        cand = []
        for pos, a in enumerate(seeds):
            if pos < ncomp:
                ci = d.component_of_arc[a]
                cand.append(_random_perm_of_type(rng.choice(allowed[ci]), rng))
            else:
                p = list(range(t))
                rng.shuffle(p)
                cand.append(tuple(p))
        for key, images in worker([tuple(cand)]):
            if key in seen:
                continue
            seen.add(key)
            yield Monodromy(d, t, tuple(Permutation._raw(a) for a in images))
            count += 1
            if count >= limit:
                return
