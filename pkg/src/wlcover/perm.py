"""Exact permutation arithmetic on the points 1..t.

Composition applies the right factor first: ``(p * q)(i) == p(q(i))``.
This convention is used everywhere in the package.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _kernels
from .errors import CapExceeded, DegreeMismatch, ParseError

DEFAULT_GROUP_CAP = 100_000


class Permutation:
    """A bijection of ``{1, ..., degree}``.

    Stored as a 0-based image tuple; ``images`` gives the 1-based view.

    >>> p = Permutation.from_cycles([[1, 2], [3, 4]], 4)
    >>> q = Permutation.from_cycles([[2, 4]], 4)
    >>> (p * q).images
    (2, 3, 4, 1)
    """

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Sequence[int]):
        a = tuple(int(i) - 1 for i in images)
        if sorted(a) != list(range(len(a))):
            raise ValueError(f"not a permutation: {list(images)}")
        self._a = a
        self._hash = None

    @classmethod
    def _raw(cls, a):
        p = cls.__new__(cls)
        p._a = a
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int | None = None) -> "Permutation":
        cycles = [list(c) for c in cycles]
        pts = [x for c in cycles for x in c]
        if len(pts) != len(set(pts)):
            raise ValueError("cycles are not disjoint")
        if degree is None:
            degree = max(pts, default=0)
        if pts and (min(pts) < 1 or max(pts) > degree):
            raise ValueError("cycle point out of range")
        img = list(range(degree))
        for c in cycles:
            for x, y in zip(c, c[1:] + c[:1]):
                img[x - 1] = y - 1
        return cls._raw(tuple(img))

    @classmethod
    def transposition(cls, i: int, j: int, degree: int) -> "Permutation":
        return cls.from_cycles([[i, j]], degree)

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self._a)

    def __call__(self, i: int) -> int:
        return self._a[i - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return Permutation._raw(_kernels.inverse(self._a))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._a == other._a

    def __lt__(self, other: "Permutation"):
        return self._a < other._a

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._a)
        return self._hash

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self._a))

    def is_transposition(self) -> bool:
        return sum(1 for i, j in enumerate(self._a) if i != j) == 2

    def cycles(self) -> list[tuple[int, ...]]:
        return cycle_decomposition(self)

    def cycle_type(self) -> "CycleType":
        return cycle_type(self)

    def order(self) -> int:
        return math.lcm(*cycle_type(self).lengths) if self.degree else 1

    def extend(self, degree: int) -> "Permutation":
        """The same permutation with fixed points appended up to ``degree``."""
        if degree < self.degree:
            raise DegreeMismatch(f"cannot shrink degree {self.degree} to {degree}")
        return Permutation._raw(self._a + tuple(range(self.degree, degree)))

    def restrict(self, degree: int) -> "Permutation":
        """Restriction to ``1..degree``, which must be an invariant set."""
        a = self._a[:degree]
        if sorted(a) != list(range(degree)):
            raise ValueError("points 1..degree are not invariant")
        return Permutation._raw(a)

    def to_cycle_string(self) -> str:
        cyc = [c for c in cycle_decomposition(self) if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def to_oneline(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    def __str__(self):
        return self.to_cycle_string()

    def __repr__(self):
        return f"Permutation({list(self.images)})"


@dataclass(frozen=True, order=True)
class CycleType:
    """Sorted multiset of cycle lengths (fixed points included)."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(sorted(self.lengths)))
        if any(k < 1 for k in self.lengths):
            raise ValueError("cycle lengths must be positive")

    @property
    def degree(self) -> int:
        return sum(self.lengths)

    def counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.lengths).items()))

    def over(self, allowed: Iterable[int]) -> bool:
        """True when every length is drawn from ``allowed``."""
        allowed = set(allowed)
        return all(k in allowed for k in self.lengths)

    def __iter__(self):
        return iter(self.lengths)

    def __len__(self):
        return len(self.lengths)


def _check_degree(p: Permutation, q: Permutation):
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} != {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p * q``, applying ``q`` first."""
    _check_degree(p, q)
    return Permutation._raw(_kernels.compose(p._a, q._a))


def conjugate(p: Permutation, by: Permutation) -> Permutation:
    """``by^-1 * p * by``."""
    return by.inverse() * p * by


def cycle_decomposition(p: Permutation) -> list[tuple[int, ...]]:
    """Disjoint cycles, each starting at its least point, fixed points included."""
    seen = [False] * p.degree
    out = []
    for i in range(p.degree):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = p._a[j]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Permutation) -> CycleType:
    return CycleType(tuple(len(c) for c in cycle_decomposition(p)))


def canonical_representative(ct: CycleType) -> Permutation:
    """Permutation of type ``ct`` with cycles on consecutive points, longest first."""
    cycles, start = [], 1
    for k in sorted(ct.lengths, reverse=True):
        cycles.append(list(range(start, start + k)))
        start += k
    return Permutation.from_cycles(cycles, ct.degree)


def partitions(n: int, parts: Iterable[int] | None = None) -> list[CycleType]:
    """All cycle types of degree ``n`` whose lengths lie in ``parts``."""
    allowed = sorted(set(parts)) if parts is not None else list(range(1, n + 1))
    out = []

    def rec(rem, max_idx, acc):
        if rem == 0:
            out.append(CycleType(tuple(acc)))
            return
        for idx in range(max_idx, -1, -1):
            k = allowed[idx]
            if k <= rem:
                rec(rem - k, idx, acc + [k])

    rec(n, len(allowed) - 1, [])
    return sorted(out)


def permutations_of_type(ct: CycleType):
    """Yield every permutation with cycle type ``ct``, each exactly once.

    Cycles are opened at the least unused point, so a permutation is produced
    only under the ordering of lengths that lists its cycles by least point.
    """
    n = ct.degree
    for order in sorted(set(itertools.permutations(sorted(ct.lengths)))):
        yield from _fill(list(range(n)), order, [None] * n)


def _fill(remaining, lens, img):
    if not lens:
        yield Permutation._raw(tuple(img))
        return
    k = lens[0]
    first, rest = remaining[0], remaining[1:]
    for others in itertools.permutations(rest, k - 1):
        cyc = (first,) + others
        new_img = list(img)
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            new_img[x] = y
        used = set(others)
        yield from _fill([r for r in rest if r not in used], lens[1:], new_img)


def parse_permutation(text: str, degree: int | None = None) -> Permutation:
    """Parse cycle notation ``"(1 2)(3 4 5)"`` or one-line ``"[2,1,3]"``."""
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ParseError("unterminated one-line permutation", len(s))
        body = s[1:-1].strip()
        try:
            imgs = [int(x) for x in re.split(r"[,\s]+", body)] if body else []
        except ValueError as exc:
            raise ParseError(f"bad integer in {s!r}") from exc
        try:
            p = Permutation(imgs)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return p.extend(degree) if degree is not None else p
    cycles = []
    for m in re.finditer(r"\(([^()]*)\)|(\S)", s):
        if m.group(2) is not None:
            raise ParseError(f"unexpected {m.group(2)!r}", m.start())
        body = m.group(1).strip()
        if body:
            try:
                cycles.append([int(x) for x in re.split(r"[,\s]+", body)])
            except ValueError as exc:
                raise ParseError(f"bad integer in cycle {body!r}", m.start()) from exc
    try:
        return Permutation.from_cycles(cycles, degree)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


@dataclass
class GroupTable:
    """A finite permutation group with its element list.

    Elements are sorted lexicographically by image sequence, so the identity
    sits at position 0.
    """

    elements: list[Permutation]
    index_of: dict[Permutation, int] = field(repr=False, default_factory=dict)
    generators: list[Permutation] = field(default_factory=list)

    def __post_init__(self):
        if not self.index_of:
            self.index_of = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements[0].degree

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return p in self.index_of

    def multiplication_table(self) -> list[list[int]]:
        idx = self.index_of
        return [[idx[g * h] for h in self.elements] for g in self.elements]


def generate_group(generators: Sequence[Permutation], cap: int = DEFAULT_GROUP_CAP, degree: int | None = None) -> GroupTable:
    """Close ``generators`` under composition; raises CapExceeded past ``cap``."""
    gens = list(generators)
    if not gens:
        if degree is None:
            raise ValueError("degree required for an empty generating set")
        gens = [Permutation.identity(degree)]
    d = gens[0].degree
    for g in gens:
        if g.degree != d:
            raise DegreeMismatch("generators of unequal degree")
    raw = _kernels.closure([g._a for g in gens], cap)
    if raw is None:
        raise CapExceeded(cap)
    raw.sort()
    return GroupTable([Permutation._raw(a) for a in raw], generators=list(generators))


def orbit(generators: Sequence[Permutation], point: int, degree: int) -> set[int]:
    if not generators:
        return {point}
    return {i + 1 for i in _kernels.orbit([g._a for g in generators], point - 1)}


def is_transitive(generators: Sequence[Permutation], t: int) -> bool:
    for g in generators:
        if g.degree != t:
            raise DegreeMismatch("generator degree differs from t")
    if t <= 1:
        return True
    return len(orbit(generators, 1, t)) == t


def regular_representation(group: GroupTable) -> dict[Permutation, Permutation]:
    """Right-multiplication action of ``group`` on its own element list.

    Sheet ``i`` goes to the index of ``y_i . y``, where the product ``y_i . y``
    means "``y_i`` then ``y``", i.e. ``compose(y, y_i)``. With this reading
    the map is a homomorphism for ``compose``.
    """
    idx = group.index_of
    elems = group.elements
    eta = {}
    for y in elems:
        eta[y] = Permutation._raw(tuple(idx[y * yi] for yi in elems))
    return eta
