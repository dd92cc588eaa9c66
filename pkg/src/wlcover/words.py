"""Free-group words and finite presentations.

A word is a tuple of nonzero integers: ``k`` is generator ``k`` (1-based)
and ``-k`` its inverse.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ParseError

Word = tuple


def reduce_word(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(reduce_word(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1])


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def power_word(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k >= 0 else invert_word(word)
    return reduce_word(base * abs(k))


@dataclass
class FpGroup:
    """Generators (by name) and freely reduced relator words."""

    generators: list[str]
    relators: list[Word] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.generators)
        rels = []
        for r in self.relators:
            r = reduce_word(r)
            for x in r:
                if x == 0 or abs(x) > n:
                    raise ValueError(f"relator uses undeclared generator {x}")
            rels.append(r)
        self.relators = rels

    @property
    def rank(self) -> int:
        return len(self.generators)

    def relation_matrix(self) -> list[list[int]]:
        """Abelianized relators: one row per relator, one column per generator."""
        n = self.rank
        rows = []
        for r in self.relators:
            row = [0] * n
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows

    def abelian_invariants(self):
        from .smith import abelian_invariants

        return abelian_invariants(self.relation_matrix(), self.rank)

    def to_text(self) -> str:
        """``gens: a b; rels: a b A B`` with uppercase for inverses.

        Relators are comma separated. Names that are not single lowercase
        letters are written as space-separated ``name`` / ``name^-1`` tokens.
        """
        simple = all(re.fullmatch(r"[a-z]", g) for g in self.generators)
        parts = []
        for r in self.relators:
            if simple:
                parts.append("".join(self.generators[x - 1] if x > 0 else self.generators[-x - 1].upper() for x in r) or "1")
            else:
                parts.append(" ".join(self.generators[x - 1] if x > 0 else self.generators[-x - 1] + "^-1" for x in r) or "1")
        return f"gens: {' '.join(self.generators)}; rels: {', '.join(parts)}"

    @classmethod
    def from_text(cls, text: str) -> "FpGroup":
        m = re.fullmatch(r"\s*gens:\s*(.*?)\s*;\s*rels:\s*(.*?)\s*", text)
        if not m:
            raise ParseError("expected 'gens: ...; rels: ...'")
        gens = m.group(1).split()
        index = {g: i + 1 for i, g in enumerate(gens)}
        simple = all(re.fullmatch(r"[a-z]", g) for g in gens)
        rels = []
        body = m.group(2).strip()
        for chunk in [c.strip() for c in body.split(",")] if body else []:
            if chunk == "1":
                rels.append(())
                continue
            word = []
            if simple and not re.search(r"[*^]", chunk):
                for pos, ch in enumerate(re.sub(r"\s+", "", chunk)):
                    if ch.lower() not in index:
                        raise ParseError(f"unknown generator {ch!r}", m.start(2) + pos)
                    word.append(index[ch] if ch.islower() else -index[ch.lower()])
            else:
                for tok in re.split(r"[\s*]+", chunk):
                    inv = tok.endswith("^-1")
                    name = tok[:-3] if inv else tok
                    if name not in index:
                        raise ParseError(f"unknown generator {name!r}")
                    word.append(-index[name] if inv else index[name])
            rels.append(tuple(word))
        return cls(gens, rels)

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data) -> "FpGroup":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(list(data["generators"]), [tuple(r) for r in data["relators"]])
