"""Smith normal form over the integers and abelian group invariants."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^rank + Z/d1 + Z/d2 + ...`` with ``d1 | d2 | ...`` and every ``d > 1``."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d <= 1 for d in t):
            raise ValueError("torsion coefficients must exceed 1")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @property
    def order(self) -> int:
        """Group order, 0 when infinite."""
        return 0 if self.rank else prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_diagonal(cls, diagonal, ngens: int) -> "AbelianInvariants":
        nonzero = [abs(d) for d in diagonal if d != 0]
        return cls(ngens - len(nonzero), tuple(d for d in nonzero if d != 1))


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Return ``(D, U, V)`` with ``U @ A @ V == D`` exactly.

    ``D`` is diagonal with nonnegative entries ``d1 | d2 | ...``; ``U`` and
    ``V`` are unimodular. Entries are Python ints, so nothing overflows.
    """
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M in (D, U):
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst, src, q):
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return D, U, V
            if piv[0] != t:
                swap_rows(t, piv[0])
            if piv[1] != t:
                swap_cols(t, piv[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-x for x in M[t]]
    return D, U, V


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def abelian_invariants(relation_matrix, ngens: int) -> AbelianInvariants:
    """Invariants of ``Z^ngens`` modulo the row span of ``relation_matrix``."""
    rows = [r for r in relation_matrix if any(r)]
    if not rows or ngens == 0:
        return AbelianInvariants(ngens)
    D, _, _ = smith_normal_form(rows)
    return AbelianInvariants.from_diagonal(diagonal(D), ngens)


def smith_invariants(A) -> tuple[AbelianInvariants, list, list]:
    """Invariants of the cokernel of ``A`` plus the unimodular certificate ``(U, V)``."""
    if not A or not A[0]:
        return AbelianInvariants(len(A[0]) if A else 0), _identity(len(A)), _identity(len(A[0]) if A else 0)
    D, U, V = smith_normal_form(A)
    return AbelianInvariants.from_diagonal(diagonal(D), len(A[0])), U, V


def _sparse_eliminate(rows: list[dict[int, int]], ngens: int):
    """Pivot away unit entries; returns remaining dense rows and free column count.

    Each pivot on a +-1 entry removes one generator and one relator without
    changing the cokernel.
    """
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive_rows = set(range(len(rows)))
    removed_cols = set()
    changed = True
    while changed:
        changed = False
        for i in sorted(alive_rows, key=lambda i: len(rows[i])):
            r = rows[i]
            piv = next((j for j in sorted(r, key=lambda j: len(cols[j])) if abs(r[j]) == 1), None)
            if piv is None:
                continue
            sgn = r[piv]
            for k in list(cols[piv]):
                if k == i:
                    continue
                rk = rows[k]
                f = rk[piv] * sgn
                for j, v in r.items():
                    nv = rk.get(j, 0) - f * v
                    if nv:
                        if j not in rk:
                            cols[j].add(k)
                        rk[j] = nv
                    elif j in rk:
                        del rk[j]
                        cols[j].discard(k)
                if not rk:
                    alive_rows.discard(k)
            for j in r:
                cols[j].discard(i)
            alive_rows.discard(i)
            removed_cols.add(piv)
            rows[i] = {}
            changed = True
            break
    keep_cols = sorted(j for j in range(ngens) if j not in removed_cols)
    pos = {j: n for n, j in enumerate(keep_cols)}
    dense = []
    for i in sorted(alive_rows):
        if rows[i]:
            row = [0] * len(keep_cols)
            for j, v in rows[i].items():
                row[pos[j]] = v
            dense.append(row)
    return dense, len(keep_cols)


def abelianization_of_words(words, ngens: int) -> AbelianInvariants:
    """Abelian invariants of ``<x_1..x_n | words>`` via sparse elimination then Smith form."""
    rows = []
    for w in words:
        r: dict[int, int] = {}
        for x in w:
            j = abs(x) - 1
            r[j] = r.get(j, 0) + (1 if x > 0 else -1)
            if r[j] == 0:
                del r[j]
        if r:
            rows.append(r)
    dense, n = _sparse_eliminate(rows, ngens)
    return abelian_invariants(dense, n)
