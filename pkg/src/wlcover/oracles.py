"""Independent invariants used to cross-check the main pipeline.

These routines share only the diagram and permutation substrate with the
rest of the package: Fox calculus for the Alexander polynomial, Goeritz
matrices for double branched covers, and determinantal divisors for
abelian invariants. Nothing here calls the Smith form or coset code.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

import sympy

from .errors import NotAKnot
from .links import LinkDiagram, diagram_faces, wirtinger
from .smith import AbelianInvariants


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial ``{exponent: coefficient}`` without zero terms."""

    coeffs: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, d) -> "LaurentPoly":
        return cls(tuple(sorted((int(e), int(c)) for e, c in d.items() if c)))

    @classmethod
    def monomial(cls, c=1, e=0) -> "LaurentPoly":
        return cls.from_dict({e: c})

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __add__(self, other):
        d = self.as_dict()
        for e, c in other.coeffs:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d)

    def __neg__(self):
        return LaurentPoly(tuple((e, -c) for e, c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        d: dict[int, int] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(d)

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, value):
        return sum(c * value**e for e, c in self.coeffs)

    def canonical(self) -> "LaurentPoly":
        """Shift to lowest exponent 0 and make the constant term positive."""
        if not self.coeffs:
            return self
        lo = self.coeffs[0][0]
        sign = 1 if self.coeffs[0][1] > 0 else -1
        return LaurentPoly(tuple((e - lo, sign * c) for e, c in self.coeffs))

    def coefficient_list(self) -> list[int]:
        """Coefficients from the constant term up (after canonicalizing)."""
        p = self.canonical()
        if not p.coeffs:
            return [0]
        top = p.coeffs[-1][0]
        d = p.as_dict()
        return [d.get(e, 0) for e in range(top + 1)]

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e, c in reversed(self.coeffs):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono:
                coef = "" if c == 1 else ("-" if c == -1 else str(c))
                terms.append(f"{coef}{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms).replace("+ -", "- ")


def _fox_row(relator, ngens):
    """Fox derivatives of a relator, abelianized with every generator sent to t."""
    row = [LaurentPoly() for _ in range(ngens)]
    prefix = 0  # exponent of t accumulated by the prefix
    for x in relator:
        a = abs(x) - 1
        if x > 0:
            row[a] = row[a] + LaurentPoly.monomial(1, prefix)
            prefix += 1
        else:
            prefix -= 1
            row[a] = row[a] - LaurentPoly.monomial(1, prefix)
    return row


def _to_sympy(p: LaurentPoly, t):
    return sum(c * t**e for e, c in p.coeffs)


def alexander_polynomial(d: LinkDiagram) -> LaurentPoly:
    """Alexander polynomial of a knot diagram, canonicalized (lowest term t^0, positive)."""
    if len(d.components) != 1:
        raise NotAKnot(f"diagram has {len(d.components)} components")
    g, _ = wirtinger(d)
    n = g.rank
    if n <= 1:
        return LaurentPoly.monomial(1)
    rows = [_fox_row(r, n) for r in g.relators]
    t = sympy.Symbol("t")
    minor = sympy.Matrix([[_to_sympy(p, t) for p in row[:-1]] for row in rows[:-1]])
    det = sympy.expand(sympy.together(minor.det(method="berkowitz")))
    num, den = sympy.fraction(sympy.together(det))
    num = sympy.Poly(sympy.expand(num), t)
    den = sympy.Poly(sympy.expand(den), t)
    if den.length() != 1:
        raise ArithmeticError("unexpected non-monomial denominator")
    dexp = den.monoms()[0][0]
    dcoef = den.coeffs()[0]
    coeffs = {}
    for (e,), c in zip(num.monoms(), num.coeffs()):
        q = sympy.Rational(c, dcoef)
        if q.q != 1:
            raise ArithmeticError("non-integral Alexander coefficient")
        coeffs[e - dexp] = int(q)
    return LaurentPoly.from_dict(coeffs).canonical()


def cyclic_cover_h1_order(d: LinkDiagram, n: int) -> int:
    """``|H_1|`` of the n-fold cyclic branched cover of a knot; 0 means infinite.

    Equals ``|prod_{i=1}^{n-1} Delta(zeta^i)|``, computed exactly as the
    resultant of Delta with ``1 + t + ... + t^(n-1)``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    delta = alexander_polynomial(d)
    t = sympy.Symbol("t")
    f = sympy.Poly(list(reversed(delta.coefficient_list())), t)
    g = sympy.Poly([1] * n, t)
    return abs(int(sympy.resultant(g, f)))


# -- integer matrices by determinantal divisors ---------------------------------------


def integer_det(M) -> int:
    """Fraction-free (Bareiss) determinant."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def determinantal_divisors(M) -> list[int]:
    """``D_k`` = gcd of all k x k minors, for k = 1..rank."""
    m = len(M)
    n = len(M[0]) if m else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, integer_det([[M[i][j] for j in cols] for i in rows]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(M) -> list[int]:
    dd = determinantal_divisors(M)
    prev = 1
    out = []
    for x in dd:
        out.append(x // prev)
        prev = x
    return out


def cokernel_by_minors(M, ncols: int | None = None) -> AbelianInvariants:
    """Invariants of ``Z^ncols / rowspan(M)`` from determinantal divisors."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return AbelianInvariants(ncols)
    inv = invariant_factors(M)
    return AbelianInvariants(ncols - len(inv), tuple(d for d in inv if d != 1))


# -- Goeritz matrix -----------------------------------------------------------------------


def goeritz_matrix(d: LinkDiagram) -> list[list[int]]:
    """Unreduced Goeritz matrix on the white regions of a checkerboard coloring."""
    if d.loops:
        raise ValueError("Goeritz oracle needs a diagram without crossingless loops")
    faces, face_of = diagram_faces(d)
    if len(faces) != len(d.crossings) + 2:
        raise ValueError("diagram is not connected")
    color = {0: 0}
    stack = [0]
    while stack:
        f = stack.pop()
        for ci, k in faces[f]:
            for nb in (face_of[(ci, (k + 1) % 4)], face_of[(ci, (k - 1) % 4)]):
                if nb not in color:
                    color[nb] = 1 - color[f]
                    stack.append(nb)
                elif color[nb] == color[f]:
                    raise ValueError("projection is not checkerboard colorable")
    white = [f for f in range(len(faces)) if color[f] == 0]
    pos = {f: i for i, f in enumerate(white)}
    n = len(white)
    G = [[0] * n for _ in range(n)]
    for ci in range(len(d.crossings)):
        if color[face_of[(ci, 1)]] == 0:
            eta, k = 1, 1
        else:
            eta, k = -1, 0
        r1, r2 = face_of[(ci, k)], face_of[(ci, k + 2)]
        if r1 != r2:
            i, j = pos[r1], pos[r2]
            G[i][j] -= eta
            G[j][i] -= eta
    for i in range(n):
        G[i][i] = -sum(G[i][j] for j in range(n) if j != i)
    return G


def goeritz_h1_double_cover(d: LinkDiagram) -> AbelianInvariants:
    """``H_1`` of the double branched cover from the reduced Goeritz matrix."""
    if not d.crossings and len(d.loops) == 1:
        return AbelianInvariants(0)
    G = goeritz_matrix(d)
    reduced = [row[:-1] for row in G[:-1]]
    if not reduced:
        return AbelianInvariants(0)
    return cokernel_by_minors(reduced)
