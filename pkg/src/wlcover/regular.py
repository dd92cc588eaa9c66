"""The associated regular covering ``rho = eta . omega``.

``eta`` is the right regular representation of the image group ``G`` of a
monodromy ``omega``; composing gives a degree-|G| monodromy over the same
diagram whose sheet stabilizers all equal ``Ker omega``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AddendumViolated, NotTransitive
from .monodromy import Monodromy
from .perm import CycleType, GroupTable, Permutation, generate_group, regular_representation

DEFAULT_REGULAR_CAP = 20_000


@dataclass
class RegularCoverData:
    source: Monodromy
    image_group: GroupTable
    rho: Monodromy

    @property
    def order(self) -> int:
        return self.image_group.order

    def projection(self) -> list[int]:
        """Sheet of the source cover under each sheet of the regular cover.

        Regular sheet ``i`` is group element ``g_i``; it lies over sheet
        ``g_i(1)``, which intertwines ``rho`` with ``omega``.
        """
        return [g(1) for g in self.image_group.elements]

    def regular_indices(self) -> dict[str, list[int]]:
        d = self.rho.diagram
        return {n: sorted(set(self.rho.meridian(n).cycle_type().lengths)) for n in d.names}

    def to_json(self) -> dict:
        d = self.source.diagram
        return {
            "group_order": self.order,
            "arcs": {
                str(i + 1): {"omega": list(w.cycle_type().lengths), "rho": list(r.cycle_type().lengths)}
                for i, (w, r) in enumerate(zip(self.source.images, self.rho.images))
            },
            "components": self.regular_indices(),
            "source_indices": {n: list(self.source.meridian(n).cycle_type().lengths) for n in d.names},
        }


def image_group(m: Monodromy, cap: int = DEFAULT_REGULAR_CAP) -> GroupTable:
    return generate_group(list(m.images), cap=cap, degree=m.degree)


def associated_regular(m: Monodromy, cap: int = DEFAULT_REGULAR_CAP) -> RegularCoverData:
    if not m.is_transitive():
        raise NotTransitive("associated regular cover needs a transitive monodromy")
    G = image_group(m, cap)
    eta = regular_representation(G)
    rho = Monodromy(m.diagram, G.order, tuple(eta[p] for p in m.images))
    return RegularCoverData(m, G, rho)


def verify_addendum(rc: RegularCoverData) -> dict:
    """Check every ``rho(a)`` is ``|G|/k`` cycles of length ``k = order(omega(a))``."""
    r = rc.order
    for i, (w, p) in enumerate(zip(rc.source.images, rc.rho.images)):
        k = w.order()
        if p.cycle_type() != CycleType((k,) * (r // k)) or r % k:
            raise AddendumViolated(i + 1)
    report = rc.to_json()
    report["addendum"] = "verified"
    return report


def point_stabilizer(G: GroupTable, point: int) -> frozenset[Permutation]:
    return frozenset(g for g in G.elements if g(point) == point)


def is_regular(m: Monodromy, cap: int = DEFAULT_REGULAR_CAP) -> bool:
    """True iff all point stabilizers of the image group coincide."""
    if not m.is_transitive():
        raise NotTransitive("regularity is defined for transitive monodromies")
    G = image_group(m, cap)
    base = point_stabilizer(G, 1)
    return all(point_stabilizer(G, i) == base for i in range(2, m.degree + 1))
