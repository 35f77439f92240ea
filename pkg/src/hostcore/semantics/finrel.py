"""The finite relational model: sets and relations, enriched in finite sets.

Objects are canonical finite sets N0, N1, ..; the hom-object C(A, B) is
the powerset of A x B (a finite set of relation labels), composition is
relational, the tensor is the cartesian product on sets and relations,
and the structural isomorphisms are graphs of the evident bijections.
A desk-scale stand-in for the category of sets and relations.
"""

from __future__ import annotations

from itertools import combinations

from .finset import (
    FinSet,
    FinSetCCC,
    ModelSizeError,
    pair_label,
    product,
    set_label,
    terminal,
    unpair_label,
    unset_label,
)
from .smc import EnrichedSMC, FiniteModel, SMCError

MAX_LINT_SET_SIZE = 3
_MAX_HOM_BITS = 20


def canonical_set(size: int) -> FinSet:
    return FinSet(tuple(str(i) for i in range(size)), f"N{size}")


def rel_label(pairs) -> str:
    return set_label(pair_label(a, b) for a, b in pairs)


def rel_pairs(label: str) -> frozenset[tuple[str, str]]:
    return frozenset(unpair_label(p) for p in unset_label(label))


class FinRelSMC(EnrichedSMC):
    """Relations between finite sets, with hom-objects in the host."""

    def __init__(self, objects: tuple[FinSet, ...]):
        self.objects = objects
        self.unit = canonical_set(1)
        self._hom_cache: dict[tuple[FinSet, FinSet], FinSet] = {}

    def hom(self, a: FinSet, b: FinSet) -> FinSet:
        cached = self._hom_cache.get((a, b))
        if cached is not None:
            return cached
        n = len(a) * len(b)
        if n > _MAX_HOM_BITS:
            raise ModelSizeError(
                f"hom powerset 2^{n} is too large to enumerate"
            )
        pairs = [(x, y) for x in a.elements for y in b.elements]
        labels = []
        for k in range(n + 1):
            for chosen in combinations(pairs, k):
                labels.append(rel_label(chosen))
        out = FinSet(tuple(labels), f"P({a.display()}x{b.display()})")
        self._hom_cache[(a, b)] = out
        return out

    def comp_point(self, a, b, c, g: str, f: str) -> str:
        rf, rg = rel_pairs(f), rel_pairs(g)
        out = {(x, z) for x, y in rf for y2, z in rg if y == y2}
        return rel_label(out)

    def id_point(self, a: FinSet) -> str:
        return rel_label((x, x) for x in a.elements)

    def tensor_obj(self, a: FinSet, b: FinSet) -> FinSet:
        return product(a, b)

    def tensor_point(self, a, b, c, d, p: str, q: str) -> str:
        rp, rq = rel_pairs(p), rel_pairs(q)
        out = {
            (pair_label(x, u), pair_label(y, v))
            for x, y in rp
            for u, v in rq
        }
        return rel_label(out)

    def assoc_point(self, a, b, c) -> str:
        pairs = []
        for x in a.elements:
            for y in b.elements:
                for z in c.elements:
                    pairs.append(
                        (
                            pair_label(pair_label(x, y), z),
                            pair_label(x, pair_label(y, z)),
                        )
                    )
        return rel_label(pairs)

    def assoc_inv_point(self, a, b, c) -> str:
        return _converse(self.assoc_point(a, b, c))

    def lunit_point(self, a) -> str:
        i = self.unit.elements[0]
        return rel_label((pair_label(i, x), x) for x in a.elements)

    def lunit_inv_point(self, a) -> str:
        return _converse(self.lunit_point(a))

    def runit_point(self, a) -> str:
        i = self.unit.elements[0]
        return rel_label((pair_label(x, i), x) for x in a.elements)

    def runit_inv_point(self, a) -> str:
        return _converse(self.runit_point(a))

    def sym_point(self, a, b) -> str:
        pairs = []
        for x in a.elements:
            for y in b.elements:
                pairs.append((pair_label(x, y), pair_label(y, x)))
        return rel_label(pairs)


def _converse(label: str) -> str:
    return rel_label((b, a) for a, b in rel_pairs(label))


def finrel_model(max_set_size: int) -> FiniteModel:
    """The bundled relational model on canonical sets up to `max_set_size`.

    Refuses caps beyond MAX_LINT_SET_SIZE: the coherence checks enumerate
    all object tuples, which stops being exhaustively checkable at desk
    scale above that bound.
    """
    if max_set_size < 1:
        raise ValueError("max_set_size must be at least 1")
    if max_set_size > MAX_LINT_SET_SIZE:
        raise ModelSizeError(
            f"max_set_size {max_set_size} exceeds the documented bound "
            f"{MAX_LINT_SET_SIZE}"
        )
    objects = tuple(canonical_set(k) for k in range(max_set_size + 1))
    host = FinSetCCC(objects + (terminal(),))
    return FiniteModel(host, FinRelSMC(objects), faithful=False)
