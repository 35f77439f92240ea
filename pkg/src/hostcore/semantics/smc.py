"""Enriched symmetric monoidal categories over the finite-sets host.

An EnrichedSMC presents a category enriched in FinSetCCC: hom-objects are
finite sets, composition and the tensor act on points (labels), and the
associator, unitors and symmetry are families of points of hom-objects.
Implementations: TableSMC (explicit tables, JSON round-trip) and the
relational model in finrel.py.  Structure is point-level so coherence
checks never materialize hom-sets of large derived objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable

from .finset import (
    FinMap,
    FinSet,
    FinSetCCC,
    exponential,
    fmap,
    pair_label,
    product,
    terminal,
    unpair_label,
)

CObj = Hashable


class SMCError(Exception):
    pass


class EnrichedSMC:
    """Interface; concrete models override the point-level operations.

    Instances expose `objects` (the listed generators) and `unit`.
    """

    def hom(self, a: CObj, b: CObj) -> FinSet:
        raise NotImplementedError

    def comp_point(self, a: CObj, b: CObj, c: CObj, g: str, f: str) -> str:
        """g after f: composition C(b,c) x C(a,b) -> C(a,c) on points."""
        raise NotImplementedError

    def id_point(self, a: CObj) -> str:
        raise NotImplementedError

    def tensor_obj(self, a: CObj, b: CObj) -> CObj:
        raise NotImplementedError

    def tensor_point(self, a: CObj, b: CObj, c: CObj, d: CObj, p: str, q: str) -> str:
        """p (x) q for p in C(a,b), q in C(c,d), landing in C(a(x)c, b(x)d)."""
        raise NotImplementedError

    def assoc_point(self, a: CObj, b: CObj, c: CObj) -> str:
        raise NotImplementedError

    def assoc_inv_point(self, a: CObj, b: CObj, c: CObj) -> str:
        return self._search_inverse(
            self.tensor_obj(self.tensor_obj(a, b), c),
            self.tensor_obj(a, self.tensor_obj(b, c)),
            self.assoc_point(a, b, c),
        )

    def lunit_point(self, a: CObj) -> str:
        raise NotImplementedError

    def lunit_inv_point(self, a: CObj) -> str:
        return self._search_inverse(self.tensor_obj(self.unit, a), a, self.lunit_point(a))

    def runit_point(self, a: CObj) -> str:
        raise NotImplementedError

    def runit_inv_point(self, a: CObj) -> str:
        return self._search_inverse(self.tensor_obj(a, self.unit), a, self.runit_point(a))

    def sym_point(self, a: CObj, b: CObj) -> str:
        raise NotImplementedError

    def _search_inverse(self, dom: CObj, cod: CObj, p: str) -> str:
        for q in self.hom(cod, dom).elements:
            if (
                self.comp_point(dom, cod, dom, q, p) == self.id_point(dom)
                and self.comp_point(cod, dom, cod, p, q) == self.id_point(cod)
            ):
                return q
        raise SMCError(f"structure point {p!r} has no inverse")

    # -- materialized tables (for interpretation of small objects)

    def comp_map(self, a: CObj, b: CObj, c: CObj) -> FinMap:
        dom = product(self.hom(b, c), self.hom(a, b))

        def go(e: str) -> str:
            g, f = unpair_label(e)
            return self.comp_point(a, b, c, g, f)

        return fmap(dom, self.hom(a, c), go)

    def tensor_map(self, a: CObj, b: CObj, c: CObj, d: CObj) -> FinMap:
        dom = product(self.hom(a, b), self.hom(c, d))
        cod = self.hom(self.tensor_obj(a, c), self.tensor_obj(b, d))

        def go(e: str) -> str:
            p, q = unpair_label(e)
            return self.tensor_point(a, b, c, d, p, q)

        return fmap(dom, cod, go)


# --------------------------------------------------------------------- tables


@dataclass
class TableSMC(EnrichedSMC):
    """An enriched SMC given entirely by finite tables.

    Object names are strings; the object list must be closed under the
    tensor table.  When the associator/unitor tables are omitted the
    tensor must be strictly associative and unital and they default to
    identities.
    """

    objects: tuple[str, ...]
    unit: str
    homs: dict[tuple[str, str], FinSet]
    comp: dict[tuple[str, str, str], dict[tuple[str, str], str]]
    ids: dict[str, str]
    tensor: dict[tuple[str, str], str]
    tensor_hom: dict[tuple[str, str, str, str], dict[tuple[str, str], str]]
    sym: dict[tuple[str, str], str]
    assoc: dict[tuple[str, str, str], str] = field(default_factory=dict)
    lunit: dict[str, str] = field(default_factory=dict)
    runit: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for pair in self.tensor:
            if self.tensor[pair] not in self.objects:
                raise SMCError(f"tensor of {pair} falls outside the object list")
        if not self.assoc:
            for a in self.objects:
                for b in self.objects:
                    for c in self.objects:
                        if self.tensor_obj(self.tensor_obj(a, b), c) != self.tensor_obj(
                            a, self.tensor_obj(b, c)
                        ):
                            raise SMCError(
                                "tensor is not strictly associative; provide 'assoc'"
                            )
        if not self.lunit:
            for a in self.objects:
                if self.tensor_obj(self.unit, a) != a:
                    raise SMCError("tensor is not strictly left-unital; provide 'lunit'")
        if not self.runit:
            for a in self.objects:
                if self.tensor_obj(a, self.unit) != a:
                    raise SMCError("tensor is not strictly right-unital; provide 'runit'")

    def hom(self, a, b) -> FinSet:
        try:
            return self.homs[(a, b)]
        except KeyError as exc:
            raise SMCError(f"missing hom table for ({a}, {b})") from exc

    def comp_point(self, a, b, c, g, f) -> str:
        try:
            return self.comp[(a, b, c)][(g, f)]
        except KeyError as exc:
            raise SMCError(f"missing composition entry ({a},{b},{c})[{g},{f}]") from exc

    def id_point(self, a) -> str:
        return self.ids[a]

    def tensor_obj(self, a, b) -> str:
        try:
            return self.tensor[(a, b)]
        except KeyError as exc:
            raise SMCError(f"missing tensor entry ({a}, {b})") from exc

    def tensor_point(self, a, b, c, d, p, q) -> str:
        try:
            return self.tensor_hom[(a, b, c, d)][(p, q)]
        except KeyError as exc:
            raise SMCError(f"missing tensor-hom entry ({a},{b},{c},{d})") from exc

    def assoc_point(self, a, b, c) -> str:
        if (a, b, c) in self.assoc:
            return self.assoc[(a, b, c)]
        return self.id_point(self.tensor_obj(self.tensor_obj(a, b), c))

    def assoc_inv_point(self, a, b, c) -> str:
        if (a, b, c) in self.assoc:
            return super().assoc_inv_point(a, b, c)
        return self.assoc_point(a, b, c)

    def lunit_point(self, a) -> str:
        return self.lunit.get(a, self.id_point(a))

    def lunit_inv_point(self, a) -> str:
        if a in self.lunit:
            return super().lunit_inv_point(a)
        return self.id_point(a)

    def runit_point(self, a) -> str:
        return self.runit.get(a, self.id_point(a))

    def runit_inv_point(self, a) -> str:
        if a in self.runit:
            return super().runit_inv_point(a)
        return self.id_point(a)

    def sym_point(self, a, b) -> str:
        try:
            return self.sym[(a, b)]
        except KeyError as exc:
            raise SMCError(f"missing symmetry entry ({a}, {b})") from exc


# ---------------------------------------------------------------- finite model


@dataclass
class FiniteModel:
    """A pair (host CCC, enriched SMC) plus the user's faithfulness flag.

    `faithful` permits the equality oracle to conclude equality from equal
    denotations; it is an assertion about the theory/model pair, off by
    default.
    """

    host: FinSetCCC
    core: EnrichedSMC
    faithful: bool = False


# --------------------------------------------------------------------- functors


@dataclass(frozen=True)
class RelabelFunctor:
    """A strict CCC endofunctor of finite sets induced by a label bijection.

    The base bijection acts on atomic labels and extends structurally
    through pair/set/function label grammars, so chosen products and
    exponentials are preserved on the nose.
    """

    base: tuple[tuple[str, str], ...] = ()

    def _fwd(self) -> dict[str, str]:
        return dict(self.base)

    def _inv(self) -> dict[str, str]:
        return {v: k for k, v in self.base}

    def label(self, x: str) -> str:
        return _relabel(x, self._fwd())

    def label_inv(self, x: str) -> str:
        return _relabel(x, self._inv())

    def obj(self, s: FinSet) -> FinSet:
        return FinSet(tuple(self.label(e) for e in s.elements), s.name)

    def obj_inv(self, s: FinSet) -> FinSet:
        return FinSet(tuple(self.label_inv(e) for e in s.elements), s.name)

    def map(self, f: FinMap) -> FinMap:
        return FinMap(
            self.obj(f.dom),
            self.obj(f.cod),
            tuple((self.label(k), self.label(v)) for k, v in f.table),
        )


def _relabel(label: str, base: dict[str, str]) -> str:
    if label == "()":
        return label
    if label.startswith("(") and label.endswith(")"):
        a, b = unpair_label(label)
        return pair_label(_relabel(a, base), _relabel(b, base))
    if label.startswith("{") and label.endswith("}"):
        from .finset import split_top

        parts = split_top(label[1:-1])
        out = []
        for p in parts:
            arrow = _top_arrow(p)
            if arrow is not None:
                k, v = arrow
                out.append(f"{_relabel(k, base)}->{_relabel(v, base)}")
            else:
                out.append(_relabel(p, base))
        return "{" + ",".join(sorted(out)) + "}"
    return base.get(label, label)


def _top_arrow(entry: str):
    depth = 0
    for i in range(len(entry) - 1):
        ch = entry[i]
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "-" and entry[i + 1] == ">" and depth == 0:
            return entry[:i], entry[i + 2 :]
    return None


def verify_strict(functor: RelabelFunctor, objects: tuple[FinSet, ...]) -> None:
    """Check on-the-nose preservation of the chosen CCC structure."""
    if functor.obj(terminal()) != terminal():
        raise SMCError("functor does not preserve the terminal object")
    for x in objects:
        for y in objects:
            if functor.obj(product(x, y)) != product(functor.obj(x), functor.obj(y)):
                raise SMCError("functor does not preserve chosen products strictly")
            try:
                ex = exponential(x, y)
            except Exception:
                continue
            if functor.obj(ex) != exponential(functor.obj(x), functor.obj(y)):
                raise SMCError("functor does not preserve chosen exponentials strictly")


@dataclass
class MappedSMC(EnrichedSMC):
    """The change-of-base image of an enriched SMC along a strict functor."""

    base_smc: EnrichedSMC
    functor: RelabelFunctor

    def __post_init__(self):
        self.objects = self.base_smc.objects
        self.unit = self.base_smc.unit

    def hom(self, a, b) -> FinSet:
        return self.functor.obj(self.base_smc.hom(a, b))

    def comp_point(self, a, b, c, g, f) -> str:
        out = self.base_smc.comp_point(
            a, b, c, self.functor.label_inv(g), self.functor.label_inv(f)
        )
        return self.functor.label(out)

    def id_point(self, a) -> str:
        return self.functor.label(self.base_smc.id_point(a))

    def tensor_obj(self, a, b):
        return self.base_smc.tensor_obj(a, b)

    def tensor_point(self, a, b, c, d, p, q) -> str:
        out = self.base_smc.tensor_point(
            a, b, c, d, self.functor.label_inv(p), self.functor.label_inv(q)
        )
        return self.functor.label(out)

    def assoc_point(self, a, b, c) -> str:
        return self.functor.label(self.base_smc.assoc_point(a, b, c))

    def assoc_inv_point(self, a, b, c) -> str:
        return self.functor.label(self.base_smc.assoc_inv_point(a, b, c))

    def lunit_point(self, a) -> str:
        return self.functor.label(self.base_smc.lunit_point(a))

    def lunit_inv_point(self, a) -> str:
        return self.functor.label(self.base_smc.lunit_inv_point(a))

    def runit_point(self, a) -> str:
        return self.functor.label(self.base_smc.runit_point(a))

    def runit_inv_point(self, a) -> str:
        return self.functor.label(self.base_smc.runit_inv_point(a))

    def sym_point(self, a, b) -> str:
        return self.functor.label(self.base_smc.sym_point(a, b))


def change_of_base(
    functor: RelabelFunctor, core: EnrichedSMC, host_objects: tuple[FinSet, ...] = ()
) -> MappedSMC:
    """Transport an enriched category along a strict CCC functor.

    The functor's strictness is verified on the supplied host objects and
    on the hom-objects of the listed core objects; a non-strict functor
    is rejected.
    """
    check = tuple(host_objects)
    for a in core.objects:
        for b in core.objects:
            check = check + (core.hom(a, b),)
    verify_strict(functor, check)
    return MappedSMC(core, functor)


def compose_relabel(g: RelabelFunctor, f: RelabelFunctor) -> RelabelFunctor:
    keys = {k for k, _ in f.base} | {k for k, _ in g.base}
    return RelabelFunctor(tuple(sorted((k, g.label(f.label(k))) for k in keys)))


# ---------------------------------------------------------------------- JSON IO


def model_to_json(m: FiniteModel) -> str:
    core = m.core
    if not isinstance(core, TableSMC):
        raise SMCError("only table models serialize to JSON")
    doc = {
        "host_objects": [list(o.elements) for o in m.host.objects],
        "faithful": m.faithful,
        "objects": list(core.objects),
        "unit": core.unit,
        "homs": {f"{a}|{b}": list(s.elements) for (a, b), s in sorted(core.homs.items())},
        "comp": {
            f"{a}|{b}|{c}": [[g, f, v] for (g, f), v in sorted(t.items())]
            for (a, b, c), t in sorted(core.comp.items())
        },
        "id": dict(sorted(core.ids.items())),
        "tensor_obj": {f"{a}|{b}": v for (a, b), v in sorted(core.tensor.items())},
        "tensor_hom": {
            f"{a}|{b}|{c}|{d}": [[p, q, v] for (p, q), v in sorted(t.items())]
            for (a, b, c, d), t in sorted(core.tensor_hom.items())
        },
        "sym": {f"{a}|{b}": v for (a, b), v in sorted(core.sym.items())},
        "assoc": {f"{a}|{b}|{c}": v for (a, b, c), v in sorted(core.assoc.items())},
        "lunit": dict(sorted(core.lunit.items())),
        "runit": dict(sorted(core.runit.items())),
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def model_from_json(text: str) -> FiniteModel:
    doc = json.loads(text)
    homs = {
        tuple(k.split("|")): FinSet(tuple(v)) for k, v in doc.get("homs", {}).items()
    }
    comp = {
        tuple(k.split("|")): {(g, f): v for g, f, v in entries}
        for k, entries in doc.get("comp", {}).items()
    }
    tensor_hom = {
        tuple(k.split("|")): {(p, q): v for p, q, v in entries}
        for k, entries in doc.get("tensor_hom", {}).items()
    }
    core = TableSMC(
        objects=tuple(doc["objects"]),
        unit=doc["unit"],
        homs=homs,
        comp=comp,
        ids=dict(doc.get("id", {})),
        tensor={tuple(k.split("|")): v for k, v in doc.get("tensor_obj", {}).items()},
        tensor_hom=tensor_hom,
        sym={tuple(k.split("|")): v for k, v in doc.get("sym", {}).items()},
        assoc={tuple(k.split("|")): v for k, v in doc.get("assoc", {}).items()},
        lunit=dict(doc.get("lunit", {})),
        runit=dict(doc.get("runit", {})),
    )
    host = FinSetCCC(tuple(FinSet(tuple(o)) for o in doc.get("host_objects", [])))
    return FiniteModel(host, core, bool(doc.get("faithful", False)))
