"""A concrete cartesian closed category of finite sets.

Objects are finite sets of string labels; morphisms are total function
tables.  Structure is chosen, not up-to-iso: the terminal object, binary
products and exponentials have canonical label grammars so that equal
constructions are equal tables:

  unit element      "()"
  pair label        "(a,b)"
  function label    "{a->b,c->d}"   (entries sorted by source)
  subset label      "{x,y}"         (elements sorted; used by relations)

Construction of large objects is size-guarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

MAX_OBJECT_SIZE = 1_000_000


class ModelSizeError(Exception):
    pass


@dataclass(frozen=True)
class FinSet:
    elements: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        if list(self.elements) != sorted(set(self.elements)):
            object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))
        object.__setattr__(self, "_elemset", frozenset(self.elements))

    def __eq__(self, other):
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, label: str) -> bool:
        return label in self._elemset

    def display(self) -> str:
        return self.name or "{" + ",".join(self.elements) + "}"


@dataclass(frozen=True)
class FinMap:
    dom: FinSet
    cod: FinSet
    table: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(sorted(self.table)))
        object.__setattr__(self, "_dict", dict(self.table))
        keys = [k for k, _ in self.table]
        if keys != list(self.dom.elements):
            raise ValueError(
                f"table keys {keys} do not enumerate the domain {self.dom.elements}"
            )
        for _, v in self.table:
            if v not in self.cod:
                raise ValueError(f"value {v!r} not in codomain")

    def __eq__(self, other):
        return (
            isinstance(other, FinMap)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.table))

    def apply(self, x: str) -> str:
        return self._dict[x]

    def as_dict(self) -> dict[str, str]:
        return dict(self.table)


def fmap(dom: FinSet, cod: FinSet, fn) -> FinMap:
    return FinMap(dom, cod, tuple((x, fn(x)) for x in dom.elements))


def terminal() -> FinSet:
    return FinSet(("()",), "1")


def terminal_map(dom: FinSet) -> FinMap:
    return fmap(dom, terminal(), lambda _: "()")


def identity(x: FinSet) -> FinMap:
    return fmap(x, x, lambda e: e)


def compose(g: FinMap, f: FinMap) -> FinMap:
    if f.cod != g.dom:
        raise ValueError(
            f"cannot compose: {f.cod.display()} vs {g.dom.display()}"
        )
    gd = g.as_dict()
    fd = f.as_dict()
    return FinMap(f.dom, g.cod, tuple((x, gd[fd[x]]) for x in f.dom.elements))


# ------------------------------------------------------------------ label codecs


def pair_label(a: str, b: str) -> str:
    return f"({a},{b})"


def unpair_label(label: str) -> tuple[str, str]:
    if not (label.startswith("(") and label.endswith(")")):
        raise ValueError(f"not a pair label: {label!r}")
    body = label[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1 :]
    raise ValueError(f"not a pair label: {label!r}")


def split_top(body: str) -> list[str]:
    """Split a brace-body on top-level commas."""
    if not body:
        return []
    out, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(body[start:i])
            start = i + 1
    out.append(body[start:])
    return out


def set_label(items) -> str:
    return "{" + ",".join(sorted(items)) + "}"


def unset_label(label: str) -> list[str]:
    if not (label.startswith("{") and label.endswith("}")):
        raise ValueError(f"not a set label: {label!r}")
    return split_top(label[1:-1])


def fn_label(mapping: dict[str, str]) -> str:
    return "{" + ",".join(f"{k}->{v}" for k, v in sorted(mapping.items())) + "}"


def unfn_label(label: str) -> dict[str, str]:
    out = {}
    for entry in unset_label(label):
        depth = 0
        for i in range(len(entry) - 1):
            ch = entry[i]
            if ch in "({":
                depth += 1
            elif ch in ")}":
                depth -= 1
            elif ch == "-" and entry[i + 1] == ">" and depth == 0:
                out[entry[:i]] = entry[i + 2 :]
                break
        else:
            raise ValueError(f"not a function entry: {entry!r}")
    return out


# --------------------------------------------------------------------- products


def product(x: FinSet, y: FinSet) -> FinSet:
    if len(x) * len(y) > MAX_OBJECT_SIZE:
        raise ModelSizeError(f"product of sizes {len(x)} x {len(y)} exceeds the cap")
    elems = tuple(pair_label(a, b) for a in x.elements for b in y.elements)
    return FinSet(elems, f"({x.display()}x{y.display()})")


def proj1(x: FinSet, y: FinSet) -> FinMap:
    return fmap(product(x, y), x, lambda e: unpair_label(e)[0])


def proj2(x: FinSet, y: FinSet) -> FinMap:
    return fmap(product(x, y), y, lambda e: unpair_label(e)[1])


def pairing(f: FinMap, g: FinMap) -> FinMap:
    if f.dom != g.dom:
        raise ValueError("pairing needs a shared domain")
    cod = product(f.cod, g.cod)
    return fmap(f.dom, cod, lambda x: pair_label(f.apply(x), g.apply(x)))


def product_map(f: FinMap, g: FinMap) -> FinMap:
    dom = product(f.dom, g.dom)
    cod = product(f.cod, g.cod)

    def go(e: str) -> str:
        a, b = unpair_label(e)
        return pair_label(f.apply(a), g.apply(b))

    return fmap(dom, cod, go)


# ------------------------------------------------------------------ exponentials


def exponential(y: FinSet, z: FinSet) -> FinSet:
    """The object of functions from y to z."""
    if len(y) and len(z) == 0:
        return FinSet((), f"({z.display()}^{y.display()})")
    if len(z) ** max(len(y), 1) > MAX_OBJECT_SIZE:
        raise ModelSizeError(
            f"exponential of sizes {len(z)}^{len(y)} exceeds the cap"
        )
    elems = []
    for values in iproduct(z.elements, repeat=len(y)):
        elems.append(fn_label(dict(zip(y.elements, values))))
    return FinSet(tuple(elems), f"({z.display()}^{y.display()})")


def eval_map(y: FinSet, z: FinSet) -> FinMap:
    dom = product(exponential(y, z), y)

    def go(e: str) -> str:
        f, a = unpair_label(e)
        return unfn_label(f)[a]

    return fmap(dom, z, go)


def curry(f: FinMap, x: FinSet, y: FinSet) -> FinMap:
    """Transpose of f : x * y -> z into x -> z^y."""
    z = f.cod
    cod = exponential(y, z)

    def go(a: str) -> str:
        return fn_label({b: f.apply(pair_label(a, b)) for b in y.elements})

    return fmap(x, cod, go)


# ------------------------------------------------------------------- host layer


@dataclass(frozen=True)
class FinSetCCC:
    """The host category with a designated finite list of objects.

    The category is all finite label sets; `objects` are the generators
    enumerated by linting and syntax extraction.
    """

    objects: tuple[FinSet, ...]

    def __post_init__(self):
        if terminal() not in self.objects:
            object.__setattr__(self, "objects", (terminal(),) + self.objects)
