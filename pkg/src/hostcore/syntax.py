"""Abstract syntax for both language levels: types, terms, contexts, substitution.

The host level is a simply typed lambda calculus with unit, products,
arrows and the bridging Proof(A, B) type whose components live at the
core level.  The core level is a linear calculus with a tensor, a unit,
let eliminators and the two communication forms promote / derelict.

All values here are immutable; sharing between threads is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union


# --------------------------------------------------------------------------- types


class HostType:
    __slots__ = ()


class CoreType:
    __slots__ = ()


@dataclass(frozen=True)
class Unit(HostType):
    """The host unit type 1 (type of the trivial term)."""


@dataclass(frozen=True)
class HostBase(HostType):
    name: str


@dataclass(frozen=True)
class Prod(HostType):
    left: HostType
    right: HostType


@dataclass(frozen=True)
class Arrow(HostType):
    dom: HostType
    cod: HostType


@dataclass(frozen=True)
class Proof(HostType):
    """Host type of promoted core programs from `dom` to `cod` (core types)."""

    dom: CoreType
    cod: CoreType


@dataclass(frozen=True)
class UnitI(CoreType):
    """The core unit type I."""


@dataclass(frozen=True)
class CoreBase(CoreType):
    name: str


@dataclass(frozen=True)
class Tensor(CoreType):
    left: CoreType
    right: CoreType


Type = Union[HostType, CoreType]


def tensor_of(types: list[CoreType] | tuple[CoreType, ...]) -> CoreType:
    """Right-associated tensor of a list of core types; I when empty."""
    ts = list(types)
    if not ts:
        return UnitI()
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Tensor(t, out)
    return out


# --------------------------------------------------------------------------- terms


class HostTerm:
    __slots__ = ()


class CoreTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Star(HostTerm):
    """The host unit term."""


@dataclass(frozen=True)
class HostVar(HostTerm):
    name: str


@dataclass(frozen=True)
class Pair(HostTerm):
    first: HostTerm
    second: HostTerm


@dataclass(frozen=True)
class Fst(HostTerm):
    arg: HostTerm


@dataclass(frozen=True)
class Snd(HostTerm):
    arg: HostTerm


@dataclass(frozen=True)
class Lam(HostTerm):
    var: str
    ann: HostType
    body: HostTerm


@dataclass(frozen=True)
class App(HostTerm):
    fun: HostTerm
    arg: HostTerm


@dataclass(frozen=True)
class Promote(HostTerm):
    """Imports a core program into the host.

    `params` is the core context consumed by the body, in declared order;
    the whole block is a binder for those core variables.
    """

    params: tuple[tuple[str, CoreType], ...]
    body: CoreTerm


@dataclass(frozen=True)
class HostConst(HostTerm):
    name: str


@dataclass(frozen=True)
class Bullet(CoreTerm):
    """The core unit term."""


@dataclass(frozen=True)
class CoreVar(CoreTerm):
    name: str


@dataclass(frozen=True)
class TensorPair(CoreTerm):
    left: CoreTerm
    right: CoreTerm


@dataclass(frozen=True)
class LetTensor(CoreTerm):
    scrutinee: CoreTerm
    left: str
    right: str
    body: CoreTerm


@dataclass(frozen=True)
class LetUnit(CoreTerm):
    scrutinee: CoreTerm
    body: CoreTerm


@dataclass(frozen=True)
class Derelict(CoreTerm):
    """Re-exposes a host term of Proof type at the core level.

    `arg` is the linear resource it consumes.  In source programs this is
    a variable (or None, resolved by the checker when the ambient core
    context is a singleton); substitution may install a general core term
    here, leaving a redex for the rewriter.
    """

    host: HostTerm
    arg: CoreTerm | None


@dataclass(frozen=True)
class CoreConstApp(CoreTerm):
    """A core constant applied to arguments filling its declared context."""

    name: str
    args: tuple[CoreTerm, ...]


Term = Union[HostTerm, CoreTerm]


# ------------------------------------------------------------------------ contexts


@dataclass(frozen=True)
class HostContext:
    entries: tuple[tuple[str, HostType], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate names in host context: {names}")

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def lookup(self, name: str) -> HostType | None:
        for n, ty in self.entries:
            if n == name:
                return ty
        return None

    def extended(self, name: str, ty: HostType) -> "HostContext":
        return HostContext(self.entries + ((name, ty),))

    def __iter__(self) -> Iterator[tuple[str, HostType]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CoreContext:
    """Ordered linear context; the order fixes the tensor of its types."""

    entries: tuple[tuple[str, CoreType], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate names in core context: {names}")

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def lookup(self, name: str) -> CoreType | None:
        for n, ty in self.entries:
            if n == name:
                return ty
        return None

    def removed(self, name: str) -> "CoreContext":
        return CoreContext(tuple((n, t) for n, t in self.entries if n != name))

    def extended(self, name: str, ty: CoreType) -> "CoreContext":
        return CoreContext(self.entries + ((name, ty),))

    def tensor(self) -> CoreType:
        return tensor_of([t for _, t in self.entries])

    def __iter__(self) -> Iterator[tuple[str, CoreType]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MixedContext:
    host: HostContext
    core: CoreContext

    def __post_init__(self) -> None:
        shared = set(self.host.names()) & set(self.core.names())
        if shared:
            raise ValueError(f"host/core namespaces overlap: {sorted(shared)}")


# ------------------------------------------------------------------- free variables


def free_host_vars(t: Term) -> frozenset[str]:
    """Free host variables of a term at either level."""
    match t:
        case Star() | HostConst(_) | Bullet() | CoreVar(_):
            return frozenset()
        case HostVar(x):
            return frozenset({x})
        case Pair(a, b) | App(a, b):
            return free_host_vars(a) | free_host_vars(b)
        case Fst(a) | Snd(a):
            return free_host_vars(a)
        case Lam(x, _, body):
            return free_host_vars(body) - {x}
        case Promote(_, body):
            return free_host_vars(body)
        case TensorPair(f, g):
            return free_host_vars(f) | free_host_vars(g)
        case LetTensor(s, _, _, body) | LetUnit(s, body):
            return free_host_vars(s) | free_host_vars(body)
        case Derelict(h, arg):
            fv = free_host_vars(h)
            if arg is not None:
                fv |= free_host_vars(arg)
            return fv
        case CoreConstApp(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= free_host_vars(a)
            return out
    raise TypeError(f"not a term: {t!r}")


def free_core_vars(t: Term) -> frozenset[str]:
    """Free core variables.

    Host subterms are core-closed (a promote block binds its whole core
    context), so traversal does not descend into them.
    """
    match t:
        case Star() | HostVar(_) | HostConst(_) | Bullet():
            return frozenset()
        case Pair() | App() | Fst() | Snd() | Lam():
            return frozenset()
        case Promote(params, body):
            return free_core_vars(body) - {n for n, _ in params}
        case CoreVar(a):
            return frozenset({a})
        case TensorPair(f, g):
            return free_core_vars(f) | free_core_vars(g)
        case LetTensor(s, a, b, body):
            return free_core_vars(s) | (free_core_vars(body) - {a, b})
        case LetUnit(s, body):
            return free_core_vars(s) | free_core_vars(body)
        case Derelict(_, arg):
            return free_core_vars(arg) if arg is not None else frozenset()
        case CoreConstApp(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= free_core_vars(a)
            return out
    raise TypeError(f"not a term: {t!r}")


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """A name not in `avoid`, derived from `base` by priming."""
    cand = base
    while cand in avoid:
        cand += "'"
    return cand


# ---------------------------------------------------------------------- alpha


def alpha_eq(u: Term, v: Term) -> bool:
    """Equality up to renaming of bound variables (both levels)."""
    return _alpha(u, v, {}, {})


def _alpha(u: Term, v: Term, lm: Mapping[str, str], rm: Mapping[str, str]) -> bool:
    match u, v:
        case Star(), Star():
            return True
        case HostVar(x), HostVar(y):
            return lm.get(x, x) == rm.get(y, y)
        case HostConst(a), HostConst(b):
            return a == b
        case Pair(a1, b1), Pair(a2, b2):
            return _alpha(a1, a2, lm, rm) and _alpha(b1, b2, lm, rm)
        case Fst(a), Fst(b):
            return _alpha(a, b, lm, rm)
        case Snd(a), Snd(b):
            return _alpha(a, b, lm, rm)
        case App(f1, a1), App(f2, a2):
            return _alpha(f1, f2, lm, rm) and _alpha(a1, a2, lm, rm)
        case Lam(x, tx, b1), Lam(y, ty, b2):
            if tx != ty:
                return False
            nv = _gensym(lm, rm)
            return _alpha(b1, b2, {**lm, x: nv}, {**rm, y: nv})
        case Promote(ps, b1), Promote(qs, b2):
            if len(ps) != len(qs):
                return False
            if tuple(t for _, t in ps) != tuple(t for _, t in qs):
                return False
            lm2, rm2 = dict(lm), dict(rm)
            for (x, _), (y, _) in zip(ps, qs):
                nv = _gensym(lm2, rm2)
                lm2[x] = nv
                rm2[y] = nv
            return _alpha(b1, b2, lm2, rm2)
        case Bullet(), Bullet():
            return True
        case CoreVar(a), CoreVar(b):
            return lm.get(a, a) == rm.get(b, b)
        case TensorPair(f1, g1), TensorPair(f2, g2):
            return _alpha(f1, f2, lm, rm) and _alpha(g1, g2, lm, rm)
        case LetTensor(s1, a1, b1, e1), LetTensor(s2, a2, b2, e2):
            if not _alpha(s1, s2, lm, rm):
                return False
            n1 = _gensym(lm, rm)
            n2 = _gensym({**lm, a1: n1}, {**rm, a2: n1})
            return _alpha(e1, e2, {**lm, a1: n1, b1: n2}, {**rm, a2: n1, b2: n2})
        case LetUnit(s1, e1), LetUnit(s2, e2):
            return _alpha(s1, s2, lm, rm) and _alpha(e1, e2, lm, rm)
        case Derelict(h1, a1), Derelict(h2, a2):
            if not _alpha(h1, h2, lm, rm):
                return False
            if (a1 is None) != (a2 is None):
                return False
            return a1 is None or _alpha(a1, a2, lm, rm)
        case CoreConstApp(n1, a1s), CoreConstApp(n2, a2s):
            if n1 != n2 or len(a1s) != len(a2s):
                return False
            return all(_alpha(a, b, lm, rm) for a, b in zip(a1s, a2s))
    return False


_GENSYM = "v"


def _gensym(lm: Mapping[str, str], rm: Mapping[str, str]) -> str:
    used = set(lm.values()) | set(rm.values())
    i = 0
    while f"{_GENSYM}{i}" in used:
        i += 1
    return f"{_GENSYM}{i}"


# ------------------------------------------------------------------ substitution


def subst_host(t: HostTerm, x: str, s: HostTerm) -> HostTerm:
    """Capture-avoiding substitution of host term `s` for host variable `x`."""
    match t:
        case Star() | HostConst(_):
            return t
        case HostVar(y):
            return s if y == x else t
        case Pair(a, b):
            return Pair(subst_host(a, x, s), subst_host(b, x, s))
        case Fst(a):
            return Fst(subst_host(a, x, s))
        case Snd(a):
            return Snd(subst_host(a, x, s))
        case App(f, a):
            return App(subst_host(f, x, s), subst_host(a, x, s))
        case Lam(y, ty, body):
            if y == x:
                return t
            if y in free_host_vars(s) and x in free_host_vars(body):
                ny = fresh_name(y, free_host_vars(s) | free_host_vars(body))
                body = subst_host(body, y, HostVar(ny))
                y = ny
            return Lam(y, ty, subst_host(body, x, s))
        case Promote(params, body):
            return Promote(params, subst_host_in_core(body, x, s))
    raise TypeError(f"not a host term: {t!r}")


def subst_host_in_core(f: CoreTerm, x: str, s: HostTerm) -> CoreTerm:
    """Substitution of a host term for a host variable inside a core term."""
    match f:
        case Bullet() | CoreVar(_):
            return f
        case TensorPair(a, b):
            return TensorPair(subst_host_in_core(a, x, s), subst_host_in_core(b, x, s))
        case LetTensor(sc, a, b, body):
            return LetTensor(
                subst_host_in_core(sc, x, s), a, b, subst_host_in_core(body, x, s)
            )
        case LetUnit(sc, body):
            return LetUnit(subst_host_in_core(sc, x, s), subst_host_in_core(body, x, s))
        case Derelict(h, arg):
            na = subst_host_in_core(arg, x, s) if arg is not None else None
            return Derelict(subst_host(h, x, s), na)
        case CoreConstApp(n, args):
            return CoreConstApp(n, tuple(subst_host_in_core(a, x, s) for a in args))
    raise TypeError(f"not a core term: {f!r}")


def subst_core(f: CoreTerm, a: str, g: CoreTerm) -> CoreTerm:
    """Capture-avoiding substitution of core term `g` for core variable `a`.

    Host subterms are core-closed, so they are not traversed.  A derelict
    whose resource is exactly `a` receives `g` in its argument slot; when
    `g` is not a variable that slot becomes a redex handled by the
    rewriting rules.
    """
    return subst_core_multi(f, {a: g})


def subst_core_multi(f: CoreTerm, sub: Mapping[str, CoreTerm]) -> CoreTerm:
    """Simultaneous core substitution (needed by the tensor let rule)."""
    if not sub:
        return f
    fvs: set[str] = set()
    for g in sub.values():
        fvs |= free_core_vars(g)
    match f:
        case Bullet():
            return f
        case CoreVar(b):
            return sub.get(b, f)
        case TensorPair(l, r):
            return TensorPair(subst_core_multi(l, sub), subst_core_multi(r, sub))
        case LetTensor(sc, a, b, body):
            sc2 = subst_core_multi(sc, sub)
            inner = {k: v for k, v in sub.items() if k not in (a, b)}
            if not inner:
                return LetTensor(sc2, a, b, body)
            avoid = fvs | free_core_vars(body) | set(inner)
            if a in fvs:
                na = fresh_name(a, avoid)
                body = subst_core_multi(body, {a: CoreVar(na)})
                a = na
                avoid = avoid | {na}
            if b in fvs:
                nb = fresh_name(b, avoid)
                body = subst_core_multi(body, {b: CoreVar(nb)})
                b = nb
            return LetTensor(sc2, a, b, subst_core_multi(body, inner))
        case LetUnit(sc, body):
            return LetUnit(subst_core_multi(sc, sub), subst_core_multi(body, sub))
        case Derelict(h, arg):
            if arg is None:
                return f
            return Derelict(h, subst_core_multi(arg, sub))
        case CoreConstApp(n, args):
            return CoreConstApp(n, tuple(subst_core_multi(x, sub) for x in args))
    raise TypeError(f"not a core term: {f!r}")


def count_free_core_occurrences(t: Term, name: str) -> int:
    """Number of free occurrences of a core variable (independent audit)."""
    match t:
        case CoreVar(a):
            return 1 if a == name else 0
        case Bullet() | Star() | HostVar(_) | HostConst(_):
            return 0
        case Pair(a, b) | App(a, b):
            return 0
        case Fst(_) | Snd(_) | Lam(_, _, _):
            return 0
        case Promote(params, body):
            if name in {n for n, _ in params}:
                return 0
            return count_free_core_occurrences(body, name)
        case TensorPair(f, g):
            return count_free_core_occurrences(f, name) + count_free_core_occurrences(
                g, name
            )
        case LetTensor(s, a, b, body):
            n = count_free_core_occurrences(s, name)
            if name not in (a, b):
                n += count_free_core_occurrences(body, name)
            return n
        case LetUnit(s, body):
            return count_free_core_occurrences(s, name) + count_free_core_occurrences(
                body, name
            )
        case Derelict(_, arg):
            return count_free_core_occurrences(arg, name) if arg is not None else 0
        case CoreConstApp(_, args):
            return sum(count_free_core_occurrences(a, name) for a in args)
    raise TypeError(f"not a term: {t!r}")
