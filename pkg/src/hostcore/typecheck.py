"""Algorithmic type checker: synthesis for the host, leftover checking for
the core, and type equality as congruence closure over the theory axioms.

Core checking follows the leftover (input/output context) discipline: a
term consumes part of the incoming linear context and returns the rest.
A judgment holds when the leftover is empty.  With `cartesian_core` the
discipline is relaxed: variables are not removed on use and a nonempty
leftover is accepted (weakening and contraction become admissible).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .surface import print_core_type, print_host_type
from .syntax import (
    App,
    Arrow,
    Bullet,
    CoreBase,
    CoreConstApp,
    CoreContext,
    CoreTerm,
    CoreType,
    CoreVar,
    Derelict,
    Fst,
    HostBase,
    HostConst,
    HostContext,
    HostTerm,
    HostType,
    HostVar,
    Lam,
    LetTensor,
    LetUnit,
    MixedContext,
    Pair,
    Prod,
    Promote,
    Proof,
    Snd,
    Star,
    Tensor,
    TensorPair,
    Unit,
    UnitI,
)
from .theories import Theory


@dataclass(frozen=True)
class TypeEnv:
    theory: Theory
    cartesian_core: bool = False


@dataclass(frozen=True)
class HostJudgment:
    ctx: HostContext
    term: HostTerm
    type: HostType


@dataclass(frozen=True)
class CoreJudgment:
    ctx: MixedContext
    term: CoreTerm
    type: CoreType


class TypeCheckError(Exception):
    def __init__(self, message: str, rule: str = ""):
        super().__init__(message)
        self.message = message
        self.rule = rule


def head_rule(term: HostTerm | CoreTerm) -> str:
    """The typing-rule name governing a term's head constructor."""
    match term:
        case Star():
            return "uv"
        case HostVar(_) | HostConst(_):
            return "av"
        case Pair(_, _):
            return "pv"
        case Fst(_):
            return "pi1v"
        case Snd(_):
            return "pi2v"
        case Lam(_, _, _):
            return "aiv"
        case App(_, _):
            return "aev"
        case Promote(_, _):
            return "prom"
        case Bullet():
            return "uc"
        case CoreVar(_):
            return "ac"
        case TensorPair(_, _):
            return "tc"
        case LetTensor(_, _, _, _):
            return "let1c"
        case LetUnit(_, _):
            return "let2c"
        case Derelict(_, _):
            return "der"
        case CoreConstApp(_, _):
            return "tc"
    return ""


# ----------------------------------------------------------------- type equality


def _subtypes(ty, acc: set) -> None:
    acc.add(ty)
    match ty:
        case Prod(l, r) | Arrow(l, r) | Proof(l, r) | Tensor(l, r):
            _subtypes(l, acc)
            _subtypes(r, acc)
        case _:
            pass


def _signature(ty, find):
    match ty:
        case Unit():
            return ("1",)
        case UnitI():
            return ("I",)
        case HostBase(n):
            return ("hb", n)
        case CoreBase(n):
            return ("cb", n)
        case Prod(l, r):
            return ("prod", find(l), find(r))
        case Arrow(l, r):
            return ("arrow", find(l), find(r))
        case Proof(l, r):
            return ("proof", find(l), find(r))
        case Tensor(l, r):
            return ("tensor", find(l), find(r))
    raise TypeError(f"not a type: {ty!r}")


@lru_cache(maxsize=4096)
def _type_classes(axioms: tuple, extra: tuple):
    """Union-find classes of the congruence closure over the axiom set."""
    universe: set = set()
    for ax in axioms:
        _subtypes(ax.lhs, universe)
        _subtypes(ax.rhs, universe)
    for t in extra:
        _subtypes(t, universe)

    parent = {t: t for t in universe}

    def find(t):
        while parent[t] is not t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra is not rb:
            parent[ra] = rb

    for ax in axioms:
        union(ax.lhs, ax.rhs)
    changed = True
    while changed:
        changed = False
        buckets: dict = {}
        for t in universe:
            buckets.setdefault(_signature(t, find), []).append(t)
        for group in buckets.values():
            first = group[0]
            for other in group[1:]:
                if find(first) is not find(other):
                    union(first, other)
                    changed = True
    return {t: find(t) for t in universe}


def type_eq(env: TypeEnv, t1, t2) -> bool:
    """Least congruence containing the theory's type equality axioms."""
    if t1 == t2:
        return True
    if isinstance(t1, HostType) != isinstance(t2, HostType):
        return False
    if not env.theory.type_axioms:
        return False
    classes = _type_classes(env.theory.type_axioms, (t1, t2))
    return classes[t1] == classes[t2]


def _class_members(env: TypeEnv, ty):
    if not env.theory.type_axioms:
        return [ty]
    classes = _type_classes(env.theory.type_axioms, (ty,))
    rep = classes[ty]
    return [t for t, r in classes.items() if r == rep]


def as_prod(env: TypeEnv, ty: HostType):
    for t in _class_members(env, ty):
        if isinstance(t, Prod):
            return t.left, t.right
    return None


def as_arrow(env: TypeEnv, ty: HostType):
    for t in _class_members(env, ty):
        if isinstance(t, Arrow):
            return t.dom, t.cod
    return None


def proof_members(env: TypeEnv, ty: HostType) -> list[tuple[CoreType, CoreType]]:
    """All Proof readings of a type under the theory's type equalities.

    The structural reading, when the type is literally a Proof, comes
    first so that synthesized components stay tight.
    """
    from .surface import print_host_type

    out = [
        (t.dom, t.cod)
        for t in _class_members(env, ty)
        if isinstance(t, Proof) and t != ty
    ]
    out.sort(key=lambda p: print_host_type(Proof(*p)))
    if isinstance(ty, Proof):
        out.insert(0, (ty.dom, ty.cod))
    return out


def canonical_type(env: TypeEnv, ty):
    """A deterministic representative of the type's equality class."""
    from .surface import print_type

    members = _class_members(env, ty)
    if len(members) == 1:
        return ty
    return min(members, key=print_type)


def as_proof(env: TypeEnv, ty: HostType):
    members = proof_members(env, ty)
    return members[0] if members else None


def proof_with_dom(env: TypeEnv, ty: HostType, dom_ty: CoreType):
    """A Proof reading whose domain matches `dom_ty`, when one exists."""
    for a, b in proof_members(env, ty):
        if type_eq(env, a, dom_ty):
            return a, b
    return None


def match_proof_pair(env: TypeEnv, tf: HostType, tg: HostType):
    """Composable Proof readings of two types: (A, B, C) with middle agreed."""
    for a, b in proof_members(env, tf):
        for b2, c in proof_members(env, tg):
            if type_eq(env, b, b2):
                return a, b, c
    return None


def as_tensor(env: TypeEnv, ty: CoreType):
    for t in _class_members(env, ty):
        if isinstance(t, Tensor):
            return t.left, t.right
    return None


# --------------------------------------------------------------- host synthesis


def _spine(t: HostTerm) -> tuple[HostTerm, list[HostTerm]]:
    args: list[HostTerm] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, list(reversed(args))


def elaborate_host(
    env: TypeEnv, ctx: HostContext, t: HostTerm
) -> tuple[HostType, HostTerm]:
    """Synthesize the type; returns the term with deferred pieces resolved."""
    match t:
        case Star():
            return Unit(), t
        case HostVar(x):
            ty = ctx.lookup(x)
            if ty is None:
                raise TypeCheckError(f"unbound host variable {x!r}", "av")
            return ty, t
        case HostConst(name):
            if name in ("comp", "par", "if"):
                raise TypeCheckError(
                    f"built-in {name!r} must be fully applied", "aev"
                )
            ty = env.theory.host_const(name)
            if ty is None:
                raise TypeCheckError(f"unknown host constant {name!r}", "av")
            return ty, t
        case Pair(a, b):
            ta, ea = elaborate_host(env, ctx, a)
            tb, eb = elaborate_host(env, ctx, b)
            return Prod(ta, tb), Pair(ea, eb)
        case Fst(a):
            ta, ea = elaborate_host(env, ctx, a)
            parts = as_prod(env, ta)
            if parts is None:
                raise TypeCheckError(
                    f"fst applied to non-product {print_host_type(ta)}", "pi1v"
                )
            return parts[0], Fst(ea)
        case Snd(a):
            ta, ea = elaborate_host(env, ctx, a)
            parts = as_prod(env, ta)
            if parts is None:
                raise TypeCheckError(
                    f"snd applied to non-product {print_host_type(ta)}", "pi2v"
                )
            return parts[1], Snd(ea)
        case Lam(x, ann, body):
            if ctx.lookup(x) is not None:
                raise TypeCheckError(f"shadowed host variable {x!r}", "aiv")
            tb, eb = elaborate_host(env, ctx.extended(x, ann), body)
            return Arrow(ann, tb), Lam(x, ann, eb)
        case App(_, _):
            head, args = _spine(t)
            if isinstance(head, HostConst) and head.name in ("comp", "par", "if"):
                return _elaborate_family(env, ctx, head.name, args)
            tf, ef = elaborate_host(env, ctx, t.fun)
            arrow = as_arrow(env, tf)
            if arrow is None:
                raise TypeCheckError(
                    f"application of non-function of type {print_host_type(tf)}",
                    "aev",
                )
            ta, ea = elaborate_host(env, ctx, t.arg)
            if not type_eq(env, ta, arrow[0]):
                raise TypeCheckError(
                    f"argument type {print_host_type(ta)} does not match "
                    f"domain {print_host_type(arrow[0])}",
                    "aev",
                )
            return arrow[1], App(ef, ea)
        case Promote(params, body):
            try:
                core_ctx = CoreContext(params)
            except ValueError as exc:
                raise TypeCheckError(str(exc), "prom") from exc
            shared = set(n for n, _ in params) & set(ctx.names())
            if shared:
                raise TypeCheckError(
                    f"promote binders collide with host context: {sorted(shared)}",
                    "prom",
                )
            ta, leftover, eb = elaborate_core(env, ctx, core_ctx, body)
            if leftover.entries and not env.cartesian_core:
                raise TypeCheckError(
                    f"unused linear variable {leftover.names()[0]!r}", "prom"
                )
            return Proof(core_ctx.tensor(), ta), Promote(params, eb)
    raise TypeCheckError(f"not a host term: {t!r}")


def _elaborate_family(env: TypeEnv, ctx: HostContext, name: str, args: list[HostTerm]):
    if name == "if":
        if len(args) != 3:
            raise TypeCheckError("if requires a guard and two branches", "aev")
        if "bool" not in env.theory.base_host_types:
            raise TypeCheckError("if requires the theory to declare 'bool'", "aev")
        tg, eg = elaborate_host(env, ctx, args[0])
        if not type_eq(env, tg, HostBase("bool")):
            raise TypeCheckError(
                f"if guard has type {print_host_type(tg)}, expected bool", "aev"
            )
        t0, e0 = elaborate_host(env, ctx, args[1])
        t1, e1 = elaborate_host(env, ctx, args[2])
        if not type_eq(env, t0, t1):
            raise TypeCheckError(
                f"if branches disagree: {print_host_type(t0)} vs "
                f"{print_host_type(t1)}",
                "aev",
            )
        return t0, App(App(App(HostConst("if"), eg), e0), e1)
    if len(args) != 2:
        raise TypeCheckError(f"{name} takes exactly two arguments", "aev")
    tf, ef = elaborate_host(env, ctx, args[0])
    tg, eg = elaborate_host(env, ctx, args[1])
    pf = as_proof(env, tf)
    pg = as_proof(env, tg)
    if pf is None or pg is None:
        raise TypeCheckError(f"{name} expects Proof-typed arguments", "aev")
    if name == "comp":
        triple = match_proof_pair(env, tf, tg)
        if triple is None:
            raise TypeCheckError(
                f"comp: middle types differ: {print_core_type(pf[1])} vs "
                f"{print_core_type(pg[0])}",
                "aev",
            )
        result: HostType = Proof(triple[0], triple[2])
    else:  # par
        result = Proof(Tensor(pf[0], pg[0]), Tensor(pf[1], pg[1]))
    return result, App(App(HostConst(name), ef), eg)


def check_host(env: TypeEnv, ctx: HostContext, t: HostTerm) -> HostType:
    return elaborate_host(env, ctx, t)[0]


# --------------------------------------------------------------- core checking


def elaborate_core(
    env: TypeEnv, host: HostContext, core_in: CoreContext, f: CoreTerm
) -> tuple[CoreType, CoreContext, CoreTerm]:
    """Leftover checking: returns (type, unconsumed context, resolved term)."""
    match f:
        case Bullet():
            return UnitI(), core_in, f
        case CoreVar(a):
            ty = core_in.lookup(a)
            if ty is None:
                raise TypeCheckError(f"missing linear variable {a!r}", "ac")
            leftover = core_in if env.cartesian_core else core_in.removed(a)
            return ty, leftover, f
        case TensorPair(l, r):
            tl, lo1, el = elaborate_core(env, host, core_in, l)
            tr, lo2, er = elaborate_core(env, host, lo1, r)
            return Tensor(tl, tr), lo2, TensorPair(el, er)
        case LetTensor(sc, a, b, body):
            tsc, lo1, esc = elaborate_core(env, host, core_in, sc)
            parts = as_tensor(env, tsc)
            if parts is None:
                raise TypeCheckError(
                    f"let pattern a (x) b against non-tensor "
                    f"{print_core_type(tsc)}",
                    "let1c",
                )
            if a == b:
                raise TypeCheckError(f"let binders must be distinct: {a!r}", "let1c")
            for binder in (a, b):
                if binder in lo1.names() or binder in host.names():
                    raise TypeCheckError(
                        f"let binder {binder!r} shadows an existing variable",
                        "let1c",
                    )
            inner = lo1.extended(a, parts[0]).extended(b, parts[1])
            tb, lo2, ebody = elaborate_core(env, host, inner, body)
            if not env.cartesian_core:
                for binder in (a, b):
                    if binder in lo2.names():
                        raise TypeCheckError(
                            f"unused linear variable {binder!r}", "let1c"
                        )
            leftover = CoreContext(
                tuple((n, t) for n, t in lo2.entries if n not in (a, b))
            )
            return tb, leftover, LetTensor(esc, a, b, ebody)
        case LetUnit(sc, body):
            tsc, lo1, esc = elaborate_core(env, host, core_in, sc)
            if not type_eq(env, tsc, UnitI()):
                raise TypeCheckError(
                    f"let bullet pattern against non-unit {print_core_type(tsc)}",
                    "let2c",
                )
            tb, lo2, ebody = elaborate_core(env, host, lo1, body)
            return tb, lo2, LetUnit(esc, ebody)
        case Derelict(h, arg):
            if arg is None:
                if len(core_in) != 1:
                    raise TypeCheckError(
                        "derelict without '@' needs a singleton core context",
                        "der",
                    )
                name = core_in.names()[0]
                arg = CoreVar(name)
            ta, lo1, earg = elaborate_core(env, host, core_in, arg)
            th, eh = elaborate_host(env, host, h)
            pf = as_proof(env, th)
            if pf is None:
                raise TypeCheckError(
                    f"derelict of non-Proof type {print_host_type(th)}", "der"
                )
            reading = proof_with_dom(env, th, ta)
            if reading is None:
                raise TypeCheckError(
                    f"derelict consumes {print_core_type(ta)} but needs "
                    f"{print_core_type(pf[0])}",
                    "der",
                )
            return reading[1], lo1, Derelict(eh, earg)
        case CoreConstApp(name, args):
            sig = env.theory.core_const_sig(name)
            if sig is None:
                raise TypeCheckError(f"unknown core constant {name!r}", "tc")
            if len(args) != len(sig.params):
                raise TypeCheckError(
                    f"constant {name!r} expects {len(sig.params)} argument(s), "
                    f"got {len(args)}",
                    "tc",
                )
            lo = core_in
            eargs = []
            for (pname, pty), a in zip(sig.params, args):
                ta, lo, ea = elaborate_core(env, host, lo, a)
                if not type_eq(env, ta, pty):
                    raise TypeCheckError(
                        f"argument {pname!r} of {name!r} has type "
                        f"{print_core_type(ta)}, expected {print_core_type(pty)}",
                        "tc",
                    )
                eargs.append(ea)
            return sig.result, lo, CoreConstApp(name, tuple(eargs))
    raise TypeCheckError(f"not a core term: {f!r}")


def check_core(
    env: TypeEnv, host: HostContext, core_in: CoreContext, f: CoreTerm
) -> tuple[CoreType, CoreContext]:
    ty, leftover, _ = elaborate_core(env, host, core_in, f)
    return ty, leftover


# ---------------------------------------------------------- judgment interface


def check_host_judgment(env: TypeEnv, j: HostJudgment) -> HostJudgment:
    """Check a declared host judgment; returns the elaborated judgment."""
    got, elab = elaborate_host(env, j.ctx, j.term)
    if not type_eq(env, got, j.type):
        raise TypeCheckError(
            f"term has type {print_host_type(got)}, judgment claims "
            f"{print_host_type(j.type)}",
            head_rule(j.term),
        )
    return HostJudgment(j.ctx, elab, j.type)


def check_core_judgment(env: TypeEnv, j: CoreJudgment) -> CoreJudgment:
    got, leftover, elab = elaborate_core(env, j.ctx.host, j.ctx.core, j.term)
    if leftover.entries and not env.cartesian_core:
        raise TypeCheckError(
            f"unused linear variable {leftover.names()[0]!r}", head_rule(j.term)
        )
    if not type_eq(env, got, j.type):
        raise TypeCheckError(
            f"term has type {print_core_type(got)}, judgment claims "
            f"{print_core_type(j.type)}",
            head_rule(j.term),
        )
    return CoreJudgment(j.ctx, elab, j.type)


def check_equality_judgment(env: TypeEnv, eq) -> bool:
    """True iff the two sides are provably equal (see equations.decide_eq)."""
    from . import equations

    jl, jr = equality_sides(env, eq)
    verdict = equations.decide_eq(env, jl, jr)
    return verdict.equal is True


def equality_sides(env: TypeEnv, eq):
    """Check both sides of a surface equation; returns the two judgments."""
    if eq.level == "host":
        jl = check_host_judgment(env, HostJudgment(eq.host_ctx, eq.lhs, eq.type))
        jr = check_host_judgment(env, HostJudgment(eq.host_ctx, eq.rhs, eq.type))
        return jl, jr
    mixed = MixedContext(eq.host_ctx, eq.core_ctx)
    jl = check_core_judgment(env, CoreJudgment(mixed, eq.lhs, eq.type))
    jr = check_core_judgment(env, CoreJudgment(mixed, eq.rhs, eq.type))
    return jl, jr
