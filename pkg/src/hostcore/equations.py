"""The equational theory: beta/eta rewriting for the host, let-evaluation
and promote/derelict duality for the core, congruence closure with theory
axioms, and a sound (possibly incomplete) equality decision procedure
with an optional finite-model oracle.

All rules fire left-to-right under a deterministic leftmost-outermost
strategy; eta rules contract.  Commuting conversions for core lets are
not implemented as rewrites, so a negative syntactic answer alone is
reported as unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .surface import print_term
from .syntax import (
    App,
    Bullet,
    CoreConstApp,
    CoreTerm,
    CoreVar,
    Derelict,
    Fst,
    HostConst,
    HostTerm,
    HostVar,
    Lam,
    LetTensor,
    LetUnit,
    Pair,
    Promote,
    Proof,
    Snd,
    Star,
    TensorPair,
    Unit,
    alpha_eq,
    count_free_core_occurrences,
    free_core_vars,
    free_host_vars,
    fresh_name,
    subst_core,
    subst_core_multi,
    subst_host,
)
from .typecheck import (
    CoreJudgment,
    HostContext,
    HostJudgment,
    TypeCheckError,
    TypeEnv,
    as_proof,
    check_core_judgment,
    check_host_judgment,
    elaborate_host,
    type_eq,
)

DEFAULT_MAX_STEPS = 1000


class StepBudgetExceeded(Exception):
    def __init__(self, steps: list["Step"]):
        super().__init__(f"normalization exceeded the step budget ({len(steps)} steps)")
        self.steps = steps


@dataclass(frozen=True)
class Step:
    rule: str
    before: HostTerm | CoreTerm
    after: HostTerm | CoreTerm

    def render(self) -> str:
        return f"{self.rule}: {print_term(self.before)} ~> {print_term(self.after)}"


@dataclass
class NormalizeResult:
    term: HostTerm | CoreTerm
    steps: list[Step]


# ------------------------------------------------------------ single-step rules


def _step_host(env: TypeEnv, ctx: HostContext, t: HostTerm):
    """First applicable rewrite at or below a host term, leftmost-outermost."""
    match t:
        case App(Lam(x, _, body), a):
            return "beta-arrow", subst_host(body, x, a)
        case Fst(Pair(a, _)):
            return "beta-prod-1", a
        case Snd(Pair(_, b)):
            return "beta-prod-2", b
        case Promote(params, Derelict(h, CoreVar(a))) if (
            len(params) == 1 and params[0][0] == a
        ):
            return "dual-prom-der", h
        case HostConst(name) if env.theory.host_def(name) is not None:
            return "delta", env.theory.host_def(name).body
        case Lam(x, ty, App(body, HostVar(y))) if (
            x == y and x not in free_host_vars(body)
        ):
            return "eta-arrow", body
        case Pair(Fst(v), Snd(w)) if alpha_eq(v, w):
            return "eta-prod", v
    expansion = _family_expansion(env, ctx, t)
    if expansion is not None:
        return expansion
    if not isinstance(t, Star):
        collapsed = _unit_collapse(env, ctx, t)
        if collapsed is not None:
            return collapsed
    # descend
    match t:
        case Pair(a, b):
            r = _step_host(env, ctx, a)
            if r:
                return r[0], Pair(r[1], b)
            r = _step_host(env, ctx, b)
            if r:
                return r[0], Pair(a, r[1])
        case Fst(a):
            r = _step_host(env, ctx, a)
            if r:
                return r[0], Fst(r[1])
        case Snd(a):
            r = _step_host(env, ctx, a)
            if r:
                return r[0], Snd(r[1])
        case App(f, a):
            r = _step_host(env, ctx, f)
            if r:
                return r[0], App(r[1], a)
            r = _step_host(env, ctx, a)
            if r:
                return r[0], App(f, r[1])
        case Lam(x, ty, body):
            if ctx.lookup(x) is None:
                inner = ctx.extended(x, ty)
            else:  # shadowed binder in an open subterm; keep outer typing
                inner = ctx
            r = _step_host(env, inner, body)
            if r:
                return r[0], Lam(x, ty, r[1])
        case Promote(params, body):
            r = _step_core(env, ctx, body)
            if r:
                return r[0], Promote(params, r[1])
    return None


def _family_expansion(env: TypeEnv, ctx: HostContext, t: HostTerm):
    """Expand comp/par applications into their promote/derelict definitions."""
    match t:
        case App(App(HostConst("comp"), f), g):
            try:
                tf, _ = elaborate_host(env, ctx, f)
            except TypeCheckError:
                return None
            pf = as_proof(env, tf)
            if pf is None:
                return None
            a = fresh_name("a", free_core_vars(f) | free_core_vars(g))
            body = Derelict(g, Derelict(f, CoreVar(a)))
            return "delta-comp", Promote(((a, pf[0]),), body)
        case App(App(HostConst("par"), f), g):
            try:
                tf, _ = elaborate_host(env, ctx, f)
                tg, _ = elaborate_host(env, ctx, g)
            except TypeCheckError:
                return None
            pf, pg = as_proof(env, tf), as_proof(env, tg)
            if pf is None or pg is None:
                return None
            used = free_core_vars(f) | free_core_vars(g)
            a0 = fresh_name("a0", used)
            a1 = fresh_name("a1", used | {a0})
            body = TensorPair(Derelict(f, CoreVar(a0)), Derelict(g, CoreVar(a1)))
            return "delta-par", Promote(((a0, pf[0]), (a1, pg[0])), body)
    return None


def _unit_collapse(env: TypeEnv, ctx: HostContext, t: HostTerm):
    """Terms of the host unit type collapse to the unit term (eta for 1)."""
    try:
        ty, _ = elaborate_host(env, ctx, t)
    except TypeCheckError:
        return None
    if isinstance(ty, Unit) or type_eq(env, ty, Unit()):
        return "eta-unit", Star()
    return None


def _step_core(env: TypeEnv, ctx: HostContext, f: CoreTerm):
    match f:
        case LetTensor(TensorPair(g, h), a, b, body):
            return "el1", subst_core_multi(body, {a: g, b: h})
        case LetUnit(Bullet(), body):
            return "el3", body
        case Derelict(Promote(params, pbody), arg) if arg is not None:
            return "dual-prom-der", _unpack(params, pbody, arg)
        case LetTensor(sc, a, b, body):
            rewritten = _el2(sc, a, b, body)
            if rewritten is not None:
                return "el2", rewritten
        case LetUnit(sc, body) if not isinstance(sc, Bullet):
            rewritten = _el4(sc, body)
            if rewritten is not None:
                return "el4", rewritten
        case CoreConstApp(name, args) if env.theory.core_def(name) is not None:
            d = env.theory.core_def(name)
            names = [p for p, _ in d.sig.params]
            return "delta", subst_core_multi(d.body, dict(zip(names, args)))
    # descend
    match f:
        case TensorPair(l, r):
            s = _step_core(env, ctx, l)
            if s:
                return s[0], TensorPair(s[1], r)
            s = _step_core(env, ctx, r)
            if s:
                return s[0], TensorPair(l, s[1])
        case LetTensor(sc, a, b, body):
            s = _step_core(env, ctx, sc)
            if s:
                return s[0], LetTensor(s[1], a, b, body)
            s = _step_core(env, ctx, body)
            if s:
                return s[0], LetTensor(sc, a, b, s[1])
        case LetUnit(sc, body):
            s = _step_core(env, ctx, sc)
            if s:
                return s[0], LetUnit(s[1], body)
            s = _step_core(env, ctx, body)
            if s:
                return s[0], LetUnit(sc, s[1])
        case Derelict(h, arg):
            r = _step_host(env, ctx, h)
            if r:
                return r[0], Derelict(r[1], arg)
            if arg is not None:
                s = _step_core(env, ctx, arg)
                if s:
                    return s[0], Derelict(h, s[1])
        case CoreConstApp(name, args):
            for i, a in enumerate(args):
                s = _step_core(env, ctx, a)
                if s:
                    new = args[:i] + (s[1],) + args[i + 1 :]
                    return s[0], CoreConstApp(name, new)
    return None


def _unpack(params, body: CoreTerm, arg: CoreTerm) -> CoreTerm:
    """derelict(promote(core a1..an. f)) applied to `arg`: nested let-tensors
    unpacking `arg` into the block's binders, then the block body."""
    if not params:
        return LetUnit(arg, body)
    if len(params) == 1:
        return subst_core(body, params[0][0], arg)
    (a1, _), rest = params[0], params[1:]
    avoid = free_core_vars(body) | free_core_vars(arg) | {p for p, _ in params}
    c = fresh_name("w", avoid)
    return LetTensor(arg, a1, c, _unpack(rest, body, CoreVar(c)))


def _binders_on_path_ok(term: CoreTerm, replacement: CoreTerm) -> bool:
    return not (free_core_vars(replacement) & _binder_names(term))


def _binder_names(t: CoreTerm) -> frozenset[str]:
    match t:
        case LetTensor(sc, a, b, body):
            return frozenset({a, b}) | _binder_names(sc) | _binder_names(body)
        case LetUnit(sc, body):
            return _binder_names(sc) | _binder_names(body)
        case TensorPair(l, r):
            return _binder_names(l) | _binder_names(r)
        case Derelict(_, arg):
            return _binder_names(arg) if arg is not None else frozenset()
        case CoreConstApp(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= _binder_names(a)
            return out
        case _:
            return frozenset()


def _el2(sc: CoreTerm, a: str, b: str, body: CoreTerm) -> Optional[CoreTerm]:
    """let a (x) b = sc in C[a (x) b]  ~>  C[sc], when a,b occur only there."""
    if count_free_core_occurrences(body, a) != 1:
        return None
    if count_free_core_occurrences(body, b) != 1:
        return None
    if not _binders_on_path_ok(body, sc):
        return None

    def replace(t: CoreTerm) -> Optional[CoreTerm]:
        match t:
            case TensorPair(CoreVar(x), CoreVar(y)) if x == a and y == b:
                return sc
            case TensorPair(l, r):
                nl = replace(l)
                if nl is not None:
                    return TensorPair(nl, r)
                nr = replace(r)
                if nr is not None:
                    return TensorPair(l, nr)
            case LetTensor(s, x, y, e):
                ns = replace(s)
                if ns is not None:
                    return LetTensor(ns, x, y, e)
                if a not in (x, y) and b not in (x, y):
                    ne = replace(e)
                    if ne is not None:
                        return LetTensor(s, x, y, ne)
            case LetUnit(s, e):
                ns = replace(s)
                if ns is not None:
                    return LetUnit(ns, e)
                ne = replace(e)
                if ne is not None:
                    return LetUnit(s, ne)
            case Derelict(h, arg):
                if arg is not None:
                    na = replace(arg)
                    if na is not None:
                        return Derelict(h, na)
            case CoreConstApp(n, args):
                for i, x in enumerate(args):
                    nx = replace(x)
                    if nx is not None:
                        return CoreConstApp(n, args[:i] + (nx,) + args[i + 1 :])
        return None

    return replace(body)


def _el4(sc: CoreTerm, body: CoreTerm) -> Optional[CoreTerm]:
    """let bullet = sc in C[bullet]  ~>  C[sc] at the first unit position."""
    if not _binders_on_path_ok(body, sc):
        return None

    def replace(t: CoreTerm) -> Optional[CoreTerm]:
        match t:
            case Bullet():
                return sc
            case TensorPair(l, r):
                nl = replace(l)
                if nl is not None:
                    return TensorPair(nl, r)
                nr = replace(r)
                if nr is not None:
                    return TensorPair(l, nr)
            case LetTensor(s, x, y, e):
                ns = replace(s)
                if ns is not None:
                    return LetTensor(ns, x, y, e)
                ne = replace(e)
                if ne is not None:
                    return LetTensor(s, x, y, ne)
            case LetUnit(s, e):
                ns = replace(s)
                if ns is not None:
                    return LetUnit(ns, e)
                ne = replace(e)
                if ne is not None:
                    return LetUnit(s, ne)
            case Derelict(h, arg):
                if arg is not None:
                    na = replace(arg)
                    if na is not None:
                        return Derelict(h, na)
            case CoreConstApp(n, args):
                for i, x in enumerate(args):
                    nx = replace(x)
                    if nx is not None:
                        return CoreConstApp(n, args[:i] + (nx,) + args[i + 1 :])
        return None

    return replace(body)


# ----------------------------------------------------------------- normalization


def normalize(
    env: TypeEnv,
    j: HostJudgment | CoreJudgment,
    max_steps: int = DEFAULT_MAX_STEPS,
    subject_check: bool = False,
) -> NormalizeResult:
    """Normal form of a derivable judgment's subject under the oriented rules.

    Raises StepBudgetExceeded when the budget runs out; with
    `subject_check` every intermediate term is re-checked at the
    judgment's type.
    """
    if isinstance(j, HostJudgment):
        j = check_host_judgment(env, j)
        term: HostTerm | CoreTerm = j.term
        ctx = j.ctx
        stepper = _step_host
    else:
        j = check_core_judgment(env, j)
        term = j.term
        ctx = j.ctx.host
        stepper = _step_core
    steps: list[Step] = []
    while True:
        r = stepper(env, ctx, term)
        if r is None:
            return NormalizeResult(term, steps)
        rule, new_term = r
        steps.append(Step(rule, term, new_term))
        if len(steps) > max_steps:
            raise StepBudgetExceeded(steps)
        if subject_check:
            if isinstance(j, HostJudgment):
                check_host_judgment(env, HostJudgment(j.ctx, new_term, j.type))
            else:
                check_core_judgment(env, CoreJudgment(j.ctx, new_term, j.type))
        term = new_term


# ----------------------------------------------------- alpha-canonical matching


def canon_annotations(env: TypeEnv, t):
    """Rewrite binder annotations to canonical type-class representatives,
    so comparisons are modulo the theory's type equalities."""
    if not env.theory.type_axioms:
        return t
    from .typecheck import canonical_type

    def go(x):
        match x:
            case Star() | HostVar(_) | HostConst(_) | Bullet() | CoreVar(_):
                return x
            case Pair(a, b):
                return Pair(go(a), go(b))
            case Fst(a):
                return Fst(go(a))
            case Snd(a):
                return Snd(go(a))
            case App(f, a):
                return App(go(f), go(a))
            case Lam(v, ty, body):
                return Lam(v, canonical_type(env, ty), go(body))
            case Promote(params, body):
                nps = tuple((p, canonical_type(env, ty)) for p, ty in params)
                return Promote(nps, go(body))
            case TensorPair(a, b):
                return TensorPair(go(a), go(b))
            case LetTensor(sc, a, b, body):
                return LetTensor(go(sc), a, b, go(body))
            case LetUnit(sc, body):
                return LetUnit(go(sc), go(body))
            case Derelict(h, arg):
                return Derelict(go(h), go(arg) if arg is not None else None)
            case CoreConstApp(n, args):
                return CoreConstApp(n, tuple(go(a) for a in args))
        raise TypeError(f"not a term: {x!r}")

    return go(t)


def alpha_canon(t, counter=None):
    """Rename bound variables to a canonical numbered sequence."""
    if counter is None:
        counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"α{counter[0]}"

    match t:
        case Star() | HostVar(_) | HostConst(_) | Bullet() | CoreVar(_):
            return t
        case Pair(a, b):
            return Pair(alpha_canon(a, counter), alpha_canon(b, counter))
        case Fst(a):
            return Fst(alpha_canon(a, counter))
        case Snd(a):
            return Snd(alpha_canon(a, counter))
        case App(f, a):
            return App(alpha_canon(f, counter), alpha_canon(a, counter))
        case Lam(x, ty, body):
            nx = fresh()
            return Lam(nx, ty, alpha_canon(subst_host(body, x, HostVar(nx)), counter))
        case Promote(params, body):
            sub = {}
            nps = []
            for p, pty in params:
                np = fresh()
                sub[p] = CoreVar(np)
                nps.append((np, pty))
            return Promote(tuple(nps), alpha_canon(subst_core_multi(body, sub), counter))
        case TensorPair(l, r):
            return TensorPair(alpha_canon(l, counter), alpha_canon(r, counter))
        case LetTensor(sc, a, b, body):
            nsc = alpha_canon(sc, counter)
            na, nb = fresh(), fresh()
            nbody = subst_core_multi(body, {a: CoreVar(na), b: CoreVar(nb)})
            return LetTensor(nsc, na, nb, alpha_canon(nbody, counter))
        case LetUnit(sc, body):
            return LetUnit(alpha_canon(sc, counter), alpha_canon(body, counter))
        case Derelict(h, arg):
            na = alpha_canon(arg, counter) if arg is not None else None
            return Derelict(alpha_canon(h, counter), na)
        case CoreConstApp(n, args):
            return CoreConstApp(n, tuple(alpha_canon(a, counter) for a in args))
    raise TypeError(f"not a term: {t!r}")


def _subterms(t, acc: list) -> None:
    acc.append(t)
    match t:
        case Pair(a, b) | App(a, b) | TensorPair(a, b):
            _subterms(a, acc)
            _subterms(b, acc)
        case Fst(a) | Snd(a):
            _subterms(a, acc)
        case Lam(_, _, body) | Promote(_, body):
            _subterms(body, acc)
        case LetTensor(sc, _, _, body) | LetUnit(sc, body):
            _subterms(sc, acc)
            _subterms(body, acc)
        case Derelict(h, arg):
            _subterms(h, acc)
            if arg is not None:
                _subterms(arg, acc)
        case CoreConstApp(_, args):
            for a in args:
                _subterms(a, acc)
        case _:
            pass


def _match(pattern, term, pvars: frozenset[str], sub: dict, allow_alpha: bool = False):
    """First-order match of an alpha-canonical pattern against a term.

    Pattern variables are the axiom's context names.  A binding whose
    value mentions a canonically-bound variable is accepted only when the
    instantiated side is binder-free (`allow_alpha`), which keeps
    substitution capture-safe.
    """
    match pattern, term:
        case (HostVar(x), _) if x in pvars:
            if not isinstance(term, HostTerm):
                return None
            return _bind(sub, x, term, allow_alpha)
        case (CoreVar(a), _) if a in pvars:
            if not isinstance(term, CoreTerm):
                return None
            return _bind(sub, a, term, allow_alpha)
        case (Star(), Star()) | (Bullet(), Bullet()):
            return sub
        case (HostVar(x), HostVar(y)) | (CoreVar(x), CoreVar(y)):
            return sub if x == y else None
        case (HostConst(x), HostConst(y)):
            return sub if x == y else None
        case (Pair(a1, b1), Pair(a2, b2)) | (App(a1, b1), App(a2, b2)) | (
            TensorPair(a1, b1),
            TensorPair(a2, b2),
        ):
            s = _match(a1, a2, pvars, sub, allow_alpha)
            return _match(b1, b2, pvars, s, allow_alpha) if s is not None else None
        case (Fst(a1), Fst(a2)) | (Snd(a1), Snd(a2)):
            return _match(a1, a2, pvars, sub, allow_alpha)
        case (Lam(x1, t1, b1), Lam(x2, t2, b2)):
            if t1 != t2 or x1 != x2:
                return None
            return _match(b1, b2, pvars, sub, allow_alpha)
        case (Promote(p1, b1), Promote(p2, b2)):
            if p1 != p2:
                return None
            return _match(b1, b2, pvars, sub, allow_alpha)
        case (LetTensor(s1, a1, c1, b1), LetTensor(s2, a2, c2, b2)):
            if a1 != a2 or c1 != c2:
                return None
            s = _match(s1, s2, pvars, sub, allow_alpha)
            return _match(b1, b2, pvars, s, allow_alpha) if s is not None else None
        case (LetUnit(s1, b1), LetUnit(s2, b2)):
            s = _match(s1, s2, pvars, sub, allow_alpha)
            return _match(b1, b2, pvars, s, allow_alpha) if s is not None else None
        case (Derelict(h1, a1), Derelict(h2, a2)):
            s = _match(h1, h2, pvars, sub, allow_alpha)
            if s is None:
                return None
            if (a1 is None) != (a2 is None):
                return None
            return s if a1 is None else _match(a1, a2, pvars, s, allow_alpha)
        case (CoreConstApp(n1, a1s), CoreConstApp(n2, a2s)):
            if n1 != n2 or len(a1s) != len(a2s):
                return None
            s = sub
            for p, q in zip(a1s, a2s):
                s = _match(p, q, pvars, s, allow_alpha)
                if s is None:
                    return None
            return s
    return None


def _bind(sub: dict, name: str, value, allow_alpha: bool):
    if not allow_alpha:
        for v in _collect_vars(value):
            if v.startswith("α"):
                return None
    if name in sub:
        return sub if alpha_eq(sub[name], value) else None
    out = dict(sub)
    out[name] = value
    return out


def _has_binders(t) -> bool:
    match t:
        case Lam(_, _, _) | Promote(_, _) | LetTensor(_, _, _, _):
            return True
        case Pair(a, b) | App(a, b) | TensorPair(a, b) | LetUnit(a, b):
            return _has_binders(a) or _has_binders(b)
        case Fst(a) | Snd(a):
            return _has_binders(a)
        case Derelict(h, arg):
            return _has_binders(h) or (arg is not None and _has_binders(arg))
        case CoreConstApp(_, args):
            return any(_has_binders(a) for a in args)
        case _:
            return False


def _collect_vars(t) -> frozenset[str]:
    return free_host_vars(t) | free_core_vars(t)


def _apply_sub(t, sub: dict):
    """Instantiate a matched axiom side; None when a binding cannot land."""
    out = t
    for name, value in sub.items():
        if isinstance(value, HostTerm):
            if isinstance(out, HostTerm):
                out = subst_host(out, name, value)
            else:
                from .syntax import subst_host_in_core

                out = subst_host_in_core(out, name, value)
        else:
            if isinstance(out, CoreTerm):
                out = subst_core(out, name, value)
            elif name in free_core_vars(out):
                return None
    return out


# ------------------------------------------------------------- axiom closure


_MAX_UNIVERSE = 400
_MAX_ROUNDS = 6


def _normalized_axioms(env: TypeEnv):
    """Axiom sides in normal form (best effort), both orientations."""
    axioms = []
    for ax in env.theory.term_axioms:
        pvars = frozenset(ax.host_ctx.names()) | frozenset(ax.core_ctx.names())
        sides = [ax.lhs, ax.rhs]
        try:
            if ax.level == "host":
                jl = HostJudgment(ax.host_ctx, ax.lhs, ax.type)
                jr = HostJudgment(ax.host_ctx, ax.rhs, ax.type)
            else:
                from .syntax import MixedContext

                mixed = MixedContext(ax.host_ctx, ax.core_ctx)
                jl = CoreJudgment(mixed, ax.lhs, ax.type)
                jr = CoreJudgment(mixed, ax.rhs, ax.type)
            sides = [normalize(env, jl).term, normalize(env, jr).term]
        except (TypeCheckError, StepBudgetExceeded, ValueError):
            pass
        lhs = alpha_canon(canon_annotations(env, sides[0]))
        rhs = alpha_canon(canon_annotations(env, sides[1]))

        def bare(p) -> bool:
            # a bare pattern-variable side matches every term; that
            # direction floods the closure without adding joinable pairs
            return (isinstance(p, HostVar) and p.name in pvars) or (
                isinstance(p, CoreVar) and p.name in pvars
            )

        if not bare(lhs):
            axioms.append((lhs, rhs, pvars, not _has_binders(rhs)))
        if not bare(rhs):
            axioms.append((rhs, lhs, pvars, not _has_binders(lhs)))
    return axioms


_AXIOM_CACHE: dict[int, tuple] = {}


def _axiom_closure_equal(env: TypeEnv, t1, t2) -> bool:
    """Ground congruence closure over the normal forms and axiom instances."""
    cache_key = id(env.theory)
    cached = _AXIOM_CACHE.get(cache_key)
    if cached is None or cached[0] is not env.theory:
        cached = (env.theory, _normalized_axioms(env))
        _AXIOM_CACHE[cache_key] = cached
    axioms = cached[1]
    if not axioms:
        return False

    c1 = alpha_canon(canon_annotations(env, t1))
    c2 = alpha_canon(canon_annotations(env, t2))
    universe: list = []
    _subterms(c1, universe)
    _subterms(c2, universe)
    pairs: list[tuple] = []
    seen: set[str] = set()

    def key(t):
        return print_term(alpha_canon(t))

    for _ in range(_MAX_ROUNDS):
        grew = False
        for u in list(universe):
            if len(universe) > _MAX_UNIVERSE:
                break
            for lhs, rhs, pvars, allow_alpha in axioms:
                sub = _match(lhs, alpha_canon(u), pvars, {}, allow_alpha)
                if sub is None:
                    continue
                image = _apply_sub(rhs, sub)
                if image is None:
                    continue
                pairs.append((u, image))
                k = key(image)
                if k not in seen:
                    seen.add(k)
                    _subterms(image, universe)
                    grew = True
        if not grew:
            break

    # union-find over canonical printed keys
    parent: dict[str, str] = {}

    def find(k: str) -> str:
        parent.setdefault(k, k)
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    terms_by_key: dict[str, object] = {}
    for u in universe:
        terms_by_key.setdefault(key(u), alpha_canon(u))
    for a, b in pairs:
        union(key(a), key(b))

    def children(t):
        match t:
            case Pair(a, b) | App(a, b) | TensorPair(a, b):
                return ("2", a, b)
            case Fst(a):
                return ("fst", a)
            case Snd(a):
                return ("snd", a)
            case LetTensor(sc, x, y, body):
                return (f"let{x},{y}", sc, body)
            case LetUnit(sc, body):
                return ("letu", sc, body)
            case Derelict(h, arg):
                return ("der", h, arg) if arg is not None else ("der0", h)
            case CoreConstApp(n, args):
                return (f"k{n}", *args)
            case Lam(x, ty, body):
                return (f"lam{x}{ty!r}", body)
            case Promote(ps, body):
                return (f"prom{ps!r}", body)
            case _:
                return None

    for _ in range(_MAX_ROUNDS):
        changed = False
        buckets: dict = {}
        for k, t in terms_by_key.items():
            ch = children(t)
            if ch is None:
                sig = ("leaf", k)
            else:
                head, *rest = ch
                sig = (head, tuple(find(key(x)) for x in rest))
            buckets.setdefault(sig, []).append(k)
        for group in buckets.values():
            for other in group[1:]:
                if find(group[0]) != find(other):
                    union(group[0], other)
                    changed = True
        if not changed:
            break
    return find(key(c1)) == find(key(c2))


# ----------------------------------------------------------------- decide_eq


@dataclass
class EqVerdict:
    """Outcome of an equality query.

    `equal` is True (proved), False (refuted by a model), or None
    (inconclusive).  `method` records which stage produced the verdict.
    """

    equal: Optional[bool]
    method: str  # "normalization" | "axiom-closure" | "semantic-oracle"
    witness: object = None
    note: str = ""


def decide_eq(
    env: TypeEnv,
    lhs: HostJudgment | CoreJudgment,
    rhs: HostJudgment | CoreJudgment,
    oracle=None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> EqVerdict:
    """Decide a term equality; sound, syntactically incomplete.

    `oracle` is an Interpretation into a linted finite model (see the
    semantics package).  Equal denotations prove equality only when the
    model is marked faithful for the ambient theory; unequal denotations
    refute it with a distinguishing point.
    """
    if type(lhs) is not type(rhs):
        raise TypeCheckError("equality sides live at different levels")
    if isinstance(lhs, HostJudgment):
        if lhs.ctx != rhs.ctx or not type_eq(env, lhs.type, rhs.type):
            raise TypeCheckError("equality sides disagree on context or type")
    else:
        if lhs.ctx != rhs.ctx or not type_eq(env, lhs.type, rhs.type):
            raise TypeCheckError("equality sides disagree on context or type")
    try:
        n1 = normalize(env, lhs, max_steps=max_steps)
        n2 = normalize(env, rhs, max_steps=max_steps)
    except StepBudgetExceeded as e:
        return EqVerdict(None, "normalization", None, f"step budget exceeded: {e}")
    if alpha_eq(
        canon_annotations(env, n1.term), canon_annotations(env, n2.term)
    ):
        return EqVerdict(True, "normalization", n1.term)
    if _axiom_closure_equal(env, n1.term, n2.term):
        return EqVerdict(True, "axiom-closure", (n1.term, n2.term))
    if oracle is not None:
        from .semantics import interp as _interp

        m1 = _interp.interpret_judgment(oracle, env, lhs)
        m2 = _interp.interpret_judgment(oracle, env, rhs)
        if m1 != m2:
            point = _first_difference(m1, m2)
            return EqVerdict(False, "semantic-oracle", point)
        if oracle.model.faithful:
            return EqVerdict(True, "semantic-oracle", None)
        return EqVerdict(
            None,
            "semantic-oracle",
            None,
            "syntactically distinct, semantically equal in this model",
        )
    return EqVerdict(
        None, "normalization", (n1.term, n2.term), "normal forms differ"
    )


def _first_difference(m1, m2):
    for x in m1.dom.elements:
        if m1.apply(x) != m2.apply(x):
            return (x, m1.apply(x), m2.apply(x))
    return None


# ------------------------------------------------------------- derived forms


def id_term(a) -> HostTerm:
    """promote(core a:A. a) : Proof(A, A)."""
    return Promote((("a", a),), CoreVar("a"))


def comp_term(a, b, c) -> HostTerm:
    """The composition combinator at types (A, B, C), as a closed lambda."""
    body = Promote(
        (("a", a),),
        Derelict(HostVar("z"), Derelict(HostVar("x"), CoreVar("a"))),
    )
    return Lam("x", Proof(a, b), Lam("z", Proof(b, c), body))


def par_term(a0, b0, a1, b1) -> HostTerm:
    """The parallel combinator at types (A0, B0, A1, B1), as a closed lambda."""
    body = Promote(
        (("a0", a0), ("a1", a1)),
        TensorPair(
            Derelict(HostVar("x0"), CoreVar("a0")),
            Derelict(HostVar("x1"), CoreVar("a1")),
        ),
    )
    return Lam("x0", Proof(a0, b0), Lam("x1", Proof(a1, b1), body))


def derived_combinators(env: TypeEnv) -> dict:
    """Builders for the derived combinators; all images type-check."""
    return {"comp": comp_term, "seq": comp_term, "id": id_term, "par": par_term}
