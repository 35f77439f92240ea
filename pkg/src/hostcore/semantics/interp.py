"""Interpretation of judgments in a finite model.

A host judgment in context denotes a function table from the context
product; a core judgment denotes a table into the hom-object of its
consumed linear context's tensor.  Context re-bracketing and reordering
are mediated by canonical isomorphism points assembled from the model's
associator, unitors and symmetry; in a linted (coherent) model any such
assembly is unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import typecheck
from ..syntax import (
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
    subst_core_multi,
    subst_host,
    tensor_of,
)
from ..typecheck import CoreJudgment, HostJudgment, TypeEnv
from .finset import (
    FinMap,
    FinSet,
    exponential,
    fmap,
    fn_label,
    pair_label,
    product,
    terminal,
    unfn_label,
    unpair_label,
)
from .smc import FiniteModel


class InterpError(Exception):
    pass


@dataclass
class Interpretation:
    """Assignment of objects to base types and morphisms to constants."""

    model: FiniteModel
    host_types: dict[str, FinSet] = field(default_factory=dict)
    core_types: dict[str, object] = field(default_factory=dict)
    host_consts: dict[str, FinMap] = field(default_factory=dict)  # 1 -> X points
    core_consts: dict[str, str] = field(default_factory=dict)  # hom point labels


@dataclass(frozen=True)
class CoreMor:
    """A table from the host context into a hom-object, held point-level.

    The hom-object C(src, dst) is never enumerated; only the values are
    stored, so intermediate morphisms of large derived objects stay cheap.
    """

    dom: FinSet
    src: object
    dst: object
    values: tuple[tuple[str, str], ...]

    def apply(self, x: str) -> str:
        return dict(self.values)[x]

    def to_finmap(self, i: "Interpretation") -> FinMap:
        cod = i.model.core.hom(self.src, self.dst)
        return FinMap(self.dom, cod, self.values)


def _cmor(dom: FinSet, src, dst, fn) -> CoreMor:
    return CoreMor(dom, src, dst, tuple((x, fn(x)) for x in dom.elements))


# ------------------------------------------------------------------ type layer


def interpret_core_type(i: Interpretation, ty: CoreType):
    match ty:
        case UnitI():
            return i.model.core.unit
        case CoreBase(n):
            if n not in i.core_types:
                raise InterpError(f"unmapped core base type {n!r}")
            return i.core_types[n]
        case Tensor(l, r):
            return i.model.core.tensor_obj(
                interpret_core_type(i, l), interpret_core_type(i, r)
            )
    raise InterpError(f"not a core type: {ty!r}")


def interpret_host_type(i: Interpretation, ty: HostType) -> FinSet:
    match ty:
        case Unit():
            return terminal()
        case HostBase(n):
            if n not in i.host_types:
                raise InterpError(f"unmapped host base type {n!r}")
            return i.host_types[n]
        case Prod(l, r):
            return product(interpret_host_type(i, l), interpret_host_type(i, r))
        case Arrow(d, c):
            return exponential(
                interpret_host_type(i, d), interpret_host_type(i, c)
            )
        case Proof(a, b):
            return i.model.core.hom(
                interpret_core_type(i, a), interpret_core_type(i, b)
            )
    raise InterpError(f"not a host type: {ty!r}")


def validate_interpretation(i: Interpretation, env: TypeEnv) -> None:
    """Base types all mapped; type axioms interpreted by equal objects."""
    for n in env.theory.base_host_types:
        if n not in i.host_types:
            raise InterpError(f"unmapped host base type {n!r}")
    for n in env.theory.base_core_types:
        if n not in i.core_types:
            raise InterpError(f"unmapped core base type {n!r}")
    for ax in env.theory.type_axioms:
        if ax.level == "host":
            if interpret_host_type(i, ax.lhs) != interpret_host_type(i, ax.rhs):
                raise InterpError("type axiom sides denote different objects")
        else:
            if interpret_core_type(i, ax.lhs) != interpret_core_type(i, ax.rhs):
                raise InterpError("type axiom sides denote different objects")


# ----------------------------------------------------------- context mediators


@dataclass(frozen=True)
class TreeU:
    pass


@dataclass(frozen=True)
class TreeL:
    obj: object
    tag: str


@dataclass(frozen=True)
class TreeN:
    left: object
    right: object


def tree_obj(smc, t):
    match t:
        case TreeU():
            return smc.unit
        case TreeL(obj, _):
            return obj
        case TreeN(l, r):
            return smc.tensor_obj(tree_obj(smc, l), tree_obj(smc, r))
    raise InterpError(f"not a tree: {t!r}")


def entries_tree(i: Interpretation, entries) -> object:
    leaves = [TreeL(interpret_core_type(i, ty), name) for name, ty in entries]
    return _rt_tree(leaves)


def _rt_tree(leaves: list):
    if not leaves:
        return TreeU()
    if len(leaves) == 1:
        return leaves[0]
    return TreeN(leaves[0], _rt_tree(leaves[1:]))


def _rt_obj(smc, leaves: list):
    if not leaves:
        return smc.unit
    if len(leaves) == 1:
        return leaves[0].obj
    return smc.tensor_obj(leaves[0].obj, _rt_obj(smc, leaves[1:]))


def _pt_id(smc, a):
    return (a, a, smc.id_point(a))


def _pt_compose(smc, q, p):
    if p[1] != q[0]:
        raise InterpError(f"mediator composition mismatch: {p[1]} vs {q[0]}")
    return (p[0], q[1], smc.comp_point(p[0], p[1], q[1], q[2], p[2]))


def _pt_tensor(smc, p, q):
    return (
        smc.tensor_obj(p[0], q[0]),
        smc.tensor_obj(p[1], q[1]),
        smc.tensor_point(p[0], p[1], q[0], q[1], p[2], q[2]),
    )


def _iso_to_list(smc, t):
    """Canonical iso from a tree's object to its right-assoc leaf spine."""
    match t:
        case TreeU():
            return _pt_id(smc, smc.unit), []
        case TreeL(_, _):
            return _pt_id(smc, t.obj), [t]
        case TreeN(l, r):
            pl, ll = _iso_to_list(smc, l)
            pr, lr = _iso_to_list(smc, r)
            step = _pt_tensor(smc, pl, pr)
            return _pt_compose(smc, _merge_pt(smc, ll, lr), step), ll + lr
    raise InterpError(f"not a tree: {t!r}")


def _merge_pt(smc, left: list, right: list):
    """rt(left) (x) rt(right)  ->  rt(left ++ right)."""
    a, b = _rt_obj(smc, left), _rt_obj(smc, right)
    if not left:
        return (smc.tensor_obj(a, b), b, smc.lunit_point(b))
    if not right:
        return (smc.tensor_obj(a, b), a, smc.runit_point(a))
    if len(left) == 1:
        return _pt_id(smc, smc.tensor_obj(a, b))
    x, rest = left[0], left[1:]
    ra = _rt_obj(smc, rest)
    step1 = (
        smc.tensor_obj(smc.tensor_obj(x.obj, ra), b),
        smc.tensor_obj(x.obj, smc.tensor_obj(ra, b)),
        smc.assoc_point(x.obj, ra, b),
    )
    inner = _merge_pt(smc, rest, right)
    step2 = _pt_tensor(smc, _pt_id(smc, x.obj), inner)
    return _pt_compose(smc, step2, step1)


def _iso_from_list(smc, t):
    """Inverse canonical iso: right-assoc leaf spine -> the tree's object."""
    match t:
        case TreeU():
            return _pt_id(smc, smc.unit), []
        case TreeL(_, _):
            return _pt_id(smc, t.obj), [t]
        case TreeN(l, r):
            ql, ll = _iso_from_list(smc, l)
            qr, lr = _iso_from_list(smc, r)
            split = _split_pt(smc, ll, lr)
            step = _pt_tensor(smc, ql, qr)
            return _pt_compose(smc, step, split), ll + lr
    raise InterpError(f"not a tree: {t!r}")


def _split_pt(smc, left: list, right: list):
    """rt(left ++ right)  ->  rt(left) (x) rt(right)."""
    a, b = _rt_obj(smc, left), _rt_obj(smc, right)
    if not left:
        return (b, smc.tensor_obj(a, b), smc.lunit_inv_point(b))
    if not right:
        return (a, smc.tensor_obj(a, b), smc.runit_inv_point(a))
    if len(left) == 1:
        return _pt_id(smc, smc.tensor_obj(a, b))
    x, rest = left[0], left[1:]
    ra = _rt_obj(smc, rest)
    inner = _split_pt(smc, rest, right)
    step1 = _pt_tensor(smc, _pt_id(smc, x.obj), inner)
    step2 = (
        smc.tensor_obj(x.obj, smc.tensor_obj(ra, b)),
        smc.tensor_obj(smc.tensor_obj(x.obj, ra), b),
        smc.assoc_inv_point(x.obj, ra, b),
    )
    return _pt_compose(smc, step2, step1)


def _swap_pt(smc, leaves: list, i: int):
    """rt(leaves) -> rt(leaves with i and i+1 exchanged)."""
    if i == 0:
        x, y, rest = leaves[0], leaves[1], leaves[2:]
        if not rest:
            return (
                smc.tensor_obj(x.obj, y.obj),
                smc.tensor_obj(y.obj, x.obj),
                smc.sym_point(x.obj, y.obj),
            )
        rb = _rt_obj(smc, rest)
        steps = [
            (
                smc.tensor_obj(x.obj, smc.tensor_obj(y.obj, rb)),
                smc.tensor_obj(smc.tensor_obj(x.obj, y.obj), rb),
                smc.assoc_inv_point(x.obj, y.obj, rb),
            ),
            _pt_tensor(
                smc,
                (
                    smc.tensor_obj(x.obj, y.obj),
                    smc.tensor_obj(y.obj, x.obj),
                    smc.sym_point(x.obj, y.obj),
                ),
                _pt_id(smc, rb),
            ),
            (
                smc.tensor_obj(smc.tensor_obj(y.obj, x.obj), rb),
                smc.tensor_obj(y.obj, smc.tensor_obj(x.obj, rb)),
                smc.assoc_point(y.obj, x.obj, rb),
            ),
        ]
        out = steps[0]
        for s in steps[1:]:
            out = _pt_compose(smc, s, out)
        return out
    return _pt_tensor(smc, _pt_id(smc, leaves[0].obj), _swap_pt(smc, leaves[1:], i - 1))


def _perm_pt(smc, src: list, dst: list):
    """rt(src) -> rt(dst) permuting leaves matched by tag."""
    if [l.tag for l in src] == [l.tag for l in dst]:
        return _pt_id(smc, _rt_obj(smc, src))
    cur = list(src)
    out = _pt_id(smc, _rt_obj(smc, cur))
    idx = [l.tag for l in cur].index(dst[0].tag)
    while idx > 0:
        step = _swap_pt(smc, cur, idx - 1)
        cur[idx - 1], cur[idx] = cur[idx], cur[idx - 1]
        out = _pt_compose(smc, step, out)
        idx -= 1
    rest = _perm_pt(smc, cur[1:], dst[1:])
    step = _pt_tensor(smc, _pt_id(smc, cur[0].obj), rest) if cur[1:] else None
    if step is not None:
        out = _pt_compose(smc, step, out)
    return out


def mediator(smc, src_tree, dst_tree):
    """Canonical structural iso between two bracketings of the same leaves."""
    p, src_leaves = _iso_to_list(smc, src_tree)
    q, dst_leaves = _iso_from_list(smc, dst_tree)
    if sorted(l.tag for l in src_leaves) != sorted(l.tag for l in dst_leaves):
        raise InterpError("mediator endpoints have different leaves")
    perm = _perm_pt(smc, src_leaves, dst_leaves)
    return _pt_compose(smc, q, _pt_compose(smc, perm, p))


# -------------------------------------------------------------- host morphisms


def ctx_object(i: Interpretation, ctx: HostContext) -> FinSet:
    obj = terminal()
    for _, ty in ctx:
        obj = product(obj, interpret_host_type(i, ty))
    return obj


def _ctx_lookup(ctx: HostContext, gamma: str, name: str) -> str:
    names = list(ctx.names())
    val = gamma
    for n in reversed(names):
        val, comp = unpair_label(val)
        if n == name:
            return comp
    raise InterpError(f"variable {name!r} not found in environment")


def interpret_host(
    i: Interpretation, env: TypeEnv, ctx: HostContext, t: HostTerm
) -> tuple[HostType, FinMap]:
    dom = ctx_object(i, ctx)
    match t:
        case Star():
            return Unit(), fmap(dom, terminal(), lambda g: "()")
        case HostVar(x):
            ty = ctx.lookup(x)
            if ty is None:
                raise InterpError(f"unbound host variable {x!r}")
            cod = interpret_host_type(i, ty)
            return ty, fmap(dom, cod, lambda g: _ctx_lookup(ctx, g, x))
        case HostConst(name):
            d = env.theory.host_def(name)
            if d is not None:
                got, body_map = interpret_host(i, env, HostContext(), d.body)
                val = body_map.apply("()")
                return d.type, fmap(dom, body_map.cod, lambda g: val)
            if name not in i.host_consts:
                raise InterpError(f"unmapped host constant {name!r}")
            pt = i.host_consts[name]
            ty = env.theory.host_const(name)
            return ty, fmap(dom, pt.cod, lambda g: pt.apply("()"))
        case Pair(a, b):
            ta, fa = interpret_host(i, env, ctx, a)
            tb, fb = interpret_host(i, env, ctx, b)
            cod = product(fa.cod, fb.cod)
            return Prod(ta, tb), fmap(
                dom, cod, lambda g: pair_label(fa.apply(g), fb.apply(g))
            )
        case Fst(a):
            ta, fa = interpret_host(i, env, ctx, a)
            parts = typecheck.as_prod(env, ta)
            if parts is None:
                raise InterpError("fst of non-product")
            cod = interpret_host_type(i, parts[0])
            return parts[0], fmap(dom, cod, lambda g: unpair_label(fa.apply(g))[0])
        case Snd(a):
            ta, fa = interpret_host(i, env, ctx, a)
            parts = typecheck.as_prod(env, ta)
            if parts is None:
                raise InterpError("snd of non-product")
            cod = interpret_host_type(i, parts[1])
            return parts[1], fmap(dom, cod, lambda g: unpair_label(fa.apply(g))[1])
        case Lam(x, ann, body):
            inner_ctx = ctx.extended(x, ann)
            tb, fb = interpret_host(i, env, inner_ctx, body)
            ox = interpret_host_type(i, ann)
            cod = exponential(ox, fb.cod)

            def go(g: str) -> str:
                return fn_label(
                    {vx: fb.apply(pair_label(g, vx)) for vx in ox.elements}
                )

            return Arrow(ann, tb), fmap(dom, cod, go)
        case App(_, _):
            head, args = _host_spine(t)
            if isinstance(head, HostConst) and head.name in ("comp", "par", "if"):
                return _interpret_family(i, env, ctx, head.name, args, dom)
            tf, ff = interpret_host(i, env, ctx, t.fun)
            arrow = typecheck.as_arrow(env, tf)
            if arrow is None:
                raise InterpError("application of non-function")
            ta, fa = interpret_host(i, env, ctx, t.arg)
            cod = interpret_host_type(i, arrow[1])
            return arrow[1], fmap(
                dom, cod, lambda g: unfn_label(ff.apply(g))[fa.apply(g)]
            )
        case Promote(params, body):
            avail = tuple(params)
            ta, leftover, fcore = interpret_core(i, env, ctx, avail, body)
            if leftover:
                raise InterpError("promote body does not consume its context")
            ptype = Proof(tensor_of([ty for _, ty in params]), ta)
            return ptype, fcore.to_finmap(i)
    raise InterpError(f"not a host term: {t!r}")


def _host_spine(t: HostTerm):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, list(reversed(args))


def _interpret_family(i, env, ctx, name, args, dom):
    smc = i.model.core
    if name == "if":
        tg, fg = interpret_host(i, env, ctx, args[0])
        t0, f0 = interpret_host(i, env, ctx, args[1])
        t1, f1 = interpret_host(i, env, ctx, args[2])
        if "true" not in i.host_consts:
            raise InterpError("if needs 'true' mapped in the interpretation")
        true_label = i.host_consts["true"].apply("()")
        return t0, fmap(
            dom,
            f0.cod,
            lambda g: f0.apply(g) if fg.apply(g) == true_label else f1.apply(g),
        )
    tf, ff = interpret_host(i, env, ctx, args[0])
    tg, fg = interpret_host(i, env, ctx, args[1])
    if name == "comp":
        triple = typecheck.match_proof_pair(env, tf, tg)
        if triple is None:
            raise InterpError("comp arguments do not compose")
        oa = interpret_core_type(i, triple[0])
        ob = interpret_core_type(i, triple[1])
        oc = interpret_core_type(i, triple[2])
        cod = smc.hom(oa, oc)
        return Proof(triple[0], triple[2]), fmap(
            dom,
            cod,
            lambda g: smc.comp_point(oa, ob, oc, fg.apply(g), ff.apply(g)),
        )
    pf = typecheck.as_proof(env, tf)
    pg = typecheck.as_proof(env, tg)
    oa = interpret_core_type(i, pf[0])
    ob = interpret_core_type(i, pf[1])
    oa2 = interpret_core_type(i, pg[0])
    ob2 = interpret_core_type(i, pg[1])
    cod = smc.hom(smc.tensor_obj(oa, oa2), smc.tensor_obj(ob, ob2))
    ptype = Proof(Tensor(pf[0], pg[0]), Tensor(pf[1], pg[1]))
    return ptype, fmap(
        dom,
        cod,
        lambda g: smc.tensor_point(oa, ob, oa2, ob2, ff.apply(g), fg.apply(g)),
    )


# -------------------------------------------------------------- core morphisms


def _pw_comp(i, dom, oa, ob, oc, later, earlier) -> CoreMor:
    smc = i.model.core
    return _cmor(
        dom, oa, oc,
        lambda g: smc.comp_point(oa, ob, oc, later.apply(g), earlier.apply(g)),
    )


def _pw_pre_pt(i, dom, pt, f, ob, oc) -> CoreMor:
    """Precompose every value of f : dom -> hom(ob, oc) with pt : oa -> ob."""
    smc = i.model.core
    oa = pt[0]
    return _cmor(
        dom, oa, oc, lambda g: smc.comp_point(oa, ob, oc, f.apply(g), pt[2])
    )


def _pw_post_pt(i, dom, pt, f, oa, ob) -> CoreMor:
    """Postcompose every value of f : dom -> hom(oa, ob) with pt : ob -> oc."""
    smc = i.model.core
    oc = pt[1]
    return _cmor(
        dom, oa, oc, lambda g: smc.comp_point(oa, ob, oc, pt[2], f.apply(g))
    )


def _pw_tensor(i, dom, oa, ob, oc, od, f, g) -> CoreMor:
    smc = i.model.core
    return _cmor(
        dom,
        smc.tensor_obj(oa, oc),
        smc.tensor_obj(ob, od),
        lambda x: smc.tensor_point(oa, ob, oc, od, f.apply(x), g.apply(x)),
    )


def _const_point(i, dom, oa, ob, label) -> CoreMor:
    return _cmor(dom, oa, ob, lambda g: label)


def _consumed(avail, leftover):
    names = {n for n, _ in leftover}
    return tuple(e for e in avail if e[0] not in names)


def interpret_core(
    i: Interpretation, env: TypeEnv, hctx: HostContext, avail, f: CoreTerm
):
    """Returns (core type, leftover entries, table into hom(consumed, type))."""
    smc = i.model.core
    dom = ctx_object(i, hctx)
    match f:
        case Bullet():
            return (
                UnitI(),
                tuple(avail),
                _const_point(i, dom, smc.unit, smc.unit, smc.id_point(smc.unit)),
            )
        case CoreVar(a):
            ty = None
            for n, nty in avail:
                if n == a:
                    ty = nty
            if ty is None:
                raise InterpError(f"missing linear variable {a!r}")
            leftover = tuple(e for e in avail if e[0] != a)
            oa = interpret_core_type(i, ty)
            return ty, leftover, _const_point(i, dom, oa, oa, smc.id_point(oa))
        case TensorPair(l, r):
            tl, lo1, fl = interpret_core(i, env, hctx, avail, l)
            tr, lo2, fr = interpret_core(i, env, hctx, lo1, r)
            c1, c2 = _consumed(avail, lo1), _consumed(lo1, lo2)
            w1, w2 = entries_tree(i, c1), entries_tree(i, c2)
            o1, o2 = tree_obj(smc, w1), tree_obj(smc, w2)
            ol, orr = interpret_core_type(i, tl), interpret_core_type(i, tr)
            x = _pw_tensor(i, dom, o1, ol, o2, orr, fl, fr)
            w = entries_tree(i, _consumed(avail, lo2))
            med = mediator(smc, w, TreeN(w1, w2))
            out = _pw_pre_pt(
                i, dom, med, x, smc.tensor_obj(o1, o2), smc.tensor_obj(ol, orr)
            )
            return Tensor(tl, tr), lo2, out
        case LetTensor(sc, a, b, body):
            tsc, lo1, fsc = interpret_core(i, env, hctx, avail, sc)
            parts = typecheck.as_tensor(env, tsc)
            if parts is None:
                raise InterpError("let tensor pattern against non-tensor")
            ta, tb = parts
            inner = tuple(lo1) + ((a, ta), (b, tb))
            tbody, lo2, fbody = interpret_core(i, env, hctx, inner, body)
            for n, _ in lo2:
                if n in (a, b):
                    raise InterpError(f"let binder {n!r} unused in body")
            c1 = _consumed(avail, lo1)
            cb = _consumed(inner, lo2)
            c2 = tuple(e for e in cb if e[0] not in (a, b))
            w1, w2, wb = entries_tree(i, c1), entries_tree(i, c2), entries_tree(i, cb)
            o1, o2 = tree_obj(smc, w1), tree_obj(smc, w2)
            osc = interpret_core_type(i, tsc)
            x1 = _pw_tensor(
                i, dom, o2, o2, o1, osc,
                _const_point(i, dom, o2, o2, smc.id_point(o2)), fsc,
            )
            consumed_names = {n for n, _ in c1} | {n for n, _ in c2}
            w = entries_tree(i, tuple(e for e in avail if e[0] in consumed_names))
            m1 = mediator(smc, w, TreeN(w2, w1))
            g1 = _pw_pre_pt(
                i, dom, m1, x1, smc.tensor_obj(o2, o1), smc.tensor_obj(o2, osc)
            )
            oa, ob2 = interpret_core_type(i, ta), interpret_core_type(i, tb)
            src = TreeN(w2, TreeN(TreeL(oa, a), TreeL(ob2, b)))
            m2 = mediator(smc, src, wb)
            g2 = _pw_post_pt(
                i, dom, m2, g1, tree_obj(smc, w), smc.tensor_obj(o2, osc)
            )
            otb = interpret_core_type(i, tbody)
            out = _pw_comp(
                i, dom, tree_obj(smc, w), tree_obj(smc, wb), otb, fbody, g2
            )
            leftover = tuple(e for e in lo2 if e[0] not in (a, b))
            return tbody, leftover, out
        case LetUnit(sc, body):
            tsc, lo1, fsc = interpret_core(i, env, hctx, avail, sc)
            tbody, lo2, fbody = interpret_core(i, env, hctx, lo1, body)
            c1, c2 = _consumed(avail, lo1), _consumed(lo1, lo2)
            w1, w2 = entries_tree(i, c1), entries_tree(i, c2)
            o1, o2 = tree_obj(smc, w1), tree_obj(smc, w2)
            x1 = _pw_tensor(
                i, dom, o2, o2, o1, smc.unit,
                _const_point(i, dom, o2, o2, smc.id_point(o2)), fsc,
            )
            w = entries_tree(i, _consumed(avail, lo2))
            m1 = mediator(smc, w, TreeN(w2, w1))
            g1 = _pw_pre_pt(
                i, dom, m1, x1,
                smc.tensor_obj(o2, o1), smc.tensor_obj(o2, smc.unit),
            )
            runit = (smc.tensor_obj(o2, smc.unit), o2, smc.runit_point(o2))
            g2 = _pw_post_pt(
                i, dom, runit, g1, tree_obj(smc, w), smc.tensor_obj(o2, smc.unit)
            )
            otb = interpret_core_type(i, tbody)
            out = _pw_comp(i, dom, tree_obj(smc, w), o2, otb, fbody, g2)
            return tbody, lo2, out
        case Derelict(h, arg):
            if arg is None:
                raise InterpError("unresolved derelict; check the judgment first")
            ta, lo1, farg = interpret_core(i, env, hctx, avail, arg)
            th, fh = interpret_host(i, env, hctx, h)
            pf = typecheck.proof_with_dom(env, th, ta)
            if pf is None:
                raise InterpError("derelict of non-Proof host term")
            oa = interpret_core_type(i, pf[0])
            ob = interpret_core_type(i, pf[1])
            w = entries_tree(i, _consumed(avail, lo1))
            out = _pw_comp(i, dom, tree_obj(smc, w), oa, ob, fh, farg)
            return pf[1], lo1, out
        case CoreConstApp(name, args):
            d = env.theory.core_def(name)
            if d is not None:
                names = [p for p, _ in d.sig.params]
                inlined = subst_core_multi(d.body, dict(zip(names, args)))
                return interpret_core(i, env, hctx, avail, inlined)
            sig = env.theory.core_const_sig(name)
            if sig is None or name not in i.core_consts:
                raise InterpError(f"unmapped core constant {name!r}")
            point = i.core_consts[name]
            odom = interpret_core_type(i, tensor_of([ty for _, ty in sig.params]))
            ores = interpret_core_type(i, sig.result)
            if not args:
                return (
                    sig.result,
                    tuple(avail),
                    _const_point(i, dom, odom, ores, point),
                )
            lo = tuple(avail)
            pieces = []
            for a in args:
                ta, lo, fa = interpret_core(i, env, hctx, lo, a)
                consumed_prev = pieces[-1][1] if pieces else tuple(avail)
                pieces.append((ta, lo, fa))
            # rebuild consumed segments
            segs = []
            prev = tuple(avail)
            for ta, l, fa in pieces:
                segs.append((ta, _consumed(prev, l), fa))
                prev = l
            acc_ty, acc_entries, acc_map = segs[-1]
            acc_tree = entries_tree(i, acc_entries)
            acc_dom = tree_obj(smc, acc_tree)
            acc_cod = interpret_core_type(i, acc_ty)
            acc_ctype = acc_ty
            for ta, entries, fa in reversed(segs[:-1]):
                wt = entries_tree(i, entries)
                ot = tree_obj(smc, wt)
                oty = interpret_core_type(i, ta)
                acc_map = _pw_tensor(i, dom, ot, oty, acc_dom, acc_cod, fa, acc_map)
                acc_tree = TreeN(wt, acc_tree)
                acc_dom = smc.tensor_obj(ot, acc_dom)
                acc_cod = smc.tensor_obj(oty, acc_cod)
                acc_ctype = Tensor(ta, acc_ctype)
            w = entries_tree(i, _consumed(avail, lo))
            med = mediator(smc, w, acc_tree)
            g = _pw_pre_pt(i, dom, med, acc_map, acc_dom, acc_cod)
            pt = (odom, ores, point)
            out = _pw_post_pt(i, dom, pt, g, tree_obj(smc, w), acc_cod)
            return sig.result, lo, out
    raise InterpError(f"not a core term: {f!r}")


# ------------------------------------------------------------------- judgments


def interpret_judgment(i: Interpretation, env: TypeEnv, j) -> FinMap:
    if isinstance(j, HostJudgment):
        jj = typecheck.check_host_judgment(env, j)
        _, out = interpret_host(i, env, jj.ctx, jj.term)
        return out
    jj = typecheck.check_core_judgment(env, j)
    avail = tuple(jj.ctx.core.entries)
    _, leftover, out = interpret_core(i, env, jj.ctx.host, avail, jj.term)
    if leftover:
        raise InterpError("judgment does not consume its linear context")
    return out


def satisfies(i: Interpretation, env: TypeEnv, jl, jr) -> tuple[bool, object]:
    """Pointwise table comparison of two interpretations; exact."""
    m1 = interpret_judgment(i, env, jl)
    m2 = interpret_judgment(i, env, jr)
    if m1 == m2:
        return True, None
    for x in m1.dom.elements:
        if m1.apply(x) != m2.apply(x):
            return False, (x, m1.apply(x), m2.apply(x))
    return False, ("codomain mismatch", m1.cod.display(), m2.cod.display())


# --------------------------------------------------------- circuit in relations


def circuit_interpretation(model: FiniteModel, theory) -> Interpretation:
    """The truth-table interpretation of the circuit theory in relations.

    The controlled-not denotes the graph of (a, b) |-> (a, a xor b); the
    calculus fixes no semantics for it, so this is the designated choice.
    """
    from .finrel import canonical_set, rel_label

    bit = canonical_set(2)
    i = Interpretation(model)
    i.core_types["Bit"] = bit
    i.host_types["bool"] = FinSet(("false", "true"), "bool")
    one = terminal()
    i.host_consts["true"] = fmap(one, i.host_types["bool"], lambda _: "true")
    i.host_consts["false"] = fmap(one, i.host_types["bool"], lambda _: "false")
    unit_elem = model.core.unit.elements[0]
    i.core_consts["0"] = rel_label([(unit_elem, "0")])
    i.core_consts["1"] = rel_label([(unit_elem, "1")])
    i.core_consts["not"] = rel_label([("0", "1"), ("1", "0")])
    i.core_consts["and"] = rel_label(
        [
            (pair_label("0", "0"), "0"),
            (pair_label("0", "1"), "0"),
            (pair_label("1", "0"), "0"),
            (pair_label("1", "1"), "1"),
        ]
    )
    i.core_consts["cnot"] = rel_label(
        [
            (pair_label("0", "0"), pair_label("0", "0")),
            (pair_label("0", "1"), pair_label("0", "1")),
            (pair_label("1", "0"), pair_label("1", "1")),
            (pair_label("1", "1"), pair_label("1", "0")),
        ]
    )
    env = TypeEnv(theory)
    validate_interpretation(i, env)
    return i
