"""Extraction of a type theory from a finite model, and the term model.

`syntax_gen` names every core object as a core type, every listed host
object as a host type (hom-objects are renamed to their Proof form and
coinciding homs are identified by type axioms), one constant per point
or morphism within the caps, and equality axioms for exactly the
denotation-equal pairs in its enumeration universe: the judgment naming
each identity, the composition table at the core level, bridges between
promoted core constants and host points, and application/composition
tables at the host level.

`syntactic_category` builds the term model of a theory: objects are
types, morphisms are equivalence classes of terms under the equality
decision procedure (inconclusive verdicts surface as distinct classes
with a warning).  `round_trip_check` compares a model against the term
model of its extracted theory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import equations, typecheck
from .semantics.finset import FinSet, terminal
from .semantics.interp import Interpretation
from .semantics.lint import model_lint
from .semantics.smc import FiniteModel
from .surface import (
    CoreConstSig,
    print_core_term,
    print_core_type,
    print_host_term,
    print_host_type,
)
from .syntax import (
    App,
    Arrow,
    CoreBase,
    CoreConstApp,
    CoreContext,
    CoreVar,
    HostBase,
    HostConst,
    HostContext,
    HostTerm,
    HostType,
    HostVar,
    MixedContext,
    Promote,
    Proof,
    Unit,
)
from .theories import TermAxiom, Theory, TypeAxiom, validate_theory
from .typecheck import CoreJudgment, HostJudgment, TypeEnv


class SyntaxGenCapError(Exception):
    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} exceeds the cap {cap}")
        self.count = count


@dataclass(frozen=True)
class SyntaxGenCaps:
    host_ctx_len: int = 1  # enumerate host morphisms from contexts up to this length
    max_hom: int = 64  # largest hom/point family enumerated per pair


@dataclass
class GeneratedTheory:
    theory: Theory
    interp: Interpretation
    core_type_names: dict = field(default_factory=dict)  # core object -> name
    host_object_types: dict = field(default_factory=dict)  # FinSet -> HostType
    core_syms: dict = field(default_factory=dict)  # name -> (dom obj, cod obj, point)
    host_point_syms: dict = field(default_factory=dict)  # name -> (FinSet, element)
    host_arrow_syms: dict = field(default_factory=dict)  # name -> (Y, X, table dict)


def _ident(label) -> str:
    text = label if isinstance(label, str) else getattr(label, "name", "") or str(label)
    out = re.sub(r"[^0-9A-Za-z_]", "", text)
    return out or "o"


def _obj_key(o) -> str:
    if isinstance(o, FinSet):
        return (o.name or "") + "|" + ",".join(o.elements)
    return str(o)


def syntax_gen(m: FiniteModel, caps: SyntaxGenCaps = SyntaxGenCaps()) -> GeneratedTheory:
    smc = m.core
    gen = GeneratedTheory(Theory("generated"), Interpretation(m))

    # core types, one per core object
    core_objs = sorted(smc.objects, key=_obj_key)
    used: set[str] = set()
    for o in core_objs:
        name = f"c{_ident(o if isinstance(o, str) else o.name or _obj_key(o))}"
        while name in used:
            name += "x"
        used.add(name)
        gen.core_type_names[o] = name
        gen.interp.core_types[name] = o

    def ctype(o) -> CoreBase:
        return CoreBase(gen.core_type_names[o])

    # host types; hom-objects are renamed to Proof types, shared homs get axioms
    hom_of: dict[FinSet, tuple] = {}
    type_axioms: list[TypeAxiom] = []
    for a in core_objs:
        for b in core_objs:
            h = smc.hom(a, b)
            if h in hom_of:
                first = hom_of[h]
                if first != (a, b):
                    type_axioms.append(
                        TypeAxiom(
                            "host",
                            Proof(ctype(first[0]), ctype(first[1])),
                            Proof(ctype(a), ctype(b)),
                        )
                    )
            else:
                hom_of[h] = (a, b)

    host_objs = sorted(m.host.objects, key=_obj_key)
    base_host_types: set[str] = set()
    for x in host_objs:
        if x == terminal():
            gen.host_object_types[x] = Unit()
        elif x in hom_of:
            a, b = hom_of[x]
            gen.host_object_types[x] = Proof(ctype(a), ctype(b))
        else:
            name = f"h{_ident(x.name or _obj_key(x))}"
            while name in base_host_types or name in used:
                name += "x"
            base_host_types.add(name)
            gen.host_object_types[x] = HostBase(name)
            gen.interp.host_types[name] = x

    # step 4: one core constant per point of each hom within the caps
    core_consts: list[tuple[str, CoreConstSig]] = []
    sym_of_point: dict[tuple, str] = {}
    for a in core_objs:
        for b in core_objs:
            h = smc.hom(a, b)
            if len(h) > caps.max_hom:
                raise SyntaxGenCapError(
                    f"points of C({_ident(a)},{_ident(b)})", len(h), caps.max_hom
                )
            for k, pt in enumerate(h.elements):
                name = f"k_{gen.core_type_names[a]}_{gen.core_type_names[b]}_{k}"
                sig = CoreConstSig((("a", ctype(a)),), ctype(b))
                core_consts.append((name, sig))
                gen.core_syms[name] = (a, b, pt)
                gen.interp.core_consts[name] = pt
                sym_of_point[(_obj_key(a), _obj_key(b), pt)] = name

    # step 5: host constants for points and (context length 1) for morphisms
    host_consts: list[tuple[str, HostType]] = []
    point_sym: dict[tuple, str] = {}
    for x in host_objs:
        if x == terminal():
            continue
        if len(x) > caps.max_hom:
            raise SyntaxGenCapError(f"points of {x.display()}", len(x), caps.max_hom)
        ty = gen.host_object_types[x]
        for k, v in enumerate(x.elements):
            name = f"p_{_ident(x.name or 'X')}_{k}"
            while any(n == name for n, _ in host_consts):
                name += "x"
            host_consts.append((name, ty))
            gen.host_point_syms[name] = (x, v)
            gen.interp.host_consts[name] = _point_map(x, v)
            point_sym[(_obj_key(x), v)] = name
    arrow_sym: dict[tuple, str] = {}
    if caps.host_ctx_len >= 1:
        for y in host_objs:
            if y == terminal():
                continue
            for x in host_objs:
                if x == terminal():
                    continue
                count = len(x) ** len(y)
                if count > caps.max_hom:
                    raise SyntaxGenCapError(
                        f"morphisms {y.display()} -> {x.display()}",
                        count,
                        caps.max_hom,
                    )
                tables = _all_tables(y, x)
                for k, table in enumerate(tables):
                    name = f"m_{_ident(y.name or 'Y')}_{_ident(x.name or 'X')}_{k}"
                    ty = Arrow(gen.host_object_types[y], gen.host_object_types[x])
                    host_consts.append((name, ty))
                    gen.host_arrow_syms[name] = (y, x, table)
                    gen.interp.host_consts[name] = _fn_point(y, x, table)
                    arrow_sym[(_obj_key(y), _obj_key(x), _table_key(table))] = name

    # steps 8-9: equality judgments for the denotation-equal pairs
    term_axioms: list[TermAxiom] = []

    def promote_of(kname: str, a) -> HostTerm:
        return Promote(
            (("a", ctype(a)),), CoreConstApp(kname, (CoreVar("a"),))
        )

    for a in core_objs:
        actx = CoreContext((("a", ctype(a)),))
        jpt = smc.id_point(a)
        jname = sym_of_point[(_obj_key(a), _obj_key(a), jpt)]
        term_axioms.append(
            TermAxiom(
                "core",
                HostContext(),
                actx,
                CoreVar("a"),
                CoreConstApp(jname, (CoreVar("a"),)),
                ctype(a),
            )
        )
    for a in core_objs:
        for b in core_objs:
            for c in core_objs:
                for p in smc.hom(a, b).elements:
                    for q in smc.hom(b, c).elements:
                        r = smc.comp_point(a, b, c, q, p)
                        kp = sym_of_point[(_obj_key(a), _obj_key(b), p)]
                        kq = sym_of_point[(_obj_key(b), _obj_key(c), q)]
                        kr = sym_of_point[(_obj_key(a), _obj_key(c), r)]
                        term_axioms.append(
                            TermAxiom(
                                "core",
                                HostContext(),
                                CoreContext((("a", ctype(a)),)),
                                CoreConstApp(kq, (CoreConstApp(kp, (CoreVar("a"),)),)),
                                CoreConstApp(kr, (CoreVar("a"),)),
                                ctype(c),
                            )
                        )
    for (akey, bkey, pt), kname in sym_of_point.items():
        a, b, _ = gen.core_syms[kname]
        h = smc.hom(a, b)
        psym = point_sym.get((_obj_key(h), pt))
        if psym is not None:
            term_axioms.append(
                TermAxiom(
                    "host",
                    HostContext(),
                    CoreContext(),
                    promote_of(kname, a),
                    HostConst(psym),
                    Proof(ctype(a), ctype(b)),
                )
            )
    for name, (y, x, table) in gen.host_arrow_syms.items():
        ytype = gen.host_object_types[y]
        xtype = gen.host_object_types[x]
        if y == x and all(k == v for k, v in table.items()):
            term_axioms.append(
                TermAxiom(
                    "host",
                    HostContext((("y", ytype),)),
                    CoreContext(),
                    App(HostConst(name), HostVar("y")),
                    HostVar("y"),
                    xtype,
                )
            )
        for v in y.elements:
            psym = point_sym.get((_obj_key(y), v))
            vsym = point_sym.get((_obj_key(x), table[v]))
            if psym is not None and vsym is not None:
                term_axioms.append(
                    TermAxiom(
                        "host",
                        HostContext(),
                        CoreContext(),
                        App(HostConst(name), HostConst(psym)),
                        HostConst(vsym),
                        xtype,
                    )
                )
    names = list(gen.host_arrow_syms.items())
    for n1, (y1, x1, t1) in names:
        for n2, (y2, x2, t2) in names:
            if x2 != y1:
                continue
            comp_table = {k: t1[t2[k]] for k in t2}
            n3 = arrow_sym.get((_obj_key(y2), _obj_key(x1), _table_key(comp_table)))
            if n3 is None:
                continue
            ytype = gen.host_object_types[y2]
            xtype = gen.host_object_types[x1]
            term_axioms.append(
                TermAxiom(
                    "host",
                    HostContext((("y", ytype),)),
                    CoreContext(),
                    App(HostConst(n1), App(HostConst(n2), HostVar("y"))),
                    App(
                        arrow_sym_term(n3),
                        HostVar("y"),
                    ),
                    xtype,
                )
            )

    theory = Theory(
        "generated",
        base_host_types=frozenset(base_host_types),
        base_core_types=frozenset(gen.core_type_names.values()),
        host_consts=tuple(host_consts),
        core_consts=tuple(core_consts),
        type_axioms=tuple(type_axioms),
        term_axioms=tuple(term_axioms),
    )
    gen.theory = validate_theory(theory)
    return gen


def arrow_sym_term(name: str) -> HostTerm:
    return HostConst(name)


def _point_map(x: FinSet, v: str):
    from .semantics.finset import fmap

    return fmap(terminal(), x, lambda _: v)


def _fn_point(y: FinSet, x: FinSet, table: dict):
    from .semantics.finset import exponential, fmap, fn_label

    exp = exponential(y, x)
    return fmap(terminal(), exp, lambda _: fn_label(table))


def _all_tables(y: FinSet, x: FinSet) -> list[dict]:
    from itertools import product as iproduct

    out = []
    for values in iproduct(x.elements, repeat=len(y)):
        out.append(dict(zip(y.elements, values)))
    out.sort(key=_table_key)
    return out


def _table_key(table: dict) -> str:
    return ";".join(f"{k}>{v}" for k, v in sorted(table.items()))


# ----------------------------------------------------------------- file output


def emit_theory(gen: GeneratedTheory) -> str:
    """The generated theory as a loadable source file, deterministic order."""
    lines: list[str] = ["# generated theory"]
    for name in sorted(gen.theory.base_core_types):
        lines.append(f"core type {name}")
    for name in sorted(gen.theory.base_host_types):
        lines.append(f"host type {name}")
    for ax in gen.theory.type_axioms:
        level = ax.level
        if level == "host":
            lines.append(
                f"type axiom host {print_host_type(ax.lhs)} = {print_host_type(ax.rhs)}"
            )
        else:
            lines.append(
                f"type axiom core {print_core_type(ax.lhs)} = {print_core_type(ax.rhs)}"
            )
    for name, sig in gen.theory.core_consts:
        params = ", ".join(f"{p}:{print_core_type(t)}" for p, t in sig.params)
        lines.append(
            f"core const {name} : ( {params} |- {print_core_type(sig.result)} )"
        )
    for name, ty in gen.theory.host_consts:
        lines.append(f"host const {name} : {print_host_type(ty)}")
    for ax in gen.theory.term_axioms:
        hctx = ", ".join(f"{x}:{print_host_type(t)}" for x, t in ax.host_ctx)
        if ax.level == "host":
            lines.append(
                f"term axiom {hctx}{' ' if hctx else ''}|- "
                f"{print_host_term(ax.lhs)} = {print_host_term(ax.rhs)} : "
                f"{print_host_type(ax.type)}"
            )
        else:
            cctx = ", ".join(f"{a}:{print_core_type(t)}" for a, t in ax.core_ctx)
            lines.append(
                f"term axiom {hctx}{' ' if hctx else ''}| {cctx} |- "
                f"{print_core_term(ax.lhs)} = {print_core_term(ax.rhs)} : "
                f"{print_core_type(ax.type)}"
            )
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ term model


@dataclass
class HomClasses:
    """Equivalence classes of candidate terms, most with a named judgment."""

    representatives: list  # one term per class
    members: list[list]
    unknown_pairs: list[tuple]  # pairs the procedure could not decide


class SyntacticModel:
    """The term model of a theory: objects are types, morphisms are
    equivalence classes of terms under the equality decision procedure."""

    def __init__(self, theory: Theory, max_steps: int = equations.DEFAULT_MAX_STEPS):
        self.theory = theory
        self.env = TypeEnv(theory)
        self.max_steps = max_steps
        self._class_cache: dict = {}

    # -- candidates

    def core_hom_candidates(self, a, b) -> list[HostTerm]:
        out: list[HostTerm] = []
        want = Proof(a, b)
        for name, ty in self.theory.host_consts:
            if typecheck.type_eq(self.env, ty, want):
                out.append(HostConst(name))
        for name, sig in self.theory.core_consts:
            if len(sig.params) == 1 and typecheck.type_eq(
                self.env, sig.params[0][1], a
            ) and typecheck.type_eq(self.env, sig.result, b):
                out.append(
                    Promote((("a", a),), CoreConstApp(name, (CoreVar("a"),)))
                )
        if typecheck.type_eq(self.env, a, b):
            out.append(Promote((("a", a),), CoreVar("a")))
        return out

    def host_hom_candidates(self, y: HostType, x: HostType) -> list[HostTerm]:
        out: list[HostTerm] = []
        for name, ty in self.theory.host_consts:
            if typecheck.type_eq(self.env, ty, Arrow(y, x)):
                out.append(App(HostConst(name), HostVar("y")))
        if typecheck.type_eq(self.env, y, x):
            out.append(HostVar("y"))
        return out

    # -- classification

    def classify(self, candidates: list[HostTerm], ctx: HostContext, ty: HostType) -> HomClasses:
        classes: list[list] = []
        unknown: list[tuple] = []
        for t in candidates:
            placed = False
            for cls in classes:
                verdict = equations.decide_eq(
                    self.env,
                    HostJudgment(ctx, cls[0], ty),
                    HostJudgment(ctx, t, ty),
                    max_steps=self.max_steps,
                )
                if verdict.equal is True:
                    cls.append(t)
                    placed = True
                    break
                if verdict.equal is None:
                    unknown.append((cls[0], t))
            if not placed:
                classes.append([t])
        return HomClasses([c[0] for c in classes], classes, unknown)

    def core_hom_classes(self, a, b) -> HomClasses:
        key = ("core", a, b)
        if key not in self._class_cache:
            self._class_cache[key] = self.classify(
                self.core_hom_candidates(a, b), HostContext(), Proof(a, b)
            )
        return self._class_cache[key]

    def host_hom_classes(self, y: HostType, x: HostType) -> HomClasses:
        key = ("host", y, x)
        if key not in self._class_cache:
            self._class_cache[key] = self.classify(
                self.host_hom_candidates(y, x), HostContext((("y", y),)), x
            )
        return self._class_cache[key]

    def class_of(self, term: HostTerm, classes: HomClasses, ctx: HostContext, ty: HostType):
        for idx, rep in enumerate(classes.representatives):
            verdict = equations.decide_eq(
                self.env,
                HostJudgment(ctx, rep, ty),
                HostJudgment(ctx, term, ty),
                max_steps=self.max_steps,
            )
            if verdict.equal is True:
                return idx
        return None

    # -- structure

    def identity_term(self, a) -> HostTerm:
        return Promote((("a", a),), CoreVar("a"))

    def compose_core(self, t1: HostTerm, t2: HostTerm) -> HostTerm:
        return App(App(HostConst("comp"), t1), t2)

    def compose_host(self, t1: HostTerm, t2: HostTerm) -> HostTerm:
        """t1 in context y:Y after t2 in context y:Z (both named y)."""
        from .syntax import subst_host

        return subst_host(t1, "y", t2)


# ------------------------------------------------------------------ round trip


@dataclass
class RoundTripRow:
    hom: str
    model_count: int
    syntactic_count: int
    composition_ok: bool
    inconclusive: bool
    undecided_pairs: int = 0

    def render(self) -> str:
        status = "ok"
        if self.inconclusive:
            status = "inconclusive"
        elif self.model_count != self.syntactic_count or not self.composition_ok:
            status = "FAIL"
        warn = (
            f"  [{self.undecided_pairs} pair(s) kept distinct by unknown verdicts]"
            if self.undecided_pairs
            else ""
        )
        return (
            f"{status}  {self.hom}: model {self.model_count} vs syntactic "
            f"{self.syntactic_count}; composition "
            f"{'agrees' if self.composition_ok else 'disagrees'}{warn}"
        )


@dataclass
class RoundTripReport:
    rows: list[RoundTripRow] = field(default_factory=list)
    refused: str = ""

    @property
    def ok(self) -> bool:
        return not self.refused and all(
            r.model_count == r.syntactic_count and r.composition_ok and not r.inconclusive
            for r in self.rows
        )

    @property
    def inconclusive(self) -> bool:
        return any(r.inconclusive for r in self.rows)

    def render(self) -> str:
        if self.refused:
            return f"refused: {self.refused}"
        return "\n".join(r.render() for r in self.rows)


def round_trip_check(
    m: FiniteModel, caps: SyntaxGenCaps = SyntaxGenCaps()
) -> RoundTripReport:
    """Cardinality and composition-table agreement between a model and the
    term model of its extracted theory."""
    lint = model_lint(m)
    if not lint.ok:
        failing = ", ".join(c.name for c in lint.failing())
        return RoundTripReport(refused=f"model fails lint ({failing})")
    gen = syntax_gen(m, caps)
    syn = SyntacticModel(gen.theory)
    smc = m.core
    report = RoundTripReport()

    core_objs = sorted(smc.objects, key=_obj_key)
    sym_by_point = {}
    for name, (a, b, pt) in gen.core_syms.items():
        sym_by_point[(_obj_key(a), _obj_key(b), pt)] = Promote(
            (("a", CoreBase(gen.core_type_names[a])),),
            CoreConstApp(name, (CoreVar("a"),)),
        )

    for a in core_objs:
        for b in core_objs:
            ta, tb = CoreBase(gen.core_type_names[a]), CoreBase(gen.core_type_names[b])
            classes = syn.core_hom_classes(ta, tb)
            placement_failed = False
            comp_ok = True
            for c in core_objs:
                tc = CoreBase(gen.core_type_names[c])
                target = syn.core_hom_classes(ta, tc)
                for p in smc.hom(a, b).elements:
                    for q in smc.hom(b, c).elements:
                        r = smc.comp_point(a, b, c, q, p)
                        t1 = sym_by_point[(_obj_key(a), _obj_key(b), p)]
                        t2 = sym_by_point[(_obj_key(b), _obj_key(c), q)]
                        tr = sym_by_point[(_obj_key(a), _obj_key(c), r)]
                        composite = syn.compose_core(t1, t2)
                        idx1 = syn.class_of(
                            composite, target, HostContext(), Proof(ta, tc)
                        )
                        idx2 = syn.class_of(tr, target, HostContext(), Proof(ta, tc))
                        if idx1 is None or idx2 is None:
                            placement_failed = True
                        elif idx1 != idx2:
                            comp_ok = False
            count_ok = len(classes.representatives) == len(smc.hom(a, b))
            inconclusive = placement_failed or (
                not count_ok and bool(classes.unknown_pairs)
            )
            report.rows.append(
                RoundTripRow(
                    f"C({_ident(a)},{_ident(b)})",
                    len(smc.hom(a, b)),
                    len(classes.representatives),
                    comp_ok,
                    inconclusive,
                    len(classes.unknown_pairs),
                )
            )

    host_objs = [x for x in sorted(m.host.objects, key=_obj_key) if x != terminal()]

    def arrows(src, dst):
        return [
            (table, App(HostConst(n), HostVar("y")))
            for n, (yy, xx, table) in sorted(gen.host_arrow_syms.items())
            if yy == src and xx == dst
        ]

    if caps.host_ctx_len >= 1:
        for y in host_objs:
            for x in host_objs:
                ytype = gen.host_object_types[y]
                xtype = gen.host_object_types[x]
                classes = syn.host_hom_classes(ytype, xtype)
                placement_failed = False
                comp_ok = True
                for z in host_objs:
                    ztype = gen.host_object_types[z]
                    target = syn.host_hom_classes(ztype, xtype)
                    target_by_table = {
                        _table_key(t): term for t, term in arrows(z, x)
                    }
                    for table2, t2 in arrows(z, y):
                        for table1, t1 in arrows(y, x):
                            comp_table = {k: table1[v] for k, v in table2.items()}
                            tr = target_by_table[_table_key(comp_table)]
                            composite = syn.compose_host(t1, t2)
                            ctx = HostContext((("y", ztype),))
                            idx1 = syn.class_of(composite, target, ctx, xtype)
                            idx2 = syn.class_of(tr, target, ctx, xtype)
                            if idx1 is None or idx2 is None:
                                placement_failed = True
                            elif idx1 != idx2:
                                comp_ok = False
                count_ok = len(classes.representatives) == len(x) ** len(y)
                inconclusive = placement_failed or (
                    not count_ok and bool(classes.unknown_pairs)
                )
                report.rows.append(
                    RoundTripRow(
                        f"H({y.display()},{x.display()})",
                        len(x) ** len(y),
                        len(classes.representatives),
                        comp_ok,
                        inconclusive,
                        len(classes.unknown_pairs),
                    )
                )
    return report
