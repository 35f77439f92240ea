"""Extraction of theories from models and the internal-language round trip."""

import pytest

from hostcore import equations, surface, theories, typecheck
from hostcore.semantics import FiniteModel, RelabelFunctor, change_of_base, finrel_model
from hostcore.semantics.finrel import FinRelSMC, canonical_set
from hostcore.semantics.finset import FinSetCCC, terminal
from hostcore.semantics.interp import satisfies
from hostcore.semantics.models import trivial_model, two_object_model
from hostcore.syntax import (
    CoreBase,
    CoreConstApp,
    CoreContext,
    CoreVar,
    HostConst,
    HostContext,
    MixedContext,
    Promote,
    Proof,
)
from hostcore.syntaxgen import (
    SyntacticModel,
    SyntaxGenCapError,
    SyntaxGenCaps,
    emit_theory,
    round_trip_check,
    syntax_gen,
)
from hostcore.typecheck import CoreJudgment, HostJudgment, TypeEnv


def test_trivial_model_extraction():
    gen = syntax_gen(trivial_model())
    th = gen.theory
    assert len(th.base_core_types) == 1
    # the hom-object is renamed to its Proof form, so no base host type
    assert not th.base_host_types
    (cname,) = th.base_core_types
    # exactly one core constant (the identity point), with its judgment
    assert len(th.core_consts) == 1
    name, sig = th.core_consts[0]
    assert sig.params[0][1] == CoreBase(cname)
    assert sig.result == CoreBase(cname)
    # the identity-naming axiom is emitted: a = k(a)
    core_axes = [ax for ax in th.term_axioms if ax.level == "core"]
    assert any(
        isinstance(ax.lhs, CoreVar) or isinstance(ax.rhs, CoreVar)
        for ax in core_axes
    )


def test_empty_model_extends_nothing():
    host = FinSetCCC((terminal(),))
    core = FinRelSMC(())
    gen = syntax_gen(FiniteModel(host, core, False))
    assert not gen.theory.base_core_types
    assert not gen.theory.base_host_types
    assert not gen.theory.core_consts
    assert not gen.theory.host_consts


def test_finrel_restricted_counts():
    """Objects {empty, Bit}: two core types; the Proof(Bit, Bit) hom-type
    carries sixteen point constants."""
    n0, n2 = canonical_set(0), canonical_set(2)
    core = FinRelSMC((n0, n2))
    hom = core.hom(n2, n2)
    host = FinSetCCC((terminal(), hom))
    m = FiniteModel(host, core, False)
    gen = syntax_gen(m, SyntaxGenCaps(host_ctx_len=0))
    th = gen.theory
    assert len(th.base_core_types) == 2
    bitname = gen.core_type_names[n2]
    want = Proof(CoreBase(bitname), CoreBase(bitname))
    points = [n for n, ty in th.host_consts if ty == want]
    assert len(points) == 16


def test_generated_judgments_typecheck_and_equalities_are_exact():
    m = two_object_model()
    gen = syntax_gen(m)
    env = TypeEnv(gen.theory)
    # every symbol's judgment checks (validation ran); spot-check one
    name, sig = gen.theory.core_consts[0]
    ctx = CoreContext(sig.params)
    ty, leftover = typecheck.check_core(
        env, HostContext(), ctx, CoreConstApp(name, tuple(CoreVar(p) for p, _ in sig.params))
    )
    assert not leftover.entries

    # emitted equalities are satisfied; distinct point symbols are not equal
    for ax in gen.theory.term_axioms:
        if ax.level == "host":
            jl = HostJudgment(ax.host_ctx, ax.lhs, ax.type)
            jr = HostJudgment(ax.host_ctx, ax.rhs, ax.type)
        else:
            mixed = MixedContext(ax.host_ctx, ax.core_ctx)
            jl = CoreJudgment(mixed, ax.lhs, ax.type)
            jr = CoreJudgment(mixed, ax.rhs, ax.type)
        ok, witness = satisfies(gen.interp, env, jl, jr)
        assert ok, (surface.print_term(ax.lhs), surface.print_term(ax.rhs), witness)

    # omitted pairs: distinct point symbols at the same type are unequal
    points = [(n, ty) for n, ty in gen.theory.host_consts
              if n in gen.host_point_syms]
    for i, (n1, t1) in enumerate(points):
        for n2, t2 in points[i + 1:]:
            if t1 != t2:
                continue
            jl = HostJudgment(HostContext(), HostConst(n1), t1)
            jr = HostJudgment(HostContext(), HostConst(n2), t1)
            ok, _ = satisfies(gen.interp, env, jl, jr)
            assert not ok


def test_emitted_theory_file_loads(tmp_path):
    gen = syntax_gen(two_object_model())
    text = emit_theory(gen)
    path = tmp_path / "generated.hc"
    path.write_text(text)
    th, _ = theories.load_theory_file(path)
    assert th.base_core_types == gen.theory.base_core_types
    assert len(th.term_axioms) == len(gen.theory.term_axioms)
    assert len(th.host_consts) == len(gen.theory.host_consts)


def test_extraction_invariant_under_relabeling():
    m = two_object_model()
    f = RelabelFunctor((("e", "p"), ("o", "q")))
    mapped_core = change_of_base(f, m.core, m.host.objects)
    host = FinSetCCC(tuple(f.obj(x) for x in m.host.objects))
    m2 = FiniteModel(host, mapped_core, False)
    g1, g2 = syntax_gen(m), syntax_gen(m2)
    assert g1.theory.base_core_types == g2.theory.base_core_types
    assert len(g1.theory.host_consts) == len(g2.theory.host_consts)
    assert len(g1.theory.term_axioms) == len(g2.theory.term_axioms)
    assert [n for n, _ in g1.theory.core_consts] == [
        n for n, _ in g2.theory.core_consts
    ]


def test_cap_exceeded_reports_count():
    m = finrel_model(2)
    with pytest.raises(SyntaxGenCapError) as e:
        syntax_gen(m, SyntaxGenCaps(max_hom=4))
    assert e.value.count > 4


# --------------------------------------------------------------- term model


def test_syntactic_category_identity_and_composition_laws():
    gen = syntax_gen(trivial_model())
    syn = SyntacticModel(gen.theory)
    (cname,) = gen.theory.base_core_types
    a = CoreBase(cname)
    classes = syn.core_hom_classes(a, a)
    assert len(classes.representatives) == 1
    ident = syn.identity_term(a)
    idx = syn.class_of(ident, classes, HostContext(), Proof(a, a))
    assert idx is not None
    # id . [t] = [t]
    rep = classes.representatives[0]
    comp = syn.compose_core(ident, rep)
    assert syn.class_of(comp, classes, HostContext(), Proof(a, a)) == idx


def test_hom_of_unit_contains_promoted_identity():
    gen = syntax_gen(two_object_model())
    syn = SyntacticModel(gen.theory)
    names = sorted(gen.theory.base_core_types)
    a = CoreBase(names[0])
    classes = syn.core_hom_classes(a, a)
    ident = syn.identity_term(a)
    assert syn.class_of(ident, classes, HostContext(), Proof(a, a)) is not None


def test_round_trip_trivial():
    report = round_trip_check(trivial_model())
    assert report.ok, report.render()


def test_round_trip_two_object():
    report = round_trip_check(two_object_model())
    assert report.ok, report.render()
    by_name = {r.hom: r for r in report.rows}
    assert by_name["C(U,V)"].model_count == 2
    assert by_name["C(U,V)"].syntactic_count == 2
    assert by_name["H(H2,H2)"].model_count == 4


def test_round_trip_refuses_unlinted_model():
    m = two_object_model()
    bad_comp = {k: dict(v) for k, v in m.core.comp.items()}
    bad_comp[("U", "U", "U")][("o", "o")] = "o"
    from hostcore.semantics import TableSMC

    mutated = TableSMC(
        objects=m.core.objects,
        unit=m.core.unit,
        homs=m.core.homs,
        comp=bad_comp,
        ids=m.core.ids,
        tensor=m.core.tensor,
        tensor_hom=m.core.tensor_hom,
        sym=m.core.sym,
    )
    report = round_trip_check(FiniteModel(m.host, mutated, False))
    assert report.refused
