"""Interpretation in finite models: objects, tables, satisfaction,
compositionality, the circuit truth tables."""

import pytest

from helpers import (
    BIT,
    BIT2,
    CircuitGen,
    circuit_env,
    circuit_theory,
    core_judgment,
    host_judgment,
    parse_core,
    parse_host,
)
from hostcore import equations, typecheck
from hostcore.semantics import (
    circuit_interpretation,
    finrel_model,
    interpret_core_type,
    interpret_host_type,
    interpret_judgment,
    satisfies,
)
from hostcore.semantics.finrel import canonical_set, rel_label, rel_pairs
from hostcore.semantics.finset import ModelSizeError, pair_label, terminal
from hostcore.semantics.interp import InterpError, interpret_core, interpret_host
from hostcore.syntax import (
    Arrow,
    CoreContext,
    HostBase,
    HostContext,
    MixedContext,
    Proof,
    Tensor,
    Unit,
    UnitI,
)
from hostcore.typecheck import CoreJudgment, HostJudgment


@pytest.fixture(scope="module")
def setup():
    th = circuit_theory()
    env = circuit_env()
    model = finrel_model(2)
    interp = circuit_interpretation(model, th)
    return th, env, model, interp


def test_hom_object_sizes(setup):
    _, _, model, interp = setup
    assert len(interpret_host_type(interp, Proof(BIT, BIT))) == 16
    assert len(interpret_core_type(interp, Tensor(BIT, BIT))) == 4
    assert interpret_core_type(interp, UnitI()) == canonical_set(1)
    assert interpret_host_type(interp, Unit()) == terminal()


def test_exponential_guard(setup):
    _, _, _, interp = setup
    big = Proof(BIT2, BIT2)
    with pytest.raises(ModelSizeError):
        interpret_host_type(interp, Arrow(big, big))


def test_variable_is_projection(setup):
    th, env, _, interp = setup
    b = HostBase("bool")
    ctx = HostContext((("x", b), ("y", b)))
    _, f = interpret_host(interp, env, ctx, parse_host("y"))
    # context is a left fold: ((1 x bool) x bool); the variable picks its slot
    for gx in ("false", "true"):
        for gy in ("false", "true"):
            g = pair_label(pair_label("()", gx), gy)
            assert f.apply(g) == gy


def test_star_is_terminal_map(setup):
    th, env, _, interp = setup
    ctx = HostContext((("x", HostBase("bool")),))
    _, f = interpret_host(interp, env, ctx, parse_host("*"))
    assert set(v for _, v in f.table) == {"()"}


def test_core_variable_is_identity_point(setup):
    th, env, model, interp = setup
    j = core_judgment("a", "Bit", core_ctx=(("a", BIT),))
    out = interpret_judgment(interp, env, j)
    assert rel_pairs(out.apply("()")) == frozenset({("0", "0"), ("1", "1")})


def test_nand_truth_table(setup):
    th, env, _, interp = setup
    j = core_judgment("nand a", "Bit", core_ctx=(("a", BIT2),))
    out = interpret_judgment(interp, env, j)
    got = rel_pairs(out.apply("()"))
    want = set()
    for x in (0, 1):
        for y in (0, 1):
            want.add((pair_label(str(x), str(y)), str(1 - (x & y))))
    assert got == frozenset(want)


def test_comp_not_not_is_identity(setup):
    th, env, _, interp = setup
    j = host_judgment(
        "comp(promote(core a:Bit. not a), promote(core b:Bit. not b))",
        "Proof(Bit, Bit)",
    )
    out = interpret_judgment(interp, env, j)
    assert rel_pairs(out.apply("()")) == frozenset({("0", "0"), ("1", "1")})


def test_comp_interpreted_via_composition_table(setup):
    """The composition form denotes c composed with the pair of the two
    interpretations; interpreting its expansion gives the same table."""
    th, env, _, interp = setup
    text = "comp(promote(core a:Bit. not a), promote(core b:Bit. and (b (x) 1)))"
    j = host_judgment(text, "Proof(Bit, Bit)")
    direct = interpret_judgment(interp, env, j)
    res = equations.normalize(env, j)
    expanded = interpret_judgment(
        interp, env, HostJudgment(j.ctx, res.term, j.type)
    )
    assert direct == expanded


def test_promote_and_derelict_preserve_tables(setup):
    th, env, _, interp = setup
    inner = core_judgment("not a", "Bit", core_ctx=(("a", BIT),))
    inner_out = interpret_judgment(interp, env, inner)
    promoted = host_judgment("promote(core a:Bit. not a)", "Proof(Bit, Bit)")
    promoted_out = interpret_judgment(interp, env, promoted)
    assert promoted_out.table == inner_out.values
    ctx = (("f", Proof(BIT, BIT)),)
    derelicted = core_judgment(
        "derelict(f) @ a", "Bit", core_ctx=(("a", BIT),), host_ctx=ctx
    )
    out = interpret_judgment(interp, env, derelicted)
    host_var = host_judgment("f", "Proof(Bit, Bit)", ctx=ctx)
    var_out = interpret_judgment(interp, env, host_var)
    assert out.values == var_out.table


def test_duality_rewrite_preserves_interpretation(setup):
    th, env, _, interp = setup
    j = core_judgment(
        "derelict(promote(core w:Bit. not w)) @ a",
        "Bit",
        core_ctx=(("a", BIT),),
    )
    before = interpret_judgment(interp, env, j)
    res = equations.normalize(env, j)
    after = interpret_judgment(interp, env, CoreJudgment(j.ctx, res.term, j.type))
    assert before == after


def test_satisfies_reflexivity_and_counterexample(setup):
    th, env, _, interp = setup
    j = core_judgment("not a", "Bit", core_ctx=(("a", BIT),))
    ok, _ = satisfies(interp, env, j, j)
    assert ok
    j2 = core_judgment("a", "Bit", core_ctx=(("a", BIT),))
    ok2, witness = satisfies(interp, env, j, j2)
    assert not ok2 and witness is not None


def test_el_rules_satisfied_in_model(setup):
    th, env, _, interp = setup
    gen = CircuitGen(41)
    fired = set()
    for _ in range(60):
        j = gen.core_judgment()
        res = equations.normalize(env, j)
        term = j.term
        for step in res.steps:
            fired.add(step.rule)
            before = CoreJudgment(j.ctx, term, j.type)
            after = CoreJudgment(j.ctx, step.after, j.type)
            ok, witness = satisfies(interp, env, before, after)
            assert ok, (step.rule, witness)
            term = step.after
    assert "el1" in fired or "el2" in fired or "dual-prom-der" in fired


def test_interpretation_compositional_under_substitution(setup):
    """Interpreting a substituted term equals interpreting then composing:
    checked through (sub3) instances fired by the tensor let rule."""
    th, env, _, interp = setup
    j = core_judgment(
        "let p (x) q = (not a) (x) (not b) in and (p (x) q)",
        "Bit",
        core_ctx=(("a", BIT), ("b", BIT)),
    )
    res = equations.normalize(env, j)
    assert res.steps and res.steps[0].rule == "el1"
    before = interpret_judgment(interp, env, j)
    after = interpret_judgment(interp, env, CoreJudgment(j.ctx, res.term, j.type))
    assert before == after


def test_relational_composition_of_not_with_itself(setup):
    _, _, model, _ = setup
    smc = model.core
    bit = canonical_set(2)
    notrel = rel_label([("0", "1"), ("1", "0")])
    out = smc.comp_point(bit, bit, bit, notrel, notrel)
    assert out == smc.id_point(bit)


def test_unmapped_base_type_reported(setup):
    th, env, model, _ = setup
    from hostcore.semantics.interp import Interpretation

    empty = Interpretation(model)
    with pytest.raises(InterpError):
        interpret_core_type(empty, BIT)


def test_ifcirc_is_not_interpreted_but_guard_is(setup):
    """The if form interprets pointwise on the guard value."""
    th, env, _, interp = setup
    j = host_judgment(
        "if true then promote(core a:Bit. a) else promote(core a:Bit. not a)",
        "Proof(Bit, Bit)",
    )
    out = interpret_judgment(interp, env, j)
    assert rel_pairs(out.apply("()")) == frozenset({("0", "0"), ("1", "1")})
