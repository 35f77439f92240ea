"""Concrete syntax: parsing, printing, the round-trip property, diagnostics."""

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from helpers import circuit_theory, parse_core, parse_host
from hostcore import surface
from hostcore.surface import ParseError, Parser, tokenize
from hostcore.syntax import (
    App,
    Bullet,
    CoreBase,
    CoreConstApp,
    CoreVar,
    Derelict,
    Fst,
    HostConst,
    HostVar,
    Lam,
    LetTensor,
    LetUnit,
    Pair,
    Promote,
    Proof,
    Snd,
    Star,
    Tensor,
    TensorPair,
    alpha_eq,
)


def test_parse_promote_of_variable():
    t = parse_host("promote(core a:Bit. a)")
    assert t == Promote((("a", CoreBase("Bit")),), CoreVar("a"))


def test_parse_let_tensor():
    t = parse_core("let a (x) b = f in h")
    assert t == LetTensor(CoreVar("f"), "a", "b", CoreVar("h"))


def test_parse_let_unit():
    t = parse_core("let bullet = f in h")
    assert t == LetUnit(CoreVar("f"), CoreVar("h"))


def test_parse_fig6_program():
    text = parse_host(
        "\\x0:Proof(Bit, Bit). \\x1:Proof(Bit, Bit). par(x0, x1)"
    )
    expected = Lam(
        "x0",
        Proof(CoreBase("Bit"), CoreBase("Bit")),
        Lam(
            "x1",
            Proof(CoreBase("Bit"), CoreBase("Bit")),
            App(App(HostConst("par"), HostVar("x0")), HostVar("x1")),
        ),
    )
    assert text == expected


def test_print_star_and_proof():
    assert surface.print_host_term(Star()) == "*"
    ty = Proof(Tensor(CoreBase("Bit"), CoreBase("Bit")), CoreBase("Bit"))
    assert surface.print_host_type(ty) == "Proof(Bit (x) Bit, Bit)"


def test_print_comp_definition_shape():
    # the composition combinator's body prints as a promote of a
    # dereliction applied to a dereliction
    from hostcore.equations import comp_term

    t = comp_term(CoreBase("A"), CoreBase("B"), CoreBase("C"))
    body = t.body.body
    printed = surface.print_host_term(body)
    assert printed == "promote(core a:A. derelict(z) @ (derelict(x) @ a))"


def test_parse_errors_have_spans():
    with pytest.raises(ParseError) as e:
        parse_host("promote(")
    line, c0, c1 = e.value.diagnostic.span
    assert line == 1 and c0 >= 8


def test_reserved_names_rejected():
    with pytest.raises(ParseError):
        surface.parse_source("core type comp", symbols=circuit_theory().symbols())


def test_derelict_sugar_forms():
    assert parse_core("derelict(f) @ a") == Derelict(HostVar("f"), CoreVar("a"))
    assert parse_core("derelict(f)") == Derelict(HostVar("f"), None)
    t = parse_core("derelict(f) @ (a (x) b)")
    assert t == Derelict(HostVar("f"), TensorPair(CoreVar("a"), CoreVar("b")))


def test_numerals_are_core_constants():
    assert parse_core("0") == CoreConstApp("0", ())
    assert parse_core("not 1") == CoreConstApp("not", (CoreConstApp("1", ()),))


def test_if_parses_to_builtin_spine():
    t = parse_host("if true then false else true")
    assert t == App(
        App(App(HostConst("if"), HostConst("true")), HostConst("false")),
        HostConst("true"),
    )


# ----------------------------------------------------------- round-trip suite


_cvars = st.sampled_from(["a", "b", "c"])
_hvars = st.sampled_from(["x", "y", "z"])
_ctypes = st.sampled_from(
    [CoreBase("Bit"), Tensor(CoreBase("Bit"), CoreBase("Bit"))]
)


def _core_terms(depth: int):
    base = st.one_of(
        st.builds(CoreVar, _cvars),
        st.just(Bullet()),
        st.just(CoreConstApp("0", ())),
    )
    if depth == 0:
        return base
    sub = _core_terms(depth - 1)
    host_sub = _host_terms(depth - 1)
    return st.one_of(
        base,
        st.builds(TensorPair, sub, sub),
        st.builds(
            lambda s, body: LetTensor(s, "p", "q", body), sub, _core_terms(depth - 1)
        ),
        st.builds(LetUnit, sub, sub),
        st.builds(lambda n, a: CoreConstApp(n, (a,)), st.sampled_from(["not", "and"]), sub),
        st.builds(lambda h, a: Derelict(h, a), host_sub, sub),
    )


def _host_terms(depth: int):
    base = st.one_of(
        st.builds(HostVar, _hvars),
        st.just(Star()),
        st.just(HostConst("true")),
    )
    if depth == 0:
        return base
    sub = _host_terms(depth - 1)
    core_sub = _core_terms(depth - 1)
    return st.one_of(
        base,
        st.builds(Pair, sub, sub),
        st.builds(Fst, sub),
        st.builds(Snd, sub),
        st.builds(lambda v, ty, b: Lam(v, ty, b), _hvars, st.sampled_from(
            [Proof(CoreBase("Bit"), CoreBase("Bit"))]
        ), sub),
        st.builds(App, sub, sub),
        st.builds(
            lambda ps, body: Promote(ps, body),
            st.lists(
                st.tuples(st.sampled_from(["u", "v"]), _ctypes),
                max_size=2,
                unique_by=lambda e: e[0],
            ).map(tuple),
            core_sub,
        ),
        st.builds(
            lambda f, g: App(App(HostConst("comp"), f), g), sub, sub
        ),
    )


@settings(max_examples=200, deadline=None)
@given(t=_host_terms(3))
def test_host_print_parse_roundtrip(t):
    printed = surface.print_host_term(t)
    reparsed = parse_host(printed)
    assert alpha_eq(t, reparsed), printed


@settings(max_examples=200, deadline=None)
@given(t=_core_terms(3))
def test_core_print_parse_roundtrip(t):
    printed = surface.print_core_term(t)
    reparsed = parse_core(printed)
    assert alpha_eq(t, reparsed), printed


def test_type_print_parse_roundtrip():
    sym = circuit_theory().symbols()
    for text in [
        "Proof(Bit, Bit) -> Proof(Bit (x) Bit, Bit) -> bool",
        "(bool -> bool) -> bool",
        "bool * bool * bool",
        "1 * (bool -> 1)",
        "Proof((Bit (x) Bit) (x) Bit, I)",
    ]:
        p = Parser(tokenize(text), sym)
        ty = p.host_type()
        assert surface.print_host_type(ty) == text
