"""Typing: golden judgments, linearity discipline, leftover completeness,
exchange, substitution admissibility, diagnostics rule names."""

import itertools

import pytest

from helpers import (
    BIT,
    BIT2,
    CircuitGen,
    assoc_theory,
    circuit_env,
    circuit_theory,
    core_judgment,
    host_judgment,
    parse_core,
    parse_host,
)
from hostcore import surface, theories, typecheck
from hostcore.syntax import (
    CoreBase,
    CoreContext,
    HostBase,
    HostContext,
    MixedContext,
    Proof,
    Star,
    Tensor,
    Unit,
    UnitI,
    count_free_core_occurrences,
    subst_core,
    subst_host,
    subst_host_in_core,
)
from hostcore.typecheck import (
    CoreJudgment,
    HostJudgment,
    TypeCheckError,
    TypeEnv,
    check_core,
    check_host,
    type_eq,
)


def test_star_types_anywhere():
    env = circuit_env()
    ctx = HostContext((("x", HostBase("bool")),))
    assert check_host(env, ctx, Star()) == Unit()


def test_fig6_parallelization_type():
    env = circuit_env()
    t = parse_host("\\x0:Proof(Bit, Bit). \\x1:Proof(Bit, Bit). par(x0, x1)")
    got = check_host(env, HostContext(), t)
    assert surface.print_host_type(got) == (
        "Proof(Bit, Bit) -> Proof(Bit, Bit) -> Proof(Bit (x) Bit, Bit (x) Bit)"
    )


def test_promote_identity_types():
    env = circuit_env()
    t = parse_host("promote(core a:Bit. a)")
    assert check_host(env, HostContext(), t) == Proof(BIT, BIT)


def test_nand_judgment():
    env = circuit_env()
    ty, leftover = check_core(
        env,
        HostContext(),
        CoreContext((("a", BIT2),)),
        parse_core("not (and a)"),
    )
    assert ty == BIT and not leftover.entries


def test_core_unit_judgment():
    env = circuit_env()
    ty, leftover = check_core(env, HostContext(), CoreContext(), parse_core("bullet"))
    assert ty == UnitI() and not leftover.entries


def test_ifcirc_type():
    env = circuit_env()
    got = check_host(env, HostContext(), parse_host("IfCirc"))
    assert surface.print_host_type(got) == (
        "bool -> Proof(Bit (x) Bit, Bit (x) Bit) -> "
        "Proof(Bit (x) Bit, Bit (x) Bit) -> Proof(I, Bit (x) Bit)"
    )


def test_if_types_when_both_branches_do():
    env = circuit_env()
    t = parse_host("if true then false else true")
    assert check_host(env, HostContext(), t) == HostBase("bool")
    bad = parse_host("if true then * else true")
    with pytest.raises(TypeCheckError):
        check_host(env, HostContext(), bad)


def test_type_eq_congruence():
    text = """
core type A
core type B
core type C
core type D
type axiom core A = B
type axiom core C = D
"""
    th = theories.extend(theories.EMPTY, text, name="eqT")
    env = TypeEnv(th)
    a, b, c, d = (CoreBase(n) for n in "ABCD")
    assert type_eq(env, Proof(a, c), Proof(b, d))
    assert type_eq(env, a, a)
    assert not type_eq(env, a, c)


def test_no_axioms_distinct_bases():
    th = theories.extend(theories.EMPTY, "core type A\ncore type B", name="t")
    env = TypeEnv(th)
    assert not type_eq(env, CoreBase("A"), CoreBase("B"))


def test_nonlinear_term_rejected_then_accepted():
    term = "a0 (x) (let b0 (x) b1 = a0 (x) a1 in and (b0 (x) b1))"
    ctx = (("a0", BIT), ("a1", BIT))
    j = core_judgment(term, "Bit (x) Bit", core_ctx=ctx)
    with pytest.raises(TypeCheckError):
        typecheck.check_core_judgment(circuit_env(), j)
    out = typecheck.check_core_judgment(circuit_env(cartesian=True), j)
    assert out.type == BIT2


def test_unused_linear_variable_reported():
    env = circuit_env()
    j = core_judgment("a0", "Bit", core_ctx=(("a0", BIT), ("a1", BIT)))
    with pytest.raises(TypeCheckError) as e:
        typecheck.check_core_judgment(env, j)
    assert "unused linear variable" in str(e.value)


def test_derelict_resolves_singleton_context():
    env = circuit_env()
    j = core_judgment(
        "derelict(f)",
        "Bit",
        core_ctx=(("a", BIT),),
        host_ctx=(("f", Proof(BIT, BIT)),),
    )
    out = typecheck.check_core_judgment(env, j)
    assert surface.print_core_term(out.term) == "derelict(f) @ a"


def test_promote_consumes_whole_block():
    env = circuit_env()
    t = parse_host("promote(core a:Bit, b:Bit. a)")
    with pytest.raises(TypeCheckError) as e:
        check_host(env, HostContext(), t)
    assert e.value.rule == "prom"


# ----------------------------------------------------------- split completeness


def _declarative_accepts(env, host, entries, f, ty=None):
    """Brute-force splitting oracle for the (tc)-style rules."""
    from hostcore.syntax import (
        Bullet,
        CoreConstApp,
        CoreVar,
        Derelict,
        LetTensor,
        LetUnit,
        TensorPair,
    )

    entries = tuple(entries)

    def synth(sub, term):
        match term:
            case CoreVar(a):
                if len(sub) == 1 and sub[0][0] == a:
                    return [sub[0][1]]
                return []
            case Bullet():
                return [UnitI()] if not sub else []
            case TensorPair(l, r):
                out = []
                for left, right in _partitions(sub):
                    for tl in synth(left, l):
                        for tr in synth(right, r):
                            out.append(Tensor(tl, tr))
                return out
            case LetTensor(sc, a, b, body):
                out = []
                for left, right in _partitions(sub):
                    for tsc in synth(left, sc):
                        parts = typecheck.as_tensor(env, tsc)
                        if parts is None:
                            continue
                        inner = right + ((a, parts[0]), (b, parts[1]))
                        out.extend(synth(inner, body))
                return out
            case LetUnit(sc, body):
                out = []
                for left, right in _partitions(sub):
                    for tsc in synth(left, sc):
                        if type_eq(env, tsc, UnitI()):
                            out.extend(synth(right, body))
                return out
            case Derelict(h, arg):
                if arg is None:
                    return []
                out = []
                for ta in synth(sub, arg):
                    try:
                        th = typecheck.check_host(env, host, h)
                    except TypeCheckError:
                        return []
                    reading = typecheck.proof_with_dom(env, th, ta)
                    if reading is not None:
                        out.append(reading[1])
                return out
            case CoreConstApp(name, args):
                sig = env.theory.core_const_sig(name)
                if sig is None or len(args) != len(sig.params):
                    return []
                outs = [sub]
                # sequential multi-way split
                def go(remaining, idx):
                    if idx == len(args):
                        return [remaining] if not remaining else []
                        # all consumed handled by caller check below
                    acc = []
                    for left, right in _partitions(remaining):
                        for ta in synth(left, args[idx]):
                            if type_eq(env, ta, sig.params[idx][1]):
                                acc.extend(go(right, idx + 1))
                    return acc

                if not args:
                    return [sig.result] if not sub else []
                return [sig.result for _ in go(sub, 0)][:1]
        return []

    results = synth(entries, f)
    return bool(results)


def _partitions(entries):
    entries = tuple(entries)
    n = len(entries)
    for mask in range(2**n):
        left = tuple(entries[i] for i in range(n) if mask >> i & 1)
        right = tuple(entries[i] for i in range(n) if not mask >> i & 1)
        yield left, right


def test_leftover_matches_declarative_split():
    env = circuit_env()
    gen = CircuitGen(7)
    agree = 0
    for _ in range(60):
        j = gen.core_judgment(depth=2)
        entries = j.ctx.core.entries
        if len(entries) > 5:
            continue
        algo = True
        try:
            typecheck.check_core_judgment(env, j)
        except TypeCheckError:
            algo = False
        decl = _declarative_accepts(env, j.ctx.host, entries, j.term)
        assert algo == decl, surface.print_core_term(j.term)
        agree += 1
    assert agree >= 40


def test_declarative_rejects_what_leftover_rejects():
    env = circuit_env()
    j = core_judgment("a0", "Bit", core_ctx=(("a0", BIT), ("a1", BIT)))
    assert not _declarative_accepts(env, j.ctx.host, j.ctx.core.entries, j.term)


# ----------------------------------------------------------------- exchange


def test_exchange_permutation_invariance():
    env = circuit_env()
    gen = CircuitGen(11)
    checked = 0
    for _ in range(40):
        j = gen.core_judgment(depth=2)
        entries = j.ctx.core.entries
        if not entries or len(entries) > 4:
            continue
        base = typecheck.check_core_judgment(env, j)
        for perm in itertools.permutations(entries):
            mixed = MixedContext(j.ctx.host, CoreContext(tuple(perm)))
            out = typecheck.check_core_judgment(env, CoreJudgment(mixed, j.term, j.type))
            assert type_eq(env, out.type, base.type)
        checked += 1
    assert checked >= 10


# ----------------------------------------------------- linearity occurrence audit


def test_linear_occurrence_audit():
    env = circuit_env()
    gen = CircuitGen(13)
    for _ in range(120):
        j = gen.core_judgment()
        out = typecheck.check_core_judgment(env, j)
        for name, _ in j.ctx.core.entries:
            assert count_free_core_occurrences(out.term, name) == 1


# ------------------------------------------------- substitution admissibility


def test_sub2_admissible():
    env = circuit_env()
    gen = CircuitGen(17)
    for _ in range(30):
        js = gen.host_judgment(depth=2)
        x = "xx"
        ctx = HostContext(((x, js.type),))
        body = parse_host(f"par({x}, {x})") if isinstance(js.type, Proof) else None
        if body is None:
            continue
        tb = typecheck.check_host(env, ctx, body)
        out = subst_host(body, x, js.term)
        assert type_eq(env, typecheck.check_host(env, HostContext(), out), tb)


def test_sub3_admissible():
    env = circuit_env()
    gen = CircuitGen(19)
    for _ in range(40):
        # premise 1: Γ|Ω1 ⊢ s : A  premise 2: Γ|Ω2,a:A ⊢ f : B
        ctx1 = gen.context(2)
        sty = gen.rng.choice([BIT, BIT2])
        s = gen.core(ctx1, sty, 2)
        ctx2 = gen.context(2)
        hole = gen.fresh("h")
        f = gen.core(ctx2 + ((hole, sty),), gen.rng.choice([BIT, BIT2]), 2)
        shared = {n for n, _ in ctx1} & {n for n, _ in ctx2}
        if shared:
            continue
        tb, leftover, _ = typecheck.elaborate_core(
            env, HostContext(), CoreContext(ctx2 + ((hole, sty),)), f
        )
        assert not leftover.entries
        out = subst_core(f, hole, s)
        ty2, leftover2, _ = typecheck.elaborate_core(
            env, HostContext(), CoreContext(ctx2 + ctx1), out
        )
        assert not leftover2.entries
        assert type_eq(env, ty2, tb)


def test_sub1_admissible():
    env = circuit_env()
    p = Proof(BIT, BIT)
    ctx = HostContext((("f", p),))
    f = parse_core("derelict(f) @ a")
    ty, leftover, _ = typecheck.elaborate_core(
        env, ctx, CoreContext((("a", BIT),)), f
    )
    s = parse_host("promote(core w:Bit. not w)")
    out = subst_host_in_core(f, "f", s)
    ty2, leftover2, _ = typecheck.elaborate_core(
        env, HostContext(), CoreContext((("a", BIT),)), out
    )
    assert type_eq(env, ty, ty2) and not leftover2.entries


# ------------------------------------------------- cartesian mode derivability


def test_cartesian_mode_keeps_linear_rules_admissible():
    linear_env = circuit_env()
    cart_env = circuit_env(cartesian=True)
    gen = CircuitGen(23)
    for _ in range(40):
        j = gen.core_judgment(depth=2)
        out = typecheck.check_core_judgment(linear_env, j)
        out2 = typecheck.check_core_judgment(cart_env, j)
        assert type_eq(cart_env, out.type, out2.type)


def test_cartesian_weakening_and_contraction():
    env = circuit_env(cartesian=True)
    # weakening: unused variable accepted
    j = core_judgment("a0", "Bit", core_ctx=(("a0", BIT), ("a1", BIT)))
    typecheck.check_core_judgment(env, j)
    # contraction: the same variable used twice
    j2 = core_judgment("a0 (x) a0", "Bit (x) Bit", core_ctx=(("a0", BIT),))
    typecheck.check_core_judgment(env, j2)


# ------------------------------------------------------- diagnostics rule names


RULE_CORPUS = [
    ("host", "|- * : bool", "uv"),
    ("host", "|- zz : bool", "av"),
    ("host", "|- <true, true> : bool", "pv"),
    ("host", "|- fst <true, true> : 1", "pi1v"),
    ("host", "|- snd <true, true> : 1", "pi2v"),
    ("host", "|- \\x:bool. x : bool", "aiv"),
    ("host", "|- (\\x:bool. x) * : bool", "aev"),
    ("host", "|- promote(core a:Bit. a) : Proof(Bit, Bit (x) Bit)", "prom"),
    ("core", "| a:Bit |- bullet : Bit", "uc"),
    ("core", "| a:Bit |- b : Bit", "ac"),
    ("core", "| a:Bit, b:Bit |- a (x) b : Bit", "tc"),
    ("core", "| a:Bit |- let b0 (x) b1 = a in b0 (x) b1 : Bit (x) Bit", "let1c"),
    ("core", "| a:Bit |- let bullet = a in bullet : I", "let2c"),
    ("core", "| a:Bit |- derelict(true) @ a : Bit", "der"),
]


@pytest.mark.parametrize("level,text,rule", RULE_CORPUS)
def test_rule_names_in_diagnostics(level, text, rule):
    """Every Fig.-2 rule name appears verbatim in a failing diagnostic."""
    env = circuit_env()
    sym = circuit_theory().symbols()
    p = surface.Parser(surface.tokenize(text), sym)
    j = p.judgment(with_equation=False)
    with pytest.raises(TypeCheckError) as e:
        if j.level == "host":
            typecheck.check_host_judgment(env, HostJudgment(j.host_ctx, j.term, j.type))
        else:
            mixed = MixedContext(j.host_ctx, j.core_ctx)
            typecheck.check_core_judgment(env, CoreJudgment(mixed, j.term, j.type))
    assert e.value.rule == rule
