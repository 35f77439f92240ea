"""Theories as first-class values: extension, translation, the circuit theory.

A theory extends the base calculus with ground types, constants (with
their judgment signatures), defined terms, and type/term equality axioms.
Theories are immutable after loading; every axiom and definition is
re-checked on load.
"""

from __future__ import annotations

import importlib.resources
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import surface
from .surface import CoreConstSig, Decl, Diagnostic, SourceFile, SymbolTable
from .syntax import (
    CoreBase,
    CoreContext,
    CoreTerm,
    CoreType,
    CoreVar,
    HostBase,
    HostContext,
    HostTerm,
    HostType,
    MixedContext,
    Proof,
    Tensor,
    UnitI,
    subst_core_multi,
)


class TheoryError(Exception):
    def __init__(self, message: str, diagnostic: Diagnostic | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class HostDef:
    type: HostType
    body: HostTerm


@dataclass(frozen=True)
class CoreDef:
    sig: CoreConstSig
    body: CoreTerm


@dataclass(frozen=True)
class TypeAxiom:
    level: str
    lhs: HostType | CoreType
    rhs: HostType | CoreType


@dataclass(frozen=True)
class TermAxiom:
    level: str
    host_ctx: HostContext
    core_ctx: CoreContext
    lhs: HostTerm | CoreTerm
    rhs: HostTerm | CoreTerm
    type: HostType | CoreType


@dataclass(frozen=True)
class Theory:
    name: str
    base_host_types: frozenset[str] = frozenset()
    base_core_types: frozenset[str] = frozenset()
    host_consts: tuple[tuple[str, HostType], ...] = ()
    core_consts: tuple[tuple[str, CoreConstSig], ...] = ()
    host_defs: tuple[tuple[str, HostDef], ...] = ()
    core_defs: tuple[tuple[str, CoreDef], ...] = ()
    type_axioms: tuple[TypeAxiom, ...] = ()
    term_axioms: tuple[TermAxiom, ...] = ()

    # -- lookups

    def host_const(self, name: str) -> HostType | None:
        for n, ty in self.host_consts:
            if n == name:
                return ty
        d = self.host_def(name)
        return d.type if d else None

    def host_def(self, name: str) -> HostDef | None:
        for n, d in self.host_defs:
            if n == name:
                return d
        return None

    def core_const_sig(self, name: str) -> CoreConstSig | None:
        for n, sig in self.core_consts:
            if n == name:
                return sig
        d = self.core_def(name)
        return d.sig if d else None

    def core_def(self, name: str) -> CoreDef | None:
        for n, d in self.core_defs:
            if n == name:
                return d
        return None

    def declared_names(self) -> set[str]:
        out = set(self.base_host_types) | set(self.base_core_types)
        out |= {n for n, _ in self.host_consts} | {n for n, _ in self.core_consts}
        out |= {n for n, _ in self.host_defs} | {n for n, _ in self.core_defs}
        return out

    def symbols(self) -> SymbolTable:
        table = SymbolTable()
        table.host_types = set(self.base_host_types)
        table.core_types = set(self.base_core_types)
        table.host_consts = {n for n, _ in self.host_consts} | {
            n for n, _ in self.host_defs
        }
        for n, sig in self.core_consts:
            table.core_arity[n] = len(sig.params)
        for n, d in self.core_defs:
            table.core_arity[n] = len(d.sig.params)
        return table


EMPTY = Theory("empty")


def _check_type_wf(theory: Theory, ty: HostType | CoreType) -> None:
    match ty:
        case HostBase(n):
            if n not in theory.base_host_types:
                raise TheoryError(f"undeclared host type {n!r}")
        case CoreBase(n):
            if n not in theory.base_core_types:
                raise TheoryError(f"undeclared core type {n!r}")
        case Proof(a, b):
            _check_type_wf(theory, a)
            _check_type_wf(theory, b)
        case Tensor(a, b):
            _check_type_wf(theory, a)
            _check_type_wf(theory, b)
        case _ if hasattr(ty, "left"):
            _check_type_wf(theory, ty.left)
            _check_type_wf(theory, ty.right)
        case _ if hasattr(ty, "dom"):
            _check_type_wf(theory, ty.dom)
            _check_type_wf(theory, ty.cod)


def validate_theory(theory: Theory) -> Theory:
    """Re-check every definition and axiom of the theory in the theory itself."""
    from . import typecheck

    try:
        return _validate_theory(theory)
    except typecheck.TypeCheckError as e:
        raise TheoryError(f"theory {theory.name!r} fails validation: {e}") from e


def _validate_theory(theory: Theory) -> Theory:
    from . import typecheck

    env = typecheck.TypeEnv(theory)
    for name, ty in theory.host_consts:
        _check_type_wf(theory, ty)
    for name, sig in theory.core_consts:
        for _, pt in sig.params:
            _check_type_wf(theory, pt)
        _check_type_wf(theory, sig.result)
    for name, d in theory.host_defs:
        got, _ = typecheck.elaborate_host(env, HostContext(), d.body)
        if not typecheck.type_eq(env, got, d.type):
            raise TheoryError(
                f"definition {name!r} has type {surface.print_host_type(got)}, "
                f"declared {surface.print_host_type(d.type)}"
            )
    for name, d in theory.core_defs:
        ctx = CoreContext(d.sig.params)
        got, leftover, _ = typecheck.elaborate_core(env, HostContext(), ctx, d.body)
        if leftover.entries:
            raise TheoryError(f"definition {name!r} does not consume {leftover.names()}")
        if not typecheck.type_eq(env, got, d.sig.result):
            raise TheoryError(f"definition {name!r} result type mismatch")
    for ax in theory.type_axioms:
        _check_type_wf(theory, ax.lhs)
        _check_type_wf(theory, ax.rhs)
        if (ax.level == "host") != isinstance(ax.lhs, HostType):
            raise TheoryError("type axiom level does not match its types")
    for ax in theory.term_axioms:
        for side in (ax.lhs, ax.rhs):
            if ax.level == "host":
                got, _ = typecheck.elaborate_host(env, ax.host_ctx, side)
            else:
                got, leftover, _ = typecheck.elaborate_core(
                    env, ax.host_ctx, ax.core_ctx, side
                )
                if leftover.entries and not env.cartesian_core:
                    raise TheoryError("term axiom side leaves linear variables unused")
            if not typecheck.type_eq(env, got, ax.type):
                raise TheoryError("term axiom side does not check at the stated type")
    return theory


# ------------------------------------------------------------- building theories


def theory_from_decls(
    name: str, decls: list[Decl], base: Theory = EMPTY, validate: bool = True
) -> Theory:
    """Assemble a theory from parsed declarations on top of `base`."""
    th = replace(base, name=name)
    for d in decls:
        th = _apply_decl(th, d)
    return validate_theory(th) if validate else th


def _apply_decl(th: Theory, d: Decl) -> Theory:
    taken = th.declared_names()
    if d.kind in ("type", "const", "def") and d.name in taken:
        raise TheoryError(f"duplicate symbol {d.name!r}")
    match d.kind:
        case "import" | "check" | "eq":
            return th
        case "type":
            if d.level == "host":
                return replace(th, base_host_types=th.base_host_types | {d.name})
            return replace(th, base_core_types=th.base_core_types | {d.name})
        case "const":
            if d.level == "host":
                assert d.host_type is not None
                return replace(th, host_consts=th.host_consts + ((d.name, d.host_type),))
            assert d.core_sig is not None
            return replace(th, core_consts=th.core_consts + ((d.name, d.core_sig),))
        case "def":
            if d.level == "host":
                assert d.host_type is not None and d.host_body is not None
                hd = HostDef(d.host_type, d.host_body)
                return replace(th, host_defs=th.host_defs + ((d.name, hd),))
            assert d.core_sig is not None and d.core_body is not None
            cd = CoreDef(d.core_sig, d.core_body)
            return replace(th, core_defs=th.core_defs + ((d.name, cd),))
        case "type-axiom":
            assert d.type_pair is not None
            ax = TypeAxiom(d.level, d.type_pair[0], d.type_pair[1])
            return replace(th, type_axioms=th.type_axioms + (ax,))
        case "term-axiom":
            assert d.equation is not None
            e = d.equation
            ax = TermAxiom(e.level, e.host_ctx, e.core_ctx, e.lhs, e.rhs, e.type)
            return replace(th, term_axioms=th.term_axioms + (ax,))
    raise TheoryError(f"unsupported declaration kind {d.kind!r}")


def extend(base: Theory, delta: SourceFile | list[Decl] | str, name: str | None = None) -> Theory:
    """The theory extended with new declarations; re-validated on load."""
    if isinstance(delta, str):
        src, _ = surface.parse_source(delta, symbols=base.symbols())
        decls = src.declarations
    elif isinstance(delta, SourceFile):
        decls = delta.declarations
    else:
        decls = delta
    return theory_from_decls(name or base.name, decls, base=base)


# ------------------------------------------------------------------ theory files


def theory_search_paths() -> list[Path]:
    paths = []
    env = os.environ.get("HC_THEORY_PATH", "")
    for part in env.split(os.pathsep):
        if part:
            paths.append(Path(part))
    paths.append(Path(str(importlib.resources.files("hostcore") / "data")))
    return paths


def theory_union(a: Theory, b: Theory, name: str | None = None) -> Theory:
    """Combine two theories; shared names must agree exactly."""
    for n in a.declared_names() & b.declared_names():
        if (
            a.host_const(n) != b.host_const(n)
            or a.core_const_sig(n) != b.core_const_sig(n)
            or (n in a.base_host_types) != (n in b.base_host_types)
            or (n in a.base_core_types) != (n in b.base_core_types)
        ):
            raise TheoryError(f"conflicting declarations for {n!r}")

    def merged(xs, ys):
        seen = {n for n, _ in xs}
        return xs + tuple((n, v) for n, v in ys if n not in seen)

    return Theory(
        name or a.name,
        a.base_host_types | b.base_host_types,
        a.base_core_types | b.base_core_types,
        merged(a.host_consts, b.host_consts),
        merged(a.core_consts, b.core_consts),
        merged(a.host_defs, b.host_defs),
        merged(a.core_defs, b.core_defs),
        a.type_axioms + tuple(x for x in b.type_axioms if x not in a.type_axioms),
        a.term_axioms + tuple(x for x in b.term_axioms if x not in a.term_axioms),
    )


def load_theory_file(path: Path | str, name: str | None = None) -> tuple[Theory, SourceFile]:
    text = Path(path).read_text()
    src, _ = surface.parse_source(text, resolver=_import_symbols)
    base = EMPTY
    for imp in src.imports:
        base = theory_union(base, _load_by_name(imp)[0], name=imp)
    th = theory_from_decls(name or Path(path).stem, src.declarations, base=base)
    return th, src


def _load_by_name(name: str) -> tuple[Theory, SourceFile]:
    for d in theory_search_paths():
        cand = d / f"{name}.hc"
        if cand.exists():
            return load_theory_file(cand, name=name)
    raise TheoryError(f"theory {name!r} not found on HC_THEORY_PATH")


def _import_symbols(name: str) -> SymbolTable:
    return _load_by_name(name)[0].symbols()


def load_theory(name: str) -> Theory:
    """Load a theory by name from the search path (bundled theories included)."""
    return _load_by_name(name)[0]


def circuit_theory() -> Theory:
    """The bundled boolean-circuit theory (bits, gates, host control)."""
    return load_theory("circuit")


# ----------------------------------------------------------------- translations


@dataclass(frozen=True)
class Translation:
    """A structure-preserving map between theories, given on generators.

    Base types map to types of the same level; constants map to terms
    over canonical parameter variables.  Variables are fixed and all type
    and term constructors commute with the map.
    """

    source: Theory
    target: Theory
    host_type_map: tuple[tuple[str, HostType], ...] = ()
    core_type_map: tuple[tuple[str, CoreType], ...] = ()
    host_const_map: tuple[tuple[str, HostTerm], ...] = ()
    core_const_map: tuple[tuple[str, CoreTerm], ...] = ()

    def _lookup(self, table, name):
        for n, v in table:
            if n == name:
                return v
        return None

    def map_host_type(self, ty: HostType) -> HostType:
        from .syntax import Arrow, Prod, Unit

        match ty:
            case Unit():
                return ty
            case HostBase(n):
                mapped = self._lookup(self.host_type_map, n)
                return mapped if mapped is not None else HostBase(n)
            case Prod(l, r):
                return Prod(self.map_host_type(l), self.map_host_type(r))
            case Arrow(d, c):
                return Arrow(self.map_host_type(d), self.map_host_type(c))
            case Proof(a, b):
                return Proof(self.map_core_type(a), self.map_core_type(b))
        raise TheoryError(f"cannot translate type {ty!r}")

    def map_core_type(self, ty: CoreType) -> CoreType:
        match ty:
            case UnitI():
                return ty
            case CoreBase(n):
                mapped = self._lookup(self.core_type_map, n)
                return mapped if mapped is not None else CoreBase(n)
            case Tensor(l, r):
                return Tensor(self.map_core_type(l), self.map_core_type(r))
        raise TheoryError(f"cannot translate type {ty!r}")

    def map_host_term(self, t: HostTerm) -> HostTerm:
        from .syntax import App, Fst, HostConst, HostVar, Lam, Pair, Promote, Snd, Star

        match t:
            case Star() | HostVar(_):
                return t
            case HostConst(n):
                if n in ("comp", "par", "if"):
                    return t
                mapped = self._lookup(self.host_const_map, n)
                return mapped if mapped is not None else t
            case Pair(a, b):
                return Pair(self.map_host_term(a), self.map_host_term(b))
            case Fst(a):
                return Fst(self.map_host_term(a))
            case Snd(a):
                return Snd(self.map_host_term(a))
            case Lam(x, ty, b):
                return Lam(x, self.map_host_type(ty), self.map_host_term(b))
            case App(f, a):
                return App(self.map_host_term(f), self.map_host_term(a))
            case Promote(params, body):
                nps = tuple((x, self.map_core_type(ty)) for x, ty in params)
                return Promote(nps, self.map_core_term(body))
        raise TheoryError(f"cannot translate term {t!r}")

    def map_core_term(self, t: CoreTerm) -> CoreTerm:
        from .syntax import (
            Bullet,
            CoreConstApp,
            Derelict,
            LetTensor,
            LetUnit,
            TensorPair,
        )

        match t:
            case Bullet() | CoreVar(_):
                return t
            case TensorPair(a, b):
                return TensorPair(self.map_core_term(a), self.map_core_term(b))
            case LetTensor(s, a, b, body):
                return LetTensor(self.map_core_term(s), a, b, self.map_core_term(body))
            case LetUnit(s, body):
                return LetUnit(self.map_core_term(s), self.map_core_term(body))
            case Derelict(h, arg):
                na = self.map_core_term(arg) if arg is not None else None
                return Derelict(self.map_host_term(h), na)
            case CoreConstApp(n, args):
                margs = tuple(self.map_core_term(a) for a in args)
                image = self._lookup(self.core_const_map, n)
                if image is None:
                    return CoreConstApp(n, margs)
                sig = self.source.core_const_sig(n)
                assert sig is not None
                names = [p for p, _ in sig.params]
                return subst_core_multi(image, dict(zip(names, margs)))
        raise TheoryError(f"cannot translate term {t!r}")


def identity_translation(theory: Theory) -> Translation:
    return Translation(theory, theory)


def compose_translations(m2: Translation, m1: Translation) -> Translation:
    """Composite translation m2 after m1; defined when m1.target is m2.source."""
    if m1.target is not m2.source and m1.target != m2.source:
        raise TheoryError("translations do not compose: target/source mismatch")
    host_types = tuple(
        (n, m2.map_host_type(ty))
        for n in sorted(m1.source.base_host_types)
        for ty in [m1.map_host_type(HostBase(n))]
    )
    core_types = tuple(
        (n, m2.map_core_type(ty))
        for n in sorted(m1.source.base_core_types)
        for ty in [m1.map_core_type(CoreBase(n))]
    )
    from .syntax import CoreConstApp, HostConst

    host_consts = []
    for n, _ in m1.source.host_consts + m1.source.host_defs:
        host_consts.append((n, m2.map_host_term(m1.map_host_term(HostConst(n)))))
    core_consts = []
    for n, entry in m1.source.core_consts + m1.source.core_defs:
        sig = entry if isinstance(entry, CoreConstSig) else entry.sig
        seed = CoreConstApp(n, tuple(CoreVar(p) for p, _ in sig.params))
        core_consts.append((n, m2.map_core_term(m1.map_core_term(seed))))
    return Translation(
        m1.source,
        m2.target,
        host_types,
        core_types,
        tuple(host_consts),
        tuple(core_consts),
    )


@dataclass
class TranslationReport:
    ok: bool
    failures: list[str] = field(default_factory=list)
    unknowns: list[str] = field(default_factory=list)


def check_translation(m: Translation, cartesian_target: bool = False) -> TranslationReport:
    """Verify the translation preserves signatures and axioms of the source.

    Equalities are checked with the target's equality decision procedure;
    an inconclusive verdict is reported as unknown rather than a failure.
    """
    from . import equations, typecheck

    env = typecheck.TypeEnv(m.target, cartesian_core=cartesian_target)
    report = TranslationReport(ok=True)

    def fail(msg: str) -> None:
        report.ok = False
        report.failures.append(msg)

    for n in sorted(m.source.base_host_types):
        try:
            _check_type_wf(m.target, m.map_host_type(HostBase(n)))
        except TheoryError as e:
            fail(f"host type {n}: {e}")
    for n in sorted(m.source.base_core_types):
        try:
            _check_type_wf(m.target, m.map_core_type(CoreBase(n)))
        except TheoryError as e:
            fail(f"core type {n}: {e}")

    from .syntax import CoreConstApp, HostConst, HostContext

    for n, ty in m.source.host_consts + tuple(
        (n, d.type) for n, d in m.source.host_defs
    ):
        image = m.map_host_term(HostConst(n))
        want = m.map_host_type(ty)
        try:
            got, _ = typecheck.elaborate_host(env, HostContext(), image)
            if not typecheck.type_eq(env, got, want):
                fail(f"host constant {n}: image checks at wrong type")
        except typecheck.TypeCheckError as e:
            fail(f"host constant {n}: image ill-typed ({e})")

    for n, entry in m.source.core_consts + m.source.core_defs:
        sig = entry if isinstance(entry, CoreConstSig) else entry.sig
        seed = CoreConstApp(n, tuple(CoreVar(p) for p, _ in sig.params))
        image = m.map_core_term(seed)
        ctx = CoreContext(tuple((p, m.map_core_type(t)) for p, t in sig.params))
        try:
            got, leftover, _ = typecheck.elaborate_core(env, HostContext(), ctx, image)
            if leftover.entries and not env.cartesian_core:
                fail(f"core constant {n}: image does not consume its context")
            elif not typecheck.type_eq(env, got, m.map_core_type(sig.result)):
                fail(f"core constant {n}: image checks at wrong type")
        except typecheck.TypeCheckError as e:
            fail(f"core constant {n}: image ill-typed ({e})")

    for ax in m.source.type_axioms:
        if ax.level == "host":
            ok = typecheck.type_eq(env, m.map_host_type(ax.lhs), m.map_host_type(ax.rhs))
        else:
            ok = typecheck.type_eq(env, m.map_core_type(ax.lhs), m.map_core_type(ax.rhs))
        if not ok:
            fail("type axiom image not derivable")

    for ax in m.source.term_axioms:
        hctx = HostContext(tuple((x, m.map_host_type(t)) for x, t in ax.host_ctx))
        cctx = CoreContext(tuple((a, m.map_core_type(t)) for a, t in ax.core_ctx))
        if ax.level == "host":
            lhs = m.map_host_term(ax.lhs)
            rhs = m.map_host_term(ax.rhs)
            jl = typecheck.HostJudgment(hctx, lhs, m.map_host_type(ax.type))
            jr = typecheck.HostJudgment(hctx, rhs, m.map_host_type(ax.type))
        else:
            lhs = m.map_core_term(ax.lhs)
            rhs = m.map_core_term(ax.rhs)
            mixed = MixedContext(hctx, cctx)
            jl = typecheck.CoreJudgment(mixed, lhs, m.map_core_type(ax.type))
            jr = typecheck.CoreJudgment(mixed, rhs, m.map_core_type(ax.type))
        try:
            verdict = equations.decide_eq(env, jl, jr)
        except typecheck.TypeCheckError as e:
            fail(f"term axiom image ill-typed ({e})")
            continue
        if verdict.equal is True:
            continue
        if verdict.equal is False:
            fail("term axiom image provably broken in target")
        else:
            report.unknowns.append("term axiom image not decided (unknown)")
    return report
