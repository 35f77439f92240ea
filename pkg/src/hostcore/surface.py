"""Concrete syntax: lexer, parser and pretty-printer for programs and theories.

The grammar is ASCII: `(x)` is the core tensor (both in types and terms),
`*` the host unit term, `1` the host unit type, `I` the core unit type,
`bullet` the core unit term, `Proof(A, B)` the bridging type,
`promote(core a:A, b:B. f)` a promotion block binding its core context,
and `derelict(t) @ a` a dereliction naming the resource it consumes
(`@ a` can be omitted when the ambient core context is a singleton).

Declarations in a `.hc` file must mention only names declared earlier in
the file or by an imported theory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

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

KEYWORDS = {
    "import", "core", "host", "type", "const", "def", "axiom", "term",
    "eq", "check", "let", "in", "promote", "derelict", "if", "then",
    "else", "fst", "snd", "bullet", "Proof",
}

# Built-in derived combinators; not declarable as constant names.
FAMILY_CONSTS = {"comp", "seq", "par", "id", "if"}

RESERVED = KEYWORDS | FAMILY_CONSTS | {"I"}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    span: tuple[int, int, int]  # line, column start, column end
    message: str
    rule: str = ""

    def render(self) -> str:
        line, c0, c1 = self.span
        rule = f" [{self.rule}]" if self.rule else ""
        return f"{self.severity}:{line}:{c0}-{c1}:{rule} {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.render())
        self.diagnostic = diagnostic


# ----------------------------------------------------------------------- lexer


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_PUNCT = ["(x)", "|-", ":=", "->", "<", ">", "(", ")", ",", ":", ".", "|", "=", "*", "@", "\\"]


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        hit = None
        for p in _PUNCT:
            if text.startswith(p, i):
                hit = p
                break
        if hit is not None:
            toks.append(Token("punct", hit, line, col))
            i += len(hit)
            col += len(hit)
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in KEYWORDS else "ident"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(
            Diagnostic("error", (line, col, col + 1), f"unexpected character {c!r}")
        )
    toks.append(Token("eof", "", line, col))
    return toks


# ------------------------------------------------------------------ source model


@dataclass(frozen=True)
class HostConstSig:
    type: HostType


@dataclass(frozen=True)
class CoreConstSig:
    params: tuple[tuple[str, CoreType], ...]
    result: CoreType


@dataclass(frozen=True)
class SurfaceJudgment:
    """A parsed judgment: host context, optional core context, term, type."""

    level: str  # "host" | "core"
    host_ctx: HostContext
    core_ctx: CoreContext
    term: HostTerm | CoreTerm
    type: HostType | CoreType


@dataclass(frozen=True)
class SurfaceEquation:
    level: str
    host_ctx: HostContext
    core_ctx: CoreContext
    lhs: HostTerm | CoreTerm
    rhs: HostTerm | CoreTerm
    type: HostType | CoreType


@dataclass(frozen=True)
class Decl:
    kind: str  # import | type | const | def | type-axiom | term-axiom | check | eq
    span: tuple[int, int, int]
    level: str = ""  # "host" | "core" for type/const/def/type-axiom
    name: str = ""
    host_type: HostType | None = None
    core_sig: CoreConstSig | None = None
    host_body: HostTerm | None = None
    core_body: CoreTerm | None = None
    core_result: CoreType | None = None
    type_pair: tuple | None = None
    judgment: SurfaceJudgment | None = None
    equation: SurfaceEquation | None = None


@dataclass
class SourceFile:
    declarations: list[Decl] = field(default_factory=list)
    imports: list[str] = field(default_factory=list)


@dataclass
class SymbolTable:
    """Names visible while parsing; grows as declarations are read."""

    host_types: set[str] = field(default_factory=set)
    core_types: set[str] = field(default_factory=set)
    host_consts: set[str] = field(default_factory=set)
    core_arity: dict[str, int] = field(default_factory=dict)

    def copy(self) -> "SymbolTable":
        return SymbolTable(
            set(self.host_types),
            set(self.core_types),
            set(self.host_consts),
            dict(self.core_arity),
        )

    def merge(self, other: "SymbolTable") -> None:
        self.host_types |= other.host_types
        self.core_types |= other.core_types
        self.host_consts |= other.host_consts
        self.core_arity.update(other.core_arity)


# ---------------------------------------------------------------------- parser


class Parser:
    def __init__(self, tokens: list[Token], symbols: SymbolTable | None = None):
        self.toks = tokens
        self.pos = 0
        self.symbols = symbols if symbols is not None else SymbolTable()

    # -- token plumbing

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("punct", "kw")

    def eat(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            self.fail(f"expected {text!r}, found {t.text!r}")
        return self.next()

    def fail(self, message: str, rule: str = "") -> None:
        t = self.peek()
        span = (t.line, t.col, t.col + max(1, len(t.text)))
        raise ParseError(Diagnostic("error", span, message, rule))

    def ident(self) -> str:
        t = self.peek()
        if t.kind not in ("ident", "num"):
            self.fail(f"expected identifier, found {t.text!r}")
        return self.next().text

    # -- types

    def host_type(self) -> HostType:
        left = self.host_type_prod()
        if self.at("->"):
            self.next()
            return Arrow(left, self.host_type())
        return left

    def host_type_prod(self) -> HostType:
        out = self.host_type_atom()
        while self.at("*"):
            self.next()
            out = Prod(out, self.host_type_atom())
        return out

    def host_type_atom(self) -> HostType:
        t = self.peek()
        if t.text == "1" and t.kind == "num":
            self.next()
            return Unit()
        if self.at("Proof"):
            self.next()
            self.eat("(")
            a = self.core_type()
            self.eat(",")
            b = self.core_type()
            self.eat(")")
            return Proof(a, b)
        if self.at("("):
            self.next()
            ty = self.host_type()
            self.eat(")")
            return ty
        if t.kind == "ident":
            name = self.next().text
            if name not in self.symbols.host_types:
                self.fail(f"unknown host type {name!r}")
            return HostBase(name)
        self.fail(f"expected a host type, found {t.text!r}")
        raise AssertionError

    def core_type(self) -> CoreType:
        left = self.core_type_atom()
        if self.at("(x)"):
            self.next()
            return Tensor(left, self.core_type())
        return left

    def core_type_atom(self) -> CoreType:
        t = self.peek()
        if t.kind == "ident" and t.text == "I":
            self.next()
            return UnitI()
        if self.at("("):
            self.next()
            ty = self.core_type()
            self.eat(")")
            return ty
        if t.kind == "ident":
            name = self.next().text
            if name not in self.symbols.core_types:
                self.fail(f"unknown core type {name!r}")
            return CoreBase(name)
        self.fail(f"expected a core type, found {t.text!r}")
        raise AssertionError

    # -- host terms

    def host_term(self) -> HostTerm:
        if self.at("\\"):
            self.next()
            x = self.ident()
            self.eat(":")
            ty = self.host_type()
            self.eat(".")
            return Lam(x, ty, self.host_term())
        if self.at("if"):
            self.next()
            g = self.host_term()
            self.eat("then")
            a = self.host_term()
            self.eat("else")
            b = self.host_term()
            return App(App(App(HostConst("if"), g), a), b)
        return self.host_app()

    def host_app(self) -> HostTerm:
        out = self.host_atom()
        while self._starts_host_atom():
            out = App(out, self.host_atom())
        return out

    def _starts_host_atom(self) -> bool:
        t = self.peek()
        if t.kind in ("ident",):
            return True
        if t.kind == "num":
            return False  # numerals are core constant names, not host atoms
        return t.text in ("*", "<", "(", "(x)", "fst", "snd", "promote")

    def host_atom(self) -> HostTerm:
        t = self.peek()
        if self.at("*"):
            self.next()
            return Star()
        if self.at("<"):
            self.next()
            a = self.host_term()
            self.eat(",")
            b = self.host_term()
            self.eat(">")
            return Pair(a, b)
        if self.at("fst"):
            self.next()
            return Fst(self.host_atom())
        if self.at("snd"):
            self.next()
            return Snd(self.host_atom())
        if self.at("promote"):
            self.next()
            if self.at("(x)"):  # "promote(x)" promotes the bare variable x
                self.next()
                return Promote((), CoreVar("x"))
            self.eat("(")
            params: tuple[tuple[str, CoreType], ...] = ()
            if self.at("core"):
                self.next()
                binders = []
                if not self.at("."):
                    binders.append(self._core_binding())
                    while self.at(","):
                        self.next()
                        binders.append(self._core_binding())
                self.eat(".")
                params = tuple(binders)
            body = self.core_term()
            self.eat(")")
            return Promote(params, body)
        if self.at("(x)"):  # "(x)" groups the bare variable x
            self.next()
            return HostVar("x")
        if self.at("("):
            self.next()
            tm = self.host_term()
            self.eat(")")
            return tm
        if t.kind == "ident":
            name = self.next().text
            if name == "id":
                self.eat("(")
                ty = self.core_type()
                self.eat(")")
                return Promote((("a", ty),), CoreVar("a"))
            if name in ("comp", "seq", "par"):
                self.eat("(")
                f = self.host_term()
                self.eat(",")
                g = self.host_term()
                self.eat(")")
                head = "comp" if name == "seq" else name
                return App(App(HostConst(head), f), g)
            if name in self.symbols.host_consts:
                return HostConst(name)
            return HostVar(name)
        self.fail(f"expected a host term, found {t.text!r}")
        raise AssertionError

    def _core_binding(self) -> tuple[str, CoreType]:
        x = self.ident()
        self.eat(":")
        ty = self.core_type()
        return (x, ty)

    # -- core terms

    def core_term(self) -> CoreTerm:
        if self.at("let"):
            self.next()
            if self.at("bullet"):
                self.next()
                self.eat("=")
                s = self.core_term()
                self.eat("in")
                return LetUnit(s, self.core_term())
            a = self.ident()
            self.eat("(x)")
            b = self.ident()
            self.eat("=")
            s = self.core_term()
            self.eat("in")
            return LetTensor(s, a, b, self.core_term())
        return self.core_tensor()

    def core_tensor(self) -> CoreTerm:
        left = self.core_atom()
        if self.at("(x)"):
            self.next()
            return TensorPair(left, self.core_term())
        return left

    def _starts_core_atom(self) -> bool:
        t = self.peek()
        return t.kind in ("ident", "num") or t.text in ("bullet", "derelict", "(", "(x)")

    def core_atom(self) -> CoreTerm:
        t = self.peek()
        if self.at("bullet"):
            self.next()
            return Bullet()
        if self.at("derelict"):
            self.next()
            if self.at("(x)"):  # "derelict(x)" derelicts the variable x
                self.next()
                h: HostTerm = HostVar("x")
            else:
                self.eat("(")
                h = self.host_term()
                self.eat(")")
            arg: CoreTerm | None = None
            if self.at("@"):
                self.next()
                if self.at("(x)"):
                    self.next()
                    arg = CoreVar("x")
                elif self.at("("):
                    self.next()
                    arg = self.core_term()
                    self.eat(")")
                else:
                    arg = CoreVar(self.ident())
            return Derelict(h, arg)
        if self.at("(x)"):  # "(x)" groups the bare variable x
            self.next()
            return CoreVar("x")
        if self.at("("):
            self.next()
            tm = self.core_term()
            self.eat(")")
            return tm
        if t.kind in ("ident", "num"):
            name = self.next().text
            arity = self.symbols.core_arity.get(name)
            if arity is None:
                if t.kind == "num":
                    self.fail(f"unknown core constant {name!r}")
                return CoreVar(name)
            if arity == 0:
                return CoreConstApp(name, ())
            if self.at("(x)"):  # e.g. "not(x)" applies the constant to x
                self.next()
                if arity != 1:
                    self.fail(f"constant {name!r} expects {arity} argument(s)")
                return CoreConstApp(name, (CoreVar("x"),))
            if self.at("("):
                self.next()
                args = [self.core_term()]
                while self.at(","):
                    self.next()
                    args.append(self.core_term())
                self.eat(")")
                if len(args) != arity:
                    self.fail(f"constant {name!r} expects {arity} argument(s)")
                return CoreConstApp(name, tuple(args))
            if arity == 1 and self._starts_core_atom():
                return CoreConstApp(name, (self.core_atom(),))
            self.fail(f"constant {name!r} expects {arity} argument(s)")
        self.fail(f"expected a core term, found {t.text!r}")
        raise AssertionError

    # -- judgments

    def _host_bindings(self) -> list[tuple[str, HostType]]:
        out: list[tuple[str, HostType]] = []
        while self.peek().kind == "ident" and self.peek(1).text == ":":
            x = self.ident()
            self.eat(":")
            out.append((x, self.host_type()))
            if self.at(","):
                self.next()
            else:
                break
        return out

    def _core_bindings(self) -> list[tuple[str, CoreType]]:
        out: list[tuple[str, CoreType]] = []
        while self.peek().kind == "ident" and self.peek(1).text == ":":
            out.append(self._core_binding())
            if self.at(","):
                self.next()
            else:
                break
        return out

    def judgment(self, with_equation: bool) -> SurfaceJudgment | SurfaceEquation:
        host = HostContext(tuple(self._host_bindings()))
        level = "host"
        core = CoreContext()
        if self.at("|"):
            self.next()
            level = "core"
            core = CoreContext(tuple(self._core_bindings()))
        self.eat("|-")
        if level == "host":
            lhs: HostTerm | CoreTerm = self.host_term()
        else:
            lhs = self.core_term()
        rhs: HostTerm | CoreTerm | None = None
        if with_equation:
            self.eat("=")
            rhs = self.host_term() if level == "host" else self.core_term()
        self.eat(":")
        ty: HostType | CoreType = self.host_type() if level == "host" else self.core_type()
        if with_equation:
            assert rhs is not None
            return SurfaceEquation(level, host, core, lhs, rhs, ty)
        return SurfaceJudgment(level, host, core, lhs, ty)

    # -- declarations

    def declaration(self) -> Decl | None:
        t = self.peek()
        if t.kind == "eof":
            return None
        span = (t.line, t.col, t.col + max(1, len(t.text)))
        if self.at("import"):
            self.next()
            return Decl("import", span, name=self.ident())
        if self.at("check"):
            self.next()
            j = self.judgment(with_equation=False)
            return Decl("check", span, judgment=j)
        if self.at("eq"):
            self.next()
            e = self.judgment(with_equation=True)
            return Decl("eq", span, equation=e)
        if self.at("type") and self.peek(1).text == "axiom":
            self.next()
            self.next()
            level = self._level()
            if level == "host":
                t1: HostType | CoreType = self.host_type()
                self.eat("=")
                t2: HostType | CoreType = self.host_type()
            else:
                t1 = self.core_type()
                self.eat("=")
                t2 = self.core_type()
            return Decl("type-axiom", span, level=level, type_pair=(t1, t2))
        if self.at("term") and self.peek(1).text == "axiom":
            self.next()
            self.next()
            e = self.judgment(with_equation=True)
            return Decl("term-axiom", span, equation=e)
        if self.at("host") or self.at("core"):
            level = self._level()
            if self.at("type"):
                self.next()
                name = self._fresh_decl_name()
                if level == "host":
                    self.symbols.host_types.add(name)
                else:
                    self.symbols.core_types.add(name)
                return Decl("type", span, level=level, name=name)
            if self.at("const"):
                self.next()
                name = self._fresh_decl_name()
                self.eat(":")
                if level == "host":
                    ty = self.host_type()
                    self.symbols.host_consts.add(name)
                    return Decl("const", span, level=level, name=name, host_type=ty)
                self.eat("(")
                params = tuple(self._core_bindings())
                self.eat("|-")
                res = self.core_type()
                self.eat(")")
                self.symbols.core_arity[name] = len(params)
                return Decl(
                    "const", span, level=level, name=name,
                    core_sig=CoreConstSig(params, res),
                )
            if self.at("def"):
                self.next()
                name = self._fresh_decl_name()
                if level == "host":
                    self.eat(":")
                    ty = self.host_type()
                    self.eat(":=")
                    body = self.host_term()
                    self.symbols.host_consts.add(name)
                    return Decl(
                        "def", span, level=level, name=name,
                        host_type=ty, host_body=body,
                    )
                self.eat("(")
                params = tuple(self._core_bindings())
                self.eat(")")
                self.eat(":")
                res = self.core_type()
                self.eat(":=")
                cbody = self.core_term()
                self.symbols.core_arity[name] = len(params)
                return Decl(
                    "def", span, level=level, name=name,
                    core_sig=CoreConstSig(params, res), core_body=cbody,
                )
            self.fail("expected 'type', 'const' or 'def' after level keyword")
        self.fail(f"expected a declaration, found {t.text!r}")
        raise AssertionError

    def _level(self) -> str:
        if self.at("host"):
            self.next()
            return "host"
        if self.at("core"):
            self.next()
            return "core"
        self.fail("expected 'host' or 'core'")
        raise AssertionError

    def _fresh_decl_name(self) -> str:
        t = self.peek()
        name = self.ident()
        if name in RESERVED:
            span = (t.line, t.col, t.col + len(name))
            raise ParseError(
                Diagnostic("error", span, f"{name!r} is reserved and cannot be declared")
            )
        return name


def parse_source(
    text: str,
    resolver: Optional[Callable[[str], SymbolTable]] = None,
    symbols: SymbolTable | None = None,
) -> tuple[SourceFile, SymbolTable]:
    """Parse a whole file.  `resolver` supplies symbol tables for imports."""
    parser = Parser(tokenize(text), symbols.copy() if symbols else SymbolTable())
    src = SourceFile()
    while True:
        decl = parser.declaration()
        if decl is None:
            break
        if decl.kind == "import":
            if resolver is None:
                parser.fail(f"imports are not available here: {decl.name!r}")
            parser.symbols.merge(resolver(decl.name))
            src.imports.append(decl.name)
        src.declarations.append(decl)
    return src, parser.symbols


def parse_host_term(text: str, symbols: SymbolTable) -> HostTerm:
    p = Parser(tokenize(text), symbols)
    tm = p.host_term()
    if p.peek().kind != "eof":
        p.fail("trailing input after term")
    return tm


def parse_core_term(text: str, symbols: SymbolTable) -> CoreTerm:
    p = Parser(tokenize(text), symbols)
    tm = p.core_term()
    if p.peek().kind != "eof":
        p.fail("trailing input after term")
    return tm


# --------------------------------------------------------------------- printer


def print_host_type(ty: HostType) -> str:
    return _pht(ty, 0)


def _pht(ty: HostType, prec: int) -> str:
    match ty:
        case Unit():
            return "1"
        case HostBase(n):
            return n
        case Proof(a, b):
            return f"Proof({print_core_type(a)}, {print_core_type(b)})"
        case Prod(l, r):
            s = f"{_pht(l, 1)} * {_pht(r, 2)}"
            return f"({s})" if prec > 1 else s
        case Arrow(d, c):
            s = f"{_pht(d, 1)} -> {_pht(c, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a host type: {ty!r}")


def print_core_type(ty: CoreType) -> str:
    return _pct(ty, 0)


def _pct(ty: CoreType, prec: int) -> str:
    match ty:
        case UnitI():
            return "I"
        case CoreBase(n):
            return n
        case Tensor(l, r):
            s = f"{_pct(l, 1)} (x) {_pct(r, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a core type: {ty!r}")


def print_type(ty: HostType | CoreType) -> str:
    if isinstance(ty, HostType):
        return print_host_type(ty)
    return print_core_type(ty)


_PREC_TOP, _PREC_APP, _PREC_ATOM = 0, 1, 2


def print_host_term(t: HostTerm) -> str:
    return _ph(t, _PREC_TOP)


def _ph(t: HostTerm, prec: int) -> str:
    match t:
        case Star():
            return "*"
        case HostVar(x):
            return x
        case HostConst(n):
            return n
        case Pair(a, b):
            return f"<{_ph(a, _PREC_TOP)}, {_ph(b, _PREC_TOP)}>"
        case Fst(a):
            s = f"fst {_ph(a, _PREC_ATOM)}"
            return f"({s})" if prec > _PREC_APP else s
        case Snd(a):
            s = f"snd {_ph(a, _PREC_ATOM)}"
            return f"({s})" if prec > _PREC_APP else s
        case Lam(x, ty, body):
            s = f"\\{x}:{print_host_type(ty)}. {_ph(body, _PREC_TOP)}"
            return f"({s})" if prec > _PREC_TOP else s
        case App(App(App(HostConst("if"), g), a), b):
            s = (
                f"if {_ph(g, _PREC_APP)} then {_ph(a, _PREC_APP)} "
                f"else {_ph(b, _PREC_TOP)}"
            )
            return f"({s})" if prec > _PREC_TOP else s
        case App(App(HostConst("comp" | "par" as n), f), g):
            return f"{n}({_ph(f, _PREC_TOP)}, {_ph(g, _PREC_TOP)})"
        case App(f, a):
            s = f"{_ph(f, _PREC_APP)} {_ph(a, _PREC_ATOM)}"
            return f"({s})" if prec > _PREC_APP else s
        case Promote(params, body):
            inner = print_core_term(body)
            if params:
                binds = ", ".join(f"{x}:{print_core_type(ty)}" for x, ty in params)
                return f"promote(core {binds}. {inner})"
            return f"promote({inner})"
    raise TypeError(f"not a host term: {t!r}")


def print_core_term(t: CoreTerm) -> str:
    return _pc(t, _PREC_TOP)


def _pc(t: CoreTerm, prec: int) -> str:
    match t:
        case Bullet():
            return "bullet"
        case CoreVar(a):
            return a
        case TensorPair(l, r):
            s = f"{_pc(l, _PREC_APP)} (x) {_pc(r, _PREC_TOP)}"
            # the tensor is the only core infix; parenthesize under app/atom
            return f"({s})" if prec > _PREC_TOP else s
        case LetTensor(sc, a, b, body):
            s = f"let {a} (x) {b} = {_pc(sc, _PREC_TOP)} in {_pc(body, _PREC_TOP)}"
            return f"({s})" if prec > _PREC_TOP else s
        case LetUnit(sc, body):
            s = f"let bullet = {_pc(sc, _PREC_TOP)} in {_pc(body, _PREC_TOP)}"
            return f"({s})" if prec > _PREC_TOP else s
        case Derelict(h, arg):
            base = f"derelict({_ph(h, _PREC_TOP)})"
            if arg is None:
                s = base
            elif isinstance(arg, CoreVar):
                s = f"{base} @ {arg.name}"
            else:
                s = f"{base} @ ({_pc(arg, _PREC_TOP)})"
            return f"({s})" if prec > _PREC_APP else s
        case CoreConstApp(n, args):
            if not args:
                return n
            if len(args) == 1:
                s = f"{n} {_pc(args[0], _PREC_ATOM)}"
                return f"({s})" if prec > _PREC_APP else s
            inner = ", ".join(_pc(a, _PREC_TOP) for a in args)
            return f"{n}({inner})"
    raise TypeError(f"not a core term: {t!r}")


def print_term(t: HostTerm | CoreTerm) -> str:
    if isinstance(t, HostTerm):
        return print_host_term(t)
    return print_core_term(t)


def print_host_context(ctx: HostContext) -> str:
    return ", ".join(f"{x}:{print_host_type(ty)}" for x, ty in ctx)


def print_core_context(ctx: CoreContext) -> str:
    return ", ".join(f"{a}:{print_core_type(ty)}" for a, ty in ctx)
