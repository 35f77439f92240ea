"""Shared test utilities: cached theories, parsing shorthands, and a
type-directed generator of well-typed circuit terms."""

from __future__ import annotations

import random
from functools import lru_cache

from hostcore import surface, theories, typecheck
from hostcore.syntax import (
    App,
    Bullet,
    CoreBase,
    CoreConstApp,
    CoreContext,
    CoreTerm,
    CoreType,
    CoreVar,
    Derelict,
    HostConst,
    HostContext,
    HostTerm,
    HostVar,
    Lam,
    LetTensor,
    LetUnit,
    MixedContext,
    Promote,
    Proof,
    Tensor,
    TensorPair,
    UnitI,
)
from hostcore.typecheck import CoreJudgment, HostJudgment, TypeEnv

BIT = CoreBase("Bit")
BIT2 = Tensor(BIT, BIT)


@lru_cache(maxsize=1)
def circuit_theory():
    return theories.circuit_theory()


@lru_cache(maxsize=4)
def circuit_env(cartesian: bool = False) -> TypeEnv:
    return TypeEnv(circuit_theory(), cartesian_core=cartesian)


@lru_cache(maxsize=1)
def assoc_theory():
    text = """
core type A
core type B
core type C
core type D
host const t0 : Proof(A, B)
host const s0 : Proof(B, C)
host const u0 : Proof(C, D)
"""
    return theories.extend(theories.EMPTY, text, name="assoc")


def parse_host(text: str, theory=None) -> HostTerm:
    th = theory or circuit_theory()
    return surface.parse_host_term(text, th.symbols())


def parse_core(text: str, theory=None) -> CoreTerm:
    th = theory or circuit_theory()
    return surface.parse_core_term(text, th.symbols())


def host_judgment(term_text: str, type_text: str, ctx=(), theory=None) -> HostJudgment:
    th = theory or circuit_theory()
    sym = th.symbols()
    term = surface.parse_host_term(term_text, sym)
    p = surface.Parser(surface.tokenize(type_text), sym)
    ty = p.host_type()
    return HostJudgment(HostContext(tuple(ctx)), term, ty)


def core_judgment(
    term_text: str, type_text: str, core_ctx=(), host_ctx=(), theory=None
) -> CoreJudgment:
    th = theory or circuit_theory()
    sym = th.symbols()
    term = surface.parse_core_term(term_text, sym)
    p = surface.Parser(surface.tokenize(type_text), sym)
    ty = p.core_type()
    mixed = MixedContext(HostContext(tuple(host_ctx)), CoreContext(tuple(core_ctx)))
    return CoreJudgment(mixed, term, ty)


# ------------------------------------------------------------- term generator


class CircuitGen:
    """Type-directed generator of derivable circuit-theory judgments."""

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)
        self.counter = 0

    def fresh(self, base: str = "v") -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def context(self, max_vars: int = 3) -> tuple:
        n = self.rng.randint(0, max_vars)
        entries = []
        for _ in range(n):
            ty = self.rng.choice([BIT, BIT, BIT2])
            entries.append((self.fresh("a"), ty))
        return tuple(entries)

    # -- core terms consuming exactly the given context

    def core(self, ctx: tuple, ty: CoreType, depth: int) -> CoreTerm:
        rng = self.rng
        ivars = [e for e in ctx if e[1] == UnitI()]
        if ivars and rng.random() < 0.9:
            name, _ = ivars[0]
            rest = tuple(e for e in ctx if e[0] != name)
            return LetUnit(CoreVar(name), self.core(rest, ty, depth - 1))
        if depth <= 0:
            return self._fallback(ctx, ty)
        roll = rng.random()
        if len(ctx) == 1 and ctx[0][1] == ty and roll < 0.3:
            return CoreVar(ctx[0][0])
        if isinstance(ty, Tensor):
            if ty == BIT2 and roll < 0.25:
                return CoreConstApp("cnot", (self.core(ctx, BIT2, depth - 1),))
            if roll < 0.55:
                left, right = self._split(ctx)
                return TensorPair(
                    self.core(left, ty.left, depth - 1),
                    self.core(right, ty.right, depth - 1),
                )
        if ty == BIT:
            if roll < 0.3:
                return CoreConstApp("not", (self.core(ctx, BIT, depth - 1),))
            if roll < 0.5:
                return CoreConstApp("and", (self.core(ctx, BIT2, depth - 1),))
            if roll < 0.6:
                return CoreConstApp("nand", (self.core(ctx, BIT2, depth - 1),))
        if roll < 0.75:
            # let a (x) b = _ in _
            left, right = self._split(ctx)
            a, b = self.fresh("b"), self.fresh("b")
            scrutinee = self.core(left, BIT2, depth - 1)
            body = self.core(right + ((a, BIT), (b, BIT)), ty, depth - 1)
            return LetTensor(scrutinee, a, b, body)
        if roll < 0.9:
            # derelict of a fresh promoted block
            dom = rng.choice([BIT, BIT2])
            params = self._params_for(dom)
            body = self.core(params, ty, depth - 1)
            arg = self.core(ctx, dom, depth - 1)
            return Derelict(Promote(params, body), arg)
        return self._fallback(ctx, ty)

    def _params_for(self, dom: CoreType) -> tuple:
        if dom == BIT2 and self.rng.random() < 0.5:
            return ((self.fresh("w"), BIT), (self.fresh("w"), BIT))
        return ((self.fresh("w"), dom),)

    def _split(self, ctx: tuple) -> tuple[tuple, tuple]:
        left, right = [], []
        for e in ctx:
            (left if self.rng.random() < 0.5 else right).append(e)
        return tuple(left), tuple(right)

    def _bit_sources(self, ctx: tuple) -> list[CoreTerm]:
        out: list[CoreTerm] = []
        for name, ty in ctx:
            if ty == BIT:
                out.append(CoreVar(name))
            elif ty == BIT2:
                out.append(CoreConstApp("and", (CoreVar(name),)))
            elif ty == UnitI():
                raise AssertionError("unit variables are consumed earlier")
        return out

    def _fallback(self, ctx: tuple, ty: CoreType) -> CoreTerm:
        ivars = [e for e in ctx if e[1] == UnitI()]
        if ivars:
            name, _ = ivars[0]
            rest = tuple(e for e in ctx if e[0] != name)
            return LetUnit(CoreVar(name), self._fallback(rest, ty))
        if ty == UnitI():
            assert not ctx
            return Bullet()
        if isinstance(ty, Tensor):
            left, right = self._split(ctx)
            return TensorPair(
                self._fallback(left, ty.left), self._fallback(right, ty.right)
            )
        assert ty == BIT
        sources = self._bit_sources(ctx)
        if not sources:
            return CoreConstApp(self.rng.choice(["0", "1"]), ())
        out = sources[0]
        for s in sources[1:]:
            out = CoreConstApp("and", (TensorPair(out, s),))
        return out

    # -- judgments

    def core_judgment(self, depth: int = 3) -> CoreJudgment:
        ctx = self.context()
        ty = self.rng.choice([BIT, BIT, BIT2])
        term = self.core(ctx, ty, depth)
        mixed = MixedContext(HostContext(), CoreContext(ctx))
        return CoreJudgment(mixed, term, ty)

    def host_judgment(self, depth: int = 3) -> HostJudgment:
        rng = self.rng
        dom = rng.choice([BIT, BIT2])
        cod = rng.choice([BIT, BIT2])
        params = self._params_for(dom)

        def promo(d=dom, c=cod):
            ps = self._params_for(d)
            return Promote(ps, self.core(ps, c, depth))

        roll = rng.random()
        if roll < 0.35:
            term: HostTerm = promo()
            ty = Proof(dom, cod)
        elif roll < 0.6:
            mid = rng.choice([BIT, BIT2])
            term = App(
                App(HostConst("comp"), promo(dom, mid)), promo(mid, cod)
            )
            ty = Proof(dom, cod)
        elif roll < 0.8:
            term = App(
                App(
                    App(HostConst("if"), HostConst(rng.choice(["true", "false"]))),
                    promo(),
                ),
                promo(),
            )
            ty = Proof(dom, cod)
        else:
            x = self.fresh("x")
            inner_params = self._params_for(dom)
            body = Promote(
                inner_params,
                Derelict(HostVar(x), self.core(inner_params, dom, depth - 1)),
            )
            term = App(Lam(x, Proof(dom, cod), body), promo())
            ty = Proof(dom, cod)
        return HostJudgment(HostContext(), term, ty)
