"""Command-line entry point.

Exit codes: 0 success / all true; 1 semantic failure (type error, unequal,
lint failure, round-trip mismatch); 2 usage or parse error; 3 inconclusive
(step budget, caps, unknown equality).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import equations, surface, syntaxgen, theories, typecheck
from .semantics import finrel_model, model_from_json, model_lint
from .semantics.interp import circuit_interpretation, interpret_judgment
from .semantics.models import trivial_model, two_object_model
from .surface import Diagnostic, ParseError
from .syntax import MixedContext
from .typecheck import CoreJudgment, HostJudgment, TypeCheckError

EXIT_OK, EXIT_SEMANTIC, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class Reporter:
    def __init__(self, fmt: str):
        self.fmt = fmt

    def line(self, kind: str, status: str, detail: str) -> None:
        if self.fmt == "lines":
            print(f"{kind}\t{status}\t{detail}")
        else:
            print(f"{kind}: {status}  {detail}")


def _load_model(spec: str):
    if spec.startswith("finrel"):
        size = int(spec.split(":", 1)[1]) if ":" in spec else 2
        return finrel_model(size)
    if spec == "trivial":
        return trivial_model()
    if spec == "two-object":
        return two_object_model()
    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(f"model {spec!r} not found")
    return model_from_json(path.read_text())


def _load_program(path: str, theory_name: str | None):
    base = theories.load_theory(theory_name) if theory_name else theories.EMPTY
    text = Path(path).read_text()
    src, _ = surface.parse_source(
        text, resolver=theories._import_symbols, symbols=base.symbols()
    )
    for imp in src.imports:
        base = theories.theory_union(base, theories.load_theory(imp))
    decls = [d for d in src.declarations if d.kind != "import"]
    theory = theories.theory_from_decls(
        Path(path).stem, decls, base=base, validate=False
    )
    theories.validate_theory(theory)
    return theory, src


def _judgments(env, decl):
    j = decl.judgment
    if j.level == "host":
        return HostJudgment(j.host_ctx, j.term, j.type)
    return CoreJudgment(MixedContext(j.host_ctx, j.core_ctx), j.term, j.type)


def _render_judgment(j) -> str:
    if isinstance(j, HostJudgment):
        ctx = surface.print_host_context(j.ctx)
        return (
            f"{ctx}{' ' if ctx else ''}|- {surface.print_term(j.term)} : "
            f"{surface.print_type(j.type)}"
        )
    hctx = surface.print_host_context(j.ctx.host)
    cctx = surface.print_core_context(j.ctx.core)
    return (
        f"{hctx}{' ' if hctx else ''}| {cctx} |- "
        f"{surface.print_term(j.term)} : {surface.print_type(j.type)}"
    )


def cmd_check(args) -> int:
    rep = Reporter(args.format)
    theory, src = _load_program(args.file, args.theory)
    env = typecheck.TypeEnv(theory, cartesian_core=args.cartesian_core)
    worst = EXIT_OK
    for decl in src.declarations:
        if decl.kind == "check":
            try:
                j = _judgments(env, decl)
                if isinstance(j, HostJudgment):
                    typecheck.check_host_judgment(env, j)
                else:
                    typecheck.check_core_judgment(env, j)
                rep.line("check", "ok", _render_judgment(j))
            except (TypeCheckError, ValueError) as e:
                rule = getattr(e, "rule", "")
                d = Diagnostic("error", decl.span, str(e), rule)
                rep.line("check", "FAIL", d.render())
                worst = max(worst, EXIT_SEMANTIC)
        elif decl.kind == "eq":
            e = decl.equation
            try:
                typecheck.equality_sides(env, e)
                rep.line("check", "ok", "both sides of an equality check")
            except (TypeCheckError, ValueError) as exc:
                rule = getattr(exc, "rule", "")
                d = Diagnostic("error", decl.span, str(exc), rule)
                rep.line("check", "FAIL", d.render())
                worst = max(worst, EXIT_SEMANTIC)
        elif decl.kind == "def":
            rep.line("check", "ok", f"definition {decl.name}")
    return worst


def cmd_norm(args) -> int:
    rep = Reporter(args.format)
    theory, src = _load_program(args.file, args.theory)
    env = typecheck.TypeEnv(theory, cartesian_core=args.cartesian_core)
    worst = EXIT_OK
    for decl in src.declarations:
        if decl.kind != "check":
            continue
        j = _judgments(env, decl)
        try:
            res = equations.normalize(env, j, max_steps=args.max_steps)
        except equations.StepBudgetExceeded as e:
            rep.line("norm", "inconclusive", str(e))
            worst = max(worst, EXIT_INCONCLUSIVE)
            continue
        except (TypeCheckError, ValueError) as e:
            rep.line("norm", "FAIL", str(e))
            worst = max(worst, EXIT_SEMANTIC)
            continue
        if args.trace:
            for step in res.steps:
                rep.line("trace", step.rule, step.render())
        rep.line("norm", "ok", surface.print_term(res.term))
    return worst


def cmd_eq(args) -> int:
    rep = Reporter(args.format)
    theory, src = _load_program(args.file, args.theory)
    env = typecheck.TypeEnv(theory, cartesian_core=args.cartesian_core)
    oracle = None
    if args.model:
        model = _load_model(args.model)
        oracle = circuit_interpretation(model, theory)
    worst = EXIT_OK
    for decl in src.declarations:
        if decl.kind != "eq":
            continue
        try:
            jl, jr = typecheck.equality_sides(env, decl.equation)
            verdict = equations.decide_eq(
                env, jl, jr, oracle=oracle, max_steps=args.max_steps
            )
        except (TypeCheckError, ValueError) as e:
            rep.line("eq", "FAIL", str(e))
            worst = max(worst, EXIT_SEMANTIC)
            continue
        if verdict.equal is True:
            rep.line("eq", "equal", f"method={verdict.method}")
        elif verdict.equal is False:
            rep.line("eq", "unequal", f"method={verdict.method} witness={verdict.witness}")
            worst = max(worst, EXIT_SEMANTIC)
        else:
            rep.line("eq", "unknown", f"method={verdict.method} {verdict.note}")
            worst = max(worst, EXIT_INCONCLUSIVE)
    return worst


def cmd_interp(args) -> int:
    rep = Reporter(args.format)
    theory, src = _load_program(args.file, args.theory)
    env = typecheck.TypeEnv(theory)
    model = _load_model(args.model)
    interp = circuit_interpretation(model, theory)
    worst = EXIT_OK
    for decl in src.declarations:
        if decl.kind != "check":
            continue
        j = _judgments(env, decl)
        try:
            table = interpret_judgment(interp, env, j)
        except (TypeCheckError, ValueError) as e:
            rep.line("interp", "FAIL", str(e))
            worst = max(worst, EXIT_SEMANTIC)
            continue
        rep.line("interp", "ok", _render_judgment(j))
        entries = table.values if hasattr(table, "values") else table.table
        for k, v in entries:
            rep.line("table", k, v)
    return worst


def cmd_lint(args) -> int:
    model = _load_model(args.model)
    report = model_lint(model, check_naturality=args.naturality)
    print(report.render())
    return EXIT_OK if report.ok else EXIT_SEMANTIC


def _parse_caps(text: str | None) -> syntaxgen.SyntaxGenCaps:
    caps = syntaxgen.SyntaxGenCaps()
    if not text:
        return caps
    values = {}
    for part in text.split(","):
        k, v = part.split("=", 1)
        values[k.strip()] = int(v)
    return syntaxgen.SyntaxGenCaps(
        host_ctx_len=values.get("ctx", caps.host_ctx_len),
        max_hom=values.get("hom", caps.max_hom),
    )


def cmd_syntaxgen(args) -> int:
    model = _load_model(args.model)
    try:
        gen = syntaxgen.syntax_gen(model, _parse_caps(args.caps))
    except syntaxgen.SyntaxGenCapError as e:
        print(f"inconclusive: {e}")
        return EXIT_INCONCLUSIVE
    text = syntaxgen.emit_theory(gen)
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    model = _load_model(args.model)
    try:
        report = syntaxgen.round_trip_check(model, _parse_caps(args.caps))
    except syntaxgen.SyntaxGenCapError as e:
        print(f"inconclusive: {e}")
        return EXIT_INCONCLUSIVE
    print(report.render())
    if report.refused:
        return EXIT_SEMANTIC
    if report.ok:
        return EXIT_OK
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_SEMANTIC


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_file=True):
        if with_file:
            sp.add_argument("file", help="program or theory source file")
        sp.add_argument("--theory", help="base theory loaded before the file")
        sp.add_argument("--cartesian-core", action="store_true")
        sp.add_argument("--format", choices=["text", "lines"], default="text")

    sp = sub.add_parser("check", help="type-check the declarations of a file")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("norm", help="print normal forms of checked judgments")
    common(sp)
    sp.add_argument("--max-steps", type=int, default=equations.DEFAULT_MAX_STEPS)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(fn=cmd_norm)

    sp = sub.add_parser("eq", help="decide the equality assertions of a file")
    common(sp)
    sp.add_argument("--max-steps", type=int, default=equations.DEFAULT_MAX_STEPS)
    sp.add_argument("--model", help="oracle model: finrel[:N], trivial, two-object, or a JSON path")
    sp.set_defaults(fn=cmd_eq)

    sp = sub.add_parser("interp", help="print interpretation tables of checked judgments")
    common(sp)
    sp.add_argument("--model", default="finrel:2")
    sp.set_defaults(fn=cmd_interp)

    sp = sub.add_parser("lint", help="verify a model's coherence diagrams")
    sp.add_argument("--model", required=True)
    sp.add_argument("--naturality", action="store_true")
    sp.set_defaults(fn=cmd_lint)

    sp = sub.add_parser("syntaxgen", help="extract a theory file from a model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--caps", help="e.g. ctx=1,hom=64")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_syntaxgen)

    sp = sub.add_parser("roundtrip", help="model vs term model of its extraction")
    sp.add_argument("--model", required=True)
    sp.add_argument("--caps")
    sp.set_defaults(fn=cmd_roundtrip)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as e:
        print(e.diagnostic.render(), file=sys.stderr)
        return EXIT_USAGE
    except theories.TheoryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TypeCheckError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
