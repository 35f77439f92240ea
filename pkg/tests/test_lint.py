"""Model linting, mutation detection, change of base, JSON round-trip."""

import pytest

from hostcore.semantics import (
    FiniteModel,
    RelabelFunctor,
    TableSMC,
    change_of_base,
    compose_relabel,
    finrel_model,
    model_from_json,
    model_lint,
    model_to_json,
)
from hostcore.semantics.finrel import FinRelSMC, canonical_set
from hostcore.semantics.finset import FinSet, FinSetCCC, ModelSizeError, terminal
from hostcore.semantics.models import trivial_model, two_object_model
from hostcore.semantics.smc import SMCError


def test_finrel_passes_all_diagrams():
    report = model_lint(finrel_model(2))
    assert report.ok, report.render()
    names = {c.name for c in report.checks}
    for expected in (
        "pentagon",
        "triangle",
        "symmetry-axiom",
        "unit-coherence",
        "hexagon",
        "enriched-associativity",
        "enriched-unit",
        "ccc-product",
        "ccc-exponential",
    ):
        assert expected in names


def test_trivial_and_two_object_models_pass():
    assert model_lint(trivial_model()).ok
    assert model_lint(two_object_model()).ok


def test_finrel_naturality_spot_check():
    report = model_lint(finrel_model(1), check_naturality=True)
    assert report.ok, report.render()


class _Corrupted(FinRelSMC):
    """One composition entry redirected; associativity must notice."""

    def comp_point(self, a, b, c, g, f):
        out = super().comp_point(a, b, c, g, f)
        bit = canonical_set(2)
        if (a, b, c) == (bit, bit, bit) and out == self.id_point(bit):
            return "{}"
        return out


def test_single_cell_mutation_detected():
    base = finrel_model(2)
    corrupted = FiniteModel(base.host, _Corrupted(base.core.objects), False)
    report = model_lint(corrupted)
    assert not report.ok
    failing = report.failing()
    assert failing
    assert any(c.counterexample is not None for c in failing)


def test_mutated_table_model_reports_triple():
    m = two_object_model()
    core = m.core
    bad_comp = {k: dict(v) for k, v in core.comp.items()}
    bad_comp[("U", "U", "U")][("o", "o")] = "o"  # xor broken at one cell
    mutated = TableSMC(
        objects=core.objects,
        unit=core.unit,
        homs=core.homs,
        comp=bad_comp,
        ids=core.ids,
        tensor=core.tensor,
        tensor_hom=core.tensor_hom,
        sym=core.sym,
    )
    report = model_lint(FiniteModel(m.host, mutated, False))
    assert not report.ok
    fail = [c for c in report.failing() if c.name == "enriched-associativity"]
    assert fail and fail[0].counterexample is not None
    assert "U" in str(fail[0].counterexample)


def test_finrel_cap_documented_bound():
    with pytest.raises(ModelSizeError):
        finrel_model(4)


# ----------------------------------------------------------------- functors


def test_identity_functor_change_of_base_is_table_identical():
    m = two_object_model()
    ident = RelabelFunctor()
    mapped = change_of_base(ident, m.core, m.host.objects)
    for a in m.core.objects:
        for b in m.core.objects:
            assert mapped.hom(a, b) == m.core.hom(a, b)
            for p in m.core.hom(a, b).elements:
                for q in m.core.hom(b, a).elements:
                    assert mapped.comp_point(a, b, a, q, p) == m.core.comp_point(
                        a, b, a, q, p
                    )
    assert model_lint(FiniteModel(m.host, mapped, False)).ok


def test_relabel_functor_preserves_lint_and_cardinalities():
    m = two_object_model()
    f = RelabelFunctor((("e", "zero"), ("o", "one")))
    mapped = change_of_base(f, m.core, m.host.objects)
    host = FinSetCCC(tuple(f.obj(x) for x in m.host.objects))
    report = model_lint(FiniteModel(host, mapped, False))
    assert report.ok, report.render()
    for a in m.core.objects:
        for b in m.core.objects:
            assert len(mapped.hom(a, b)) == len(m.core.hom(a, b))
    assert mapped.hom("U", "U") == FinSet(("one", "zero"))


def test_relabel_functor_on_finrel():
    m = finrel_model(1)
    f = RelabelFunctor((("0", "z"),))
    mapped = change_of_base(f, m.core, ())
    host = FinSetCCC(tuple(f.obj(x) for x in m.host.objects))
    assert model_lint(FiniteModel(host, mapped, False)).ok


def test_composite_functor_is_composition_of_actions():
    m = two_object_model()
    f = RelabelFunctor((("e", "mid_e"), ("o", "mid_o")))
    g = RelabelFunctor((("mid_e", "final_e"), ("mid_o", "final_o")))
    gf = compose_relabel(g, f)
    via_composite = change_of_base(gf, m.core, ())
    via_stages = change_of_base(g, change_of_base(f, m.core, ()), ())
    for a in m.core.objects:
        for b in m.core.objects:
            assert via_composite.hom(a, b) == via_stages.hom(a, b)
            assert via_composite.id_point(a) == via_stages.id_point(a)


def test_nonstrict_functor_rejected():
    class Bad(RelabelFunctor):
        def obj(self, s):
            out = super().obj(s)
            if len(out) == 2:
                return FinSet(out.elements + ("extra",))
            return out

    m = two_object_model()
    with pytest.raises(SMCError):
        change_of_base(Bad(), m.core, m.host.objects)


# ------------------------------------------------------------------ JSON IO


def test_model_json_roundtrip_bit_exact():
    m = two_object_model()
    text = model_to_json(m)
    m2 = model_from_json(text)
    assert model_to_json(m2) == text
    assert model_lint(m2).ok
    assert m2.core.objects == m.core.objects
    assert m2.core.comp == m.core.comp


def test_json_rejects_non_table_models():
    from hostcore.semantics.smc import SMCError

    with pytest.raises(SMCError):
        model_to_json(finrel_model(1))


def test_table_model_requires_tensor_closure():
    with pytest.raises(SMCError):
        TableSMC(
            objects=("U",),
            unit="U",
            homs={("U", "U"): FinSet(("e",))},
            comp={("U", "U", "U"): {("e", "e"): "e"}},
            ids={"U": "e"},
            tensor={("U", "U"): "V"},
            tensor_hom={},
            sym={("U", "U"): "e"},
        )
