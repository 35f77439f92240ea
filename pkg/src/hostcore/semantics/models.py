"""Small hand-built table models used by tests, extraction demos and docs."""

from __future__ import annotations

from .finset import FinSet, FinSetCCC, terminal
from .smc import FiniteModel, TableSMC


def trivial_model() -> FiniteModel:
    """One core object (the unit), a one-element hom-object."""
    hom = FinSet(("j",), "H1")
    core = TableSMC(
        objects=("star",),
        unit="star",
        homs={("star", "star"): hom},
        comp={("star", "star", "star"): {("j", "j"): "j"}},
        ids={"star": "j"},
        tensor={("star", "star"): "star"},
        tensor_hom={("star", "star", "star", "star"): {("j", "j"): "j"}},
        sym={("star", "star"): "j"},
    )
    host = FinSetCCC((terminal(), hom))
    return FiniteModel(host, core, faithful=True)


def two_object_model() -> FiniteModel:
    """Two objects with two-element homs; composition is parity (xor).

    The tensor on objects is the two-element group {U, V}; every
    hom-object is the same two-element set, so the extracted theory
    exercises the type quotient (all Proof types land on one object).
    """
    hom = FinSet(("e", "o"), "H2")
    objs = ("U", "V")
    xor = {("e", "e"): "e", ("e", "o"): "o", ("o", "e"): "o", ("o", "o"): "e"}
    group = {
        ("U", "U"): "U",
        ("U", "V"): "V",
        ("V", "U"): "V",
        ("V", "V"): "U",
    }
    core = TableSMC(
        objects=objs,
        unit="U",
        homs={(a, b): hom for a in objs for b in objs},
        comp={(a, b, c): dict(xor) for a in objs for b in objs for c in objs},
        ids={a: "e" for a in objs},
        tensor=group,
        tensor_hom={
            (a, b, c, d): dict(xor)
            for a in objs
            for b in objs
            for c in objs
            for d in objs
        },
        sym={(a, b): "e" for a in objs for b in objs},
    )
    host = FinSetCCC((terminal(), hom))
    return FiniteModel(host, core, faithful=True)
