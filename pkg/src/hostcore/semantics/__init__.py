"""Finite categorical models: a finite-sets CCC, enriched SMCs over it,
coherence linting, interpretation of judgments, and change of base."""

from .finset import FinMap, FinSet, FinSetCCC, ModelSizeError
from .finrel import FinRelSMC, finrel_model
from .interp import (
    Interpretation,
    circuit_interpretation,
    interpret_core_type,
    interpret_host_type,
    interpret_judgment,
    satisfies,
)
from .lint import LintReport, model_lint
from .smc import (
    EnrichedSMC,
    FiniteModel,
    MappedSMC,
    RelabelFunctor,
    TableSMC,
    change_of_base,
    compose_relabel,
    model_from_json,
    model_to_json,
)

__all__ = [
    "FinMap",
    "FinSet",
    "FinSetCCC",
    "ModelSizeError",
    "FinRelSMC",
    "finrel_model",
    "Interpretation",
    "circuit_interpretation",
    "interpret_core_type",
    "interpret_host_type",
    "interpret_judgment",
    "satisfies",
    "LintReport",
    "model_lint",
    "EnrichedSMC",
    "FiniteModel",
    "MappedSMC",
    "RelabelFunctor",
    "TableSMC",
    "change_of_base",
    "compose_relabel",
    "model_from_json",
    "model_to_json",
]
