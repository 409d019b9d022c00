"""Placement checking of annotated program models.

This plays the role the generated annotation processors play inside a
Java compiler: every annotation use in the model is tested against the
compiled predicates of its annotation, and failures come back as
developer-facing diagnostics. Model well-formedness problems are
reported first under the ``model/...`` code family; they never suppress
placement checking, since a malformed model can still carry obviously
misplaced annotations worth reporting in the same run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .ast_nodes import AnnotationDef, AnnSourceFile
from .compiler import ConstraintIR, compile_set, evaluate, unknown_annotations
from .model import ProgramModel, well_formed

AnnSet = Union[ConstraintIR, AnnSourceFile, Sequence[AnnotationDef]]


@dataclass(frozen=True)
class PlacementDiagnostic:
    """One rejected annotation placement (or a model-shape problem).

    ``severity`` is always ``"error"``: the processor analogue only ever
    raises errors, never warnings. Model-shape problems reuse this type
    with ``ann_name="model"`` so the rendered code reads ``model/<rule>``.
    """

    message: str
    element_path: str
    ann_name: str
    predicate_name: str
    severity: str = "error"

    def format(self) -> str:
        return (
            f"{self.element_path}: {self.severity}"
            f"[{self.ann_name}/{self.predicate_name}]: {self.message}"
        )


def _to_ir(ann_set: AnnSet) -> ConstraintIR:
    if isinstance(ann_set, ConstraintIR):
        return ann_set
    ir, _ = compile_set(ann_set)
    return ir


def check(model: ProgramModel, ann_set: AnnSet) -> list[PlacementDiagnostic]:
    """All placement errors of ``model`` against the annotation set."""
    ir = _to_ir(ann_set)
    diagnostics: list[PlacementDiagnostic] = []

    shape = [
        PlacementDiagnostic(
            message=d.message,
            element_path=d.path,
            ann_name="model",
            predicate_name=d.code.split("/", 1)[1] if "/" in d.code else d.code,
        )
        for d in well_formed(model)
    ]
    shape.sort(key=_order)
    diagnostics.extend(shape)

    placement = [
        PlacementDiagnostic(
            message=(
                f"The annotation @{v.ann_name} is disallowed for this location: "
                f"{v.description}."
            ),
            element_path=v.target_path,
            ann_name=v.ann_name,
            predicate_name=v.predicate_name,
        )
        for v in evaluate(ir, model)
    ]
    placement.sort(key=_order)
    diagnostics.extend(placement)
    return diagnostics


def unknown_annotation_notes(model: ProgramModel, ann_set: AnnSet) -> list[str]:
    """Note lines for annotations the set does not define (not errors)."""
    ir = _to_ir(ann_set)
    return [
        f"note: the annotation @{name} is not part of the checked set and was ignored"
        for name in unknown_annotations(ir, model)
    ]


def _order(d: PlacementDiagnostic) -> tuple[str, str, str]:
    return (d.element_path, d.ann_name, d.predicate_name)
