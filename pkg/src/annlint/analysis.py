"""Semantic analysis over parsed annotation definitions.

``analyze`` walks one or more source files (annotations reference each
other across the whole set) and reports:

* scope/target mismatches: a constraint scoped to a member kind may
  only mention container targets, and vice versa;
* default values whose literal form does not fit the attribute type,
  including byte/short/int range checks;
* duplicate attribute or annotation names;
* references to annotations that the set does not define (a warning:
  externally defined annotations are legal);
* an ``abstract`` modifier on a field statement.
"""

from __future__ import annotations

from collections.abc import Sequence

from .ast_nodes import (
    CONTAINED_TYPES,
    CONTAINER_TYPES,
    AnnLiteral,
    AnnotationDef,
    AnnSourceFile,
    ArrayValue,
    AttributeDef,
    AttrKind,
    BoolValue,
    CharValue,
    ClassLiteral,
    ConstraintDef,
    DefaultValue,
    EnumRef,
    IntValue,
    RealValue,
    StringValue,
    TargetType,
)
from .diagnostics import Diagnostic, Severity

_INT_RANGES = {
    AttrKind.BYTE: (-(2**7), 2**7 - 1),
    AttrKind.SHORT: (-(2**15), 2**15 - 1),
    AttrKind.INT: (-(2**31), 2**31 - 1),
    AttrKind.LONG: (-(2**63), 2**63 - 1),
}

#: Target types a member-scoped constraint may mention.
_CONTAINER_STATEMENT_TYPES = frozenset(
    {TargetType.CLASS, TargetType.INTERFACE, TargetType.ANNOTATION}
)

_TYPE_NAMES = {
    AttrKind.CLASS_REF: "Class",
    AttrKind.STRING: "String",
    AttrKind.INT: "int",
    AttrKind.LONG: "long",
    AttrKind.SHORT: "short",
    AttrKind.FLOAT: "float",
    AttrKind.DOUBLE: "double",
    AttrKind.CHAR: "char",
    AttrKind.BOOLEAN: "boolean",
    AttrKind.BYTE: "byte",
}


def analyze(files: AnnSourceFile | Sequence[AnnSourceFile]) -> list[Diagnostic]:
    if isinstance(files, AnnSourceFile):
        files = [files]
    diagnostics: list[Diagnostic] = []
    defined: set[str] = set()
    seen_names: set[str] = set()
    for file in files:
        for ann in file.annotations:
            if ann.name in seen_names:
                diagnostics.append(
                    Diagnostic(
                        Severity.ERROR,
                        "sema/duplicate-annotation",
                        f"annotation {ann.name} is defined more than once",
                        ann.location,
                    )
                )
            seen_names.add(ann.name)
            defined.add(ann.name)
    for file in files:
        for ann in file.annotations:
            _check_annotation(ann, defined, diagnostics)
    return diagnostics


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


def _check_annotation(ann: AnnotationDef, defined: set[str], out: list[Diagnostic]) -> None:
    attr_names: set[str] = set()
    for attr in ann.attributes:
        if attr.name in attr_names:
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    "sema/duplicate-attribute",
                    f"duplicate attribute {attr.name} in annotation {ann.name}",
                    attr.location,
                )
            )
        attr_names.add(attr.name)
        if attr.default is not None:
            _check_default(attr, out)
    for constraint in ann.constraints:
        _check_constraint(ann, constraint, defined, out)


# ── Constraints ──────────────────────────────────────────────────


def _check_constraint(
    ann: AnnotationDef,
    constraint: ConstraintDef,
    defined: set[str],
    out: list[Diagnostic],
) -> None:
    for stmt in constraint.statements:
        if stmt.ann_ref is not None and stmt.ann_ref not in defined:
            out.append(
                Diagnostic(
                    Severity.WARNING,
                    "sema/unknown-annotation",
                    f"@{stmt.ann_ref} is not defined in this file set",
                    stmt.location,
                )
            )
        if stmt.modifiers.is_abstract and stmt.target_type is TargetType.FIELD:
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    "sema/abstract-field",
                    "fields are never abstract",
                    stmt.location,
                )
            )
        if constraint.scope is None or stmt.target_type is None:
            continue
        if constraint.scope in CONTAINED_TYPES:
            if stmt.target_type not in _CONTAINER_STATEMENT_TYPES:
                out.append(
                    Diagnostic(
                        Severity.ERROR,
                        "sema/scope-target",
                        f"a constraint scoped to a {constraint.scope.value} may only "
                        f"mention class, interface or annotation targets, "
                        f"not {stmt.target_type.value}",
                        stmt.location,
                    )
                )
        elif constraint.scope in CONTAINER_TYPES:
            if stmt.target_type not in CONTAINED_TYPES:
                out.append(
                    Diagnostic(
                        Severity.ERROR,
                        "sema/scope-target",
                        f"a constraint scoped to a {constraint.scope.value} may only "
                        f"mention method, field or constructor targets, "
                        f"not {stmt.target_type.value}",
                        stmt.location,
                    )
                )


# ── Defaults ─────────────────────────────────────────────────────


def _check_default(attr: AttributeDef, out: list[Diagnostic]) -> None:
    value = attr.default
    assert value is not None
    if attr.is_array:
        items = value.items if isinstance(value, ArrayValue) else (value,)
        for item in items:
            _check_value_kind(attr, item, out)
        return
    if isinstance(value, ArrayValue):
        _mismatch(attr, "an array value needs an array attribute type", out)
        return
    _check_value_kind(attr, value, out)


def _check_value_kind(attr: AttributeDef, value: DefaultValue, out: list[Diagnostic]) -> None:
    kind = attr.kind
    if kind is AttrKind.EXTERNAL:
        # External types are enums or annotation types; either literal
        # form may apply, and their constants are not ours to check.
        if not isinstance(value, (EnumRef, AnnLiteral)):
            _mismatch(attr, f"a value of type {attr.external_type} must be an "
                            "enumeration constant or an annotation literal", out)
        return
    if kind is AttrKind.CLASS_REF:
        if not isinstance(value, ClassLiteral):
            _mismatch(attr, "a Class attribute takes a Name.class literal", out)
        return
    if kind is AttrKind.STRING:
        if not isinstance(value, StringValue):
            _mismatch(attr, "a String attribute takes a string literal", out)
        return
    if kind in _INT_RANGES:
        if not isinstance(value, IntValue):
            _mismatch(attr, f"a {_TYPE_NAMES[kind]} attribute takes an integer literal", out)
            return
        low, high = _INT_RANGES[kind]
        if not low <= value.value <= high:
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    "sema/range",
                    f"value {value.value} does not fit in {_TYPE_NAMES[kind]} "
                    f"(range {low}..{high})",
                    attr.location,
                )
            )
        return
    if kind in (AttrKind.FLOAT, AttrKind.DOUBLE):
        if not isinstance(value, RealValue):
            _mismatch(attr, f"a {_TYPE_NAMES[kind]} attribute takes a decimal literal", out)
        return
    if kind is AttrKind.CHAR:
        if not isinstance(value, CharValue):
            _mismatch(attr, "a char attribute takes a character literal", out)
        return
    if kind is AttrKind.BOOLEAN:
        if not isinstance(value, BoolValue):
            _mismatch(attr, "a boolean attribute takes true or false", out)
        return


def _mismatch(attr: AttributeDef, detail: str, out: list[Diagnostic]) -> None:
    out.append(
        Diagnostic(
            Severity.ERROR,
            "sema/default-kind",
            f"default for attribute {attr.name} has the wrong kind: {detail}",
            attr.location,
        )
    )
