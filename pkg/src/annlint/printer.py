"""Pretty-printer for the annotation AST.

``print_file(parse(tokens))`` followed by a re-parse yields an equal
AST; the parser tests rely on that round trip.
"""

from __future__ import annotations

from .ast_nodes import (
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
    ConstraintKind,
    DefaultValue,
    EnumRef,
    IntValue,
    RealValue,
    Retention,
    Statement,
    StringValue,
)

_ATTR_TYPE_NAMES = {
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

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def print_file(ast: AnnSourceFile) -> str:
    chunks: list[str] = []
    if ast.package_name:
        chunks.append(f"package {ast.package_name};\n")
    for ann in ast.annotations:
        chunks.append(print_annotation(ann))
    return "\n".join(chunks)


def print_annotation(ann: AnnotationDef) -> str:
    lines: list[str] = []
    head = "annotation"
    if ann.retention is not Retention.UNSPECIFIED:
        head = f"{ann.retention.value} annotation"
    lines.append(f"{head} {ann.name} {{")
    for attr in ann.attributes:
        lines.append(f"    {_attribute(attr)}")
    for constraint in ann.constraints:
        lines.append(f"    {print_constraint(constraint)}")
    lines.append("}\n")
    return "\n".join(lines)


def _attribute(attr: AttributeDef) -> str:
    type_name = attr.external_type if attr.kind is AttrKind.EXTERNAL else _ATTR_TYPE_NAMES[attr.kind]
    suffix = "[]" if attr.is_array else ""
    text = f"{type_name}{suffix} {attr.name}"
    if attr.default is not None:
        text += f" = {print_value(attr.default)}"
    return text + ";"


def print_value(value: DefaultValue) -> str:
    if isinstance(value, StringValue):
        escaped = "".join(_STRING_ESCAPES.get(ch, ch) for ch in value.text)
        return f'"{escaped}"'
    if isinstance(value, IntValue):
        return str(value.value)
    if isinstance(value, RealValue):
        return value.text
    if isinstance(value, CharValue):
        ch = value.char
        if ch == "'":
            ch = "\\'"
        elif ch == "\\":
            ch = "\\\\"
        return f"'{ch}'"
    if isinstance(value, BoolValue):
        return "true" if value.value else "false"
    if isinstance(value, ClassLiteral):
        return f"{value.name}.class"
    if isinstance(value, EnumRef):
        return f"{value.type_name}.{value.const}"
    if isinstance(value, AnnLiteral):
        return _ann_literal(value)
    if isinstance(value, ArrayValue):
        return "{" + ", ".join(print_value(item) for item in value.items) + "}"
    raise TypeError(f"unknown value node: {value!r}")


def _ann_literal(value: AnnLiteral) -> str:
    if not value.args:
        return f"@{value.name}"
    parts = []
    for key, arg in value.args:
        rendered = print_value(arg)
        parts.append(rendered if key is None else f"{key} = {rendered}")
    return f"@{value.name}({', '.join(parts)})"


def print_constraint(constraint: ConstraintDef) -> str:
    prefix = ""
    if constraint.scope is not None:
        prefix = f"at {constraint.scope.value}: "
    keyword = constraint.kind.value
    if constraint.all_quantifier:
        keyword += " all"
    joiner = " or " if constraint.kind is ConstraintKind.REQUIRE else " and "
    body = joiner.join(print_statement(stmt) for stmt in constraint.statements)
    return f"{prefix}{keyword} {body};"


def print_statement(stmt: Statement) -> str:
    words: list[str] = []
    if stmt.ann_ref is not None:
        words.append(f"@{stmt.ann_ref}")
    mods = stmt.modifiers
    if mods.visibility is not None:
        words.append(mods.visibility.value)
    if mods.is_final:
        words.append("final")
    if mods.is_abstract:
        words.append("abstract")
    if mods.is_static:
        words.append("static")
    if stmt.target_type is not None:
        words.append(stmt.target_type.value)
    return " ".join(words)
