"""Render a program model as readable Java-like source text.

This is the witness view: the declarations, modifiers and annotation
placements are faithful to the model, while the parts the model does
not carry are filled with fixed placeholders (fields are typed ``int``,
methods return ``void``, bodies are elided as ``{ ... }``). Modifiers
that a declaration kind already implies, such as ``abstract`` on an
interface, are not repeated.
"""

from __future__ import annotations

from .ast_nodes import Visibility
from .model import (
    AnnotationUse,
    Classifier,
    ClassifierKind,
    Field,
    Method,
    ProgramModel,
    path_of,
)

_KIND_KEYWORD = {
    ClassifierKind.CLASS: "class",
    ClassifierKind.INTERFACE: "interface",
    ClassifierKind.ANNOTATION: "@interface",
    ClassifierKind.ENUM: "enum",
}


def _annotation_lines(uses: list[AnnotationUse], indent: str) -> list[str]:
    lines = []
    for use in uses:
        if use.values:
            rendered = ", ".join(f"{key} = {value}" for key, value in use.values)
            lines.append(f"{indent}@{use.ann_name}({rendered})")
        else:
            lines.append(f"{indent}@{use.ann_name}")
    return lines


def _visibility_keyword(visibility: Visibility) -> str:
    return "" if visibility is Visibility.PACKAGE else visibility.value


def _classifier_modifiers(cls: Classifier) -> list[str]:
    words = []
    vis = _visibility_keyword(cls.visibility)
    if vis:
        words.append(vis)
    implied_abstract = cls.kind in (ClassifierKind.INTERFACE, ClassifierKind.ANNOTATION)
    if cls.is_abstract and not implied_abstract:
        words.append("abstract")
    if cls.is_static:
        words.append("static")
    if cls.is_final and not implied_abstract:
        words.append("final")
    return words


def _method_line(method: Method) -> str:
    words = []
    vis = _visibility_keyword(method.visibility)
    if vis:
        words.append(vis)
    if method.is_abstract:
        words.append("abstract")
    if method.is_static:
        words.append("static")
    if method.is_final:
        words.append("final")
    if method.is_constructor:
        decl = f"{method.name}()"
    else:
        decl = f"void {method.name}()"
    head = " ".join(words + [decl])
    if method.is_abstract:
        return f"{head};"
    return f"{head} {{ ... }}"


def _field_line(field: Field) -> str:
    words = []
    vis = _visibility_keyword(field.visibility)
    if vis:
        words.append(vis)
    if field.is_static:
        words.append("static")
    if field.is_final:
        words.append("final")
    return " ".join(words + [f"int {field.name}"]) + ";"


def to_java_text(model: ProgramModel) -> str:
    blocks = []
    for cls in model.classifiers:
        lines = _annotation_lines(model.uses_on(cls.name), "")
        head = " ".join(_classifier_modifiers(cls) + [_KIND_KEYWORD[cls.kind], cls.name])
        if cls.superclass is not None:
            head += f" extends {cls.superclass}"
        if cls.interfaces:
            head += " implements " + ", ".join(cls.interfaces)
        lines.append(head + " {")
        for field in cls.fields:
            lines += _annotation_lines(model.uses_on(path_of(field)), "    ")
            lines.append("    " + _field_line(field))
        for method in cls.methods:
            lines += _annotation_lines(model.uses_on(path_of(method)), "    ")
            lines.append("    " + _method_line(method))
        lines.append("}")
        blocks.append("\n".join(lines))
    if not blocks:
        return ""
    return "\n\n".join(blocks) + "\n"
