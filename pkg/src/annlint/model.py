"""Simplified Java program models.

A ``ProgramModel`` is the shared vocabulary between the constraint
compiler, the bounded finder, the checker and the JSON codec: top-level
classifiers with their methods and fields, plus annotation uses that
point at elements through path strings (``"Foo"``, ``"Foo#method:m"``,
``"Foo#field:f"``).

``well_formed`` holds the meta-model's own closed rule set; constraint
violations from annotation definitions are a separate concern.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Union

from .ast_nodes import TargetType, Visibility
from .diagnostics import Severity

__all__ = [
    "AnnotationUse",
    "Classifier",
    "ClassifierKind",
    "Element",
    "Field",
    "Method",
    "ModelDiagnostic",
    "ModelFormatError",
    "ProgramModel",
    "Visibility",
    "decode",
    "dumps",
    "elements_of",
    "encode",
    "loads",
    "path_of",
    "resolve",
    "well_formed",
]


class ClassifierKind(enum.Enum):
    CLASS = "class"
    INTERFACE = "interface"
    ANNOTATION = "annotation"
    ENUM = "enum"


#: Ann target types that select classifiers, mapped to the kind they select.
TARGET_TO_KIND: dict[TargetType, ClassifierKind] = {
    TargetType.CLASS: ClassifierKind.CLASS,
    TargetType.INTERFACE: ClassifierKind.INTERFACE,
    TargetType.ANNOTATION: ClassifierKind.ANNOTATION,
    TargetType.ENUM: ClassifierKind.ENUM,
}

KIND_TO_TARGET: dict[ClassifierKind, TargetType] = {v: k for k, v in TARGET_TO_KIND.items()}


@dataclass(frozen=True)
class Method:
    name: str
    owner: str
    visibility: Visibility = Visibility.PACKAGE
    is_abstract: bool = False
    is_static: bool = False
    is_final: bool = False
    is_constructor: bool = False


@dataclass(frozen=True)
class Field:
    name: str
    owner: str
    visibility: Visibility = Visibility.PACKAGE
    is_static: bool = False
    is_final: bool = False


@dataclass(frozen=True)
class Classifier:
    name: str
    kind: ClassifierKind = ClassifierKind.CLASS
    visibility: Visibility = Visibility.PACKAGE
    is_abstract: bool = False
    is_final: bool = False
    is_static: bool = False
    superclass: str | None = None
    interfaces: tuple[str, ...] = ()
    methods: tuple[Method, ...] = ()
    fields: tuple[Field, ...] = ()


Element = Union[Classifier, Method, Field]


@dataclass(frozen=True)
class AnnotationUse:
    ann_name: str
    target: str
    values: tuple[tuple[str, Any], ...] = ()


@dataclass(frozen=True)
class ProgramModel:
    classifiers: tuple[Classifier, ...] = ()
    annotation_uses: tuple[AnnotationUse, ...] = ()

    def classifier(self, name: str) -> Classifier | None:
        for cls in self.classifiers:
            if cls.name == name:
                return cls
        return None

    def uses_on(self, path: str) -> list[AnnotationUse]:
        return [u for u in self.annotation_uses if u.target == path]

    def has_use(self, ann_name: str, path: str) -> bool:
        return any(
            u.ann_name == ann_name and u.target == path for u in self.annotation_uses
        )


@dataclass(frozen=True)
class ModelDiagnostic:
    """A finding against a program model, addressed by element path."""

    code: str
    path: str
    message: str
    severity: Severity = field(default=Severity.ERROR)

    def format(self) -> str:
        return f"{self.path}: {self.severity.value}[{self.code}]: {self.message}"


class ModelFormatError(Exception):
    """Raised when model JSON is structurally unusable."""


# ── Element addressing ───────────────────────────────────────────


def path_of(element: Element) -> str:
    if isinstance(element, Classifier):
        return element.name
    if isinstance(element, Method):
        return f"{element.owner}#method:{element.name}"
    return f"{element.owner}#field:{element.name}"


def resolve(model: ProgramModel, path: str) -> Element | None:
    """Find the element a path string names (first match wins)."""
    if "#" not in path:
        return model.classifier(path)
    owner_name, _, member = path.partition("#")
    owner = model.classifier(owner_name)
    if owner is None:
        return None
    if member.startswith("method:"):
        wanted = member[len("method:"):]
        for m in owner.methods:
            if m.name == wanted:
                return m
    elif member.startswith("field:"):
        wanted = member[len("field:"):]
        for f in owner.fields:
            if f.name == wanted:
                return f
    return None


def all_elements(model: ProgramModel) -> Iterator[Element]:
    for cls in model.classifiers:
        yield cls
        yield from cls.methods
        yield from cls.fields


def elements_of(model: ProgramModel, target_type: TargetType) -> list[Element]:
    """Elements an annotation with the given target type may sit on.

    ``method`` and ``constructor`` are disjoint here: a constructor is
    never a plain method target.
    """
    if target_type in TARGET_TO_KIND:
        kind = TARGET_TO_KIND[target_type]
        return [c for c in model.classifiers if c.kind is kind]
    if target_type is TargetType.METHOD:
        return [m for c in model.classifiers for m in c.methods if not m.is_constructor]
    if target_type is TargetType.CONSTRUCTOR:
        return [m for c in model.classifiers for m in c.methods if m.is_constructor]
    return [f for c in model.classifiers for f in c.fields]


# ── Built-in well-formedness ─────────────────────────────────────


def well_formed(model: ProgramModel) -> list[ModelDiagnostic]:
    """Check the meta-model's built-in rules; empty list means well formed."""
    out: list[ModelDiagnostic] = []
    for cls in model.classifiers:
        if cls.visibility not in (Visibility.PACKAGE, Visibility.PUBLIC):
            out.append(
                ModelDiagnostic(
                    "model/classifier-visibility",
                    cls.name,
                    f"top-level {cls.kind.value} {cls.name} must have public or "
                    f"package visibility, not {cls.visibility.value}",
                )
            )
        for method in cls.methods:
            if method.is_abstract and not (
                cls.is_abstract
                or cls.kind in (ClassifierKind.INTERFACE, ClassifierKind.ANNOTATION)
            ):
                out.append(
                    ModelDiagnostic(
                        "model/abstract-method",
                        path_of(method),
                        f"abstract method {method.name} needs an abstract owner",
                    )
                )
            if method.is_constructor:
                if cls.kind in (ClassifierKind.INTERFACE, ClassifierKind.ANNOTATION):
                    out.append(
                        ModelDiagnostic(
                            "model/interface-constructor",
                            path_of(method),
                            f"{cls.kind.value} {cls.name} cannot declare a constructor",
                        )
                    )
                bad_flags = method.is_abstract or method.is_static
                if bad_flags or method.name != cls.name:
                    out.append(
                        ModelDiagnostic(
                            "model/constructor-flags",
                            path_of(method),
                            "a constructor is never abstract or static and is "
                            "named after its classifier",
                        )
                    )
    out.extend(_inheritance_cycles(model))
    seen_uses: set[tuple[str, str]] = set()
    for use in model.annotation_uses:
        key = (use.ann_name, use.target)
        if key in seen_uses:
            out.append(
                ModelDiagnostic(
                    "model/repeated-annotation",
                    use.target,
                    f"@{use.ann_name} appears more than once on this element",
                )
            )
        seen_uses.add(key)
    return out


def _inheritance_cycles(model: ProgramModel) -> list[ModelDiagnostic]:
    """One diagnostic per strongly connected component of size > 1."""
    edges: dict[str, list[str]] = {}
    for cls in model.classifiers:
        targets = list(cls.interfaces)
        if cls.superclass is not None:
            targets.append(cls.superclass)
        edges[cls.name] = [t for t in targets if model.classifier(t) is not None]

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    out: list[ModelDiagnostic] = []

    def strongconnect(node: str) -> None:
        index[node] = low[node] = counter[0]
        counter[0] += 1
        stack.append(node)
        on_stack.add(node)
        for succ in edges.get(node, []):
            if succ not in index:
                strongconnect(succ)
                low[node] = min(low[node], low[succ])
            elif succ in on_stack:
                low[node] = min(low[node], index[succ])
        if low[node] == index[node]:
            component = []
            while True:
                member = stack.pop()
                on_stack.discard(member)
                component.append(member)
                if member == node:
                    break
            if len(component) > 1 or node in edges.get(node, []):
                names = " -> ".join(sorted(component))
                out.append(
                    ModelDiagnostic(
                        "model/inheritance-cycle",
                        sorted(component)[0],
                        f"inheritance cycle through {names}",
                    )
                )

    for cls in model.classifiers:
        if cls.name not in index:
            strongconnect(cls.name)
    return out


# ── JSON codec ───────────────────────────────────────────────────

_CLASSIFIER_KEYS = frozenset(
    {"name", "kind", "visibility", "abstract", "final", "static",
     "extends", "implements", "methods", "fields"}
)
_METHOD_KEYS = frozenset({"name", "visibility", "abstract", "static", "final", "constructor"})
_FIELD_KEYS = frozenset({"name", "visibility", "static", "final"})
_USE_KEYS = frozenset({"ann", "target", "values"})


def loads(text: str) -> ProgramModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    return decode(data)


def dumps(model: ProgramModel) -> str:
    return json.dumps(encode(model), indent=2) + "\n"


def decode(data: Any) -> ProgramModel:
    """Build a model from parsed JSON, raising ModelFormatError if unusable."""
    if not isinstance(data, Mapping):
        raise ModelFormatError("the top level must be an object")
    unknown = set(data) - {"classifiers", "annotations"}
    if unknown:
        raise ModelFormatError(f"unknown top-level keys: {', '.join(sorted(unknown))}")

    classifiers = tuple(
        _decode_classifier(obj) for obj in _expect_list(data, "classifiers")
    )
    names = [c.name for c in classifiers]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ModelFormatError(f"duplicate classifier names: {', '.join(sorted(dup))}")

    model = ProgramModel(
        classifiers,
        tuple(_decode_use(obj) for obj in _expect_list(data, "annotations")),
    )
    by_name = {c.name: c for c in classifiers}
    for cls in classifiers:
        for ref in ([cls.superclass] if cls.superclass else []) + list(cls.interfaces):
            if ref not in by_name:
                raise ModelFormatError(f"{cls.name} references unknown type {ref}")
        if cls.superclass is not None and by_name[cls.superclass].kind is not ClassifierKind.CLASS:
            raise ModelFormatError(f"{cls.name} extends {cls.superclass}, which is not a class")
        for ref in cls.interfaces:
            if by_name[ref].kind is not ClassifierKind.INTERFACE:
                raise ModelFormatError(f"{cls.name} implements {ref}, which is not an interface")
    for use in model.annotation_uses:
        if resolve(model, use.target) is None:
            raise ModelFormatError(f"annotation target {use.target!r} does not exist")
    return model


def _expect_list(data: Mapping[str, Any], key: str) -> list[Any]:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise ModelFormatError(f"{key!r} must be a list")
    return value


def _check_keys(obj: Mapping[str, Any], allowed: frozenset[str], what: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ModelFormatError(f"unknown {what} keys: {', '.join(sorted(unknown))}")


def _name_of(obj: Mapping[str, Any], what: str) -> str:
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise ModelFormatError(f"every {what} needs a non-empty name")
    return name


def _visibility_of(obj: Mapping[str, Any]) -> Visibility:
    raw = obj.get("visibility", "package")
    try:
        return Visibility(raw)
    except ValueError:
        raise ModelFormatError(f"unknown visibility {raw!r}") from None


def _flag(obj: Mapping[str, Any], key: str) -> bool:
    value = obj.get(key, False)
    if not isinstance(value, bool):
        raise ModelFormatError(f"{key!r} must be true or false")
    return value


def _decode_classifier(obj: Any) -> Classifier:
    if not isinstance(obj, Mapping):
        raise ModelFormatError("every classifier must be an object")
    _check_keys(obj, _CLASSIFIER_KEYS, "classifier")
    name = _name_of(obj, "classifier")
    raw_kind = obj.get("kind", "class")
    try:
        kind = ClassifierKind(raw_kind)
    except ValueError:
        raise ModelFormatError(f"unknown classifier kind {raw_kind!r}") from None

    superclass = obj.get("extends")
    if superclass is not None and not isinstance(superclass, str):
        raise ModelFormatError("'extends' must be a type name")
    interfaces = obj.get("implements", [])
    if not isinstance(interfaces, list) or not all(isinstance(i, str) for i in interfaces):
        raise ModelFormatError("'implements' must be a list of type names")

    methods = tuple(_decode_method(m, name) for m in _expect_list(obj, "methods"))
    fields = tuple(_decode_field(f, name) for f in _expect_list(obj, "fields"))
    if kind is ClassifierKind.ANNOTATION and fields:
        raise ModelFormatError(f"annotation type {name} cannot declare fields")

    is_abstract = _flag(obj, "abstract")
    is_final = _flag(obj, "final")
    if kind in (ClassifierKind.INTERFACE, ClassifierKind.ANNOTATION):
        is_abstract, is_final = True, False
    elif kind is ClassifierKind.ENUM:
        is_abstract = False
    return Classifier(
        name=name,
        kind=kind,
        visibility=_visibility_of(obj),
        is_abstract=is_abstract,
        is_final=is_final,
        is_static=_flag(obj, "static"),
        superclass=superclass,
        interfaces=tuple(interfaces),
        methods=methods,
        fields=fields,
    )


def _decode_method(obj: Any, owner: str) -> Method:
    if not isinstance(obj, Mapping):
        raise ModelFormatError("every method must be an object")
    _check_keys(obj, _METHOD_KEYS, "method")
    return Method(
        name=_name_of(obj, "method"),
        owner=owner,
        visibility=_visibility_of(obj),
        is_abstract=_flag(obj, "abstract"),
        is_static=_flag(obj, "static"),
        is_final=_flag(obj, "final"),
        is_constructor=_flag(obj, "constructor"),
    )


def _decode_field(obj: Any, owner: str) -> Field:
    if not isinstance(obj, Mapping):
        raise ModelFormatError("every field must be an object")
    _check_keys(obj, _FIELD_KEYS, "field")
    return Field(
        name=_name_of(obj, "field"),
        owner=owner,
        visibility=_visibility_of(obj),
        is_static=_flag(obj, "static"),
        is_final=_flag(obj, "final"),
    )


def _decode_use(obj: Any) -> AnnotationUse:
    if not isinstance(obj, Mapping):
        raise ModelFormatError("every annotation use must be an object")
    _check_keys(obj, _USE_KEYS, "annotation use")
    ann = obj.get("ann")
    target = obj.get("target")
    if not isinstance(ann, str) or not ann:
        raise ModelFormatError("every annotation use needs an 'ann' name")
    if not isinstance(target, str) or not target:
        raise ModelFormatError("every annotation use needs a 'target' path")
    values = obj.get("values", {})
    if not isinstance(values, Mapping):
        raise ModelFormatError("'values' must be an object")
    return AnnotationUse(ann, target, tuple(values.items()))


def encode(model: ProgramModel) -> dict[str, Any]:
    return {
        "classifiers": [_encode_classifier(c) for c in model.classifiers],
        "annotations": [_encode_use(u) for u in model.annotation_uses],
    }


def _encode_classifier(cls: Classifier) -> dict[str, Any]:
    out: dict[str, Any] = {"name": cls.name, "kind": cls.kind.value}
    if cls.visibility is not Visibility.PACKAGE:
        out["visibility"] = cls.visibility.value
    # Interface flags are implied by the kind; keep the output minimal.
    if cls.is_abstract and cls.kind is ClassifierKind.CLASS:
        out["abstract"] = True
    if cls.is_final and cls.kind in (ClassifierKind.CLASS, ClassifierKind.ENUM):
        out["final"] = True
    if cls.is_static:
        out["static"] = True
    if cls.superclass is not None:
        out["extends"] = cls.superclass
    if cls.interfaces:
        out["implements"] = list(cls.interfaces)
    if cls.methods:
        out["methods"] = [_encode_method(m) for m in cls.methods]
    if cls.fields:
        out["fields"] = [_encode_field(f) for f in cls.fields]
    return out


def _encode_method(method: Method) -> dict[str, Any]:
    out: dict[str, Any] = {"name": method.name}
    if method.visibility is not Visibility.PACKAGE:
        out["visibility"] = method.visibility.value
    for key, value in (
        ("abstract", method.is_abstract),
        ("static", method.is_static),
        ("final", method.is_final),
        ("constructor", method.is_constructor),
    ):
        if value:
            out[key] = True
    return out


def _encode_field(fld: Field) -> dict[str, Any]:
    out: dict[str, Any] = {"name": fld.name}
    if fld.visibility is not Visibility.PACKAGE:
        out["visibility"] = fld.visibility.value
    if fld.is_static:
        out["static"] = True
    if fld.is_final:
        out["final"] = True
    return out


def _encode_use(use: AnnotationUse) -> dict[str, Any]:
    out: dict[str, Any] = {"ann": use.ann_name, "target": use.target}
    if use.values:
        out["values"] = dict(use.values)
    return out
