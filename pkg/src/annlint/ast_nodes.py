"""Abstract syntax tree for the annotation language.

Nodes carry their source span for diagnostics, but spans are excluded
from equality so that structural comparison (e.g. in round-trip tests)
ignores formatting differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .diagnostics import Span

_NOWHERE = Span("<none>", 1, 1, 0)


class Retention(Enum):
    RUNTIME = "runtime"
    CLASS = "class"
    SOURCE = "source"
    UNSPECIFIED = "unspecified"


class TargetType(Enum):
    INTERFACE = "interface"
    CLASS = "class"
    ANNOTATION = "annotation"
    METHOD = "method"
    FIELD = "field"
    CONSTRUCTOR = "constructor"
    ENUM = "enum"


#: Target types that contain members.
CONTAINER_TYPES = frozenset({
    TargetType.CLASS, TargetType.INTERFACE, TargetType.ANNOTATION, TargetType.ENUM,
})

#: Target types that are members of a container.
CONTAINED_TYPES = frozenset({
    TargetType.METHOD, TargetType.FIELD, TargetType.CONSTRUCTOR,
})


class ConstraintKind(Enum):
    REQUIRE = "require"
    FORBID = "forbid"


class Visibility(Enum):
    PUBLIC = "public"
    PROTECTED = "protected"
    PACKAGE = "package"
    PRIVATE = "private"


class AttrKind(Enum):
    CLASS_REF = "Class"
    STRING = "String"
    INT = "int"
    LONG = "long"
    SHORT = "short"
    FLOAT = "float"
    DOUBLE = "double"
    CHAR = "char"
    BOOLEAN = "boolean"
    BYTE = "byte"
    EXTERNAL = "external"


# ── Default values ───────────────────────────────────────────────

@dataclass(frozen=True)
class ClassLiteral:
    """``Foo.class``"""
    name: str


@dataclass(frozen=True)
class StringValue:
    text: str


@dataclass(frozen=True)
class IntValue:
    value: int


@dataclass(frozen=True)
class RealValue:
    """A decimal literal, kept as written so printing round-trips."""
    text: str


@dataclass(frozen=True)
class CharValue:
    char: str


@dataclass(frozen=True)
class BoolValue:
    value: bool


@dataclass(frozen=True)
class EnumRef:
    """``Color.RED``"""
    type_name: str
    const: str


@dataclass(frozen=True)
class AnnLiteral:
    """``@Foo``, ``@Foo(x)`` or ``@Foo(a = 1, b = 2)``.

    A single positional value is stored with key ``None``.
    """
    name: str
    args: tuple[tuple[str | None, "DefaultValue"], ...] = ()


@dataclass(frozen=True)
class ArrayValue:
    items: tuple["DefaultValue", ...]


DefaultValue = Union[
    ClassLiteral, StringValue, IntValue, RealValue, CharValue,
    BoolValue, EnumRef, AnnLiteral, ArrayValue,
]


# ── Declarations ─────────────────────────────────────────────────

@dataclass(frozen=True)
class Modifiers:
    visibility: Visibility | None = None
    is_final: bool = False
    is_abstract: bool = False
    is_static: bool = False

    def is_empty(self) -> bool:
        return self.visibility is None and not (
            self.is_final or self.is_abstract or self.is_static
        )


@dataclass
class Statement:
    """One element description inside a constraint.

    Either a bare annotation reference (``@Id``), a plain element shape
    (``public class``), or both (``@Entity package class``).
    """
    ann_ref: str | None
    modifiers: Modifiers
    target_type: TargetType | None
    location: Span = field(default=_NOWHERE, compare=False)


@dataclass
class ConstraintDef:
    kind: ConstraintKind
    scope: TargetType | None
    all_quantifier: bool
    statements: list[Statement]
    location: Span = field(default=_NOWHERE, compare=False)


@dataclass
class AttributeDef:
    name: str
    kind: AttrKind
    external_type: str | None = None
    is_array: bool = False
    default: DefaultValue | None = None
    location: Span = field(default=_NOWHERE, compare=False)


@dataclass
class AnnotationDef:
    name: str
    retention: Retention = Retention.UNSPECIFIED
    attributes: list[AttributeDef] = field(default_factory=list)
    constraints: list[ConstraintDef] = field(default_factory=list)
    location: Span = field(default=_NOWHERE, compare=False)


@dataclass
class AnnSourceFile:
    package_name: str | None
    annotations: list[AnnotationDef]
    source_path: str = field(default="<stdin>", compare=False)
