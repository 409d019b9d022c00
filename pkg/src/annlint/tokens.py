"""Token definitions for the annotation language lexer."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

from .diagnostics import Span


class TokenKind(Enum):
    # ── Keywords ─────────────────────────────────────────────────
    KW_PACKAGE = auto()
    KW_ANNOTATION = auto()
    KW_REQUIRE = auto()
    KW_FORBID = auto()
    KW_AT = auto()
    KW_ALL = auto()
    KW_AND = auto()
    KW_OR = auto()

    # Retention levels (``class`` doubles as a target type; the parser
    # disambiguates by position, not the lexer).
    KW_RUNTIME = auto()
    KW_CLASS = auto()
    KW_SOURCE = auto()

    # Target types.
    KW_INTERFACE = auto()
    KW_METHOD = auto()
    KW_FIELD = auto()
    KW_CONSTRUCTOR = auto()
    KW_ENUM = auto()

    # Modifiers.
    KW_PUBLIC = auto()
    KW_PRIVATE = auto()
    KW_PROTECTED = auto()
    KW_FINAL = auto()
    KW_ABSTRACT = auto()
    KW_STATIC = auto()

    # Attribute types. ``Class``/``String`` are case-sensitive keywords,
    # distinct from the lowercase ``class`` retention/target keyword.
    KW_TYPE_CLASS = auto()
    KW_TYPE_STRING = auto()
    KW_TYPE_INT = auto()
    KW_TYPE_LONG = auto()
    KW_TYPE_SHORT = auto()
    KW_TYPE_FLOAT = auto()
    KW_TYPE_DOUBLE = auto()
    KW_TYPE_CHAR = auto()
    KW_TYPE_BOOLEAN = auto()
    KW_TYPE_BYTE = auto()

    # ── Literals ─────────────────────────────────────────────────
    IDENT = auto()
    INT = auto()
    FLOAT = auto()
    STRING = auto()
    CHAR = auto()
    BOOLEAN = auto()

    # ── Punctuation ──────────────────────────────────────────────
    LBRACE = auto()       # {
    RBRACE = auto()       # }
    LPAREN = auto()       # (
    RPAREN = auto()       # )
    LBRACKET = auto()     # [
    RBRACKET = auto()     # ]
    SEMI = auto()         # ;
    COLON = auto()        # :
    COMMA = auto()        # ,
    DOT = auto()          # .
    EQ = auto()           # =
    AT_SIGN = auto()      # @

    EOF = auto()


KEYWORDS: dict[str, TokenKind] = {
    "package": TokenKind.KW_PACKAGE,
    "annotation": TokenKind.KW_ANNOTATION,
    "require": TokenKind.KW_REQUIRE,
    "forbid": TokenKind.KW_FORBID,
    "at": TokenKind.KW_AT,
    "all": TokenKind.KW_ALL,
    "and": TokenKind.KW_AND,
    "or": TokenKind.KW_OR,
    "runtime": TokenKind.KW_RUNTIME,
    "class": TokenKind.KW_CLASS,
    "source": TokenKind.KW_SOURCE,
    "interface": TokenKind.KW_INTERFACE,
    "method": TokenKind.KW_METHOD,
    "field": TokenKind.KW_FIELD,
    "constructor": TokenKind.KW_CONSTRUCTOR,
    "enum": TokenKind.KW_ENUM,
    "public": TokenKind.KW_PUBLIC,
    "private": TokenKind.KW_PRIVATE,
    "protected": TokenKind.KW_PROTECTED,
    "final": TokenKind.KW_FINAL,
    "abstract": TokenKind.KW_ABSTRACT,
    "static": TokenKind.KW_STATIC,
    "Class": TokenKind.KW_TYPE_CLASS,
    "String": TokenKind.KW_TYPE_STRING,
    "int": TokenKind.KW_TYPE_INT,
    "long": TokenKind.KW_TYPE_LONG,
    "short": TokenKind.KW_TYPE_SHORT,
    "float": TokenKind.KW_TYPE_FLOAT,
    "double": TokenKind.KW_TYPE_DOUBLE,
    "char": TokenKind.KW_TYPE_CHAR,
    "boolean": TokenKind.KW_TYPE_BOOLEAN,
    "byte": TokenKind.KW_TYPE_BYTE,
}

# Keyword kinds that the parser may accept where an identifier is expected
# (external attribute type names shadow nothing, but ``Class``/``String``
# stay reserved).
TARGET_TYPE_KINDS = frozenset({
    TokenKind.KW_INTERFACE,
    TokenKind.KW_CLASS,
    TokenKind.KW_ANNOTATION,
    TokenKind.KW_METHOD,
    TokenKind.KW_FIELD,
    TokenKind.KW_CONSTRUCTOR,
    TokenKind.KW_ENUM,
})

VISIBILITY_KINDS = frozenset({
    TokenKind.KW_PUBLIC,
    TokenKind.KW_PRIVATE,
    TokenKind.KW_PROTECTED,
    TokenKind.KW_PACKAGE,
})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.text!r})"
