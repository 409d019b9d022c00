"""Recursive-descent parser for ``.ann`` files.

Parsing is tolerant: every grammar violation produces a diagnostic and
the parser resynchronizes at the next ``;`` or ``}`` so one pass can
report several errors. ``parse`` therefore always returns an AST (which
may be partial) together with the diagnostic list.

The parser also records which grammar production each reduction came
from (``productions_seen``); the test corpus uses this to prove that
every production of the concrete grammar is exercised.
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
    Modifiers,
    RealValue,
    Retention,
    Statement,
    StringValue,
    TargetType,
    Visibility,
)
from .diagnostics import Diagnostic, Severity, Span
from .lexer import tokenize
from .tokens import Token, TokenKind

#: Every production of the concrete grammar, for coverage reporting.
GRAMMAR_PRODUCTIONS = frozenset({
    "Annotation", "Constraints", "Retention",
    "Require", "Forbid", "Statement", "TgtStatement",
    "Modifiers", "VisibMod", "TargetType",
    "Attribute", "ClassAtt", "StringAtt", "ExternalAtt",
    "IntAtt", "LongAtt", "ShortAtt", "FloatAtt", "DoubleAtt",
    "ByteAtt", "CharAtt", "BooleanAtt",
    "AnnDefault", "ClassDefault", "EnumDefault",
    "AnnID", "KeyValue", "AnnValue", "AnnArray", "AnnBasicValue",
})

_RETENTION_KINDS = {
    TokenKind.KW_RUNTIME: Retention.RUNTIME,
    TokenKind.KW_CLASS: Retention.CLASS,
    TokenKind.KW_SOURCE: Retention.SOURCE,
}

_TARGET_KINDS = {
    TokenKind.KW_INTERFACE: TargetType.INTERFACE,
    TokenKind.KW_CLASS: TargetType.CLASS,
    TokenKind.KW_ANNOTATION: TargetType.ANNOTATION,
    TokenKind.KW_METHOD: TargetType.METHOD,
    TokenKind.KW_FIELD: TargetType.FIELD,
    TokenKind.KW_CONSTRUCTOR: TargetType.CONSTRUCTOR,
    TokenKind.KW_ENUM: TargetType.ENUM,
}

_VISIBILITY_KINDS = {
    TokenKind.KW_PUBLIC: Visibility.PUBLIC,
    TokenKind.KW_PRIVATE: Visibility.PRIVATE,
    TokenKind.KW_PROTECTED: Visibility.PROTECTED,
    TokenKind.KW_PACKAGE: Visibility.PACKAGE,
}

_ATTR_TYPE_KINDS = {
    TokenKind.KW_TYPE_CLASS: (AttrKind.CLASS_REF, "ClassAtt"),
    TokenKind.KW_TYPE_STRING: (AttrKind.STRING, "StringAtt"),
    TokenKind.KW_TYPE_INT: (AttrKind.INT, "IntAtt"),
    TokenKind.KW_TYPE_LONG: (AttrKind.LONG, "LongAtt"),
    TokenKind.KW_TYPE_SHORT: (AttrKind.SHORT, "ShortAtt"),
    TokenKind.KW_TYPE_FLOAT: (AttrKind.FLOAT, "FloatAtt"),
    TokenKind.KW_TYPE_DOUBLE: (AttrKind.DOUBLE, "DoubleAtt"),
    TokenKind.KW_TYPE_CHAR: (AttrKind.CHAR, "CharAtt"),
    TokenKind.KW_TYPE_BOOLEAN: (AttrKind.BOOLEAN, "BooleanAtt"),
    TokenKind.KW_TYPE_BYTE: (AttrKind.BYTE, "ByteAtt"),
}


class _ParseAbort(Exception):
    """Internal signal: give up on the current declaration and resync."""


def parse(tokens: list[Token], filename: str = "<stdin>") -> tuple[AnnSourceFile, list[Diagnostic]]:
    """Parse a token stream into an ``AnnSourceFile`` plus diagnostics."""
    parser = Parser(tokens, filename)
    ast = parser.parse_file()
    return ast, parser.diagnostics


def parse_source(source: str, filename: str = "<stdin>") -> tuple[AnnSourceFile, list[Diagnostic]]:
    """Convenience wrapper: lex and parse in one step."""
    tokens, diagnostics = tokenize(source, filename)
    ast, parse_diags = parse(tokens, filename)
    return ast, diagnostics + parse_diags


class Parser:
    def __init__(self, tokens: list[Token], filename: str = "<stdin>") -> None:
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.diagnostics: list[Diagnostic] = []
        self.productions_seen: set[str] = set()

    # ── Token access ─────────────────────────────────────────────

    def _current(self) -> Token:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return self.tokens[-1]

    def _peek(self, offset: int = 0) -> Token:
        idx = self.pos + offset
        if idx < len(self.tokens):
            return self.tokens[idx]
        return self.tokens[-1]

    def _at(self, kind: TokenKind) -> bool:
        return self._current().kind == kind

    def _advance(self) -> Token:
        tok = self._current()
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def _accept(self, kind: TokenKind) -> Token | None:
        if self._at(kind):
            return self._advance()
        return None

    def _expect(self, kind: TokenKind, what: str) -> Token:
        if self._at(kind):
            return self._advance()
        tok = self._current()
        self._error(f"expected {what}, got {tok.text!r}" if tok.text else f"expected {what}", tok.span)
        raise _ParseAbort

    def _error(self, message: str, span: Span) -> None:
        self.diagnostics.append(Diagnostic(Severity.ERROR, "syntax", message, span))

    def _mark(self, production: str) -> None:
        self.productions_seen.add(production)

    # ── Recovery ─────────────────────────────────────────────────

    def _sync_member(self) -> None:
        """Skip to just past the next ``;`` (or stop before ``}``/EOF)."""
        while not self._at(TokenKind.EOF):
            if self._at(TokenKind.SEMI):
                self._advance()
                return
            if self._at(TokenKind.RBRACE):
                return
            self._advance()

    def _sync_top(self) -> None:
        while not self._at(TokenKind.EOF):
            kind = self._current().kind
            if kind == TokenKind.KW_ANNOTATION or kind in _RETENTION_KINDS:
                return
            self._advance()

    # ── File level ───────────────────────────────────────────────

    def parse_file(self) -> AnnSourceFile:
        package = None
        if self._at(TokenKind.KW_PACKAGE):
            package = self._parse_package_clause()
        annotations: list[AnnotationDef] = []
        while not self._at(TokenKind.EOF):
            try:
                annotations.append(self._parse_annotation())
            except _ParseAbort:
                self._sync_top()
        return AnnSourceFile(package, annotations, self.filename)

    def _parse_package_clause(self) -> str | None:
        self._advance()  # 'package'
        try:
            parts = [self._expect(TokenKind.IDENT, "a package name").text]
            while self._accept(TokenKind.DOT):
                parts.append(self._expect(TokenKind.IDENT, "a package name segment").text)
            self._expect(TokenKind.SEMI, "';' after package name")
            return ".".join(parts)
        except _ParseAbort:
            self._sync_member()
            return None

    # ── Annotation declarations ──────────────────────────────────

    def _parse_annotation(self) -> AnnotationDef:
        start = self._current()
        retention = Retention.UNSPECIFIED
        if start.kind in _RETENTION_KINDS:
            retention = _RETENTION_KINDS[start.kind]
            self._mark("Retention")
            self._advance()
        self._expect(TokenKind.KW_ANNOTATION, "'annotation'")
        name = self._expect(TokenKind.IDENT, "an annotation name").text
        self._expect(TokenKind.LBRACE, "'{'")

        attributes: list[AttributeDef] = []
        constraints: list[ConstraintDef] = []
        while not self._at(TokenKind.RBRACE) and not self._at(TokenKind.EOF):
            tok = self._current()
            try:
                if tok.kind in _ATTR_TYPE_KINDS or tok.kind == TokenKind.IDENT:
                    attr = self._parse_attribute()
                    if constraints:
                        self._error(
                            "attributes must be declared before constraints",
                            attr.location,
                        )
                    attributes.append(attr)
                elif tok.kind in (TokenKind.KW_REQUIRE, TokenKind.KW_FORBID, TokenKind.KW_AT):
                    constraints.append(self._parse_constraint())
                    self._mark("Constraints")
                else:
                    self._error(
                        f"expected an attribute or constraint, got {tok.text!r}", tok.span
                    )
                    raise _ParseAbort
            except _ParseAbort:
                self._sync_member()
        self._expect(TokenKind.RBRACE, "'}'")
        self._mark("Annotation")
        return AnnotationDef(name, retention, attributes, constraints, start.span)

    # ── Attributes ───────────────────────────────────────────────

    def _parse_attribute(self) -> AttributeDef:
        type_tok = self._advance()
        if type_tok.kind in _ATTR_TYPE_KINDS:
            kind, production = _ATTR_TYPE_KINDS[type_tok.kind]
            external = None
        else:
            kind, production = AttrKind.EXTERNAL, "ExternalAtt"
            external = type_tok.text
        self._mark(production)

        is_array = False
        if self._accept(TokenKind.LBRACKET):
            self._expect(TokenKind.RBRACKET, "']'")
            is_array = True

        name = self._expect(TokenKind.IDENT, "an attribute name").text
        default = None
        if self._accept(TokenKind.EQ):
            default = self._parse_value()
        self._expect(TokenKind.SEMI, "';' after attribute")
        self._mark("Attribute")
        return AttributeDef(name, kind, external, is_array, default, type_tok.span)

    def _parse_value(self) -> DefaultValue:
        """Parse any default value form; kind checking happens later.

        Accepting every literal form here (rather than only the one the
        declared attribute type allows) lets semantic analysis report a
        kind mismatch instead of a bare syntax error.
        """
        tok = self._current()
        if tok.kind == TokenKind.STRING:
            self._advance()
            return StringValue(tok.text)
        if tok.kind == TokenKind.INT:
            self._advance()
            return IntValue(int(tok.text))
        if tok.kind == TokenKind.FLOAT:
            self._advance()
            return RealValue(tok.text)
        if tok.kind == TokenKind.CHAR:
            self._advance()
            return CharValue(tok.text)
        if tok.kind == TokenKind.BOOLEAN:
            self._advance()
            return BoolValue(tok.text == "true")
        if tok.kind == TokenKind.AT_SIGN:
            return self._parse_ann_default()
        if tok.kind == TokenKind.LBRACE:
            return self._parse_array()
        if tok.kind in (TokenKind.IDENT, TokenKind.KW_TYPE_STRING, TokenKind.KW_TYPE_CLASS):
            # Built-in type names may head a class literal (String.class).
            return self._parse_dotted_value()
        self._error(f"expected a value, got {tok.text!r}", tok.span)
        raise _ParseAbort

    def _parse_dotted_value(self) -> DefaultValue:
        head = self._advance()
        self._expect(TokenKind.DOT, "'.' in qualified value")
        if self._accept(TokenKind.KW_CLASS):
            self._mark("ClassDefault")
            return ClassLiteral(head.text)
        const = self._expect(TokenKind.IDENT, "an enumeration constant")
        self._mark("EnumDefault")
        return EnumRef(head.text, const.text)

    def _parse_ann_default(self) -> AnnLiteral:
        self._advance()  # '@'
        name = self._expect(TokenKind.IDENT, "an annotation name").text
        self._mark("AnnID")
        self._mark("AnnDefault")
        if not self._accept(TokenKind.LPAREN):
            return AnnLiteral(name)
        args: list[tuple[str | None, DefaultValue]] = []
        if self._current().kind == TokenKind.IDENT and self._peek(1).kind == TokenKind.EQ:
            while True:
                key = self._expect(TokenKind.IDENT, "an attribute name").text
                self._expect(TokenKind.EQ, "'='")
                args.append((key, self._parse_ann_value()))
                self._mark("KeyValue")
                if not self._accept(TokenKind.COMMA):
                    break
        else:
            args.append((None, self._parse_ann_value()))
        self._expect(TokenKind.RPAREN, "')'")
        return AnnLiteral(name, tuple(args))

    def _parse_ann_value(self) -> DefaultValue:
        self._mark("AnnValue")
        if self._at(TokenKind.LBRACE):
            return self._parse_array()
        return self._parse_basic_value()

    def _parse_array(self) -> ArrayValue:
        self._advance()  # '{'
        self._mark("AnnArray")
        items: list[DefaultValue] = []
        if not self._at(TokenKind.RBRACE):
            items.append(self._parse_basic_value())
            while self._accept(TokenKind.COMMA):
                items.append(self._parse_basic_value())
        self._expect(TokenKind.RBRACE, "'}' after array values")
        return ArrayValue(tuple(items))

    def _parse_basic_value(self) -> DefaultValue:
        tok = self._current()
        if tok.kind == TokenKind.LBRACE:
            self._error("arrays cannot be nested", tok.span)
            raise _ParseAbort
        self._mark("AnnBasicValue")
        value = self._parse_value()
        if isinstance(value, ClassLiteral):
            # Grammar note: basic values cover enum and annotation
            # references but not class literals; keep it as written and
            # let semantic analysis complain about the kind.
            pass
        return value

    # ── Constraints ──────────────────────────────────────────────

    def _parse_constraint(self) -> ConstraintDef:
        start = self._current()
        scope: TargetType | None = None
        if self._accept(TokenKind.KW_AT):
            scope = self._parse_target_type()
            self._expect(TokenKind.COLON, "':' after the at scope")

        all_quantifier = False
        if self._accept(TokenKind.KW_REQUIRE):
            kind = ConstraintKind.REQUIRE
            separator = TokenKind.KW_OR
            production = "Require"
            if self._at(TokenKind.KW_ALL):
                all_tok = self._advance()
                if scope is None:
                    self._error("'all' is only allowed in an 'at'-scoped require", all_tok.span)
                else:
                    all_quantifier = True
        elif self._accept(TokenKind.KW_FORBID):
            kind = ConstraintKind.FORBID
            separator = TokenKind.KW_AND
            production = "Forbid"
            if self._at(TokenKind.KW_ALL):
                self._error("'all' cannot be used with forbid", self._current().span)
                self._advance()
        else:
            tok = self._current()
            self._error(f"expected 'require' or 'forbid', got {tok.text!r}", tok.span)
            raise _ParseAbort

        statements = [self._parse_statement()]
        while self._accept(separator):
            statements.append(self._parse_statement())
        wrong = TokenKind.KW_AND if separator == TokenKind.KW_OR else TokenKind.KW_OR
        if self._at(wrong):
            word = "or" if kind is ConstraintKind.FORBID else "and"
            right = "'and'" if kind is ConstraintKind.FORBID else "'or'"
            self._error(
                f"'{word}' cannot join {kind.value} statements (use {right})",
                self._current().span,
            )
            raise _ParseAbort
        self._expect(TokenKind.SEMI, "';' after constraint")
        self._mark(production)
        return ConstraintDef(kind, scope, all_quantifier, statements, start.span)

    def _parse_statement(self) -> Statement:
        start = self._current()
        ann_ref: str | None = None
        if self._accept(TokenKind.AT_SIGN):
            ann_ref = self._expect(TokenKind.IDENT, "an annotation name after '@'").text
            self._mark("AnnID")

        modifiers = self._parse_modifiers()
        target: TargetType | None = None
        if self._current().kind in _TARGET_KINDS:
            target = self._parse_target_type()
            self._mark("TgtStatement")

        if target is None:
            if ann_ref is None:
                tok = self._current()
                self._error(
                    f"expected a statement (an '@' reference or a target type), got {tok.text!r}",
                    tok.span,
                )
                raise _ParseAbort
            if not modifiers.is_empty():
                self._error(
                    "modifiers need a target type (a bare '@' reference takes none)",
                    start.span,
                )
        self._mark("Statement")
        return Statement(ann_ref, modifiers, target, start.span)

    def _parse_modifiers(self) -> Modifiers:
        self._mark("Modifiers")
        visibility: Visibility | None = None
        is_final = is_abstract = is_static = False
        while True:
            tok = self._current()
            if tok.kind in _VISIBILITY_KINDS:
                if visibility is not None:
                    self._error("duplicate visibility modifier", tok.span)
                visibility = _VISIBILITY_KINDS[tok.kind]
                self._mark("VisibMod")
                self._advance()
            elif tok.kind == TokenKind.KW_FINAL:
                if is_final:
                    self._error("duplicate 'final' modifier", tok.span)
                is_final = True
                self._advance()
            elif tok.kind == TokenKind.KW_ABSTRACT:
                if is_abstract:
                    self._error("duplicate 'abstract' modifier", tok.span)
                is_abstract = True
                self._advance()
            elif tok.kind == TokenKind.KW_STATIC:
                if is_static:
                    self._error("duplicate 'static' modifier", tok.span)
                is_static = True
                self._advance()
            else:
                break
        return Modifiers(visibility, is_final, is_abstract, is_static)

    def _parse_target_type(self) -> TargetType:
        tok = self._current()
        if tok.kind in _TARGET_KINDS:
            self._advance()
            self._mark("TargetType")
            return _TARGET_KINDS[tok.kind]
        self._error(f"expected a target type, got {tok.text!r}", tok.span)
        raise _ParseAbort
