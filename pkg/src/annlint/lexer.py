"""Hand-written scanner for ``.ann`` source files.

The lexer is total: it never raises on malformed input. Problems are
reported as diagnostics alongside the tokens that could be produced,
so the parser can keep going and collect further errors.
"""

from __future__ import annotations

from .diagnostics import Diagnostic, Severity, Span
from .tokens import KEYWORDS, Token, TokenKind

def _is_digit(ch: str) -> bool:
    # Not str.isdigit(): that accepts characters like superscripts
    # that int() then rejects.
    return "0" <= ch <= "9"


_PUNCT: dict[str, TokenKind] = {
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "[": TokenKind.LBRACKET,
    "]": TokenKind.RBRACKET,
    ";": TokenKind.SEMI,
    ":": TokenKind.COLON,
    ",": TokenKind.COMMA,
    ".": TokenKind.DOT,
    "=": TokenKind.EQ,
    "@": TokenKind.AT_SIGN,
}


def tokenize(source: str, filename: str = "<stdin>") -> tuple[list[Token], list[Diagnostic]]:
    """Scan ``source`` into a token list ending with an EOF token."""
    return _Lexer(source, filename).run()


class _Lexer:
    def __init__(self, source: str, filename: str) -> None:
        self.src = source
        self.filename = filename
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.diagnostics: list[Diagnostic] = []

    # ── Character access ─────────────────────────────────────────

    def _peek(self, offset: int = 0) -> str:
        idx = self.pos + offset
        return self.src[idx] if idx < len(self.src) else ""

    def _advance(self) -> str:
        ch = self.src[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def _span(self, line: int, col: int, length: int) -> Span:
        return Span(self.filename, line, col, length)

    def _emit(self, kind: TokenKind, text: str, line: int, col: int) -> None:
        self.tokens.append(Token(kind, text, self._span(line, col, len(text))))

    def _error(self, message: str, line: int, col: int, length: int = 1) -> None:
        self.diagnostics.append(
            Diagnostic(Severity.ERROR, "lex", message, self._span(line, col, length))
        )

    # ── Main loop ────────────────────────────────────────────────

    def run(self) -> tuple[list[Token], list[Diagnostic]]:
        while self.pos < len(self.src):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
            elif ch.isalpha() or ch == "_":
                self._word()
            elif _is_digit(ch):
                self._number(sign="")
            elif ch == "-" and _is_digit(self._peek(1)):
                line, col = self.line, self.col
                self._advance()
                self._number(sign="-", start=(line, col))
            elif ch == '"':
                self._string()
            elif ch == "'":
                self._char()
            elif ch in _PUNCT:
                line, col = self.line, self.col
                self._emit(_PUNCT[ch], self._advance(), line, col)
            else:
                self._error(f"illegal character {ch!r}", self.line, self.col)
                self._advance()
        self.tokens.append(Token(TokenKind.EOF, "", self._span(self.line, self.col, 0)))
        return self.tokens, self.diagnostics

    # ── Token scanners ───────────────────────────────────────────

    def _word(self) -> None:
        line, col = self.line, self.col
        start = self.pos
        while self.pos < len(self.src) and (self._peek().isalnum() or self._peek() == "_"):
            self._advance()
        text = self.src[start:self.pos]
        if text in ("true", "false"):
            self._emit(TokenKind.BOOLEAN, text, line, col)
        else:
            self._emit(KEYWORDS.get(text, TokenKind.IDENT), text, line, col)

    def _number(self, sign: str, start: tuple[int, int] | None = None) -> None:
        line, col = start if start else (self.line, self.col)
        begin = self.pos
        while _is_digit(self._peek()):
            self._advance()
        # A fractional part makes it a FLOAT; ``52.`` alone does not
        # (the dot could start ``Foo.class``), so require a digit after.
        if self._peek() == "." and _is_digit(self._peek(1)):
            self._advance()
            while _is_digit(self._peek()):
                self._advance()
            text = sign + self.src[begin:self.pos]
            self._emit(TokenKind.FLOAT, text, line, col)
            return
        text = sign + self.src[begin:self.pos]
        if len(text.lstrip("-")) > 19 or not -(2**63) <= int(text) < 2**63:
            self._error(f"integer literal {text} out of 64-bit range", line, col, len(text))
        self._emit(TokenKind.INT, text, line, col)

    def _string(self) -> None:
        line, col = self.line, self.col
        self._advance()  # opening quote
        chars: list[str] = []
        while True:
            if self.pos >= len(self.src) or self._peek() == "\n":
                self._error("unterminated string literal", line, col)
                break
            ch = self._advance()
            if ch == '"':
                break
            if ch == "\\" and self.pos < len(self.src):
                chars.append(self._escape(self._advance(), line, col))
            else:
                chars.append(ch)
        self._emit(TokenKind.STRING, "".join(chars), line, col)

    def _char(self) -> None:
        line, col = self.line, self.col
        self._advance()  # opening quote
        if self.pos >= len(self.src) or self._peek() in "\n'":
            self._error("empty or unterminated character literal", line, col)
            if self._peek() == "'":
                self._advance()
            self._emit(TokenKind.CHAR, "?", line, col)
            return
        ch = self._advance()
        if ch == "\\" and self.pos < len(self.src):
            ch = self._escape(self._advance(), line, col)
        if self._peek() == "'":
            self._advance()
        else:
            self._error("unterminated character literal", line, col)
        self._emit(TokenKind.CHAR, ch, line, col)

    def _escape(self, ch: str, line: int, col: int) -> str:
        mapping = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "'": "'", "0": "\0"}
        if ch in mapping:
            return mapping[ch]
        self._error(f"unknown escape sequence \\{ch}", line, col)
        return ch
