from __future__ import annotations

import pathlib

from annlint.analysis import analyze, has_errors
from annlint.diagnostics import Severity
from annlint.parser import parse_source

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def analyzed(source: str):
    ast, diagnostics = parse_source(source)
    assert not diagnostics, [d.format() for d in diagnostics]
    return analyze(ast)


def codes(source: str):
    return [d.code for d in analyzed(source)]


def wrap(body: str) -> str:
    return f"package p;\n\nannotation A {{\n{body}\n}}\n"


# ── Clean inputs stay clean ──────────────────────────────────────


def test_fixtures_are_clean():
    for name in ("person.ann", "jpa.ann", "conflict.ann", "conflict_fixed.ann"):
        ast, diagnostics = parse_source((FIXTURES / name).read_text(), filename=name)
        assert not diagnostics
        assert analyze(ast) == [], name


def test_multi_file_sets_share_definitions():
    one, d1 = parse_source("package p; annotation A { require @B class; }")
    two, d2 = parse_source("package p; annotation B { require class; }")
    assert not d1 and not d2
    assert analyze([one, two]) == []
    # Alone, the reference to B is unknown.
    diags = analyze(one)
    assert [d.code for d in diags] == ["sema/unknown-annotation"]
    assert diags[0].severity is Severity.WARNING
    assert not has_errors(diags)


# ── Each rule fires ──────────────────────────────────────────────


def test_duplicate_annotation():
    source = "package p; annotation A { } annotation A { }"
    ast, _ = parse_source(source)
    assert [d.code for d in analyze(ast)] == ["sema/duplicate-annotation"]


def test_duplicate_attribute():
    assert codes(wrap("int n = 1;\nint n = 2;")) == ["sema/duplicate-attribute"]


def test_abstract_field_statement():
    diags = analyzed(wrap("forbid abstract field;"))
    assert [d.code for d in diags] == ["sema/abstract-field"]
    assert diags[0].severity is Severity.ERROR


def test_member_scope_rejects_member_targets():
    diags = analyzed(wrap("at method: require public class or field;"))
    assert [d.code for d in diags] == ["sema/scope-target"]
    assert "scoped to a method" in diags[0].message
    assert "not field" in diags[0].message


def test_container_scope_rejects_container_targets():
    diags = analyzed(wrap("at class: forbid interface;"))
    assert [d.code for d in diags] == ["sema/scope-target"]
    assert "scoped to a class" in diags[0].message


def test_scope_rules_skip_typeless_statements():
    assert analyzed(wrap("at class: require @A;")) == []
    assert analyzed(wrap("at method: forbid @A;")) == []


# ── Defaults ─────────────────────────────────────────────────────


def test_int_range_checks():
    assert codes(wrap("byte b = 127;")) == []
    assert codes(wrap("byte b = 128;")) == ["sema/range"]
    assert codes(wrap("short s = -32769;")) == ["sema/range"]
    assert codes(wrap("int i = 2147483648;")) == ["sema/range"]
    assert codes(wrap("long l = 9223372036854775807;")) == []


def test_default_kind_mismatches():
    assert codes(wrap('int i = "text";')) == ["sema/default-kind"]
    assert codes(wrap("String s = 3;")) == ["sema/default-kind"]
    assert codes(wrap("float f = 3;")) == ["sema/default-kind"]
    assert codes(wrap("boolean b = 1;")) == ["sema/default-kind"]
    assert codes(wrap("char c = \"x\";")) == ["sema/default-kind"]
    assert codes(wrap("Class c = 3;")) == ["sema/default-kind"]


def test_array_defaults():
    assert codes(wrap("int[] ns = { 1, 2 };")) == []
    assert codes(wrap("int[] ns = 1;")) == []  # single value fills an array
    assert codes(wrap('int[] ns = { 1, "x" };')) == ["sema/default-kind"]
    assert codes(wrap("int n = { 1, 2 };")) == ["sema/default-kind"]


def test_external_types_accept_enum_and_annotation_literals():
    assert codes(wrap("Color c = Color.RED;")) == []
    assert codes(wrap("Marker m = @Marker;")) == []
    assert codes(wrap("Color c = 3;")) == ["sema/default-kind"]
