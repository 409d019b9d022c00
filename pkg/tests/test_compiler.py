from __future__ import annotations

import pathlib

import pytest

from annlint.ast_nodes import TargetType, Visibility
from annlint.compiler import (
    ForbiddenTargetCondition,
    MemberExists,
    MemberForAll,
    MemberForbidden,
    ModifierTest,
    OwnerCondition,
    SameElementCoOccurrence,
    TargetCondition,
    compile_set,
    evaluate,
    unknown_annotations,
)
from annlint.model import (
    AnnotationUse,
    Classifier,
    ClassifierKind,
    Field,
    Method,
    ProgramModel,
    loads,
)
from annlint.parser import parse_source

from oracles import ast_violations
from support import JPA_MUTATIONS, jpa_witness

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
MODELS = FIXTURES / "models"

PUB = Visibility.PUBLIC


def compiled(source: str):
    ast, diagnostics = parse_source(source)
    assert not diagnostics, [d.format() for d in diagnostics]
    ir, warnings = compile_set(ast)
    assert not warnings, [d.format() for d in warnings]
    return ir


def only_predicate(source_body: str):
    ir = compiled(f"package p;\nannotation A {{ {source_body} }}\nannotation B {{ }}")
    (pred,) = ir.annotation("A").predicates
    return pred


# ── Lowering shapes ──────────────────────────────────────────────


def test_unscoped_require_becomes_target_condition():
    pred = only_predicate("require public class or interface;")
    assert isinstance(pred, TargetCondition)
    first, second = pred.disjuncts
    assert first.target_type is TargetType.CLASS
    assert first.test == ModifierTest(visibility=PUB)
    assert second.target_type is TargetType.INTERFACE
    assert second.test.is_trivial()


def test_unscoped_forbid_becomes_forbidden_condition():
    pred = only_predicate("forbid static final field;")
    assert isinstance(pred, ForbiddenTargetCondition)
    (conjunct,) = pred.conjuncts
    assert conjunct.target_type is TargetType.FIELD
    # Absent modifiers stay None; mentioned flags become True, never False.
    assert conjunct.test == ModifierTest(is_static=True, is_final=True)
    assert conjunct.test.is_abstract is None


def test_bare_reference_becomes_cooccurrence():
    pred = only_predicate("require @B;")
    assert isinstance(pred, SameElementCoOccurrence)
    assert pred.co_ann == "B" and pred.positive and pred.scope is None

    pred = only_predicate("at method: forbid @B;")
    assert isinstance(pred, SameElementCoOccurrence)
    assert not pred.positive and pred.scope is TargetType.METHOD


def test_container_scopes_lower_to_member_predicates():
    pred = only_predicate("at class: require public method or field;")
    assert isinstance(pred, MemberExists)
    assert pred.scope is TargetType.CLASS

    pred = only_predicate("at interface: require all public method;")
    assert isinstance(pred, MemberForAll)
    assert pred.scope is TargetType.INTERFACE

    pred = only_predicate("at class: forbid final method and static field;")
    assert isinstance(pred, MemberForbidden)
    assert [c.target_type for c in pred.conjuncts] == [
        TargetType.METHOD,
        TargetType.FIELD,
    ]


def test_member_scopes_lower_to_owner_condition():
    pred = only_predicate("at field: require public class;")
    assert isinstance(pred, OwnerCondition)
    assert pred.scope is TargetType.FIELD and pred.positive

    pred = only_predicate("at constructor: forbid @B class;")
    assert isinstance(pred, OwnerCondition)
    assert pred.scope is TargetType.CONSTRUCTOR and not pred.positive
    (atom,) = pred.atoms
    assert atom.co_ann == "B" and atom.target_type is TargetType.CLASS


# ── Naming ───────────────────────────────────────────────────────


def test_predicate_names():
    ir = compiled(
        "package p;\n"
        "annotation A {\n"
        "    require public class or interface;\n"
        "    forbid final class;\n"
        "    at class: require all public method;\n"
        "}\n"
        "annotation B {\n"
        "    at field: require @A class;\n"
        "}\n"
    )
    assert [p.name for p in ir.annotation("A").predicates] == [
        "require_public_class_or_interface",
        "forbid_final_class",
        "at_class__require_all_public_method",
    ]
    assert [p.name for p in ir.annotation("B").predicates] == [
        "at_field__require_annA_class",
    ]


def test_dead_scope_warning():
    # A is confined to classes, so its field-scoped constraint can
    # never fire; the compiler says so instead of silently keeping it.
    source = (
        "package p;\n"
        "annotation A {\n"
        "    require public class;\n"
        "    at field: require class;\n"
        "}\n"
    )
    ast, diagnostics = parse_source(source)
    assert not diagnostics
    ir, warnings = compile_set(ast)
    assert [w.code for w in warnings] == ["compile/dead-scope"]
    assert "can never apply" in warnings[0].message


def test_descriptions_read_like_prose():
    ir = compiled(
        "package p;\n"
        "annotation A {\n"
        "    require public class;\n"
        "    at class: forbid final method;\n"
        "}\n"
    )
    first, second = ir.annotation("A").predicates
    assert first.description == "the target must be a public class"
    assert second.description == "the class must not have a final method"


# ── Target lists ─────────────────────────────────────────────────


def test_allowed_targets_union_of_required_kinds():
    ir = compiled(
        "package p;\n"
        "annotation A { require class or interface; require class; }\n"
        "annotation B { forbid final class; }\n"
        "annotation C { }\n"
    )
    assert ir.annotation("A").allowed_targets == frozenset(
        {TargetType.CLASS, TargetType.INTERFACE}
    )
    assert ir.annotation("A").explicit_targets == (
        TargetType.CLASS,
        TargetType.INTERFACE,
    )
    # Nothing named: every placement is allowed.
    assert ir.annotation("B").allowed_targets == frozenset(TargetType)
    assert ir.annotation("C").allowed_targets == frozenset(TargetType)


# ── Evaluation semantics worth pinning ───────────────────────────


def one_class(**kw) -> ProgramModel:
    uses = kw.pop("uses", (AnnotationUse("A", "C"),))
    return ProgramModel(classifiers=(Classifier("C", **kw),), annotation_uses=uses)


def violated(ir, model) -> list[str]:
    return [v.predicate_name for v in evaluate(ir, model)]


def test_constructor_and_method_targets_are_disjoint():
    ir = compiled("package p; annotation A { require constructor; }")
    ctor = Method("C", owner="C", is_constructor=True)
    plain = Method("m", owner="C", is_constructor=False)
    model = ProgramModel(
        classifiers=(Classifier("C", methods=(ctor, plain)),),
        annotation_uses=(AnnotationUse("A", "C#method:C"),),
    )
    assert violated(ir, model) == []
    moved = ProgramModel(
        classifiers=model.classifiers,
        annotation_uses=(AnnotationUse("A", "C#method:m"),),
    )
    assert violated(ir, moved) == ["require_constructor"]


def test_member_pool_for_method_includes_constructors():
    # A member statement written as "method" ranges over the whole
    # methods collection, constructors included.
    ir = compiled("package p; annotation A { at class: forbid final method; }")
    ctor = Method("C", owner="C", is_final=True, is_constructor=True)
    model = one_class(methods=(ctor,))
    assert violated(ir, model) == ["at_class__forbid_final_method"]

    ir = compiled("package p; annotation A { at class: require constructor; }")
    model = one_class(methods=(Method("m", owner="C"),))
    assert violated(ir, model) == ["at_class__require_constructor"]


def test_scope_gates_pass_unrelated_placements():
    ir = compiled("package p; annotation A { at interface: require public method; }")
    # The use sits on a class, so the interface-scoped predicate is moot.
    assert violated(ir, one_class()) == []


def test_abstract_demand_never_holds_on_fields():
    ir = compiled("package p; annotation A { require abstract method; }")
    model = ProgramModel(
        classifiers=(Classifier("C", fields=(Field("f", owner="C"),)),),
        annotation_uses=(AnnotationUse("A", "C#field:f"),),
    )
    assert violated(ir, model) == ["require_abstract_method"]


def test_typeless_disjunct_in_member_require_checks_the_classifier():
    # In a mixed member disjunction, the bare reference tests the
    # classifier's own annotations rather than any member's.
    ir = compiled(
        "package p;\n"
        "annotation A { at class: require @B or public method; }\n"
        "annotation B { }\n"
    )
    with_b = one_class(uses=(AnnotationUse("A", "C"), AnnotationUse("B", "C")))
    assert violated(ir, with_b) == []
    with_method = one_class(methods=(Method("m", owner="C", visibility=PUB),))
    assert violated(ir, with_method) == []
    with_neither = one_class()
    assert violated(ir, with_neither) == ["at_class__require_annB_or_public_method"]


def test_dangling_owner_fails_positive_owner_conditions():
    # A method whose owner string names no classifier in the model
    # cannot satisfy a positive owner demand, but does satisfy a
    # negative one.
    orphan = Method("m", owner="Ghost")
    model = ProgramModel(
        classifiers=(Classifier("C", methods=(orphan,)),),
        annotation_uses=(AnnotationUse("A", "C#method:m"),),
    )
    ir = compiled("package p; annotation A { at method: require class; }")
    assert violated(ir, model) == ["at_method__require_class"]
    ir = compiled("package p; annotation A { at method: forbid final class; }")
    assert violated(ir, model) == []


def test_unknown_annotation_uses_are_skipped_and_reported():
    ir = compiled("package p; annotation A { require class; }")
    model = one_class(uses=(AnnotationUse("A", "C"), AnnotationUse("Zed", "C")))
    assert violated(ir, model) == []
    assert unknown_annotations(ir, model) == ["Zed"]


def test_unresolvable_targets_are_skipped():
    ir = compiled("package p; annotation A { require class; }")
    model = one_class(uses=(AnnotationUse("A", "Nowhere"),))
    assert evaluate(ir, model) == []


# ── Fixture-set structure ────────────────────────────────────────


def test_person_set_structure(person_ir):
    (person,) = person_ir.annotations
    assert person.name == "Person"
    assert [a.name for a in person.definition.attributes] == ["name", "age", "weight"]
    assert [p.name for p in person.predicates] == [
        "require_public_class",
        "at_class__forbid_final_field",
    ]
    assert person.allowed_targets == frozenset({TargetType.CLASS})
    assert person.exactly_one_target


def test_jpa_set_structure(jpa_ir):
    by_name = {ann.name: ann for ann in jpa_ir.annotations}
    assert set(by_name) == {"Entity", "Embeddable", "EmbeddedId", "Id", "IdClass"}
    counts = {
        name: (len(ann.definition.attributes), len(ann.predicates))
        for name, ann in by_name.items()
    }
    assert counts == {
        "Entity": (1, 7),
        "Embeddable": (0, 5),
        "EmbeddedId": (0, 3),
        "Id": (0, 3),
        "IdClass": (1, 1),
    }


# ── Dual-route agreement ─────────────────────────────────────────
#
# The compiled predicates and the AST-level interpreter in
# tests/oracles.py were written against the same semantics by
# different routes. On every fixture model and a sample of witness
# mutations they must report identical violation sets, matched up by
# constraint position.


def _pred_route(ir, model):
    out = set()
    for v in evaluate(ir, model):
        ann = ir.annotation(v.ann_name)
        index = [p.name for p in ann.predicates].index(v.predicate_name)
        out.add((v.target_path, v.ann_name, index))
    return out


def _ast_route(file, model):
    return set(ast_violations(model, file.annotations))


@pytest.mark.parametrize("model_name", sorted(p.name for p in MODELS.glob("*.json")))
def test_routes_agree_on_fixture_models(model_name, jpa_file, jpa_ir, person_file, person_ir):
    model = loads((MODELS / model_name).read_text())
    for file, ir in ((jpa_file, jpa_ir), (person_file, person_ir)):
        assert _pred_route(ir, model) == _ast_route(file, model), model_name


def test_routes_agree_on_witness_mutations(jpa_file, jpa_ir):
    base = jpa_witness()
    assert _pred_route(jpa_ir, base) == _ast_route(jpa_file, base) == set()
    for mutation in JPA_MUTATIONS[::5]:
        model = mutation.apply(base)
        assert _pred_route(jpa_ir, model) == _ast_route(jpa_file, model), mutation.name
