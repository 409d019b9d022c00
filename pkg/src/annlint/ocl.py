"""Render a compiled annotation set as a USE model with OCL invariants.

The output is an interop and documentation artifact: a fixed textual
meta-model of the simplified Java world, one class per annotation with
one invariant per compiled predicate, and one association per declared
target type. Plain target requirements are carried entirely by the
association cardinalities, so they produce no invariant of their own.
The text is a pure function of the input and therefore byte-stable.
"""

from __future__ import annotations

from .ast_nodes import AttrKind, ConstraintKind, TargetType
from .compiler import (
    AnnotationIR,
    ConstraintIR,
    ForbiddenTargetCondition,
    MemberExists,
    MemberForAll,
    MemberForbidden,
    ModifierTest,
    OwnerCondition,
    Predicate,
    SameElementCoOccurrence,
    StatementTest,
    TargetCondition,
    statement_descriptor,
)

_TRIVIAL_TEST = ModifierTest()

_USE_CLASS = {
    TargetType.CLASS: "JavaClass",
    TargetType.INTERFACE: "JavaInterface",
    TargetType.ANNOTATION: "JavaAnnotationType",
    TargetType.ENUM: "JavaEnum",
    TargetType.METHOD: "JavaMethod",
    TargetType.CONSTRUCTOR: "JavaMethod",
    TargetType.FIELD: "JavaField",
}

_ATTR_TYPES = {
    AttrKind.CLASS_REF: "JavaClass",
    AttrKind.STRING: "String",
    AttrKind.CHAR: "String",
    AttrKind.EXTERNAL: "String",
    AttrKind.BOOLEAN: "Boolean",
    AttrKind.INT: "Integer",
    AttrKind.BYTE: "Integer",
    AttrKind.SHORT: "Integer",
    AttrKind.LONG: "Integer",
    AttrKind.FLOAT: "Real",
    AttrKind.DOUBLE: "Real",
}

_BASE_MODEL = """model AnnotatedJava

-- Simplified Java meta-model shared by every generated annotation set.

enum VisibilityKind { public, protected, package, private }

abstract class JavaElement
attributes
	name : String
	visibility : VisibilityKind
	isStatic : Boolean
	isFinal : Boolean
end

abstract class JavaClassifier < JavaElement
attributes
	isAbstract : Boolean
end

class JavaClass < JavaClassifier
end

class JavaInterface < JavaClassifier
end

class JavaAnnotationType < JavaClassifier
end

class JavaEnum < JavaClassifier
end

class JavaMethod < JavaElement
attributes
	isAbstract : Boolean
	isConstructor : Boolean
end

class JavaField < JavaElement
end

class JavaAnnotation
end

association Classifier_methods between
	JavaClassifier [0..1] role owner
	JavaMethod [0..*] role methods
end

association Classifier_fields between
	JavaClassifier [0..1] role owner
	JavaField [0..*] role fields
end

association Annotation_target between
	JavaAnnotation [0..*] role annotations
	JavaElement [0..1] role target
end
"""


def _cap(target_type: TargetType) -> str:
    return target_type.value.capitalize()


class _AnnView:
    """Name helpers for one annotation's roles and guards."""

    def __init__(self, ann: AnnotationIR) -> None:
        self.ann = ann
        self.explicit = tuple(ann.explicit_targets)

    def role(self, target_type: TargetType) -> str | None:
        if target_type in self.explicit:
            return f"target{self.ann.name}{_cap(target_type)}"
        return None

    def target_expr(self, target_type: TargetType | None) -> str:
        if target_type is not None:
            role = self.role(target_type)
            if role is not None:
                return f"self.{role}"
        return "self.target"

    def guard(self, target_type: TargetType | None) -> str:
        expr = self.target_expr(target_type)
        if expr == "self.target" and target_type is not None:
            kind = _USE_CLASS[target_type]
            return f"self.target->notEmpty() and self.target.oclIsKindOf({kind})"
        return f"{expr}->notEmpty()"

    def element_expr(self, target_type: TargetType | None) -> str:
        expr = self.target_expr(target_type)
        if expr == "self.target" and target_type is not None:
            return f"self.target.oclAsType({_USE_CLASS[target_type]})"
        return expr


def _mod_conditions(expr: str, atom: StatementTest) -> list[str]:
    test = atom.test
    out = []
    if test.visibility is not None:
        out.append(f"{expr}.visibility = #{test.visibility.value}")
    if test.is_abstract is not None:
        out.append(f"{expr}.isAbstract = {str(test.is_abstract).lower()}")
    if test.is_static is not None:
        out.append(f"{expr}.isStatic = {str(test.is_static).lower()}")
    if test.is_final is not None:
        out.append(f"{expr}.isFinal = {str(test.is_final).lower()}")
    return out


def _co_condition(expr: str, atom: StatementTest) -> list[str]:
    if atom.co_ann is None:
        return []
    return [f"{expr}.annotations{atom.co_ann}->notEmpty()"]


def _element_clause(view: _AnnView, atom: StatementTest) -> str:
    """Condition on the annotated element itself for one statement."""
    if atom.target_type is None:
        parts = _co_condition("self.target", atom) + _mod_conditions("self.target", atom)
        return " and ".join(parts) if parts else "true"
    expr = view.element_expr(atom.target_type)
    parts = _co_condition(expr, atom) + _mod_conditions(expr, atom)
    if not parts:
        # A pure type test: the element sits at this role at all.
        return f"{view.target_expr(atom.target_type)}->notEmpty()"
    return " and ".join(parts)


def _member_clause(view: _AnnView, scope: TargetType, atom: StatementTest, exists: bool) -> str:
    container = view.element_expr(scope)
    if atom.target_type is None:
        parts = _co_condition(container, atom) + _mod_conditions(container, atom)
        return " and ".join(parts) if parts else "true"
    collection = "fields" if atom.target_type is TargetType.FIELD else "methods"
    conds = []
    if atom.target_type is TargetType.CONSTRUCTOR:
        conds.append("e.isConstructor = true")
    conds += _co_condition("e", atom) + _mod_conditions("e", atom)
    body = " and ".join(conds) if conds else "true"
    if exists:
        return f"{container}.{collection}->exists(e | {body})"
    if atom.target_type is TargetType.CONSTRUCTOR:
        gated = " and ".join(conds[1:]) if len(conds) > 1 else "true"
        return f"{container}.{collection}->forAll(e | e.isConstructor = true implies ({gated}))"
    return f"{container}.{collection}->forAll(e | {body})"


def _owner_clause(
    view: _AnnView, scope: TargetType, atom: StatementTest, others: dict[str, _AnnView]
) -> str:
    owner = f"{view.element_expr(scope)}.owner"
    mods = _mod_conditions(owner, atom)
    if atom.co_ann is not None:
        other = others.get(atom.co_ann)
        role = other.role(atom.target_type) if other and atom.target_type else None
        if role is not None:
            body = f"e.{role} = {owner}"
        else:
            body = f"e.target = {owner}"
        if mods:
            body += " and " + " and ".join(mods)
        return f"{atom.co_ann}.allInstances()->exists(e | {body})"
    conds = []
    if atom.target_type is not None:
        conds.append(f"{owner}.oclIsKindOf({_USE_CLASS[atom.target_type]})")
    conds += mods
    return " and ".join(conds) if conds else "true"


def _wrap(clauses: list[str], joiner: str) -> str:
    if len(clauses) == 1:
        return f"({clauses[0]})"
    return "(\n\t\t\t" + f" {joiner}\n\t\t\t".join(f"({c})" for c in clauses) + "\n\t\t)"


def _invariant_body(pred: Predicate, view: _AnnView, others: dict[str, _AnnView]) -> str | None:
    if isinstance(pred, TargetCondition):
        nontrivial = [
            a for a in pred.disjuncts if not a.test.is_trivial() or a.co_ann is not None
        ]
        if not nontrivial:
            # Pure target lists are carried by the association cardinalities.
            return None
        if len(view.explicit) <= 1:
            clauses = [_element_clause(view, a) for a in pred.disjuncts]
            return _wrap(clauses, "or")
        clauses = []
        for atom in pred.disjuncts:
            cond = _element_clause(view, atom)
            if atom.target_type is not None:
                clauses.append(f"{view.guard(atom.target_type)} implies ({cond})")
            else:
                clauses.append(cond)
        return _wrap(clauses, "and")

    if isinstance(pred, ForbiddenTargetCondition):
        clauses = []
        for atom in pred.conjuncts:
            parts = []
            if atom.target_type is not None and len(view.explicit) != 1:
                parts.append(view.guard(atom.target_type))
            clause = _element_clause(view, atom)
            if clause != "true" or not parts:
                parts.append(clause)
            clauses.append(" and ".join(parts))
        return "not " + _wrap(clauses, "and")

    if isinstance(pred, SameElementCoOccurrence):
        atom = StatementTest(target_type=None, test=_TRIVIAL_TEST, co_ann=pred.co_ann)
        if pred.scope is not None:
            cond = _element_clause(view, replace_type(atom, pred.scope))
            polarity = "" if pred.positive else "not "
            return f"{view.guard(pred.scope)} implies {polarity}({cond})"
        if len(view.explicit) > 1:
            clauses = []
            for target_type in view.explicit:
                cond = _element_clause(view, replace_type(atom, target_type))
                if not pred.positive:
                    cond = f"not ({cond})"
                clauses.append(f"{view.guard(target_type)} implies ({cond})")
            return _wrap(clauses, "and")
        target_type = view.explicit[0] if view.explicit else None
        cond = _element_clause(view, replace_type(atom, target_type))
        return f"({cond})" if pred.positive else f"not ({cond})"

    if isinstance(pred, MemberExists):
        clauses = [_member_clause(view, pred.scope, a, exists=True) for a in pred.disjuncts]
        return f"{view.guard(pred.scope)} implies " + _wrap(clauses, "or")

    if isinstance(pred, MemberForAll):
        clauses = [_member_clause(view, pred.scope, a, exists=False) for a in pred.disjuncts]
        return f"{view.guard(pred.scope)} implies " + _wrap(clauses, "or")

    if isinstance(pred, MemberForbidden):
        clauses = [_member_clause(view, pred.scope, a, exists=True) for a in pred.conjuncts]
        return f"{view.guard(pred.scope)} implies not " + _wrap(clauses, "and")

    if isinstance(pred, OwnerCondition):
        clauses = [_owner_clause(view, pred.scope, a, others) for a in pred.atoms]
        if pred.positive:
            return f"{view.guard(pred.scope)} implies " + _wrap(clauses, "or")
        return f"{view.guard(pred.scope)} implies not " + _wrap(clauses, "and")

    return None


def replace_type(atom: StatementTest, target_type: TargetType | None) -> StatementTest:
    return StatementTest(target_type=target_type, test=atom.test, co_ann=atom.co_ann)


def _annotation_class(ann: AnnotationIR, views: dict[str, _AnnView]) -> str:
    view = views[ann.name]
    lines = [f"class {ann.name} < JavaAnnotation"]
    attrs = ann.definition.attributes
    if attrs:
        lines.append("attributes")
        for attr in attrs:
            base = _ATTR_TYPES[attr.kind]
            rendered = f"Sequence({base})" if attr.is_array else base
            lines.append(f"\t{attr.name} : {rendered}")
    lines.append("constraints")
    lines.append("\tinv redefs: self.target.isUndefined()")
    for pred in ann.predicates:
        body = _invariant_body(pred, view, views)
        if body is None:
            continue
        lines.append(f"\tinv {pred.name}:")
        lines.append(f"\t\t{body}")
    if len(view.explicit) > 1:
        total = " + ".join(f"self.{view.role(t)}->size()" for t in view.explicit)
        lines.append("\tinv target_exactly_one:")
        lines.append(f"\t\t{total} = 1")
    lines.append("end")
    return "\n".join(lines)


def _target_descriptor(ann: AnnotationIR, target_type: TargetType) -> str:
    for constraint in ann.definition.constraints:
        if constraint.kind is not ConstraintKind.REQUIRE or constraint.scope is not None:
            continue
        for stmt in constraint.statements:
            if stmt.target_type is target_type:
                return statement_descriptor(stmt)
    return target_type.value


def _associations(ann: AnnotationIR, view: _AnnView) -> str:
    blocks = []
    cardinality = "[1..1]" if ann.exactly_one_target else "[0..1]"
    for target_type in view.explicit:
        descriptor = _target_descriptor(ann, target_type)
        blocks.append(
            "\n".join(
                [
                    f"association {ann.name}_target_{descriptor} between",
                    f"\t{_USE_CLASS[target_type]} {cardinality} role {view.role(target_type)}",
                    f"\t{ann.name} [0..*] role annotations{ann.name}",
                    "end",
                ]
            )
        )
    return "\n\n".join(blocks)


def emit_ocl(ir: ConstraintIR) -> str:
    views = {ann.name: _AnnView(ann) for ann in ir.annotations}
    parts = [_BASE_MODEL]
    for ann in ir.annotations:
        parts.append(_annotation_class(ann, views))
    for ann in ir.annotations:
        assoc = _associations(ann, views[ann.name])
        if assoc:
            parts.append(assoc)
    return "\n\n".join(parts) + "\n"
