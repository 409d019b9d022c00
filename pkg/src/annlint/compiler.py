"""Lowering of annotation constraints into an evaluable form.

Each constraint of an annotation becomes exactly one predicate over
program models. Requires OR their statements, forbids AND them, and the
predicates of one annotation AND together. Predicate names follow the
OCL invariant naming convention (``at_class__forbid_final_method``) so
generated artifacts and checker output agree.

Target-kind classification is disjoint here: an annotation use sits on
a class, interface, annotation, enum, method, field or constructor, and
a constructor never counts as a plain method target. Member statements
inside an ``at`` scope instead range over all methods of the classifier
(constructors included) unless they say ``constructor``, mirroring how
the OCL templates navigate the ``methods`` role.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Union

from .ast_nodes import (
    CONTAINED_TYPES,
    CONTAINER_TYPES,
    AnnotationDef,
    AnnSourceFile,
    ConstraintDef,
    ConstraintKind,
    Modifiers,
    Retention,
    Statement,
    TargetType,
    Visibility,
)
from .diagnostics import Diagnostic, Severity
from .model import (
    Classifier,
    ClassifierKind,
    Element,
    Field,
    KIND_TO_TARGET,
    Method,
    ProgramModel,
    path_of,
    resolve,
)

ALL_TARGET_TYPES: tuple[TargetType, ...] = tuple(TargetType)


# ── IR types ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class ModifierTest:
    """Modifier demands of one statement; None means "don't care"."""

    visibility: Visibility | None = None
    is_abstract: bool | None = None
    is_static: bool | None = None
    is_final: bool | None = None

    def matches(self, element: Element) -> bool:
        if self.visibility is not None and element.visibility is not self.visibility:
            return False
        if self.is_abstract is not None:
            # Fields are never abstract; demanding it can never hold.
            actual = getattr(element, "is_abstract", False)
            if actual != self.is_abstract:
                return False
        if self.is_static is not None and element.is_static != self.is_static:
            return False
        if self.is_final is not None and element.is_final != self.is_final:
            return False
        return True

    def is_trivial(self) -> bool:
        return (
            self.visibility is None
            and self.is_abstract is None
            and self.is_static is None
            and self.is_final is None
        )


@dataclass(frozen=True)
class StatementTest:
    """One compiled statement: optional kind test, modifiers, co-annotation."""

    target_type: TargetType | None
    test: ModifierTest
    co_ann: str | None


def _use_kind(element: Element) -> TargetType:
    if isinstance(element, Classifier):
        return KIND_TO_TARGET[element.kind]
    if isinstance(element, Method):
        return TargetType.CONSTRUCTOR if element.is_constructor else TargetType.METHOD
    return TargetType.FIELD


def _element_matches(atom: StatementTest, element: Element, model: ProgramModel) -> bool:
    """Does this very element satisfy the atom (kind, modifiers, co-ann)?"""
    if atom.target_type is not None and _use_kind(element) is not atom.target_type:
        return False
    if not atom.test.matches(element):
        return False
    if atom.co_ann is not None and not model.has_use(atom.co_ann, path_of(element)):
        return False
    return True


def _members_for(cls: Classifier, member_type: TargetType) -> Iterable[Element]:
    """Members a scoped statement of the given type ranges over.

    ``method`` follows the OCL ``methods`` role and so includes
    constructors; ``constructor`` narrows to them.
    """
    if member_type is TargetType.METHOD:
        return cls.methods
    if member_type is TargetType.CONSTRUCTOR:
        return (m for m in cls.methods if m.is_constructor)
    if member_type is TargetType.FIELD:
        return cls.fields
    return ()


def _member_matches(atom: StatementTest, member: Element, model: ProgramModel) -> bool:
    if atom.co_ann is not None and not model.has_use(atom.co_ann, path_of(member)):
        return False
    return atom.test.matches(member)


@dataclass(frozen=True)
class PredicateBase:
    name: str
    ann_name: str
    description: str = dc_field(compare=False)
    origin: ConstraintDef = dc_field(compare=False)


@dataclass(frozen=True)
class TargetCondition(PredicateBase):
    """Unscoped require: the annotated element matches some disjunct."""

    disjuncts: tuple[StatementTest, ...] = ()

    def holds(self, model: ProgramModel, element: Element) -> bool:
        return any(_element_matches(d, element, model) for d in self.disjuncts)


@dataclass(frozen=True)
class ForbiddenTargetCondition(PredicateBase):
    """Unscoped forbid: violated when the element matches every conjunct."""

    conjuncts: tuple[StatementTest, ...] = ()

    def holds(self, model: ProgramModel, element: Element) -> bool:
        return not all(_element_matches(c, element, model) for c in self.conjuncts)


@dataclass(frozen=True)
class SameElementCoOccurrence(PredicateBase):
    """A bare ``@A`` statement: the same element carries (or not) @A."""

    co_ann: str = ""
    positive: bool = True
    scope: TargetType | None = None

    def holds(self, model: ProgramModel, element: Element) -> bool:
        if self.scope is not None and _use_kind(element) is not self.scope:
            return True
        present = model.has_use(self.co_ann, path_of(element))
        return present if self.positive else not present


@dataclass(frozen=True)
class MemberExists(PredicateBase):
    """Container-scoped require: some member satisfies some disjunct."""

    scope: TargetType = TargetType.CLASS
    disjuncts: tuple[StatementTest, ...] = ()

    def holds(self, model: ProgramModel, element: Element) -> bool:
        if not isinstance(element, Classifier) or _use_kind(element) is not self.scope:
            return True
        for atom in self.disjuncts:
            if atom.target_type is None:
                if atom.co_ann is not None and model.has_use(atom.co_ann, element.name):
                    return True
                continue
            if any(
                _member_matches(atom, m, model)
                for m in _members_for(element, atom.target_type)
            ):
                return True
        return False


@dataclass(frozen=True)
class MemberForAll(PredicateBase):
    """Container-scoped ``require all``: every member of the stated kind fits."""

    scope: TargetType = TargetType.CLASS
    disjuncts: tuple[StatementTest, ...] = ()

    def holds(self, model: ProgramModel, element: Element) -> bool:
        if not isinstance(element, Classifier) or _use_kind(element) is not self.scope:
            return True
        for atom in self.disjuncts:
            if atom.target_type is None:
                if atom.co_ann is not None and model.has_use(atom.co_ann, element.name):
                    return True
                continue
            if all(
                _member_matches(atom, m, model)
                for m in _members_for(element, atom.target_type)
            ):
                return True
        return False


@dataclass(frozen=True)
class MemberForbidden(PredicateBase):
    """Container-scoped forbid: violated only when every conjunct has a
    witnessing member (the witnesses may differ)."""

    scope: TargetType = TargetType.CLASS
    conjuncts: tuple[StatementTest, ...] = ()

    def holds(self, model: ProgramModel, element: Element) -> bool:
        if not isinstance(element, Classifier) or _use_kind(element) is not self.scope:
            return True
        for atom in self.conjuncts:
            if atom.target_type is None:
                if atom.co_ann is None or not model.has_use(atom.co_ann, element.name):
                    return True
                continue
            if not any(
                _member_matches(atom, m, model)
                for m in _members_for(element, atom.target_type)
            ):
                return True
        return False


@dataclass(frozen=True)
class OwnerCondition(PredicateBase):
    """Member-scoped constraint about the containing classifier."""

    scope: TargetType = TargetType.FIELD
    atoms: tuple[StatementTest, ...] = ()
    positive: bool = True

    def holds(self, model: ProgramModel, element: Element) -> bool:
        if isinstance(element, Classifier) or _use_kind(element) is not self.scope:
            return True
        owner = model.classifier(element.owner)
        if owner is None:
            return not self.positive
        if self.positive:
            return any(_element_matches(a, owner, model) for a in self.atoms)
        return not all(_element_matches(a, owner, model) for a in self.atoms)


Predicate = Union[
    TargetCondition,
    ForbiddenTargetCondition,
    SameElementCoOccurrence,
    MemberExists,
    MemberForAll,
    MemberForbidden,
    OwnerCondition,
]


@dataclass(frozen=True)
class AnnotationIR:
    name: str
    retention: Retention
    definition: AnnotationDef = dc_field(compare=False)
    explicit_targets: tuple[TargetType, ...] = ()
    predicates: tuple[Predicate, ...] = ()

    @property
    def allowed_targets(self) -> frozenset[TargetType]:
        if self.explicit_targets:
            return frozenset(self.explicit_targets)
        return frozenset(ALL_TARGET_TYPES)

    @property
    def exactly_one_target(self) -> bool:
        return len(self.explicit_targets) == 1


@dataclass(frozen=True)
class ConstraintIR:
    annotations: tuple[AnnotationIR, ...] = ()

    def annotation(self, name: str) -> AnnotationIR | None:
        for ann in self.annotations:
            if ann.name == name:
                return ann
        return None


@dataclass(frozen=True)
class Violation:
    ann_name: str
    predicate_name: str
    target_path: str
    description: str = dc_field(default="", compare=False)


# ── Naming ───────────────────────────────────────────────────────


def statement_descriptor(stmt: Statement) -> str:
    parts: list[str] = []
    if stmt.ann_ref is not None:
        parts.append(f"ann{stmt.ann_ref}")
    mods = stmt.modifiers
    if mods.visibility is not None:
        parts.append(mods.visibility.value)
    if mods.is_abstract:
        parts.append("abstract")
    if mods.is_static:
        parts.append("static")
    if mods.is_final:
        parts.append("final")
    if stmt.target_type is not None:
        parts.append(stmt.target_type.value)
    return "_".join(parts)


def constraint_name(constraint: ConstraintDef) -> str:
    prefix = ""
    if constraint.scope is not None:
        prefix = f"at_{constraint.scope.value}__"
    keyword = constraint.kind.value
    if constraint.all_quantifier:
        keyword += "_all"
    joiner = "_or_" if constraint.kind is ConstraintKind.REQUIRE else "_and_"
    body = joiner.join(statement_descriptor(s) for s in constraint.statements)
    return f"{prefix}{keyword}_{body}"


# ── Descriptions ─────────────────────────────────────────────────


def _atom_phrase(stmt: Statement) -> str:
    words: list[str] = []
    mods = stmt.modifiers
    if mods.visibility is not None:
        words.append(mods.visibility.value)
    if mods.is_abstract:
        words.append("abstract")
    if mods.is_static:
        words.append("static")
    if mods.is_final:
        words.append("final")
    if stmt.target_type is not None:
        words.append(stmt.target_type.value)
    phrase = " ".join(words)
    if phrase:
        article = "an" if phrase[0] in "aeiou" else "a"
        phrase = f"{article} {phrase}"
    if stmt.ann_ref is not None:
        phrase = f"{phrase} carrying @{stmt.ann_ref}" if phrase else f"@{stmt.ann_ref} on the same element"
    return phrase


def _describe(constraint: ConstraintDef) -> str:
    phrases = [_atom_phrase(s) for s in constraint.statements]
    scope = constraint.scope
    if constraint.kind is ConstraintKind.REQUIRE:
        body = " or ".join(phrases)
        if scope is None:
            if len(constraint.statements) == 1 and constraint.statements[0].target_type is None:
                return f"the target must also carry @{constraint.statements[0].ann_ref}"
            return f"the target must be {body}"
        if scope in CONTAINED_TYPES:
            if all(s.target_type is None for s in constraint.statements):
                names = " or ".join(f"@{s.ann_ref}" for s in constraint.statements)
                return f"the {scope.value} must also carry {names}"
            return f"the {scope.value} must belong to {body}"
        if constraint.all_quantifier:
            kinds = " or ".join(
                f"every {s.target_type.value}" for s in constraint.statements
                if s.target_type is not None
            )
            demands = " or ".join(phrases)
            return f"{kinds} of the {scope.value} must be {demands}"
        if all(s.target_type is None for s in constraint.statements):
            names = " or ".join(f"@{s.ann_ref}" for s in constraint.statements)
            return f"the {scope.value} must also carry {names}"
        return f"the {scope.value} must have {body}"
    body = " and ".join(phrases)
    if scope is None:
        if len(constraint.statements) == 1 and constraint.statements[0].target_type is None:
            return f"the target must not carry @{constraint.statements[0].ann_ref}"
        return f"the target must not be {body}"
    if scope in CONTAINED_TYPES:
        if all(s.target_type is None for s in constraint.statements):
            names = " and ".join(f"@{s.ann_ref}" for s in constraint.statements)
            return f"the {scope.value} must not carry {names}"
        return f"the {scope.value} must not belong to {body}"
    if all(s.target_type is None for s in constraint.statements):
        names = " and ".join(f"@{s.ann_ref}" for s in constraint.statements)
        return f"the {scope.value} must not carry {names}"
    return f"the {scope.value} must not have {body}"


# ── Compilation ──────────────────────────────────────────────────


def compile_set(
    source: AnnSourceFile | Sequence[AnnSourceFile] | list[AnnotationDef],
) -> tuple[ConstraintIR, list[Diagnostic]]:
    """Lower an annotation set; diagnostics are warnings, never fatal."""
    annotations = _annotation_list(source)
    diagnostics: list[Diagnostic] = []
    compiled = tuple(_compile_annotation(ann, diagnostics) for ann in annotations)
    return ConstraintIR(compiled), diagnostics


def _annotation_list(source) -> list[AnnotationDef]:
    if isinstance(source, AnnSourceFile):
        return list(source.annotations)
    result: list[AnnotationDef] = []
    for item in source:
        if isinstance(item, AnnSourceFile):
            result.extend(item.annotations)
        else:
            result.append(item)
    return result


def _statement_atom(stmt: Statement) -> StatementTest:
    mods = stmt.modifiers
    return StatementTest(
        target_type=stmt.target_type,
        test=ModifierTest(
            visibility=mods.visibility,
            is_abstract=True if mods.is_abstract else None,
            is_static=True if mods.is_static else None,
            is_final=True if mods.is_final else None,
        ),
        co_ann=stmt.ann_ref,
    )


def explicit_target_list(ann: AnnotationDef) -> list[TargetType]:
    """Target types named by unscoped requires, in first-appearance order."""
    explicit: list[TargetType] = []
    for constraint in ann.constraints:
        if constraint.kind is ConstraintKind.REQUIRE and constraint.scope is None:
            for stmt in constraint.statements:
                if stmt.target_type is not None and stmt.target_type not in explicit:
                    explicit.append(stmt.target_type)
    return explicit


def _compile_annotation(ann: AnnotationDef, diagnostics: list[Diagnostic]) -> AnnotationIR:
    explicit = explicit_target_list(ann)
    allowed = frozenset(explicit) if explicit else frozenset(ALL_TARGET_TYPES)

    predicates: list[Predicate] = []
    names_used: dict[str, int] = {}
    for constraint in ann.constraints:
        if constraint.scope is not None and constraint.scope not in allowed:
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "compile/dead-scope",
                    f"constraint scoped to {constraint.scope.value} can never apply: "
                    f"@{ann.name} is not allowed on that target",
                    constraint.location,
                )
            )
        if constraint.scope is TargetType.ENUM:
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "compile/enum-scope",
                    "an 'at enum:' scope is treated like a class scope over "
                    "the enum's members",
                    constraint.location,
                )
            )
        base_name = constraint_name(constraint)
        count = names_used.get(base_name, 0)
        names_used[base_name] = count + 1
        name = base_name if count == 0 else f"{base_name}_{count + 1}"
        predicates.append(_compile_constraint(ann.name, name, constraint))

    return AnnotationIR(
        name=ann.name,
        retention=ann.retention,
        definition=ann,
        explicit_targets=tuple(explicit),
        predicates=tuple(predicates),
    )


def _compile_constraint(ann_name: str, name: str, constraint: ConstraintDef) -> Predicate:
    atoms = tuple(_statement_atom(s) for s in constraint.statements)
    description = _describe(constraint)
    common = dict(name=name, ann_name=ann_name, description=description, origin=constraint)
    scope = constraint.scope
    require = constraint.kind is ConstraintKind.REQUIRE

    only_bare = len(atoms) == 1 and atoms[0].target_type is None and atoms[0].test.is_trivial()
    if only_bare:
        return SameElementCoOccurrence(
            co_ann=atoms[0].co_ann or "",
            positive=require,
            scope=scope,
            **common,
        )
    if scope is None:
        if require:
            return TargetCondition(disjuncts=atoms, **common)
        return ForbiddenTargetCondition(conjuncts=atoms, **common)
    if scope in CONTAINED_TYPES:
        return OwnerCondition(scope=scope, atoms=atoms, positive=require, **common)
    if require and constraint.all_quantifier:
        return MemberForAll(scope=scope, disjuncts=atoms, **common)
    if require:
        return MemberExists(scope=scope, disjuncts=atoms, **common)
    return MemberForbidden(scope=scope, conjuncts=atoms, **common)


# ── Evaluation ───────────────────────────────────────────────────


def evaluate(ir: ConstraintIR, model: ProgramModel) -> list[Violation]:
    """All (use, predicate) failures in the model; empty means satisfied."""
    violations: list[Violation] = []
    for use in model.annotation_uses:
        ann = ir.annotation(use.ann_name)
        if ann is None:
            continue
        element = resolve(model, use.target)
        if element is None:
            continue
        for predicate in ann.predicates:
            if not predicate.holds(model, element):
                violations.append(
                    Violation(
                        ann_name=ann.name,
                        predicate_name=predicate.name,
                        target_path=use.target,
                        description=predicate.description,
                    )
                )
    return violations


def unknown_annotations(ir: ConstraintIR, model: ProgramModel) -> list[str]:
    """Names used in the model that the compiled set does not define."""
    known = {ann.name for ann in ir.annotations}
    seen: list[str] = []
    for use in model.annotation_uses:
        if use.ann_name not in known and use.ann_name not in seen:
            seen.append(use.ann_name)
    return seen
