"""Shared helpers for the test suite.

Two things live here because several test modules want them: a grammar
production tracker built on the parser's own instrumentation, and a
catalogue of single-predicate mutations of the hand-built JPA witness
model. Each mutation is a small edit whose only observable effect is
that exactly one named predicate of exactly one annotation starts to
fail; the checker tests and the acceptance suite both replay the whole
catalogue and demand a single diagnostic naming that predicate.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, NamedTuple

from annlint.lexer import tokenize
from annlint.model import (
    AnnotationUse,
    Classifier,
    ClassifierKind,
    Field,
    Method,
    ProgramModel,
    Visibility,
)
from annlint.parser import Parser


def productions_of(source: str) -> set[str]:
    """Grammar productions exercised while parsing ``source``."""
    tokens, _ = tokenize(source)
    parser = Parser(tokens)
    parser.parse_file()
    return set(parser.productions_seen)


# ── JPA witness model ────────────────────────────────────────────────
#
# C1 is an empty public class carrying @Embeddable. C2 is a public
# class carrying @Entity and @IdClass, with a public constructor, a
# public method m1 carrying @EmbeddedId and a public field f1 carrying
# @Id. Every predicate of the five JPA annotations holds on it.

PUB = Visibility.PUBLIC


def jpa_witness() -> ProgramModel:
    c1 = Classifier("C1", kind=ClassifierKind.CLASS, visibility=PUB)
    c2 = Classifier(
        "C2",
        kind=ClassifierKind.CLASS,
        visibility=PUB,
        methods=(
            Method("C2", owner="C2", visibility=PUB, is_constructor=True),
            Method("m1", owner="C2", visibility=PUB),
        ),
        fields=(Field("f1", owner="C2", visibility=PUB),),
    )
    return ProgramModel(
        classifiers=(c1, c2),
        annotation_uses=(
            AnnotationUse("Embeddable", "C1"),
            AnnotationUse("Entity", "C2"),
            AnnotationUse("IdClass", "C2"),
            AnnotationUse("EmbeddedId", "C2#method:m1"),
            AnnotationUse("Id", "C2#field:f1"),
        ),
    )


# ── mutation plumbing ────────────────────────────────────────────────

Mutator = Callable[[ProgramModel], ProgramModel]


class Mutation(NamedTuple):
    name: str
    apply: Mutator
    ann_name: str
    predicate_name: str


def _patch_classifier(model: ProgramModel, name: str, **changes) -> ProgramModel:
    return replace(
        model,
        classifiers=tuple(
            replace(c, **changes) if c.name == name else c for c in model.classifiers
        ),
    )


def _patch_method(
    model: ProgramModel, cls_name: str, method_name: str, **changes
) -> ProgramModel:
    def fix(c: Classifier) -> Classifier:
        if c.name != cls_name:
            return c
        return replace(
            c,
            methods=tuple(
                replace(m, **changes) if m.name == method_name else m for m in c.methods
            ),
        )

    return replace(model, classifiers=tuple(fix(c) for c in model.classifiers))


def _drop_method(model: ProgramModel, cls_name: str, method_name: str) -> ProgramModel:
    def fix(c: Classifier) -> Classifier:
        if c.name != cls_name:
            return c
        return replace(c, methods=tuple(m for m in c.methods if m.name != method_name))

    return replace(model, classifiers=tuple(fix(c) for c in model.classifiers))


def _move_use(model: ProgramModel, ann: str, target: str) -> ProgramModel:
    return replace(
        model,
        annotation_uses=tuple(
            replace(u, target=target) if u.ann_name == ann else u
            for u in model.annotation_uses
        ),
    )


def _add_use(model: ProgramModel, ann: str, target: str) -> ProgramModel:
    return replace(
        model, annotation_uses=model.annotation_uses + (AnnotationUse(ann, target),)
    )


def _drop_uses(model: ProgramModel, *anns: str) -> ProgramModel:
    return replace(
        model,
        annotation_uses=tuple(
            u for u in model.annotation_uses if u.ann_name not in anns
        ),
    )


def _with_third_classifier(model: ProgramModel, kind: ClassifierKind, member: str) -> ProgramModel:
    if member == "method":
        c3 = Classifier(
            "C3",
            kind=kind,
            visibility=PUB,
            methods=(Method("mx", owner="C3", visibility=PUB),),
        )
    else:
        c3 = Classifier(
            "C3",
            kind=kind,
            visibility=PUB,
            fields=(Field("fx", owner="C3", visibility=PUB),),
        )
    return replace(model, classifiers=model.classifiers + (c3,))


def _orphaned(
    model: ProgramModel, kind: ClassifierKind, member: str, ann: str, how: str
) -> ProgramModel:
    """Put ``ann`` on a member of a fresh classifier that lacks @Entity."""
    model = _with_third_classifier(model, kind, member)
    path = "C3#method:mx" if member == "method" else "C3#field:fx"
    return (_move_use if how == "move" else _add_use)(model, ann, path)


# ── the catalogue ────────────────────────────────────────────────────

_PK_MEMBER_REQUIRE = (
    "at_class__require_annId_method_or_annId_field"
    "_or_annEmbeddedId_method_or_annEmbeddedId_field"
)
_CTOR_REQUIRE = "at_class__require_public_constructor_or_protected_constructor"


def _build_catalogue() -> list[Mutation]:
    muts: list[Mutation] = []

    def mut(name: str, apply: Mutator, ann: str, predicate: str) -> None:
        muts.append(Mutation(name, apply, ann, predicate))

    # Modifier edits seen by Entity's class- and member-level tests.
    mut("entity_class_final", lambda m: _patch_classifier(m, "C2", is_final=True),
        "Entity", "forbid_final_class")
    mut("ctor_package", lambda m: _patch_method(m, "C2", "C2", visibility=Visibility.PACKAGE),
        "Entity", _CTOR_REQUIRE)
    mut("ctor_private", lambda m: _patch_method(m, "C2", "C2", visibility=Visibility.PRIVATE),
        "Entity", _CTOR_REQUIRE)
    mut("ctor_removed", lambda m: _drop_method(m, "C2", "C2"),
        "Entity", _CTOR_REQUIRE)
    mut("method_final", lambda m: _patch_method(m, "C2", "m1", is_final=True),
        "Entity", "at_class__forbid_final_method")
    mut("ctor_final", lambda m: _patch_method(m, "C2", "C2", is_final=True),
        "Entity", "at_class__forbid_final_method")

    # Doubling up the primary-key markers trips the mutual-exclusion
    # pairs; removing both trips the existence requirement.
    mut("id_joins_embeddedid_on_method", lambda m: _add_use(m, "Id", "C2#method:m1"),
        "Entity", "at_class__forbid_annId_method_and_annEmbeddedId_method")
    mut("embeddedid_joins_id_on_field", lambda m: _add_use(m, "EmbeddedId", "C2#field:f1"),
        "Entity", "at_class__forbid_annId_field_and_annEmbeddedId_field")
    mut("no_pk_markers_at_all", lambda m: _drop_uses(m, "Id", "EmbeddedId"),
        "Entity", _PK_MEMBER_REQUIRE)

    # @Embeddable only tolerates classifiers of class kind.
    for label, path in (
        ("method", "C2#method:m1"),
        ("field", "C2#field:f1"),
        ("ctor", "C2#method:C2"),
    ):
        mut(f"embeddable_moved_to_{label}",
            lambda m, p=path: _move_use(m, "Embeddable", p),
            "Embeddable", "require_class")
        mut(f"embeddable_added_on_{label}",
            lambda m, p=path: _add_use(m, "Embeddable", p),
            "Embeddable", "require_class")
    for kind in (ClassifierKind.INTERFACE, ClassifierKind.ENUM, ClassifierKind.ANNOTATION):
        mut(f"embeddable_host_becomes_{kind.value}",
            lambda m, k=kind: _patch_classifier(m, "C1", kind=k),
            "Embeddable", "require_class")

    # @Entity on anything but a classifier of class kind. The original
    # class-level use stays put so the owner conditions of @Id and
    # @EmbeddedId keep holding.
    for label, path in (
        ("m1", "C2#method:m1"),
        ("f1", "C2#field:f1"),
        ("ctor", "C2#method:C2"),
    ):
        mut(f"entity_added_on_{label}",
            lambda m, p=path: _add_use(m, "Entity", p),
            "Entity", "require_class")

    # Member-only markers dropped onto classifiers.
    for ann in ("Id", "EmbeddedId"):
        for cls in ("C1", "C2"):
            mut(f"{ann.lower()}_moved_to_{cls}",
                lambda m, a=ann, c=cls: _move_use(m, a, c),
                ann, "require_method_or_field")
            mut(f"{ann.lower()}_added_on_{cls}",
                lambda m, a=ann, c=cls: _add_use(m, a, c),
                ann, "require_method_or_field")

    # Primary-key markers on members of a classifier with no @Entity.
    for ann in ("Id", "EmbeddedId"):
        for kind in (ClassifierKind.CLASS, ClassifierKind.INTERFACE):
            for member in ("method", "field"):
                expected = f"at_{member}__require_annEntity_class"
                for how in ("move", "add"):
                    mut(
                        f"{ann.lower()}_{how}d_to_{kind.value}_{member}_without_entity",
                        lambda m, a=ann, k=kind, mem=member, h=how: _orphaned(m, k, mem, a, h),
                        ann, expected,
                    )

    # @IdClass away from its entity.
    for label, path in (
        ("c1", "C1"),
        ("m1", "C2#method:m1"),
        ("f1", "C2#field:f1"),
        ("ctor", "C2#method:C2"),
    ):
        mut(f"idclass_moved_to_{label}",
            lambda m, p=path: _move_use(m, "IdClass", p),
            "IdClass", "require_annEntity_class")
        mut(f"idclass_added_on_{label}",
            lambda m, p=path: _add_use(m, "IdClass", p),
            "IdClass", "require_annEntity_class")

    return muts


JPA_MUTATIONS = _build_catalogue()
