"""Bounded search for a program model satisfying an annotation design.

The finder enumerates candidate models inside a :class:`Scope` in a
fixed canonical order: classifier count ascending, then member-count
skeletons, then annotation placements in declaration order, then
modifier assignments. Pruning uses three-valued evaluation of the
compiled predicates over partially assigned candidates plus an eager
consistency closure over "must co-occur with" obligations; every leaf
that survives is re-verified with the ordinary two-valued evaluator and
``well_formed``, so pruning can only affect speed, never acceptance.

A witness is therefore the canonically smallest satisfying model, and
two runs over the same input yield identical results. ``UnsatWithinScope``
means exactly that: no model exists inside the bounds, which include a
structural simplification worth knowing about — at most one constructor
per classifier, so member paths stay unique.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement
from typing import Iterable, Union

from .ast_nodes import TargetType, Visibility
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
    evaluate,
)
from .model import (
    AnnotationUse,
    Classifier,
    ClassifierKind,
    Field,
    KIND_TO_TARGET,
    Method,
    ProgramModel,
    TARGET_TO_KIND,
    resolve,
    well_formed,
)

_FLAG_DIMS = ("abstract", "static", "final")


@dataclass(frozen=True)
class Scope:
    """Bounds of the search space."""

    ann_min: int = 1
    ann_max: int = 2
    max_classifiers: int = 3
    max_methods: int = 3
    max_fields: int = 3
    allow_interfaces: bool = True
    allow_enums: bool = False
    allow_annotation_decls: bool = False
    enable_inheritance: bool = False
    coverage_exempt: frozenset[str] = frozenset()
    deadline_ms: int | None = None

    def validate(self) -> None:
        if self.ann_min < 1:
            raise ValueError("ann_min must be at least 1 (coverage keeps UNSAT meaningful)")
        if self.ann_max < self.ann_min:
            raise ValueError("ann_max must be >= ann_min")
        if min(self.max_classifiers, self.max_methods, self.max_fields) < 0:
            raise ValueError("scope maxima cannot be negative")


@dataclass(frozen=True)
class SearchStats:
    candidates: int = 0
    pruned: int = 0
    elapsed_ms: int = 0


@dataclass(frozen=True)
class Sat:
    witness: ProgramModel
    stats: SearchStats


@dataclass(frozen=True)
class UnsatWithinScope:
    stats: SearchStats


@dataclass(frozen=True)
class Timeout:
    stats: SearchStats


FinderResult = Union[Sat, UnsatWithinScope, Timeout]


class _DeadlineHit(Exception):
    pass


# ── Per-annotation placement domains ─────────────────────────────


@dataclass
class _AnnDomain:
    """What any single use of an annotation forces on its own element."""

    kinds: set[TargetType]
    visibilities: set[Visibility]
    flags: dict[str, set[bool]]
    needs: set[str] = dc_field(default_factory=set)
    excludes: set[str] = dc_field(default_factory=set)

    def merge(self, other: "_AnnDomain") -> bool:
        """Intersect with a co-required annotation's domain; True if changed."""
        changed = False
        for name, mine in (("kinds", self.kinds), ("visibilities", self.visibilities)):
            new = mine & getattr(other, name)
            if new != mine:
                setattr(self, name, new)
                changed = True
        for dim in _FLAG_DIMS:
            new = self.flags[dim] & other.flags[dim]
            if new != self.flags[dim]:
                self.flags[dim] = new
                changed = True
        for attr in ("needs", "excludes"):
            mine = getattr(self, attr)
            if not getattr(other, attr) <= mine:
                mine |= getattr(other, attr)
                changed = True
        return changed

    def empty(self) -> bool:
        return (
            not self.kinds
            or not self.visibilities
            or any(not s for s in self.flags.values())
            or bool(self.needs & self.excludes)
        )


def _fresh_domain() -> _AnnDomain:
    return _AnnDomain(
        kinds=set(TargetType),
        visibilities=set(Visibility),
        flags={dim: {False, True} for dim in _FLAG_DIMS},
    )


def _kind_domain(predicates: list[Predicate]) -> set[TargetType]:
    """Kinds a use could legally sit on, from the unscoped requires.

    Every require must hold at once, so the kind must be named by each;
    a typeless disjunct (a bare or modifier-only statement) matches any
    kind and lifts its constraint's restriction entirely.
    """
    kinds = set(TargetType)
    for pred in predicates:
        if isinstance(pred, TargetCondition):
            named = {d.target_type for d in pred.disjuncts}
            if None not in named:
                kinds &= named
    return kinds


def _domain_from_predicates(ann: AnnotationIR, predicates: list[Predicate]) -> _AnnDomain:
    dom = _fresh_domain()
    dom.kinds &= _kind_domain(predicates)
    for pred in predicates:
        if isinstance(pred, SameElementCoOccurrence) and pred.scope is None:
            (dom.needs if pred.positive else dom.excludes).add(pred.co_ann)
        elif isinstance(pred, TargetCondition) and len(pred.disjuncts) == 1:
            atom = pred.disjuncts[0]
            if atom.co_ann is not None:
                dom.needs.add(atom.co_ann)
            test = atom.test
            if test.visibility is not None:
                dom.visibilities &= {test.visibility}
            for dim in _FLAG_DIMS:
                want = getattr(test, f"is_{dim}")
                if want is not None:
                    dom.flags[dim] &= {want}
        elif isinstance(pred, TargetCondition) and pred.disjuncts:
            common = set.intersection(*({d.co_ann} for d in pred.disjuncts))
            common.discard(None)
            dom.needs |= common
        elif isinstance(pred, ForbiddenTargetCondition) and len(pred.conjuncts) == 1:
            atom = pred.conjuncts[0]
            applies_to_all = atom.target_type is None or dom.kinds <= {atom.target_type}
            if not applies_to_all or atom.co_ann is not None:
                continue
            test = atom.test
            stated = [
                ("visibility", test.visibility),
                *[(dim, getattr(test, f"is_{dim}")) for dim in _FLAG_DIMS],
            ]
            stated = [(dim, v) for dim, v in stated if v is not None]
            if len(stated) != 1:
                continue
            dim, value = stated[0]
            if dim == "visibility":
                dom.visibilities -= {value}
            else:
                dom.flags[dim] -= {value}
    if dom.kinds and dom.kinds <= set(TARGET_TO_KIND):
        # A use that can only sit on classifiers obeys the classifier
        # visibility rule of the meta-model.
        dom.visibilities &= {Visibility.PUBLIC, Visibility.PACKAGE}
    return dom


# ── Skeleton elements ────────────────────────────────────────────


@dataclass(frozen=True)
class _ElementInfo:
    category: str  # "classifier" | "method" | "constructor" | "field"
    use_kind: TargetType
    owner: int  # classifier element id (own id for classifiers)
    cls_kind: ClassifierKind | None = None
    label: str = ""


class _Search:
    def __init__(
        self,
        ir: ConstraintIR,
        scope: Scope,
        extra: list[Predicate] | None,
        prune: bool,
    ) -> None:
        self.ir = ir
        self.scope = scope
        self.prune = prune
        self.anns: list[AnnotationIR] = list(ir.annotations)
        self.preds: dict[str, list[Predicate]] = {
            ann.name: list(ann.predicates) for ann in self.anns
        }
        for pred in extra or []:
            if pred.ann_name in self.preds:
                self.preds[pred.ann_name].append(pred)
        self.known = set(self.preds)
        self.candidates = 0
        self.pruned = 0
        self.started = time.monotonic()
        self.deadline = (
            self.started + scope.deadline_ms / 1000.0
            if scope.deadline_ms is not None
            else None
        )
        self._collect_mentions()
        self.domains = self._closed_domains()

        # Per-skeleton state, rebuilt by _try_skeleton.
        self.elements: list[_ElementInfo] = []
        self.paths: list[str] = []
        self.supers: list[int | None] = []
        self.placements: dict[str, tuple[int, ...]] = {}
        self.vis: list[Visibility | None] = []
        self.flags: dict[str, list[bool | None]] = {}

    # ── Relevance of modifier values ─────────────────────────────

    def _collect_mentions(self) -> None:
        vis: set[Visibility] = set()
        flags: set[str] = set()
        for plist in self.preds.values():
            for pred in plist:
                for atom in _atoms_of(pred):
                    if atom.test.visibility is not None:
                        vis.add(atom.test.visibility)
                    for dim in _FLAG_DIMS:
                        if getattr(atom.test, f"is_{dim}") is not None:
                            flags.add(dim)
        self.mentioned_vis = vis
        self.mentioned_flags = flags
        ordered = [v for v in Visibility if v in vis]
        fresh = next((v for v in Visibility if v not in vis), None)
        if fresh is not None:
            ordered.append(fresh)
        self.member_vis_domain = [v for v in Visibility if v in ordered]
        cls_pool = {Visibility.PUBLIC, Visibility.PACKAGE}
        cls_vals = vis & cls_pool
        fresh_cls = next((v for v in (Visibility.PUBLIC, Visibility.PACKAGE) if v not in vis), None)
        if fresh_cls is not None:
            cls_vals = cls_vals | {fresh_cls}
        self.classifier_vis_domain = [v for v in Visibility if v in cls_vals]

    def _flag_domain(self, dim: str) -> tuple[bool, ...]:
        return (False, True) if dim in self.mentioned_flags else (False,)

    # ── Consistency closure over co-occurrence obligations ───────

    def _closed_domains(self) -> dict[str, _AnnDomain]:
        domains = {
            ann.name: _domain_from_predicates(ann, self.preds[ann.name])
            for ann in self.anns
        }
        changed = True
        while changed:
            changed = False
            for name, dom in domains.items():
                for other in list(dom.needs):
                    if other == name:
                        continue
                    if other not in domains:
                        # Required to co-occur with an annotation this set
                        # never defines: no use can ever satisfy that.
                        if dom.kinds:
                            dom.kinds = set()
                            changed = True
                        continue
                    if dom.merge(domains[other]):
                        changed = True
        return domains

    def unplaceable(self) -> list[str]:
        out = []
        for ann in self.anns:
            if ann.name in self.scope.coverage_exempt:
                continue
            dom = self.domains[ann.name]
            if dom.empty() or not (dom.kinds & self._generable_kinds()):
                out.append(ann.name)
        return out

    def _generable_kinds(self) -> set[TargetType]:
        kinds = {TargetType.CLASS}
        if self.scope.allow_interfaces:
            kinds.add(TargetType.INTERFACE)
        if self.scope.allow_enums:
            kinds.add(TargetType.ENUM)
        if self.scope.allow_annotation_decls:
            kinds.add(TargetType.ANNOTATION)
        if self.scope.max_methods > 0:
            kinds.add(TargetType.METHOD)
            kinds.add(TargetType.CONSTRUCTOR)
        if self.scope.max_fields > 0:
            kinds.add(TargetType.FIELD)
        return kinds

    # ── Skeleton enumeration ─────────────────────────────────────

    def _shapes(self) -> list[tuple[int, int, int, ClassifierKind]]:
        kinds = [ClassifierKind.CLASS]
        if self.scope.allow_interfaces:
            kinds.append(ClassifierKind.INTERFACE)
        if self.scope.allow_annotation_decls:
            kinds.append(ClassifierKind.ANNOTATION)
        if self.scope.allow_enums:
            kinds.append(ClassifierKind.ENUM)
        kind_index = {k: i for i, k in enumerate(ClassifierKind)}
        shapes = []
        for kind in kinds:
            max_f = 0 if kind is ClassifierKind.ANNOTATION else self.scope.max_fields
            can_ctor = kind in (ClassifierKind.CLASS, ClassifierKind.ENUM)
            for nm in range(self.scope.max_methods + 1):
                ctor_options = (0, 1) if can_ctor and nm >= 1 else (0,)
                for nc in ctor_options:
                    for nf in range(max_f + 1):
                        shapes.append((nm, nf, nc, kind))
        shapes.sort(key=lambda s: (s[0], s[1], s[2], kind_index[s[3]]))
        return shapes

    def run(self) -> FinderResult:
        if not self.anns:
            return Sat(ProgramModel(), self._stats())
        if self.prune:
            blocked = self.unplaceable()
            if blocked:
                self.pruned += 1
                return UnsatWithinScope(self._stats())
        shapes = self._shapes()
        try:
            for n in range(1, self.scope.max_classifiers + 1):
                for combo in combinations_with_replacement(shapes, n):
                    self._check_deadline()
                    witness = self._try_skeleton(combo)
                    if witness is not None:
                        return Sat(witness, self._stats())
        except _DeadlineHit:
            return Timeout(self._stats())
        return UnsatWithinScope(self._stats())

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _DeadlineHit

    def _stats(self) -> SearchStats:
        elapsed = int((time.monotonic() - self.started) * 1000)
        return SearchStats(self.candidates, self.pruned, elapsed)

    def _try_skeleton(self, combo) -> ProgramModel | None:
        self.elements = []
        self.paths = []
        for idx, (nm, nf, nc, kind) in enumerate(combo):
            cls_eid = len(self.elements)
            cls_name = f"C{idx + 1}"
            self.elements.append(
                _ElementInfo("classifier", KIND_TO_TARGET[kind], cls_eid, kind, cls_name)
            )
            self.paths.append(cls_name)
            for m in range(nm - nc):
                self.elements.append(
                    _ElementInfo("method", TargetType.METHOD, cls_eid, None, f"m{m + 1}")
                )
                self.paths.append(f"{cls_name}#method:m{m + 1}")
            for _ in range(nc):
                self.elements.append(
                    _ElementInfo("constructor", TargetType.CONSTRUCTOR, cls_eid, None, cls_name)
                )
                self.paths.append(f"{cls_name}#method:{cls_name}")
            for f in range(nf):
                self.elements.append(
                    _ElementInfo("field", TargetType.FIELD, cls_eid, None, f"f{f + 1}")
                )
                self.paths.append(f"{cls_name}#field:f{f + 1}")

        n = len(self.elements)
        self.vis = [None] * n
        self.flags = {dim: [None] * n for dim in _FLAG_DIMS}
        for eid, info in enumerate(self.elements):
            for dim, value in _fixed_flags(info).items():
                self.flags[dim][eid] = value

        classifier_eids = [
            eid for eid, info in enumerate(self.elements) if info.category == "classifier"
        ]
        for supers in self._super_assignments(classifier_eids):
            self.supers = supers
            self.placements = {}
            witness = self._place(0)
            if witness is not None:
                return witness
        return None

    def _super_assignments(self, classifier_eids: list[int]) -> Iterable[list[int | None]]:
        nothing: list[int | None] = [None] * len(self.elements)
        if not self.scope.enable_inheritance:
            yield nothing
            return
        class_eids = [
            eid for eid in classifier_eids
            if self.elements[eid].cls_kind is ClassifierKind.CLASS
        ]

        def rec(i: int, current: list[int | None]) -> Iterable[list[int | None]]:
            if i == len(class_eids):
                yield list(current)
                return
            eid = class_eids[i]
            for choice in [None] + [other for other in class_eids if other != eid]:
                current[eid] = choice
                if choice is None or not self._creates_cycle(current, eid):
                    yield from rec(i + 1, current)
            current[eid] = None

        yield from rec(0, nothing)

    def _creates_cycle(self, supers: list[int | None], start: int) -> bool:
        seen = set()
        node: int | None = start
        while node is not None:
            if node in seen:
                return True
            seen.add(node)
            node = supers[node]
        return False

    # ── Placement phase ──────────────────────────────────────────

    def _eligible(self, ann: AnnotationIR) -> list[int]:
        if not self.prune:
            # Reference mode: any element at all; leaves re-verify.
            return list(range(len(self.elements)))
        kinds = self.domains[ann.name].kinds
        return [eid for eid, info in enumerate(self.elements) if info.use_kind in kinds]

    def _place(self, index: int) -> ProgramModel | None:
        self._check_deadline()
        if index == len(self.anns):
            return self._assign_modifiers()
        ann = self.anns[index]
        eligible = self._eligible(ann)
        low = 0 if ann.name in self.scope.coverage_exempt else self.scope.ann_min
        for count in range(low, self.scope.ann_max + 1):
            if count > len(eligible):
                break
            for subset in _subsets(eligible, count):
                self.placements[ann.name] = subset
                if not self.prune or not self._definitely_violated(index + 1):
                    witness = self._place(index + 1)
                    if witness is not None:
                        return witness
                else:
                    self.pruned += 1
        self.placements.pop(ann.name, None)
        return None

    # ── Modifier phase ───────────────────────────────────────────

    def _assign_modifiers(self) -> ProgramModel | None:
        # The arrays were seeded with fixed values per skeleton and the
        # element recursion restores them on backtrack.
        return self._assign_element(0)

    def _forced(self, eid: int) -> _AnnDomain | None:
        """Intersection of placement obligations sitting on this element."""
        forced: _AnnDomain | None = None
        for ann in self.anns:
            if eid in self.placements.get(ann.name, ()):
                dom = self.domains[ann.name]
                if forced is None:
                    forced = _AnnDomain(
                        kinds=set(dom.kinds),
                        visibilities=set(dom.visibilities),
                        flags={d: set(dom.flags[d]) for d in _FLAG_DIMS},
                    )
                else:
                    forced.merge(dom)
        return forced

    def _element_options(self, eid: int) -> Iterable[tuple[Visibility, dict[str, bool]]]:
        info = self.elements[eid]
        vis_domain = (
            self.classifier_vis_domain
            if info.category == "classifier"
            else self.member_vis_domain
        )
        fixed = _fixed_flags(info)
        flag_domains: dict[str, tuple[bool, ...]] = {}
        for dim in _FLAG_DIMS:
            if dim in fixed:
                flag_domains[dim] = (fixed[dim],)
            else:
                flag_domains[dim] = self._flag_domain(dim)
        if (
            self.prune
            and info.category == "method"
            and self.flags["abstract"][info.owner] is False
        ):
            # An abstract method needs an abstract owner (built-in rule).
            flag_domains["abstract"] = (False,)
        forced = self._forced(eid) if self.prune else None
        if forced is not None:
            vis_domain = [v for v in vis_domain if v in forced.visibilities]
            flag_domains = {
                dim: tuple(v for v in flag_domains[dim] if v in forced.flags[dim])
                for dim in _FLAG_DIMS
            }
        for vis in vis_domain:
            for a in flag_domains["abstract"]:
                for s in flag_domains["static"]:
                    for f in flag_domains["final"]:
                        yield vis, {"abstract": a, "static": s, "final": f}

    def _assign_element(self, eid: int) -> ProgramModel | None:
        self._check_deadline()
        if eid == len(self.elements):
            return self._leaf()
        saved_flags = {dim: self.flags[dim][eid] for dim in _FLAG_DIMS}
        for vis, flag_values in self._element_options(eid):
            self.vis[eid] = vis
            for dim, value in flag_values.items():
                self.flags[dim][eid] = value
            if not self.prune or not self._definitely_violated(len(self.anns)):
                witness = self._assign_element(eid + 1)
                if witness is not None:
                    return witness
            else:
                self.pruned += 1
        self.vis[eid] = None
        for dim, value in saved_flags.items():
            self.flags[dim][eid] = value
        return None

    # ── Leaf verification ────────────────────────────────────────

    def _leaf(self) -> ProgramModel | None:
        self.candidates += 1
        if self.candidates % 256 == 0:
            self._check_deadline()
        model = self._build_model()
        if well_formed(model):
            return None
        if evaluate(self.ir, model):
            return None
        for ann in self.anns:
            for pred in self.preds[ann.name]:
                for eid in self.placements.get(ann.name, ()):
                    element = _model_element(model, self.paths[eid])
                    if not pred.holds(model, element):
                        return None
        return model

    def _build_model(self) -> ProgramModel:
        classifiers: list[Classifier] = []
        eid = 0
        while eid < len(self.elements):
            info = self.elements[eid]
            assert info.category == "classifier"
            cls_eid = eid
            name = info.label
            methods: list[Method] = []
            fields: list[Field] = []
            eid += 1
            while eid < len(self.elements) and self.elements[eid].category != "classifier":
                member = self.elements[eid]
                if member.category in ("method", "constructor"):
                    methods.append(
                        Method(
                            name=member.label,
                            owner=name,
                            visibility=self.vis[eid] or Visibility.PACKAGE,
                            is_abstract=bool(self.flags["abstract"][eid]),
                            is_static=bool(self.flags["static"][eid]),
                            is_final=bool(self.flags["final"][eid]),
                            is_constructor=member.category == "constructor",
                        )
                    )
                else:
                    fields.append(
                        Field(
                            name=member.label,
                            owner=name,
                            visibility=self.vis[eid] or Visibility.PACKAGE,
                            is_static=bool(self.flags["static"][eid]),
                            is_final=bool(self.flags["final"][eid]),
                        )
                    )
                eid += 1
            superclass = None
            if self.supers[cls_eid] is not None:
                superclass = self.elements[self.supers[cls_eid]].label
            classifiers.append(
                Classifier(
                    name=name,
                    kind=info.cls_kind or ClassifierKind.CLASS,
                    visibility=self.vis[cls_eid] or Visibility.PACKAGE,
                    is_abstract=bool(self.flags["abstract"][cls_eid]),
                    is_final=bool(self.flags["final"][cls_eid]),
                    is_static=bool(self.flags["static"][cls_eid]),
                    superclass=superclass,
                    methods=tuple(methods),
                    fields=tuple(fields),
                )
            )
        uses = []
        for ann in self.anns:
            for eid2 in self.placements.get(ann.name, ()):
                uses.append(AnnotationUse(ann.name, self.paths[eid2]))
        return ProgramModel(tuple(classifiers), tuple(uses))

    # ── Three-valued pruning evaluation ──────────────────────────

    def _definitely_violated(self, placed_count: int) -> bool:
        for ann in self.anns[:placed_count]:
            for pred in self.preds[ann.name]:
                if self._pred3(pred) is False:
                    return True
        return False

    def _pred3(self, pred: Predicate) -> bool | None:
        uses = self.placements.get(pred.ann_name)
        if uses is None:
            return None
        results = [self._pred_on_use3(pred, eid) for eid in uses]
        return _and3(results)

    def _pred_on_use3(self, pred: Predicate, eid: int) -> bool | None:
        info = self.elements[eid]
        if isinstance(pred, TargetCondition):
            return _or3([self._atom3(a, eid) for a in pred.disjuncts])
        if isinstance(pred, ForbiddenTargetCondition):
            return _not3(_and3([self._atom3(a, eid) for a in pred.conjuncts]))
        if isinstance(pred, SameElementCoOccurrence):
            if pred.scope is not None and info.use_kind is not pred.scope:
                return True
            present = self._has_ann3(eid, pred.co_ann)
            return present if pred.positive else _not3(present)
        if isinstance(pred, MemberExists):
            if info.use_kind is not pred.scope:
                return True
            return _or3([self._member_clause3(a, eid, exists=True) for a in pred.disjuncts])
        if isinstance(pred, MemberForAll):
            if info.use_kind is not pred.scope:
                return True
            return _or3([self._member_clause3(a, eid, exists=False) for a in pred.disjuncts])
        if isinstance(pred, MemberForbidden):
            if info.use_kind is not pred.scope:
                return True
            witnesses = [self._member_clause3(a, eid, exists=True) for a in pred.conjuncts]
            return _not3(_and3(witnesses))
        if isinstance(pred, OwnerCondition):
            if info.use_kind is not pred.scope:
                return True
            owner = info.owner
            checks = [self._atom3(a, owner) for a in pred.atoms]
            if pred.positive:
                return _or3(checks)
            return _not3(_and3(checks))
        return None

    def _member_clause3(self, atom: StatementTest, cls_eid: int, exists: bool) -> bool | None:
        if atom.target_type is None:
            if atom.co_ann is None:
                return False
            return self._has_ann3(cls_eid, atom.co_ann)
        members = self._members(cls_eid, atom.target_type)
        checks = [
            _and3([self._test3(atom.test, m), self._co3(atom.co_ann, m)])
            for m in members
        ]
        return _or3(checks) if exists else _and3(checks)

    def _members(self, cls_eid: int, member_type: TargetType) -> list[int]:
        out = []
        for eid in range(cls_eid + 1, len(self.elements)):
            info = self.elements[eid]
            if info.category == "classifier":
                break
            if member_type is TargetType.METHOD:
                if info.category in ("method", "constructor"):
                    out.append(eid)
            elif member_type is TargetType.CONSTRUCTOR:
                if info.category == "constructor":
                    out.append(eid)
            elif member_type is TargetType.FIELD:
                if info.category == "field":
                    out.append(eid)
        return out

    def _atom3(self, atom: StatementTest, eid: int) -> bool | None:
        info = self.elements[eid]
        if atom.target_type is not None and info.use_kind is not atom.target_type:
            return False
        return _and3([self._test3(atom.test, eid), self._co3(atom.co_ann, eid)])

    def _co3(self, co_ann: str | None, eid: int) -> bool | None:
        if co_ann is None:
            return True
        return self._has_ann3(eid, co_ann)

    def _has_ann3(self, eid: int, ann_name: str) -> bool | None:
        placed = self.placements.get(ann_name)
        if placed is not None:
            return eid in placed
        if ann_name not in self.known:
            return False
        return None

    def _test3(self, test: ModifierTest, eid: int) -> bool | None:
        result: bool | None = True
        if test.visibility is not None:
            actual = self.vis[eid]
            if actual is None:
                result = None
            elif actual is not test.visibility:
                return False
        for dim, wanted in (
            ("abstract", test.is_abstract),
            ("static", test.is_static),
            ("final", test.is_final),
        ):
            if wanted is None:
                continue
            if dim == "abstract" and self.elements[eid].category == "field":
                return False
            actual = self.flags[dim][eid]
            if actual is None:
                result = None
            elif actual != wanted:
                return False
        return result


def _fixed_flags(info: _ElementInfo) -> dict[str, bool]:
    if info.category == "classifier":
        if info.cls_kind in (ClassifierKind.INTERFACE, ClassifierKind.ANNOTATION):
            return {"abstract": True, "final": False}
        if info.cls_kind is ClassifierKind.ENUM:
            return {"abstract": False}
        return {}
    if info.category == "constructor":
        return {"abstract": False, "static": False}
    if info.category == "field":
        return {"abstract": False}
    return {}


def _model_element(model: ProgramModel, path: str):
    element = resolve(model, path)
    assert element is not None
    return element


def _subsets(pool: list[int], count: int) -> Iterable[tuple[int, ...]]:
    if count == 0:
        yield ()
        return
    for i, head in enumerate(pool):
        for tail in _subsets(pool[i + 1:], count - 1):
            yield (head,) + tail


def _atoms_of(pred: Predicate) -> tuple[StatementTest, ...]:
    for attr in ("disjuncts", "conjuncts", "atoms"):
        atoms = getattr(pred, attr, None)
        if atoms is not None:
            return atoms
    return ()


def _and3(values: Iterable[bool | None]) -> bool | None:
    result: bool | None = True
    for v in values:
        if v is False:
            return False
        if v is None:
            result = None
    return result


def _or3(values: Iterable[bool | None]) -> bool | None:
    result: bool | None = False
    for v in values:
        if v is True:
            return True
        if v is None:
            result = None
    return result


def _not3(value: bool | None) -> bool | None:
    return None if value is None else not value


# ── Public entry points ──────────────────────────────────────────


def find(
    ir: ConstraintIR,
    scope: Scope | None = None,
    extra: list[Predicate] | None = None,
    prune: bool = True,
) -> FinderResult:
    scope = scope or Scope()
    scope.validate()
    return _Search(ir, scope, extra, prune).run()


def explain_scope(result: FinderResult, scope: Scope) -> str:
    bounds = (
        f"{scope.ann_min}..{scope.ann_max} uses per annotation, "
        f"up to {scope.max_classifiers} classifiers with up to "
        f"{scope.max_methods} methods and {scope.max_fields} fields each"
    )
    stats = result.stats
    tail = f"({stats.candidates} candidates, {stats.pruned} pruned, {stats.elapsed_ms} ms)"
    if isinstance(result, Sat):
        model = result.witness
        members = sum(len(c.methods) + len(c.fields) for c in model.classifiers)
        return (
            f"satisfiable: witness has {len(model.classifiers)} classifiers, "
            f"{members} members and {len(model.annotation_uses)} annotation uses; "
            f"searched within scope ({bounds}) {tail}"
        )
    if isinstance(result, UnsatWithinScope):
        return (
            f"no model exists within scope ({bounds}); the verdict is bounded: "
            f"a larger scope could still admit a model {tail}"
        )
    return f"search timed out after {stats.elapsed_ms} ms within scope ({bounds}) {tail}"
