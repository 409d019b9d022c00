"""Java source generation: annotation types and processor skeletons.

Two kinds of units come out of here. Annotation-type declarations are
compact, written the way a Java author would declare them by hand.
Processor classes follow the classic annotation-processor shape: one
processor for the requirements and one for the prohibitions of each
annotation, each check rendered as a labeled block over the
``javax.lang.model`` element API. The text is emitted and golden-tested
only; nothing here runs a Java compiler.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast_nodes import (
    AnnotationDef,
    AnnSourceFile,
    ArrayValue,
    AttrKind,
    AttributeDef,
    ConstraintKind,
    DefaultValue,
    IntValue,
    RealValue,
    Retention,
    TargetType,
    Visibility,
)
from .compiler import (
    AnnotationIR,
    ConstraintIR,
    MemberExists,
    MemberForAll,
    MemberForbidden,
    ModifierTest,
    OwnerCondition,
    Predicate,
    SameElementCoOccurrence,
    StatementTest,
    explicit_target_list,
)
from .printer import print_value

DEFAULT_PACKAGE = "annotations"

_ELEMENT_TYPE = {
    TargetType.CLASS: "ElementType.TYPE",
    TargetType.INTERFACE: "ElementType.TYPE",
    TargetType.ANNOTATION: "ElementType.TYPE",
    TargetType.ENUM: "ElementType.TYPE",
    TargetType.METHOD: "ElementType.METHOD",
    TargetType.FIELD: "ElementType.FIELD",
    TargetType.CONSTRUCTOR: "ElementType.CONSTRUCTOR",
}

_ELEMENT_KIND = {
    TargetType.CLASS: "ElementKind.CLASS",
    TargetType.INTERFACE: "ElementKind.INTERFACE",
    TargetType.ANNOTATION: "ElementKind.ANNOTATION_TYPE",
    TargetType.ENUM: "ElementKind.ENUM",
    TargetType.METHOD: "ElementKind.METHOD",
    TargetType.FIELD: "ElementKind.FIELD",
    TargetType.CONSTRUCTOR: "ElementKind.CONSTRUCTOR",
}

_RETENTION = {
    Retention.RUNTIME: "RetentionPolicy.RUNTIME",
    Retention.CLASS: "RetentionPolicy.CLASS",
    Retention.SOURCE: "RetentionPolicy.SOURCE",
}

_INT_MAX = 2**31 - 1


@dataclass(frozen=True)
class GeneratedUnit:
    relative_path: str
    contents: str


# ── Annotation-type declarations ─────────────────────────────────


def _attr_type(attr: AttributeDef) -> str:
    if attr.kind is AttrKind.EXTERNAL:
        base = attr.external_type or "Object"
    else:
        base = attr.kind.value
    return base + "[]" if attr.is_array else base


def _java_default(attr: AttributeDef, value: DefaultValue) -> str:
    if isinstance(value, ArrayValue):
        inner = ", ".join(_java_default(attr, item) for item in value.items)
        return "{" + inner + "}"
    text = print_value(value)
    if attr.kind is AttrKind.FLOAT and isinstance(value, RealValue):
        return text + "f"
    if attr.kind is AttrKind.LONG and isinstance(value, IntValue):
        if abs(value.value) > _INT_MAX:
            return text + "L"
    return text


def gen_annotation_type(ann: AnnotationDef, package: str = DEFAULT_PACKAGE) -> GeneratedUnit:
    explicit = explicit_target_list(ann)
    targets: list[str] = []
    for target_type in explicit:
        mapped = _ELEMENT_TYPE[target_type]
        if mapped not in targets:
            targets.append(mapped)

    lines = [f"package {package};", ""]
    imports = []
    if targets:
        imports.append("import java.lang.annotation.ElementType;")
    if ann.retention in _RETENTION:
        imports.append("import java.lang.annotation.Retention;")
        imports.append("import java.lang.annotation.RetentionPolicy;")
    if targets:
        imports.append("import java.lang.annotation.Target;")
    if imports:
        lines += sorted(imports) + [""]

    if ann.retention in _RETENTION:
        lines.append(f"@Retention({_RETENTION[ann.retention]})")
    if len(targets) == 1:
        lines.append(f"@Target({targets[0]})")
    elif targets:
        lines.append("@Target({" + ", ".join(targets) + "})")

    if not ann.attributes:
        lines.append(f"public @interface {ann.name} {{ }}")
    else:
        lines.append(f"public @interface {ann.name} {{")
        for attr in ann.attributes:
            decl = f"    {_attr_type(attr)} {attr.name}()"
            if attr.default is not None:
                decl += f" default {_java_default(attr, attr.default)}"
            lines.append(decl + ";")
        lines.append("}")

    path = package.replace(".", "/") + f"/{ann.name}.java"
    return GeneratedUnit(path, "\n".join(lines) + "\n")


# ── Processor generation ─────────────────────────────────────────


def _modifier_conditions(expr: str, test: ModifierTest) -> list[str]:
    out = []
    if test.visibility is Visibility.PACKAGE:
        out += [
            f"!{expr}.getModifiers().contains(Modifier.PUBLIC)",
            f"!{expr}.getModifiers().contains(Modifier.PROTECTED)",
            f"!{expr}.getModifiers().contains(Modifier.PRIVATE)",
        ]
    elif test.visibility is not None:
        out.append(f"{expr}.getModifiers().contains(Modifier.{test.visibility.value.upper()})")
    for flag, name in (
        (test.is_abstract, "ABSTRACT"),
        (test.is_static, "STATIC"),
        (test.is_final, "FINAL"),
    ):
        if flag:
            out.append(f"{expr}.getModifiers().contains(Modifier.{name})")
    return out


def _co_condition(expr: str, co_ann: str | None) -> list[str]:
    if co_ann is None:
        return []
    return [f"{expr}.getAnnotation({co_ann}.class) != null"]


def _element_condition(atom: StatementTest) -> str:
    parts = []
    if atom.target_type is not None:
        parts.append(f"elt.getKind() == {_ELEMENT_KIND[atom.target_type]}")
    parts += _co_condition("elt", atom.co_ann)
    parts += _modifier_conditions("elt", atom.test)
    return " && ".join(parts) if parts else "true"


def _member_kind_test(atom: StatementTest) -> str:
    if atom.target_type is TargetType.METHOD:
        return (
            "(member.getKind() == ElementKind.METHOD"
            " || member.getKind() == ElementKind.CONSTRUCTOR)"
        )
    if atom.target_type is TargetType.CONSTRUCTOR:
        return "member.getKind() == ElementKind.CONSTRUCTOR"
    return "member.getKind() == ElementKind.FIELD"


def _member_condition(atom: StatementTest) -> str:
    parts = _co_condition("member", atom.co_ann) + _modifier_conditions("member", atom.test)
    return " && ".join(parts) if parts else "true"


def _scope_skip(scope: TargetType) -> str:
    return f"elt.getKind() != {_ELEMENT_KIND[scope]}"


def _check_block(pred: Predicate, ann_name: str) -> list[str]:
    """One labeled, self-contained block deciding ``violated``."""
    lines = [f"// check: {pred.name}", "{"]
    body: list[str] = []

    if isinstance(pred, SameElementCoOccurrence):
        present = f"elt.getAnnotation({pred.co_ann}.class) != null"
        if pred.positive:
            cond = f"!({present})"
            if pred.scope is not None:
                cond = f"elt.getKind() == {_ELEMENT_KIND[pred.scope]} && {cond}"
        else:
            cond = present
            if pred.scope is not None:
                cond = f"elt.getKind() == {_ELEMENT_KIND[pred.scope]} && {cond}"
        body.append(f"boolean violated = {cond};")

    elif isinstance(pred, (MemberExists, MemberForAll)):
        exists = isinstance(pred, MemberExists)
        body.append("boolean satisfied = " + _scope_skip(pred.scope) + ";")
        body.append("if (!satisfied)")
        body.append("{")
        inner: list[str] = []
        loop_clauses: list[tuple[int, StatementTest]] = []
        for i, atom in enumerate(pred.disjuncts):
            if atom.target_type is None:
                checks = _co_condition("elt", atom.co_ann) + _modifier_conditions("elt", atom.test)
                cond = " && ".join(checks) if checks else "true"
                inner.append(f"    satisfied = satisfied || ({cond});")
            else:
                start = "false" if exists else "true"
                inner.append(f"    boolean clause{i} = {start};")
                loop_clauses.append((i, atom))
        if loop_clauses:
            inner.append("    for (Element member : elt.getEnclosedElements())")
            inner.append("    {")
            for i, atom in loop_clauses:
                gate = _member_kind_test(atom)
                cond = _member_condition(atom)
                if exists:
                    inner.append(f"        if ({gate} && {cond})")
                    inner.append("        {")
                    inner.append(f"            clause{i} = true;")
                    inner.append("        }")
                else:
                    inner.append(f"        if ({gate} && !({cond}))")
                    inner.append("        {")
                    inner.append(f"            clause{i} = false;")
                    inner.append("        }")
            inner.append("    }")
            for i, _ in loop_clauses:
                inner.append(f"    satisfied = satisfied || clause{i};")
        body += inner
        body.append("}")
        body.append("boolean violated = !satisfied;")

    elif isinstance(pred, MemberForbidden):
        body.append(f"boolean applies = elt.getKind() == {_ELEMENT_KIND[pred.scope]};")
        loop_clauses = []
        for i, atom in enumerate(pred.conjuncts):
            if atom.target_type is None:
                checks = _co_condition("elt", atom.co_ann) + _modifier_conditions("elt", atom.test)
                cond = " && ".join(checks) if checks else "false"
                body.append(f"boolean witness{i} = {cond};")
            else:
                body.append(f"boolean witness{i} = false;")
                loop_clauses.append((i, atom))
        if loop_clauses:
            body.append("if (applies)")
            body.append("{")
            body.append("    for (Element member : elt.getEnclosedElements())")
            body.append("    {")
            for i, atom in loop_clauses:
                body.append(f"        if ({_member_kind_test(atom)} && {_member_condition(atom)})")
                body.append("        {")
                body.append(f"            witness{i} = true;")
                body.append("        }")
            body.append("    }")
            body.append("}")
        witnesses = " && ".join(f"witness{i}" for i in range(len(pred.conjuncts)))
        body.append(f"boolean violated = applies && {witnesses};")

    elif isinstance(pred, OwnerCondition):
        body.append(f"boolean applies = elt.getKind() == {_ELEMENT_KIND[pred.scope]};")
        body.append("boolean violated = false;")
        body.append("if (applies)")
        body.append("{")
        body.append("    Element owner = elt.getEnclosingElement();")
        conds = []
        for atom in pred.atoms:
            parts = []
            if atom.target_type is not None:
                parts.append(f"owner.getKind() == {_ELEMENT_KIND[atom.target_type]}")
            parts += _co_condition("owner", atom.co_ann)
            parts += _modifier_conditions("owner", atom.test)
            conds.append("(" + (" && ".join(parts) if parts else "true") + ")")
        joined = (" || " if pred.positive else " && ").join(conds)
        if pred.positive:
            body.append(f"    violated = !({joined});")
        else:
            body.append(f"    violated = {joined};")
        body.append("}")

    elif pred.origin.kind is ConstraintKind.REQUIRE:
        # Unscoped require over the annotated element itself.
        conds = [f"({_element_condition(atom)})" for atom in pred.disjuncts]
        body.append(f"boolean violated = !({' || '.join(conds)});")
    else:
        conds = [f"({_element_condition(atom)})" for atom in pred.conjuncts]
        body.append(f"boolean violated = {' && '.join(conds)};")

    body.append("if (violated)")
    body.append("{")
    body += [
        "    this.processingEnv.getMessager().printMessage",
        "    (",
        "        Kind.ERROR,",
        f'        "The annotation @{ann_name} is disallowed for this location.",',
        "        elt",
        "    );",
    ]
    body.append("}")

    lines += ["    " + line for line in body]
    lines.append("}")
    return lines


def _processor_unit(
    ann_name: str, suffix: str, predicates: list[Predicate], package: str
) -> GeneratedUnit:
    class_name = f"{ann_name}{suffix}Processor"
    blocks: list[str] = []
    for pred in predicates:
        block = _check_block(pred, ann_name)
        blocks += ["            " + line if line else "" for line in block]
        blocks.append("")
    if blocks and blocks[-1] == "":
        blocks.pop()

    body = "\n".join(blocks)
    imports = [
        "import java.util.Set;",
        "",
        "import javax.annotation.processing.AbstractProcessor;",
        "import javax.annotation.processing.RoundEnvironment;",
        "import javax.annotation.processing.SupportedAnnotationTypes;",
        "import javax.annotation.processing.SupportedSourceVersion;",
        "import javax.lang.model.SourceVersion;",
        "import javax.lang.model.element.Element;",
    ]
    if "ElementKind." in body:
        imports.append("import javax.lang.model.element.ElementKind;")
    if "Modifier." in body:
        imports.append("import javax.lang.model.element.Modifier;")
    imports.append("import javax.lang.model.element.TypeElement;")
    imports.append("import javax.tools.Diagnostic.Kind;")

    lines = [f"package {package};", ""]
    lines += imports
    lines += [
        "",
        f'@SupportedAnnotationTypes("{ann_name}")',
        "@SupportedSourceVersion(SourceVersion.RELEASE_6)",
        f"public class {class_name} extends AbstractProcessor",
        "{",
        "    @Override",
        "    public boolean process(Set<? extends TypeElement> annotations,",
        "                           RoundEnvironment objects)",
        "    {",
        f"        for (Element elt : objects.getElementsAnnotatedWith({ann_name}.class))",
        "        {",
        body,
        "        }",
        "        return true;",
        "    }",
        "}",
    ]
    path = package.replace(".", "/") + f"/{class_name}.java"
    return GeneratedUnit(path, "\n".join(lines) + "\n")


def gen_processors(
    ann: AnnotationDef, ir: ConstraintIR, package: str = DEFAULT_PACKAGE
) -> list[GeneratedUnit]:
    compiled: AnnotationIR | None = ir.annotation(ann.name)
    if compiled is None:
        return []
    requires = [p for p in compiled.predicates if p.origin.kind is ConstraintKind.REQUIRE]
    forbids = [p for p in compiled.predicates if p.origin.kind is ConstraintKind.FORBID]
    units = []
    if requires:
        units.append(_processor_unit(ann.name, "Require", requires, package))
    if forbids:
        units.append(_processor_unit(ann.name, "Forbid", forbids, package))
    return units


def generate_all(source: AnnSourceFile, ir: ConstraintIR) -> list[GeneratedUnit]:
    """Annotation types plus processors for a whole source file."""
    package = source.package_name or DEFAULT_PACKAGE
    units = []
    for ann in source.annotations:
        units.append(gen_annotation_type(ann, package))
        units += gen_processors(ann, ir, package)
    return units
