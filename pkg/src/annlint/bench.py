"""Synthetic scaling suite for the model finder.

Generates annotation sets of growing size, each in two variants: a
satisfiable one and a twin made unsatisfiable by exactly two conflicting
constraints.  Every set is built from the same two ingredients:

* simple target and modifier constraints on classes, and
* a co-occurrence chain that links every annotation to the next one,

split roughly half and half.  The chain forces all annotations onto one
shared class, so a single visibility disagreement between the first and
the last annotation poisons the whole set.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from typing import Iterable, TextIO

from .analysis import analyze, has_errors
from .compiler import compile_set
from .finder import Sat, Scope, Timeout, UnsatWithinScope, find
from .parser import parse_source

SIZES = (2, 4, 8, 16, 32, 64)
CONSTRAINT_COUNTS = (2, 4, 8)

# Simple constraints that any public, non-final, non-abstract class
# satisfies.  Drawn from in order when a set needs padding; all have
# distinct constraint names so none collapses into another.
_FILLERS = (
    "require class;",
    "forbid final class;",
    "forbid abstract class;",
    "forbid interface;",
    "forbid enum;",
    "forbid method;",
    "forbid field;",
    "forbid constructor;",
    "forbid annotation;",
)


@dataclass(frozen=True)
class BenchCase:
    name: str
    size: int
    constraints_per_ann: int
    expect_sat: bool
    source: str


@dataclass(frozen=True)
class BenchRow:
    case: BenchCase
    verdict: str
    ms: float
    candidates: int


def _constraints_for(index: int, size: int, per_ann: int, conflicting: bool) -> list[str]:
    """Constraint lines for annotation ``index`` out of ``size``.

    Half the budget goes to co-occurrence links (strides 1, 2, ... around
    the ring of annotations), the rest to simple filler constraints.  The
    first annotation always demands a public class; when ``conflicting``
    is set, the last annotation demands a package-visible one instead of
    its usual filler, which is the only difference between the twins.
    """
    lines: list[str] = []
    # The replaced filler still counts as spent, so the padding below
    # stays identical between the twins.
    spent = {_FILLERS[0]}
    if index == 0:
        lines.append("require public class;")
    elif conflicting and index == size - 1:
        lines.append("require package class;")
    else:
        lines.append(_FILLERS[0])
    chain_budget = per_ann // 2
    for stride in range(1, chain_budget + 1):
        other = (index + stride) % size
        line = f"require @A{other} class;"
        if line not in lines:
            lines.append(line)
    for filler in _FILLERS:
        if len(lines) >= per_ann:
            break
        if filler not in lines and filler not in spent:
            lines.append(filler)
    return lines[:per_ann]


def _case_source(size: int, per_ann: int, conflicting: bool) -> str:
    blocks = []
    for index in range(size):
        body = "\n".join(f"    {line}" for line in _constraints_for(index, size, per_ann, conflicting))
        blocks.append(f"annotation A{index} {{\n{body}\n}}")
    return "package bench;\n\n" + "\n\n".join(blocks) + "\n"


def suite(max_anns: int = 16) -> list[BenchCase]:
    """All twin pairs up to ``max_anns`` annotations per set."""
    cases = []
    for size in SIZES:
        if size > max_anns:
            break
        for per_ann in CONSTRAINT_COUNTS:
            for conflicting in (False, True):
                kind = "unsat" if conflicting else "sat"
                cases.append(
                    BenchCase(
                        name=f"{kind}_n{size}_k{per_ann}",
                        size=size,
                        constraints_per_ann=per_ann,
                        expect_sat=not conflicting,
                        source=_case_source(size, per_ann, conflicting),
                    )
                )
    return cases


def run_case(case: BenchCase, scope: Scope | None = None) -> BenchRow:
    file, diagnostics = parse_source(case.source, filename=case.name)
    diagnostics += analyze(file)
    if has_errors(diagnostics):
        raise ValueError(f"generated case {case.name} does not analyze cleanly")
    ir, _ = compile_set(file)
    started = time.perf_counter()
    result = find(ir, scope=scope)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    if isinstance(result, Sat):
        verdict = "Sat"
    elif isinstance(result, UnsatWithinScope):
        verdict = "UnsatWithinScope"
    else:
        verdict = "Timeout"
    return BenchRow(case=case, verdict=verdict, ms=elapsed_ms, candidates=result.stats.candidates)


def run_suite(
    cases: Iterable[BenchCase],
    scope: Scope | None = None,
    out: TextIO | None = None,
) -> list[BenchRow]:
    """Run ``cases`` sequentially, streaming CSV rows to ``out``."""
    if out is None:
        out = sys.stdout
    out.write("set,anns,constraints,verdict,ms,candidates\n")
    rows = []
    for case in cases:
        row = run_case(case, scope=scope)
        out.write(
            f"{case.name},{case.size},{case.constraints_per_ann},"
            f"{row.verdict},{row.ms:.1f},{row.candidates}\n"
        )
        out.flush()
        rows.append(row)
    return rows


def summarize(rows: list[BenchRow]) -> str:
    """One-line comparison of each unsat twin against its sat sibling."""
    by_name = {row.case.name: row for row in rows}
    faster = 0
    pairs = 0
    for row in rows:
        if row.case.expect_sat:
            twin = by_name.get(row.case.name.replace("sat_", "unsat_", 1))
            if twin is not None:
                pairs += 1
                if twin.ms <= row.ms:
                    faster += 1
    if pairs == 0:
        return "no twin pairs were run"
    return f"unsat twin was at least as quick as its sat sibling in {faster} of {pairs} pairs"
