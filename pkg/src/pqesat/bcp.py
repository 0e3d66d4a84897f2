"""Unit propagation over a trail, plus trail-guided conflict analysis.

Propagation here is deliberately simple and deterministic: after every
assignment the clause lists are rescanned front to back, a falsified
clause is reported the moment one exists, and otherwise the first unit
clause in scan order fires.  Main-formula clauses are scanned before
learned ones.  The predictability matters more than speed at the sizes
this package targets, because the solving algorithms' certificates are
sensitive to propagation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cnf import Assignment, Binding, Clause, CnfProblem, resolve


@dataclass
class PropagationResult:
    """Outcome of one propagate() call.

    A falsified clause is an outcome, not an error.  ``base_len`` marks
    where this call's bindings start on the trail; bindings before it
    belong to the caller's context.
    """

    trail: Assignment
    base_len: int
    conflict: Optional[Clause]

    @property
    def is_conflict(self) -> bool:
        return self.conflict is not None


def propagate(
    problem: CnfProblem,
    learned: Sequence[Clause],
    base: Assignment,
    decisions: Sequence[tuple[int, bool]],
) -> PropagationResult:
    """Extend ``base`` with ``decisions`` and run unit propagation.

    ``base`` itself is not modified.  Clauses of the problem are consulted
    first (in index order), then the learned clauses.
    """
    trail = base.copy()
    base_len = len(base)
    for v, val in decisions:
        trail.push(Binding(v, val, decision=True))

    # Set mirrors of the trail keep the scans below on set operations; a
    # clause is falsified when its literal set sits inside false_lits, and
    # an unsatisfied clause is unit when exactly one literal is open.
    true_lits: set[int] = set()
    false_lits: set[int] = set()
    for b in trail.bindings:
        lit = b.var if b.value else -b.var
        true_lits.add(lit)
        false_lits.add(-lit)

    scan: list[Clause] = list(problem.clauses) + list(learned)
    sets = [c.literal_set for c in scan]
    while True:
        conflict = None
        for i, cs in enumerate(sets):
            if cs <= false_lits:
                conflict = scan[i]
                break
        if conflict is not None:
            return PropagationResult(trail, base_len, conflict)
        unit = None
        for i, cs in enumerate(sets):
            if not true_lits.isdisjoint(cs):
                continue
            open_lits = cs - false_lits
            if len(open_lits) == 1:
                unit = (scan[i], next(iter(open_lits)))
                break
        if unit is None:
            return PropagationResult(trail, base_len, None)
        reason, lit = unit
        trail.push(Binding(abs(lit), lit > 0, decision=False, reason=reason))
        true_lits.add(lit)
        false_lits.add(-lit)


def resolve_to_base(
    clause: Clause,
    result: PropagationResult,
    steps: Optional[list[tuple[Clause, int]]] = None,
) -> Clause:
    """Resolve away literals that were only falsified by this call's propagation.

    The input clause must be falsified by the result's trail.  Literals
    falsified by a binding made before the call, or by one of this call's
    decisions, are left alone; literals falsified by this call's propagated
    bindings are removed by resolving with their reason clauses, latest
    first.  The returned clause is falsified by the caller's context plus
    the decisions alone.  When ``steps`` is given, each resolution is
    appended to it as (reason clause, pivot variable).
    """
    trail = result.trail
    current = clause
    while True:
        pivot = None
        for i in range(len(trail.bindings) - 1, result.base_len - 1, -1):
            b = trail.bindings[i]
            if b.decision:
                continue
            if b.var in current.variables():
                pivot = b
                break
        if pivot is None:
            break
        current = resolve(current, pivot.reason, pivot.var)
        if steps is not None:
            steps.append((pivot.reason, pivot.var))
    return Clause(current.literals, origin="learned")


def analyze_conflict(
    result: PropagationResult,
    steps: Optional[list[tuple[Clause, int]]] = None,
) -> Clause:
    """Derive a clause explaining a propagation conflict.

    Starting from the falsified clause, resolutions against reason clauses
    peel off everything this call propagated, so the result is falsified
    by the caller's context plus this call's decisions.  With no
    propagated literal involved, the falsified clause itself comes back
    (as a learned-origin copy).
    """
    if result.conflict is None:
        raise ValueError("analyze_conflict needs a conflicting result")
    return resolve_to_base(result.conflict, result, steps)
