"""Unit propagation and conflict analysis."""

import pytest

from pqesat.bcp import analyze_conflict, propagate, resolve_to_base
from pqesat.cnf import Assignment, Binding, Clause, CnfProblem


def test_propagate_unit_chain():
    p = CnfProblem(3, [Clause([1]), Clause([-1, 2]), Clause([-2, 3])])
    res = propagate(p, [], Assignment(), [])
    assert not res.is_conflict
    assert res.trail.items() == [(1, True), (2, True), (3, True)]
    assert [b.decision for b in res.trail.bindings] == [False, False, False]
    assert res.trail.bindings[1].reason is p.clauses[1]


def test_propagate_leaves_base_untouched():
    base = Assignment([Binding(5, True)])
    p = CnfProblem(5, [Clause([-5, 1])])
    res = propagate(p, [], base, [])
    assert len(base) == 1
    assert res.base_len == 1
    assert res.trail.items() == [(5, True), (1, True)]


def test_propagate_decisions_then_conflict():
    p = CnfProblem(2, [Clause([1, 2])])
    res = propagate(p, [], Assignment(), [(1, False), (2, False)])
    assert res.is_conflict
    assert res.conflict is p.clauses[0]


def test_propagate_scans_formula_before_learned():
    p = CnfProblem(2, [Clause([-1, 2])])
    learned = [Clause([2], "learned")]
    res = propagate(p, [], Assignment(), [(1, True)])
    assert res.trail.bindings[-1].reason is p.clauses[0]
    res = propagate(p, learned, Assignment(), [])
    assert res.trail.bindings[-1].reason is learned[0]


def test_propagate_satisfied_clauses_never_fire():
    # 1=True satisfies the first clause, so only the second is unit.
    p = CnfProblem(3, [Clause([1, 2]), Clause([-1, 3])])
    res = propagate(p, [], Assignment(), [(1, True)])
    assert res.trail.items() == [(1, True), (3, True)]


def test_propagate_no_unit_no_conflict():
    p = CnfProblem(3, [Clause([1, 2, 3])])
    res = propagate(p, [], Assignment(), [(1, False)])
    assert not res.is_conflict
    assert res.trail.items() == [(1, False)]


def test_analyze_conflict_resolves_out_propagated_literals():
    # Decisions 1=0, 2=0 propagate 3 (first clause) then 4 (second),
    # falsifying the third clause; resolving that clause against the
    # reason of 4 leaves a clause over the decisions alone.
    p = CnfProblem(4, [Clause([1, 2, 3]), Clause([1, 4]), Clause([2, -4])])
    res = propagate(p, [], Assignment(), [(1, False), (2, False)])
    assert res.is_conflict
    assert res.conflict is p.clauses[2]
    assert res.trail.items() == [(1, False), (2, False), (3, True), (4, True)]

    steps = []
    learned = analyze_conflict(res, steps)
    assert learned.literals == (2, 1)
    assert learned.origin == "learned"
    assert steps == [(p.clauses[1], 4)]
    assert res.trail.falsifies_clause(learned)


def test_analyze_conflict_without_propagated_literals():
    p = CnfProblem(2, [Clause([1, 2])])
    res = propagate(p, [], Assignment(), [(1, False), (2, False)])
    steps = []
    learned = analyze_conflict(res, steps)
    assert learned == Clause([1, 2])
    assert learned.origin == "learned"
    assert steps == []


def test_analyze_conflict_requires_a_conflict():
    p = CnfProblem(1, [Clause([1])])
    res = propagate(p, [], Assignment(), [])
    with pytest.raises(ValueError):
        analyze_conflict(res)


def test_resolve_to_base_peels_latest_first():
    p = CnfProblem(4, [Clause([1, 2]), Clause([-2, 3])])
    res = propagate(p, [], Assignment(), [(1, False)])
    assert res.trail.items() == [(1, False), (2, True), (3, True)]
    # -2 and -3 are falsified only through propagation; both get resolved
    # away, the later binding first.
    steps = []
    got = resolve_to_base(Clause([-2, -3]), res, steps)
    assert got.literal_set == {1}
    assert [v for _, v in steps] == [3, 2]


def test_resolve_to_base_keeps_decision_literals():
    p = CnfProblem(3, [Clause([-1, 2])])
    res = propagate(p, [], Assignment(), [(1, True)])
    got = resolve_to_base(Clause([-1, -2]), res)
    assert got.literal_set == {-1}
