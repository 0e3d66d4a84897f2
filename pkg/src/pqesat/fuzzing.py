"""Seeded random instance generators for cross-checking the engines.

Every generator takes an explicit random.Random so a seed reproduces the
same corpus byte for byte.  Sizes default to ranges the enumeration
oracles accept.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .apps import EqCheckInstance, InterpolationInstance
from .circuits import Gate, Netlist, TransitionSystem, add_stutter
from .cnf import Clause, CnfProblem
from .pqe import PqeProblem


def random_clause(rng: random.Random, var_count: int, max_width: int = 3) -> Clause:
    width = rng.randint(1, min(max_width, var_count))
    variables = rng.sample(range(1, var_count + 1), width)
    return Clause([v if rng.random() < 0.5 else -v for v in variables])


def random_cnf(
    rng: random.Random, max_vars: int = 12, max_clauses: int = 40
) -> CnfProblem:
    n = rng.randint(3, max_vars)
    m = rng.randint(min(n, max_clauses), max_clauses)
    return CnfProblem(n, [random_clause(rng, n) for _ in range(m)])


def random_pqe(
    rng: random.Random,
    max_vars: int = 10,
    max_clauses: int = 25,
    max_targets: int = 2,
) -> PqeProblem:
    n = rng.randint(3, max_vars)
    m = rng.randint(n, min(max_clauses, 3 * n))
    quantified = frozenset(rng.sample(range(1, n + 1), rng.randint(1, n - 1)))
    problem = CnfProblem(
        n, [random_clause(rng, n) for _ in range(m)], quantified
    )
    targets = tuple(rng.sample(range(m), rng.randint(1, min(max_targets, m))))
    return PqeProblem(problem, targets)


# ---------------------------------------------------------------------------
# Netlists.
# ---------------------------------------------------------------------------


def random_netlist(
    rng: random.Random, n_inputs: int = 3, n_gates: int = 5, n_outputs: int = 1
) -> Netlist:
    """A random circuit; outputs are the last gates, so they have depth."""
    if n_inputs < 2 or n_gates < n_outputs:
        raise ValueError("need at least two inputs and one gate per output")
    inputs = [f"v{i}" for i in range(1, n_inputs + 1)]
    signals = list(inputs)
    gates: list[Gate] = []
    for j in range(1, n_gates + 1):
        op = rng.choice(GATE_CHOICES)
        name = f"g{j}"
        if op == "NOT":
            operands: tuple[str, ...] = (rng.choice(signals),)
        else:
            a = rng.choice(signals)
            b = rng.choice(signals)
            if op == "XOR":
                while b == a:
                    b = rng.choice(signals)
            operands = (a, b)
        gates.append(Gate(name, op, operands))
        signals.append(name)
    outputs = [g.name for g in gates[-n_outputs:]]
    return Netlist(inputs, gates, outputs)


GATE_CHOICES = ("AND", "OR", "NOT", "XOR")


def netlist_truth_table(nl: Netlist) -> tuple[tuple[bool, ...], ...]:
    """Output vectors over all input vectors, in lexicographic input order."""
    rows = []
    for bits in itertools.product([False, True], repeat=len(nl.inputs)):
        rows.append(nl.output_values(dict(zip(nl.inputs, bits))))
    return tuple(rows)


def reencode_netlist(rng: random.Random, nl: Netlist) -> Netlist:
    """An equivalent circuit with different structure.

    Each gate is either kept or expanded into an equivalent group of
    gates over fresh names (the classic two-negation rewrites); the
    original gate name always labels the group's final gate, so operand
    references and outputs survive untouched.
    """
    gates: list[Gate] = []
    for g in nl.gates:
        if rng.random() < 0.3:
            gates.append(g)
            continue
        t = lambda i: f"{g.name}_r{i}"
        if g.op == "AND":
            a, b = g.operands
            gates.append(Gate(t(1), "NOT", (a,)))
            gates.append(Gate(t(2), "NOT", (b,)))
            gates.append(Gate(t(3), "OR", (t(1), t(2))))
            gates.append(Gate(g.name, "NOT", (t(3),)))
        elif g.op == "OR":
            a, b = g.operands
            gates.append(Gate(t(1), "NOT", (a,)))
            gates.append(Gate(t(2), "NOT", (b,)))
            gates.append(Gate(t(3), "AND", (t(1), t(2))))
            gates.append(Gate(g.name, "NOT", (t(3),)))
        elif g.op == "XOR":
            a, b = g.operands
            gates.append(Gate(t(1), "NOT", (a,)))
            gates.append(Gate(t(2), "NOT", (b,)))
            gates.append(Gate(t(3), "AND", (a, t(2))))
            gates.append(Gate(t(4), "AND", (t(1), b)))
            gates.append(Gate(g.name, "OR", (t(3), t(4))))
        else:  # NOT
            (a,) = g.operands
            gates.append(Gate(t(1), "OR", (a, a)))
            gates.append(Gate(g.name, "NOT", (t(1),)))
    return Netlist(list(nl.inputs), gates, list(nl.outputs))


def mutate_netlist(rng: random.Random, nl: Netlist) -> Netlist:
    """Flip one gate's operation, or invert the first output.

    The result usually computes a different function; callers wanting a
    guaranteed difference should compare truth tables and retry.
    """
    two_input = [i for i, g in enumerate(nl.gates) if g.op != "NOT"]
    if two_input and rng.random() < 0.8:
        i = rng.choice(two_input)
        g = nl.gates[i]
        choices = [op for op in ("AND", "OR", "XOR") if op != g.op]
        if g.operands[0] == g.operands[1] and "XOR" in choices:
            choices.remove("XOR")
        gates = list(nl.gates)
        gates[i] = Gate(g.name, rng.choice(choices), g.operands)
        return Netlist(list(nl.inputs), gates, list(nl.outputs))
    inverted = f"{nl.outputs[0]}_inv"
    gates = list(nl.gates) + [Gate(inverted, "NOT", (nl.outputs[0],))]
    outputs = [inverted] + list(nl.outputs[1:])
    return Netlist(list(nl.inputs), gates, outputs)


def distinct_mutant(
    rng: random.Random, nl: Netlist, tries: int = 25
) -> Netlist:
    """A mutated circuit guaranteed to compute a different function."""
    reference = netlist_truth_table(nl)
    for _ in range(tries):
        mutant = mutate_netlist(rng, nl)
        if netlist_truth_table(mutant) != reference:
            return mutant
    inverted = f"{nl.outputs[0]}_inv"
    gates = list(nl.gates) + [Gate(inverted, "NOT", (nl.outputs[0],))]
    return Netlist(list(nl.inputs), gates, [inverted] + list(nl.outputs[1:]))


def random_eq_pair(rng: random.Random, n_inputs: int = 3) -> EqCheckInstance:
    """Two structurally different encodings of one function."""
    m1 = random_netlist(rng, n_inputs, rng.randint(2, 5))
    return EqCheckInstance(m1, reencode_netlist(rng, m1))


# ---------------------------------------------------------------------------
# Transition systems and interpolation splits.
# ---------------------------------------------------------------------------


def random_transition_system(
    rng: random.Random, bits: int = 3, stutter: bool = True
) -> TransitionSystem:
    state = [f"s_{i}" for i in range(1, bits + 1)]
    inputs = list(state)
    if rng.random() < 0.5:
        inputs.append("u")
    signals = list(inputs)
    gates: list[Gate] = []
    for j in range(1, rng.randint(1, 4) + 1):
        op = rng.choice(GATE_CHOICES)
        if op == "NOT":
            operands: tuple[str, ...] = (rng.choice(signals),)
        else:
            a = rng.choice(signals)
            b = rng.choice(signals)
            if op == "XOR":
                while b == a:
                    b = rng.choice(signals)
            operands = (a, b)
        gates.append(Gate(f"g{j}", op, operands))
        signals.append(f"g{j}")
    for i in range(1, bits + 1):
        op = rng.choice(("AND", "OR", "XOR", "NOT"))
        if op == "NOT":
            operands = (rng.choice(signals),)
        else:
            a = rng.choice(signals)
            b = rng.choice(signals)
            if op == "XOR":
                while b == a:
                    b = rng.choice(signals)
            operands = (a, b)
        gates.append(Gate(f"next_{i}", op, operands))
    trans = Netlist(inputs, gates, [f"next_{i}" for i in range(1, bits + 1)])
    init_clauses = [
        Clause([i if rng.random() < 0.5 else -i])
        for i in range(1, bits + 1)
        if rng.random() < 0.8
    ]
    ts = TransitionSystem(bits, CnfProblem(bits, init_clauses), trans)
    return add_stutter(ts) if stutter else ts


def random_interp_split(
    rng: random.Random, max_vars: int = 12
) -> Optional[InterpolationInstance]:
    """A random A/B split; None when the draw shares no variable."""
    nx = rng.randint(1, 3)
    ny = rng.randint(1, min(4, max_vars - nx - 1))
    nz = rng.randint(1, max_vars - nx - ny)
    n = nx + ny + nz
    a_vars = list(range(1, nx + ny + 1))
    b_vars = list(range(nx + 1, n + 1))

    def side(pool: list[int], m: int) -> list[Clause]:
        out = []
        for _ in range(m):
            width = rng.randint(1, min(3, len(pool)))
            chosen = rng.sample(pool, width)
            out.append(Clause([v if rng.random() < 0.5 else -v for v in chosen]))
        return out

    a = CnfProblem(n, side(a_vars, rng.randint(2, 8)))
    b = CnfProblem(n, side(b_vars, rng.randint(2, 8)))
    mentioned_a = frozenset(v for c in a.clauses for v in c.variables())
    mentioned_b = frozenset(v for c in b.clauses for v in c.variables())
    shared = mentioned_a & mentioned_b
    if not shared:
        return None
    return InterpolationInstance(a, b, shared)
