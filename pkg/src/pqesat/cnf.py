"""Core CNF types: literals, clauses, formulas, partial assignments.

Literals use the DIMACS convention: a positive integer v is the positive
literal of variable v, and -v is its negation.  Variable numbering starts
at 1.  A formula may declare a subset of its variables as existentially
quantified; the remaining variables are free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional


Literal = int
Variable = int


class CnfError(Exception):
    """Raised for malformed clauses, formulas, or DIMACS input."""


class ResolutionError(CnfError):
    """Raised when two clauses cannot be resolved as requested."""


def negate(lit: Literal) -> Literal:
    return -lit


def var_of(lit: Literal) -> Variable:
    return abs(lit)


class Clause:
    """A disjunction of literals.

    Literal order follows first occurrence (duplicates are dropped), which
    keeps clauses readable when they are printed back out.  Equality and
    hashing ignore order: two clauses are equal iff they hold the same set
    of literals.  Tautologies (v and -v together) are rejected outright
    since no algorithm here has a use for them.

    The ``origin`` tag records where a clause came from ("input" for
    clauses of the original formula, "learned" for derived ones).  It is
    bookkeeping only and does not participate in equality.
    """

    __slots__ = ("literals", "literal_set", "origin")

    def __init__(self, literals: Iterable[Literal], origin: str = "input"):
        seen = []
        seen_set = set()
        for lit in literals:
            if not isinstance(lit, int) or lit == 0:
                raise CnfError(f"bad literal {lit!r}: literals are nonzero ints")
            if -lit in seen_set:
                raise CnfError(
                    f"tautological clause: contains both {lit} and {-lit}"
                )
            if lit not in seen_set:
                seen.append(lit)
                seen_set.add(lit)
        self.literals: tuple[Literal, ...] = tuple(seen)
        self.literal_set: frozenset[Literal] = frozenset(seen_set)
        self.origin = origin

    def variables(self) -> frozenset[Variable]:
        return frozenset(abs(lit) for lit in self.literals)

    def contains(self, lit: Literal) -> bool:
        return lit in self.literal_set

    def is_empty(self) -> bool:
        return not self.literals

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clause):
            return NotImplemented
        return self.literal_set == other.literal_set

    def __hash__(self) -> int:
        return hash(self.literal_set)

    def __repr__(self) -> str:
        body = " ".join(str(lit) for lit in self.literals)
        return f"Clause({body})" if body else "Clause(<empty>)"


@dataclass
class CnfProblem:
    """A CNF formula with an optional set of existentially quantified variables.

    ``clauses`` is an ordered list; duplicate clauses are allowed and are
    distinct members (their positions matter to the algorithms built on
    top).  Clause indices used throughout the package are 0-based positions
    into this list.
    """

    var_count: int
    clauses: list[Clause] = field(default_factory=list)
    quantified: frozenset[Variable] = frozenset()

    def __post_init__(self):
        self.quantified = frozenset(self.quantified)
        if self.var_count < 0:
            raise CnfError("var_count must be nonnegative")
        for v in self.quantified:
            if not 1 <= v <= self.var_count:
                raise CnfError(f"quantified variable {v} out of range")
        for i, c in enumerate(self.clauses):
            for lit in c:
                if abs(lit) > self.var_count:
                    raise CnfError(
                        f"clause {i} mentions variable {abs(lit)} "
                        f"but var_count is {self.var_count}"
                    )

    @property
    def free_vars(self) -> frozenset[Variable]:
        return frozenset(range(1, self.var_count + 1)) - self.quantified

    def is_quantified(self, v: Variable) -> bool:
        return v in self.quantified

    def add_clause(self, clause: Clause) -> int:
        """Append a clause and return its index."""
        for lit in clause:
            if abs(lit) > self.var_count:
                raise CnfError(
                    f"clause mentions variable {abs(lit)} "
                    f"but var_count is {self.var_count}"
                )
        self.clauses.append(clause)
        return len(self.clauses) - 1

    def copy(self) -> "CnfProblem":
        return CnfProblem(self.var_count, list(self.clauses), self.quantified)


@dataclass(frozen=True)
class Binding:
    """One entry of a partial assignment.

    ``decision`` distinguishes chosen values from propagated ones; for a
    propagated binding, ``reason`` is the clause that became unit.
    """

    var: Variable
    value: bool
    decision: bool = True
    reason: Optional[Clause] = None


class Assignment:
    """An ordered partial assignment (a trail).

    Bindings are kept in the order they were made, which the conflict
    analysis relies on.  Lookup by variable is O(1).
    """

    def __init__(self, bindings: Iterable[Binding] = ()):
        self.bindings: list[Binding] = []
        self._value: dict[Variable, bool] = {}
        for b in bindings:
            self.push(b)

    def push(self, binding: Binding) -> None:
        if binding.var in self._value:
            raise CnfError(f"variable {binding.var} is already assigned")
        self.bindings.append(binding)
        self._value[binding.var] = binding.value

    def value(self, v: Variable) -> Optional[bool]:
        return self._value.get(v)

    def is_assigned(self, v: Variable) -> bool:
        return v in self._value

    def satisfies_literal(self, lit: Literal) -> bool:
        val = self._value.get(abs(lit))
        return val is not None and val == (lit > 0)

    def falsifies_literal(self, lit: Literal) -> bool:
        val = self._value.get(abs(lit))
        return val is not None and val != (lit > 0)

    def satisfies_clause(self, clause: Clause) -> bool:
        return any(self.satisfies_literal(lit) for lit in clause)

    def falsifies_clause(self, clause: Clause) -> bool:
        return all(self.falsifies_literal(lit) for lit in clause)

    def position(self, v: Variable) -> int:
        """Trail position of a variable (0-based).  Raises if unassigned."""
        for i, b in enumerate(self.bindings):
            if b.var == v:
                return i
        raise CnfError(f"variable {v} is not on the trail")

    def copy(self) -> "Assignment":
        fresh = Assignment()
        fresh.bindings = list(self.bindings)
        fresh._value = dict(self._value)
        return fresh

    def items(self) -> list[tuple[Variable, bool]]:
        return [(b.var, b.value) for b in self.bindings]

    def __len__(self) -> int:
        return len(self.bindings)

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{b.var}={'1' if b.value else '0'}" for b in self.bindings
        )
        return f"Assignment({parts})"


# ---------------------------------------------------------------------------
# DIMACS parsing and printing.
#
# The accepted format is standard DIMACS CNF plus at most one "e" line
# declaring the existentially quantified variables, e.g.
#
#     p cnf 4 2
#     e 3 4 0
#     -3 4 0
#     1 3 0
# ---------------------------------------------------------------------------


def parse_dimacs(text: str) -> CnfProblem:
    """Parse DIMACS CNF text with an optional single "e" quantifier line."""
    var_count = None
    clause_count = None
    quantified: list[Variable] = []
    saw_e = False
    clauses: list[Clause] = []
    pending: list[Literal] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if var_count is not None:
                raise CnfError(f"line {lineno}: duplicate problem line")
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed problem line {line!r}")
            try:
                var_count = int(fields[2])
                clause_count = int(fields[3])
            except ValueError:
                raise CnfError(f"line {lineno}: malformed problem line {line!r}")
            continue
        if var_count is None:
            raise CnfError(f"line {lineno}: clause data before problem line")
        if line.startswith("e"):
            if saw_e:
                raise CnfError(f"line {lineno}: duplicate quantifier line")
            if pending or clauses:
                raise CnfError(f"line {lineno}: quantifier line after clauses")
            saw_e = True
            toks = line.split()[1:]
            if not toks or toks[-1] != "0":
                raise CnfError(f"line {lineno}: quantifier line must end with 0")
            for tok in toks[:-1]:
                try:
                    v = int(tok)
                except ValueError:
                    raise CnfError(f"line {lineno}: bad token {tok!r}")
                if not 1 <= v <= var_count:
                    raise CnfError(
                        f"line {lineno}: quantified variable {v} out of range"
                    )
                quantified.append(v)
            continue
        # Clause data: integers, clauses terminated by 0, may span lines.
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"line {lineno}: bad token {tok!r}")
            if lit == 0:
                try:
                    clauses.append(Clause(pending))
                except CnfError as exc:
                    raise CnfError(f"line {lineno}: {exc}")
                pending = []
            else:
                if abs(lit) > var_count:
                    raise CnfError(
                        f"line {lineno}: literal {lit} exceeds "
                        f"declared variable count {var_count}"
                    )
                pending.append(lit)

    if var_count is None:
        raise CnfError("missing problem line")
    if pending:
        raise CnfError("unterminated clause at end of input")
    if clause_count is not None and clause_count != len(clauses):
        raise CnfError(
            f"problem line declares {clause_count} clauses "
            f"but {len(clauses)} were given"
        )
    return CnfProblem(var_count, clauses, frozenset(quantified))


def parse_dimacs_file(path: str) -> CnfProblem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def format_dimacs(problem: CnfProblem) -> str:
    """Render a problem back to DIMACS text (round-trips with parse_dimacs)."""
    lines = [f"p cnf {problem.var_count} {len(problem.clauses)}"]
    if problem.quantified:
        qs = " ".join(str(v) for v in sorted(problem.quantified))
        lines.append(f"e {qs} 0")
    for c in problem.clauses:
        body = " ".join(str(lit) for lit in c.literals)
        lines.append(f"{body} 0".strip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structural operations used by the solving algorithms.
# ---------------------------------------------------------------------------


def cofactor_clause(clause: Clause, assignment: Assignment) -> Optional[Clause]:
    """Restrict a clause to an assignment.

    Returns None when the assignment satisfies the clause, otherwise the
    clause with its falsified literals removed.
    """
    if assignment.satisfies_clause(clause):
        return None
    kept = [lit for lit in clause if not assignment.falsifies_literal(lit)]
    return Clause(kept, origin=clause.origin)


def cofactor_formula(problem: CnfProblem, assignment: Assignment) -> CnfProblem:
    """Restrict a formula to an assignment.

    Satisfied clauses are dropped; the rest lose their falsified literals.
    Assigned variables leave the quantified set.  The variable numbering is
    unchanged, so clauses of the result are comparable with the original's.
    """
    kept = []
    for c in problem.clauses:
        restricted = cofactor_clause(c, assignment)
        if restricted is not None:
            kept.append(restricted)
    assigned = {b.var for b in assignment.bindings}
    return CnfProblem(
        problem.var_count, kept, problem.quantified - assigned
    )


def resolve(c1: Clause, c2: Clause, v: Variable) -> Clause:
    """Resolve two clauses on variable v.

    Requires that v is the only clashing variable between the two clauses;
    anything else raises ResolutionError.
    """
    clashes = [
        abs(lit) for lit in c1 if -lit in c2.literal_set
    ]
    clash_vars = sorted(set(clashes))
    if clash_vars != [v]:
        raise ResolutionError(
            f"cannot resolve on {v}: clashing variables are {clash_vars}"
        )
    merged = [lit for lit in c1 if abs(lit) != v]
    merged += [lit for lit in c2 if abs(lit) != v and lit not in merged]
    return Clause(merged, origin="learned")


def is_blocked(
    problem: CnfProblem,
    clause: Clause,
    v: Variable,
    skip_indices: frozenset[int] = frozenset(),
) -> bool:
    """Check whether a clause is blocked at variable v.

    The clause must contain a literal of v.  It is blocked when every
    clause of the formula holding the opposite literal of v also clashes
    with it on some second variable, which makes all those resolvents
    tautological.  ``skip_indices`` removes formula clauses from
    consideration (used when a clause should be compared against the
    formula minus some members).
    """
    if v not in clause.variables():
        raise CnfError(f"clause {clause!r} has no literal of variable {v}")
    own = v if clause.contains(v) else -v
    for i, other in enumerate(problem.clauses):
        if i in skip_indices:
            continue
        if other is clause:
            continue
        if not other.contains(-own):
            continue
        double = any(
            -lit in other.literal_set for lit in clause if abs(lit) != v
        )
        if not double:
            return False
    return True


def cluster_of(
    problem: CnfProblem,
    index: int,
    skip_indices: frozenset[int] = frozenset(),
) -> list[int]:
    """Indices of the clause cluster seeded at ``index``.

    The cluster holds the seed clause plus every formula clause sharing at
    least one identical literal (same variable, same polarity) with it.
    The seed comes first, remaining members follow in index order.
    """
    seed = problem.clauses[index]
    members = [index]
    for i, other in enumerate(problem.clauses):
        if i == index or i in skip_indices:
            continue
        if seed.literal_set & other.literal_set:
            members.append(i)
    return members
