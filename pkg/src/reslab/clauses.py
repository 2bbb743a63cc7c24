"""Clauses and CNF formulas over integer variables, plus the resolution primitives.

Literals are nonzero ints, DIMACS-style: ``v`` is the positive literal of
variable ``v >= 1`` and ``-v`` its negation.  Clauses are canonical
(sorted by variable, no duplicate variables, never trivial), so structural
equality and hashing behave like set equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class TrivialClauseError(ValueError):
    """A clause would contain both a variable and its negation."""


class PivotAbsentError(ValueError):
    """The pivot does not occur with opposite signs in the two premises."""


def neg(lit: int) -> int:
    """Negate a literal; an involution."""
    return -lit


def var_of(lit: int) -> int:
    return abs(lit)


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals over pairwise distinct variables.

    The empty clause (width 0) is the contradiction symbol.
    """

    lits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        seen: dict[int, int] = {}
        for a in self.lits:
            if not isinstance(a, int) or isinstance(a, bool) or a == 0:
                raise ValueError(f"bad literal {a!r}")
            v = abs(a)
            if seen.setdefault(v, a) != a:
                raise TrivialClauseError(f"clashing literals on variable {v}")
        object.__setattr__(self, "lits", tuple(sorted(seen.values(), key=abs)))

    @property
    def width(self) -> int:
        return len(self.lits)

    def variables(self) -> frozenset[int]:
        return frozenset(abs(a) for a in self.lits)

    def restrict_to(self, variables: Iterable[int]) -> "Clause":
        """Keep only the literals whose variable lies in ``variables``."""
        keep = set(variables)
        return Clause(tuple(a for a in self.lits if abs(a) in keep))

    def satisfied_by(self, assignment: Mapping[int, int]) -> bool:
        """True if some literal is true under a total 0/1 assignment."""
        return any(assignment[abs(a)] == (1 if a > 0 else 0) for a in self.lits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.lits)

    def __len__(self) -> int:
        return len(self.lits)

    def __contains__(self, lit: int) -> bool:
        return lit in self.lits

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.lits) if self.lits else "<empty>"


EMPTY_CLAUSE = Clause()


def subsumes(c1: Clause, c2: Clause) -> bool:
    """True iff every literal of c1 appears in c2 (c1 implies c2)."""
    return set(c1.lits) <= set(c2.lits)


def find_pivot(c1: Clause, c2: Clause) -> int:
    """The unique variable occurring with opposite signs in c1 and c2.

    Raises PivotAbsentError if there is none and TrivialClauseError if there
    are two or more (resolving on any of them leaves a clashing pair).
    """
    other = set(c2.lits)
    clashes = [abs(a) for a in c1.lits if -a in other]
    if not clashes:
        raise PivotAbsentError("no complementary pair between premises")
    if len(clashes) > 1:
        raise TrivialClauseError(
            f"premises clash on variables {sorted(clashes)}; any resolvent is trivial"
        )
    return clashes[0]


def resolve(c1: Clause, c2: Clause, pivot: int | None = None) -> Clause:
    """Resolve two clauses on ``pivot`` (inferred when omitted)."""
    if pivot is None:
        pivot = find_pivot(c1, c2)
    if not ((pivot in c1 and -pivot in c2) or (-pivot in c1 and pivot in c2)):
        raise PivotAbsentError(f"pivot {pivot} does not occur with opposite signs")
    rest = [a for a in c1.lits if abs(a) != pivot]
    rest += [a for a in c2.lits if abs(a) != pivot]
    return Clause(tuple(rest))


def weaken(c: Clause, extra: Iterable[int]) -> Clause:
    """Add literals to a clause; the input subsumes the result."""
    return Clause(c.lits + tuple(extra))


def is_homogeneous_step(c1: Clause, c2: Clause, pivot: int) -> bool:
    """True if the premises have the shape C | x and C | ~x for the same C."""
    left = set(c1.lits) - {pivot, -pivot}
    right = set(c2.lits) - {pivot, -pivot}
    return left == right


def _clause_sort_key(c: Clause) -> tuple:
    return (len(c.lits), tuple((abs(a), a < 0) for a in c.lits))


@dataclass(frozen=True)
class CnfFormula:
    """A set of clauses over variables 1..num_vars."""

    clauses: tuple[Clause, ...]
    num_vars: int
    clause_set: frozenset[Clause] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        unique = sorted(set(self.clauses), key=_clause_sort_key)
        for c in unique:
            for a in c.lits:
                if abs(a) > self.num_vars:
                    raise ValueError(f"variable {abs(a)} exceeds num_vars={self.num_vars}")
        if self.num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        object.__setattr__(self, "clauses", tuple(unique))
        object.__setattr__(self, "clause_set", frozenset(unique))

    @classmethod
    def of(cls, clause_lits: Iterable[Iterable[int]], num_vars: int | None = None) -> "CnfFormula":
        clauses = tuple(Clause(tuple(lits)) for lits in clause_lits)
        if num_vars is None:
            num_vars = max((abs(a) for c in clauses for a in c.lits), default=0)
        return cls(clauses, num_vars)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def variables(self) -> frozenset[int]:
        return frozenset(abs(a) for c in self.clauses for a in c.lits)

    def satisfied_by(self, assignment: Mapping[int, int]) -> bool:
        return all(c.satisfied_by(assignment) for c in self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, clause: Clause) -> bool:
        return clause in self.clause_set


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    for c in f.clauses:
        lines.append(" ".join(str(a) for a in c.lits) + (" 0" if c.lits else "0"))
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; comment lines start with 'c', clauses are 0-terminated."""
    num_vars = None
    tokens: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        tokens.extend(int(tok) for tok in line.split())
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(tuple(current))
            current = []
        else:
            current.append(tok)
    if current:
        raise ValueError("trailing literals without 0 terminator")
    return CnfFormula.of(clauses, num_vars)
