"""Configuration-style refutation traces and their verifier.

A trace is a list of steps: axiom downloads, inferences (resolution or
weakening) and erasures.  Downloads and inferences get 1-based indices in
order of appearance; erasures refer to those indices.  The verifier replays
the trace, rejects any illegal step, and reports length, width, clause
space, variable space and depth.

Text format (one step per line, DIMACS-style literals):

    p res <num_vars>
    a <lit>* 0        axiom download
    r <i> <j> 0       resolve live steps i and j
    w <i> <lit>* 0    weaken step i into the listed clause
    e <i> 0           erase step i
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .clauses import (
    Clause,
    CnfFormula,
    PivotAbsentError,
    TrivialClauseError,
    find_pivot,
    is_homogeneous_step,
    resolve,
    subsumes,
)


class IllegalStepError(Exception):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class NotARefutationError(Exception):
    """The trace never derives the empty clause."""


class InputHasWeakeningError(Exception):
    """Homogenization expects a weakening-free input proof."""


class MalformedDagError(Exception):
    """A sequence-form proof or derivation tree is not a valid derivation."""


@dataclass(frozen=True)
class Axiom:
    clause: Clause


@dataclass(frozen=True)
class Resolve:
    left: int
    right: int
    pivot: int


@dataclass(frozen=True)
class Weaken:
    source: int
    clause: Clause


@dataclass(frozen=True)
class Erase:
    target: int


Step = Union[Axiom, Resolve, Weaken, Erase]


@dataclass(frozen=True)
class Refutation:
    """An ordered trace of derivation steps over a formula with num_vars variables."""

    num_vars: int
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ProofMeasures:
    length: int
    width: int
    clause_space: int
    var_space: int
    depth: int
    refuted: bool
    homogeneous: bool
    uses_weakening: bool


def verify(
    formula: CnfFormula,
    proof: Refutation,
    *,
    allow_weakening: bool = True,
    require_refutation: bool = True,
) -> ProofMeasures:
    """Replay a trace against a formula and measure it.

    Every download must be exactly a clause of the formula, every inference
    must be a legal resolution or weakening of live steps, and erasures must
    hit live steps.  Clause space is the largest configuration (set of
    distinct held clauses); variable space counts distinct variables held.
    """
    derived: list[Clause] = []
    live: list[bool] = []
    depth_of: list[int] = []
    cfg: dict[Clause, int] = {}
    var_cfg: dict[int, int] = {}

    def hold(c: Clause) -> None:
        n = cfg.get(c, 0)
        cfg[c] = n + 1
        if n == 0:
            for v in c.variables():
                var_cfg[v] = var_cfg.get(v, 0) + 1

    def release(c: Clause) -> None:
        n = cfg[c] - 1
        if n == 0:
            del cfg[c]
            for v in c.variables():
                var_cfg[v] -= 1
                if var_cfg[v] == 0:
                    del var_cfg[v]
        else:
            cfg[c] = n

    def live_clause(pos: int, idx: int) -> Clause:
        if not 1 <= idx <= len(derived):
            raise IllegalStepError(pos, f"reference to unknown step {idx}")
        if not live[idx - 1]:
            raise IllegalStepError(pos, f"reference to erased step {idx}")
        return derived[idx - 1]

    length = width = clause_space = var_space = depth = 0
    refuted = False
    homogeneous = True
    uses_weakening = False

    for pos, step in enumerate(proof.steps, start=1):
        if isinstance(step, Erase):
            if not 1 <= step.target <= len(derived):
                raise IllegalStepError(pos, f"erase of unknown step {step.target}")
            if not live[step.target - 1]:
                raise IllegalStepError(pos, f"erase of already erased step {step.target}")
            live[step.target - 1] = False
            release(derived[step.target - 1])
            continue

        if isinstance(step, Axiom):
            if step.clause not in formula:
                raise IllegalStepError(pos, f"downloaded clause {step.clause} not in formula")
            if any(abs(a) > proof.num_vars for a in step.clause.lits):
                raise IllegalStepError(pos, "download exceeds declared variable count")
            clause, d = step.clause, 0
        elif isinstance(step, Resolve):
            c1 = live_clause(pos, step.left)
            c2 = live_clause(pos, step.right)
            try:
                clause = resolve(c1, c2, step.pivot)
            except (PivotAbsentError, TrivialClauseError) as exc:
                raise IllegalStepError(pos, str(exc)) from exc
            if not is_homogeneous_step(c1, c2, step.pivot):
                homogeneous = False
            d = 1 + max(depth_of[step.left - 1], depth_of[step.right - 1])
        elif isinstance(step, Weaken):
            if not allow_weakening:
                raise IllegalStepError(pos, "weakening is not allowed here")
            src = live_clause(pos, step.source)
            if not subsumes(src, step.clause):
                raise IllegalStepError(pos, f"{step.clause} is not a weakening of {src}")
            if any(abs(a) > proof.num_vars for a in step.clause.lits):
                raise IllegalStepError(pos, "weakening introduces out-of-range variable")
            clause, d = step.clause, 1 + depth_of[step.source - 1]
            uses_weakening = True
        else:
            raise IllegalStepError(pos, f"unknown step type {step!r}")

        derived.append(clause)
        live.append(True)
        depth_of.append(d)
        hold(clause)
        length += 1
        width = max(width, clause.width)
        depth = max(depth, d)
        clause_space = max(clause_space, len(cfg))
        var_space = max(var_space, len(var_cfg))
        if clause.width == 0:
            refuted = True

    if require_refutation and not refuted:
        raise NotARefutationError("the empty clause is never derived")
    return ProofMeasures(
        length=length,
        width=width,
        clause_space=clause_space,
        var_space=var_space,
        depth=depth,
        refuted=refuted,
        homogeneous=homogeneous,
        uses_weakening=uses_weakening,
    )


def replay_clauses(proof: Refutation) -> list[Clause]:
    """The clause held by each download/inference step, without validation."""
    derived: list[Clause] = []
    for step in proof.steps:
        if isinstance(step, Axiom):
            derived.append(step.clause)
        elif isinstance(step, Resolve):
            derived.append(resolve(derived[step.left - 1], derived[step.right - 1], step.pivot))
        elif isinstance(step, Weaken):
            derived.append(step.clause)
    return derived


class ProofBuilder:
    """Incremental trace construction with liveness bookkeeping."""

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self._steps: list[Step] = []
        self._clauses: list[Clause] = []
        self._live: list[bool] = []

    def _push(self, step: Step, clause: Clause) -> int:
        self._steps.append(step)
        self._clauses.append(clause)
        self._live.append(True)
        return len(self._clauses)

    def clause_at(self, idx: int) -> Clause:
        return self._clauses[idx - 1]

    def is_live(self, idx: int) -> bool:
        return self._live[idx - 1]

    def _check_live(self, idx: int) -> Clause:
        if not 1 <= idx <= len(self._clauses) or not self._live[idx - 1]:
            raise MalformedDagError(f"builder reference to dead or unknown step {idx}")
        return self._clauses[idx - 1]

    def axiom(self, clause: Clause) -> int:
        return self._push(Axiom(clause), clause)

    def resolve_steps(self, i: int, j: int, pivot: int | None = None) -> int:
        c1, c2 = self._check_live(i), self._check_live(j)
        if pivot is None:
            pivot = find_pivot(c1, c2)
        return self._push(Resolve(i, j, pivot), resolve(c1, c2, pivot))

    def weaken_step(self, i: int, clause: Clause) -> int:
        src = self._check_live(i)
        if not subsumes(src, clause):
            raise MalformedDagError(f"{clause} is not a weakening of {src}")
        return self._push(Weaken(i, clause), clause)

    def erase(self, idx: int) -> None:
        self._check_live(idx)
        self._live[idx - 1] = False
        self._steps.append(Erase(idx))

    def build(self) -> Refutation:
        return Refutation(self.num_vars, tuple(self._steps))


@dataclass(frozen=True)
class SequenceStep:
    """One clause of a sequence-form proof with 1-based parent indices."""

    clause: Clause
    parents: tuple[int, ...] = ()


def to_configuration_style(seq: Sequence[SequenceStep], num_vars: int) -> Refutation:
    """Convert a sequence-form proof, erasing each clause right after its last use.

    Download/inference indices coincide with sequence positions, so parent
    references carry over unchanged.
    """
    last_use = [0] * (len(seq) + 1)
    for i, s in enumerate(seq, start=1):
        for p in s.parents:
            if not 1 <= p < i:
                raise MalformedDagError(f"step {i} has out-of-order parent {p}")
            last_use[p] = i

    steps: list[Step] = []
    for i, s in enumerate(seq, start=1):
        if len(s.parents) == 0:
            steps.append(Axiom(s.clause))
        elif len(s.parents) == 1:
            parent = seq[s.parents[0] - 1].clause
            if not subsumes(parent, s.clause):
                raise MalformedDagError(f"step {i}: {s.clause} is not a weakening of {parent}")
            steps.append(Weaken(s.parents[0], s.clause))
        elif len(s.parents) == 2:
            c1 = seq[s.parents[0] - 1].clause
            c2 = seq[s.parents[1] - 1].clause
            try:
                pivot = find_pivot(c1, c2)
                resolvent = resolve(c1, c2, pivot)
            except (PivotAbsentError, TrivialClauseError) as exc:
                raise MalformedDagError(f"step {i}: {exc}") from exc
            if resolvent != s.clause:
                raise MalformedDagError(f"step {i}: stated clause {s.clause} != resolvent {resolvent}")
            steps.append(Resolve(s.parents[0], s.parents[1], pivot))
        else:
            raise MalformedDagError(f"step {i} has {len(s.parents)} parents")
        for j in range(1, i + 1):
            if last_use[j] == i and j != len(seq):
                steps.append(Erase(j))
    return Refutation(num_vars, tuple(steps))


def to_sequence(proof: Refutation) -> list[SequenceStep]:
    """Forget erasures, keeping the ordered clauses with their parent indices."""
    out: list[SequenceStep] = []
    clauses = replay_clauses(proof)
    k = 0
    for step in proof.steps:
        if isinstance(step, Erase):
            continue
        if isinstance(step, Axiom):
            parents: tuple[int, ...] = ()
        elif isinstance(step, Resolve):
            parents = (step.left, step.right)
        else:
            parents = (step.source,)
        out.append(SequenceStep(clauses[k], parents))
        k += 1
    return out


def sequence_space(seq: Sequence[SequenceStep]) -> int:
    """Space of a sequence-form proof: at step i, clauses j < i still feeding
    some step k >= i, plus one for the clause derived at step i."""
    last_use = [0] * (len(seq) + 1)
    for i, s in enumerate(seq, start=1):
        for p in s.parents:
            last_use[p] = i
    best = 0
    for i in range(1, len(seq) + 1):
        held = sum(1 for j in range(1, i) if last_use[j] >= i)
        best = max(best, held + 1)
    return best


def homogenize(formula: CnfFormula, proof: Refutation) -> Refutation:
    """Rewrite every resolution into the shared-context shape C|x, C|~x -> C.

    Before each non-conforming resolution the two premises are weakened to
    the common context and the scratch clauses are erased immediately after
    the inference.  Length grows at most 3x, width by at most 1, clause
    space by at most 2.
    """
    if any(isinstance(s, Weaken) for s in proof.steps):
        raise InputHasWeakeningError("input proof contains weakening steps")
    verify(formula, proof, allow_weakening=False, require_refutation=False)

    clauses = replay_clauses(proof)
    builder = ProofBuilder(proof.num_vars)
    new_index: dict[int, int] = {}
    k = 0
    for step in proof.steps:
        if isinstance(step, Erase):
            builder.erase(new_index[step.target])
            continue
        k += 1
        if isinstance(step, Axiom):
            new_index[k] = builder.axiom(step.clause)
            continue
        assert isinstance(step, Resolve)
        pivot = step.pivot
        resolvent = clauses[k - 1]
        scratch: list[int] = []
        prem: dict[int, int] = {}
        for old_idx in (step.left, step.right):
            c = clauses[old_idx - 1]
            lit = pivot if pivot in c else -pivot
            target = Clause(resolvent.lits + (lit,))
            if c == target:
                prem[old_idx] = new_index[old_idx]
            else:
                idx = builder.weaken_step(new_index[old_idx], target)
                prem[old_idx] = idx
                scratch.append(idx)
        new_index[k] = builder.resolve_steps(prem[step.left], prem[step.right], pivot)
        for idx in scratch:
            builder.erase(idx)
    return builder.build()


@dataclass(frozen=True)
class DerivationTree:
    """A tree-shaped derivation: no children = leaf, one = weakening, two = resolution."""

    clause: Clause
    children: tuple["DerivationTree", ...] = ()

    def depth(self) -> int:
        if not self.children:
            return 0
        return 1 + max(c.depth() for c in self.children)


def realize_in_space(
    tree: DerivationTree,
    builder: ProofBuilder,
    leaf_steps: Mapping[Clause, int] | None = None,
) -> int:
    """Emit a schedule for a tree derivation whose extra space is at most depth + 2.

    Deeper subtrees are evaluated first and scratch clauses are erased as
    soon as their parent is inferred.  Leaves found in ``leaf_steps`` are
    reused from memory; other leaves are downloaded (possibly repeatedly).
    Returns the builder index of the root clause, which is left live.
    """

    def emit(node: DerivationTree) -> tuple[int, bool]:
        if not node.children:
            if leaf_steps is not None and node.clause in leaf_steps:
                return leaf_steps[node.clause], False
            return builder.axiom(node.clause), True
        if len(node.children) == 1:
            src, scratch = emit(node.children[0])
            idx = builder.weaken_step(src, node.clause)
            if scratch:
                builder.erase(src)
            return idx, True
        if len(node.children) != 2:
            raise MalformedDagError("derivation tree nodes have at most two children")
        first, second = node.children
        if second.depth() > first.depth():
            first, second = second, first
        i1, s1 = emit(first)
        i2, s2 = emit(second)
        idx = builder.resolve_steps(i1, i2)
        if builder.clause_at(idx) != node.clause:
            raise MalformedDagError(
                f"tree node {node.clause} does not match resolvent {builder.clause_at(idx)}"
            )
        if s1:
            builder.erase(i1)
        if s2:
            builder.erase(i2)
        return idx, True

    idx, _ = emit(tree)
    return idx


def tolerate_subsumed_downloads(formula: CnfFormula, proof: Refutation) -> Refutation:
    """Rewrite downloads of non-axiom clauses that are weakenings of axioms.

    Import aid for traces produced by tools that download subsumed axioms:
    each such download becomes download-of-axiom, explicit weakening, and
    erasure of the axiom.  Exact downloads and all other steps are kept.
    """
    builder = ProofBuilder(proof.num_vars)
    new_index: dict[int, int] = {}
    k = 0
    for step in proof.steps:
        if isinstance(step, Erase):
            builder.erase(new_index[step.target])
            continue
        k += 1
        if isinstance(step, Axiom) and step.clause not in formula:
            donors = [a for a in formula.clauses if subsumes(a, step.clause)]
            if not donors:
                new_index[k] = builder.axiom(step.clause)  # left for verify to reject
                continue
            idx = builder.axiom(donors[0])
            widx = builder.weaken_step(idx, step.clause)
            builder.erase(idx)
            new_index[k] = widx
        elif isinstance(step, Axiom):
            new_index[k] = builder.axiom(step.clause)
        elif isinstance(step, Resolve):
            new_index[k] = builder.resolve_steps(
                new_index[step.left], new_index[step.right], step.pivot
            )
        else:
            assert isinstance(step, Weaken)
            new_index[k] = builder.weaken_step(new_index[step.source], step.clause)
    return builder.build()


def format_proof(proof: Refutation) -> str:
    lines = [f"p res {proof.num_vars}"]
    for step in proof.steps:
        if isinstance(step, Axiom):
            body = " ".join(str(a) for a in step.clause.lits)
            lines.append(f"a {body} 0" if body else "a 0")
        elif isinstance(step, Resolve):
            lines.append(f"r {step.left} {step.right} 0")
        elif isinstance(step, Weaken):
            body = " ".join(str(a) for a in step.clause.lits)
            lines.append(f"w {step.source} {body} 0" if body else f"w {step.source} 0")
        else:
            lines.append(f"e {step.target} 0")
    return "\n".join(lines) + "\n"


def parse_proof(text: str) -> Refutation:
    """Parse the trace format; resolution pivots are inferred at verification time."""
    num_vars = None
    steps: list[Step] = []
    clauses: list[Clause] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "res":
                raise ValueError(f"bad header: {line!r}")
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise ValueError("missing 'p res' header")
        kind, args = parts[0], [int(t) for t in parts[1:]]
        if not args or args[-1] != 0:
            raise ValueError(f"line not 0-terminated: {line!r}")
        args = args[:-1]
        if kind == "a":
            c = Clause(tuple(args))
            steps.append(Axiom(c))
            clauses.append(c)
        elif kind == "r":
            if len(args) != 2:
                raise ValueError(f"bad resolution line: {line!r}")
            i, j = args
            # Pivot inference is best-effort: a broken reference or premise
            # pair is kept as pivot 0 so the verifier reports it as illegal.
            pivot = 0
            derived = Clause()
            if 1 <= i <= len(clauses) and 1 <= j <= len(clauses):
                try:
                    pivot = find_pivot(clauses[i - 1], clauses[j - 1])
                    derived = resolve(clauses[i - 1], clauses[j - 1], pivot)
                except (PivotAbsentError, TrivialClauseError):
                    pass
            steps.append(Resolve(i, j, pivot))
            clauses.append(derived)
        elif kind == "w":
            if not args:
                raise ValueError(f"bad weakening line: {line!r}")
            c = Clause(tuple(args[1:]))
            steps.append(Weaken(args[0], c))
            clauses.append(c)
        elif kind == "e":
            if len(args) != 1:
                raise ValueError(f"bad erase line: {line!r}")
            steps.append(Erase(args[0]))
        else:
            raise ValueError(f"unknown step kind {kind!r}")
    if num_vars is None:
        raise ValueError("missing 'p res' header")
    return Refutation(num_vars, tuple(steps))
