"""Independent brute-force ground truth for tiny formulas.

Three exact oracles: minimal refutation width (width-bounded saturation),
minimal clause space (breadth-first search over configurations, optionally
width-capped) and minimal derivation depth (shortest-derivation labelling).
All searches honour an explicit budget and answer Inconclusive rather than
guess when it runs out.  Internally clauses are (positive, negative) int
bitmask pairs.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import dataclass

from .clauses import Clause, CnfFormula
from .proofs import (
    ProofBuilder,
    Refutation,
    SequenceStep,
    to_configuration_style,
)

Key = tuple[int, int]

OK = "ok"
INCONCLUSIVE = "inconclusive"
NO_REFUTATION = "no-refutation"


@dataclass(frozen=True)
class SearchBudget:
    max_width: int = 16
    max_space: int = 8
    max_states: int = 2_000_000
    time_limit: float = 600.0

    def __post_init__(self) -> None:
        if min(self.max_width, self.max_space, self.max_states) < 1 or self.time_limit <= 0:
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class OracleResult:
    measure: str
    value: int | None
    status: str
    witness: Refutation | None = None

    def to_json(self, witness_path: str | None = None) -> dict:
        out: dict = {"measure": self.measure, "status": self.status}
        out["value"] = self.value if self.status == OK else None
        if witness_path is not None:
            out["witness"] = witness_path
        return out


def _to_key(c: Clause) -> Key:
    pos = neg = 0
    for a in c.lits:
        if a > 0:
            pos |= 1 << (a - 1)
        else:
            neg |= 1 << (-a - 1)
    return pos, neg


def _from_key(key: Key) -> Clause:
    pos, neg = key
    lits = [i + 1 for i in range(pos.bit_length()) if pos >> i & 1]
    lits += [-(i + 1) for i in range(neg.bit_length()) if neg >> i & 1]
    return Clause(tuple(lits))


def _key_width(key: Key) -> int:
    return key[0].bit_count() + key[1].bit_count()


def _resolve_keys(a: Key, b: Key) -> tuple[Key, int] | None:
    """Resolvent and pivot bit index, or None if there is no unique clash."""
    clash = (a[0] & b[1]) | (a[1] & b[0])
    if clash == 0 or clash & (clash - 1):
        return None
    pos = (a[0] | b[0]) & ~clash
    neg = (a[1] | b[1]) & ~clash
    return (pos, neg), clash.bit_length() - 1


def satisfying_assignment(f: CnfFormula, *, guard: int = 22) -> dict[int, int] | None:
    """Exhaustive satisfiability check for formulas with few variables."""
    if f.num_vars > guard:
        raise ValueError(f"too many variables for exhaustive search ({f.num_vars} > {guard})")
    keys = [_to_key(c) for c in f.clauses]
    full = (1 << f.num_vars) - 1
    for m in range(1 << f.num_vars):
        if all(pos & m or neg & (~m & full) for pos, neg in keys):
            return {v: m >> (v - 1) & 1 for v in range(1, f.num_vars + 1)}
    return None


class _BudgetClock:
    def __init__(self, budget: SearchBudget):
        self.deadline = time.monotonic() + budget.time_limit
        self.max_states = budget.max_states
        self.used = 0

    def spend(self, n: int = 1) -> bool:
        """Account n units; False once the budget is exhausted."""
        self.used += n
        if self.used > self.max_states:
            return False
        if self.used % 4096 == 0 and time.monotonic() > self.deadline:
            return False
        return True


def _subsumed(key: Key, known: set[Key]) -> bool:
    """Forward subsumption probe: some known clause is a subset of key.

    Enumerates the subsets of key's literal set, which is cheap at the small
    widths these oracles run at.
    """
    pos, neg = key
    pos_bits = [1 << i for i in range(pos.bit_length()) if pos >> i & 1]
    neg_bits = [1 << i for i in range(neg.bit_length()) if neg >> i & 1]
    bits = [(b, 0) for b in pos_bits] + [(0, b) for b in neg_bits]
    for size in range(len(bits) + 1):
        for combo in itertools.combinations(bits, size):
            p = n = 0
            for bp, bn in combo:
                p |= bp
                n |= bn
            if (p, n) in known:
                return True
    return False


def _saturate_width(
    f: CnfFormula, cap: int, clock: _BudgetClock
) -> tuple[bool, dict[Key, tuple[Key, Key, int] | None], bool]:
    """Close the width-capped axioms under width-capped resolution.

    Keeps only clauses not subsumed by an existing one, which preserves
    derivability of the empty clause at every width.  Returns (empty clause
    found, parent map, search completed within budget).
    """
    parents: dict[Key, tuple[Key, Key, int] | None] = {}
    stamp: dict[Key, int] = {}
    by_literal: dict[tuple[int, int], list[Key]] = {}
    queue: deque[Key] = deque()

    def admit(key: Key, parent) -> bool:
        if key in parents or _subsumed(key, parents.keys()):
            return False
        parents[key] = parent
        stamp[key] = len(stamp)
        queue.append(key)
        pos, neg = key
        for i in range(pos.bit_length()):
            if pos >> i & 1:
                by_literal.setdefault((i, 0), []).append(key)
        for i in range(neg.bit_length()):
            if neg >> i & 1:
                by_literal.setdefault((i, 1), []).append(key)
        return key == (0, 0)

    for c in f.clauses:
        key = _to_key(c)
        if _key_width(key) <= cap:
            if admit(key, None):
                return True, parents, True
    while queue:
        key = queue.popleft()
        my_stamp = stamp[key]
        pos, neg = key
        partners: list[Key] = []
        for i in range(pos.bit_length()):
            if pos >> i & 1:
                partners.extend(by_literal.get((i, 1), ()))
        for i in range(neg.bit_length()):
            if neg >> i & 1:
                partners.extend(by_literal.get((i, 0), ()))
        for other in partners:
            # Pair each clause only against earlier admissions; later ones
            # will pick this clause up when they leave the queue.
            if stamp[other] >= my_stamp:
                continue
            if not clock.spend():
                return False, parents, False
            res = _resolve_keys(key, other)
            if res is None:
                continue
            new, pivot_bit = res
            if _key_width(new) > cap:
                continue
            if admit(new, (key, other, pivot_bit + 1)):
                return True, parents, True
    return False, parents, True


def _witness_from_parents(
    f: CnfFormula, parents: dict[Key, tuple[Key, Key, int] | None], target: Key
) -> Refutation:
    order: list[Key] = []
    index: dict[Key, int] = {}

    def visit(key: Key) -> int:
        if key in index:
            return index[key]
        parent = parents[key]
        if parent is not None:
            visit(parent[0])
            visit(parent[1])
        order.append(key)
        index[key] = len(order)
        return index[key]

    visit(target)
    seq = []
    for key in order:
        parent = parents[key]
        if parent is None:
            seq.append(SequenceStep(_from_key(key)))
        else:
            seq.append(SequenceStep(_from_key(key), (index[parent[0]], index[parent[1]])))
    return to_configuration_style(seq, f.num_vars)


def min_width(f: CnfFormula, budget: SearchBudget = SearchBudget()) -> OracleResult:
    """Least w such that resolution restricted to width <= w derives the empty clause."""
    cap = min(budget.max_width, f.num_vars)
    clock = _BudgetClock(budget)
    for w in range(cap + 1):
        found, parents, complete = _saturate_width(f, w, clock)
        if found:
            return OracleResult("width", w, OK, _witness_from_parents(f, parents, (0, 0)))
        if not complete:
            return OracleResult("width", None, INCONCLUSIVE)
    if cap == f.num_vars:
        return OracleResult("width", None, NO_REFUTATION)
    return OracleResult("width", None, INCONCLUSIVE)


def _space_successors(state: frozenset[Key], axioms: list[Key], cap: int, s: int):
    for key in axioms:
        if key not in state and len(state) < s:
            yield ("a", key), state | {key}
    pairs = itertools.combinations(sorted(state), 2)
    for a, b in pairs:
        res = _resolve_keys(a, b)
        if res is None:
            continue
        new, _ = res
        if _key_width(new) > cap or new in state or len(state) >= s:
            continue
        yield ("r", a, b, new), state | {new}
    for key in state:
        yield ("e", key), state - {key}


def _space_reachable_bfs(
    f: CnfFormula, s: int, cap: int, clock: _BudgetClock
) -> tuple[frozenset[Key] | None, dict, bool]:
    """BFS over configurations of size <= s; returns (goal state, parents, completed)."""
    axioms = sorted({k for k in (_to_key(c) for c in f.clauses) if _key_width(k) <= cap})
    start: frozenset[Key] = frozenset()
    parent: dict[frozenset[Key], tuple[frozenset[Key], tuple] | None] = {start: None}
    queue: deque[frozenset[Key]] = deque([start])
    while queue:
        state = queue.popleft()
        if (0, 0) in state:
            return state, parent, True
        for move, nxt in _space_successors(state, axioms, cap, s):
            if nxt in parent:
                continue
            if not clock.spend():
                return None, parent, False
            parent[nxt] = (state, move)
            queue.append(nxt)
    return None, parent, True


def _space_reachable_dfs(f: CnfFormula, s: int, cap: int, clock: _BudgetClock) -> bool | None:
    """Independent depth-first check that space s suffices; None when the budget dies."""
    axioms = sorted({k for k in (_to_key(c) for c in f.clauses) if _key_width(k) <= cap})
    seen: set[frozenset[Key]] = set()
    stack: list[frozenset[Key]] = [frozenset()]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        if (0, 0) in state:
            return True
        successors = [nxt for _, nxt in _space_successors(state, axioms, cap, s)]
        for nxt in reversed(successors):
            if nxt not in seen:
                if not clock.spend():
                    return None
                stack.append(nxt)
    return False


def _witness_from_space_path(
    f: CnfFormula, goal: frozenset[Key], parent: dict
) -> Refutation:
    moves = []
    cursor = goal
    while parent[cursor] is not None:
        prev, move = parent[cursor]
        moves.append(move)
        cursor = prev
    moves.reverse()
    builder = ProofBuilder(f.num_vars)
    step_of: dict[Key, int] = {}
    for move in moves:
        if move[0] == "a":
            step_of[move[1]] = builder.axiom(_from_key(move[1]))
        elif move[0] == "r":
            _, a, b, new = move
            step_of[new] = builder.resolve_steps(step_of[a], step_of[b])
        else:
            builder.erase(step_of.pop(move[1]))
    return builder.build()


def min_space(
    f: CnfFormula,
    width_cap: int | None = None,
    budget: SearchBudget = SearchBudget(),
) -> OracleResult:
    """Least s admitting a configuration-style refutation within space s
    (and clause width within width_cap, when given)."""
    cap = f.num_vars if width_cap is None else min(width_cap, f.num_vars)
    top = min(budget.max_space, f.num_vars + 2)
    clock = _BudgetClock(budget)
    for s in range(1, top + 1):
        goal, parent, complete = _space_reachable_bfs(f, s, cap, clock)
        if goal is not None:
            return OracleResult("space", s, OK, _witness_from_space_path(f, goal, parent))
        if not complete:
            return OracleResult("space", None, INCONCLUSIVE)
    if top == f.num_vars + 2 and cap == f.num_vars:
        return OracleResult("space", None, NO_REFUTATION)
    return OracleResult("space", None, INCONCLUSIVE)


def min_space_dfs(
    f: CnfFormula,
    width_cap: int | None = None,
    budget: SearchBudget = SearchBudget(),
) -> OracleResult:
    """Second space oracle used to cross-check the BFS implementation."""
    cap = f.num_vars if width_cap is None else min(width_cap, f.num_vars)
    top = min(budget.max_space, f.num_vars + 2)
    clock = _BudgetClock(budget)
    for s in range(1, top + 1):
        reachable = _space_reachable_dfs(f, s, cap, clock)
        if reachable is None:
            return OracleResult("space", None, INCONCLUSIVE)
        if reachable:
            return OracleResult("space", s, OK)
    if top == f.num_vars + 2 and cap == f.num_vars:
        return OracleResult("space", None, NO_REFUTATION)
    return OracleResult("space", None, INCONCLUSIVE)


def min_depth(
    f: CnfFormula,
    width_cap: int | None = None,
    budget: SearchBudget = SearchBudget(),
) -> OracleResult:
    """Minimal derivation depth of the empty clause under a width cap.

    Depth labels (axioms 0, resolvent 1 + max of premises) are settled in
    nondecreasing order, so the first label assigned to a clause is final.
    """
    cap = f.num_vars if width_cap is None else min(width_cap, f.num_vars)
    clock = _BudgetClock(budget)
    axioms = sorted({k for k in (_to_key(c) for c in f.clauses) if _key_width(k) <= cap})
    settled: dict[Key, int] = {}
    parents: dict[Key, tuple[Key, Key, int] | None] = {}
    heap: list[tuple[int, Key, tuple[Key, Key, int] | None]] = []
    for key in axioms:
        heapq.heappush(heap, (0, key, None))
    complete = True
    while heap:
        depth, key, parent = heapq.heappop(heap)
        if key in settled:
            continue
        settled[key] = depth
        parents[key] = parent
        if key == (0, 0):
            break
        for other, other_depth in list(settled.items()):
            if other == key:
                continue
            if not clock.spend():
                complete = False
                break
            res = _resolve_keys(key, other)
            if res is None:
                continue
            new, pivot_bit = res
            if _key_width(new) > cap or new in settled:
                continue
            heapq.heappush(heap, (1 + max(depth, other_depth), new, (key, other, pivot_bit + 1)))
        if not complete:
            break
    if (0, 0) in settled:
        witness = _witness_from_parents(f, parents, (0, 0))
        return OracleResult("depth", settled[(0, 0)], OK, witness)
    if not complete:
        return OracleResult("depth", None, INCONCLUSIVE)
    if cap == f.num_vars:
        return OracleResult("depth", None, NO_REFUTATION)
    return OracleResult("depth", None, INCONCLUSIVE)
