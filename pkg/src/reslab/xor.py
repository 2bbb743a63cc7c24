"""XOR substitution of CNF formulas over an explicit bipartite graph.

Each original variable u is replaced by the exclusive or of its right-hand
neighbours N(u); neighbourhoods may overlap (recycled variables).  A clause
is substituted literal by literal and expanded back to CNF by taking one
clause from each literal's CNF block, pruning trivial combinations.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from .clauses import Clause, CnfFormula, TrivialClauseError


class IsolatedLeftVertexError(Exception):
    """A substituted variable has no right-hand neighbours."""


class UncoveredVariableError(Exception):
    """The formula uses a variable outside the graph's left side."""


class BipartiteGraph:
    """Bipartite graph with named left/right vertices and left-to-right adjacency.

    Subgraphs produced by vertex deletion keep the original identifiers, so
    ``left`` and ``right`` need not be contiguous ranges.
    """

    __slots__ = ("left", "right", "adj", "_cert_cache")

    def __init__(self, left: Iterable[int], right: Iterable[int], adj: Mapping[int, Iterable[int]]):
        self.left = tuple(sorted(set(left)))
        self.right = tuple(sorted(set(right)))
        right_set = set(self.right)
        fixed: dict[int, frozenset[int]] = {}
        for u in self.left:
            ns = frozenset(adj.get(u, ()))
            if not ns <= right_set:
                raise ValueError(f"left vertex {u} lists neighbours outside the right side")
            fixed[u] = ns
        for u in adj:
            if u not in fixed:
                raise ValueError(f"adjacency mentions unknown left vertex {u}")
        self.adj = fixed
        self._cert_cache: dict = {}

    @classmethod
    def dense(cls, left_size: int, right_size: int, neighbours: Sequence[Iterable[int]]) -> "BipartiteGraph":
        """Graph on left 1..N, right 1..n with one neighbour list per left vertex."""
        if len(neighbours) != left_size:
            raise ValueError("need exactly one neighbour list per left vertex")
        adj = {u: tuple(ns) for u, ns in zip(range(1, left_size + 1), neighbours)}
        return cls(range(1, left_size + 1), range(1, right_size + 1), adj)

    @property
    def left_size(self) -> int:
        return len(self.left)

    @property
    def right_size(self) -> int:
        return len(self.right)

    @property
    def left_degree(self) -> int:
        return max((len(ns) for ns in self.adj.values()), default=0)

    def neighbours(self, u: int) -> frozenset[int]:
        return self.adj[u]

    def neighbourhood(self, uset: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for u in uset:
            out |= self.adj[u]
        return frozenset(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.left == other.left and self.right == other.right and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.left, self.right, tuple(sorted((u, tuple(sorted(ns))) for u, ns in self.adj.items()))))

    def __repr__(self) -> str:
        return f"BipartiteGraph(left={self.left_size}, right={self.right_size}, d={self.left_degree})"


def xorify_literal(lit: int, g: BipartiteGraph) -> tuple[Clause, ...]:
    """CNF of the XOR block for one literal.

    For a positive literal the block consists of all full-support clauses
    over N(u) with an even number of negations (they exclude exactly the
    even-parity assignments); for a negative literal, an odd number.
    """
    u = abs(lit)
    if u not in g.adj:
        raise UncoveredVariableError(f"variable {u} is not a left vertex")
    ns = sorted(g.adj[u])
    if not ns:
        raise IsolatedLeftVertexError(f"variable {u} has no neighbours")
    want_odd = lit < 0
    out = []
    for signs in itertools.product((1, -1), repeat=len(ns)):
        negs = signs.count(-1)
        if (negs % 2 == 1) == want_odd:
            out.append(Clause(tuple(s * v for s, v in zip(signs, ns))))
    return tuple(out)


def xorify_clause(clause: Clause, g: BipartiteGraph) -> tuple[Clause, ...]:
    """Substituted clause, expanded to CNF with trivial clauses pruned."""
    blocks = [xorify_literal(a, g) for a in clause.lits]
    if not blocks:
        return (Clause(),)
    out: list[Clause] = []
    seen: set[Clause] = set()
    for combo in itertools.product(*blocks):
        lits: list[int] = []
        for c in combo:
            lits.extend(c.lits)
        try:
            merged = Clause(tuple(lits))
        except TrivialClauseError:
            continue
        if merged not in seen:
            seen.add(merged)
            out.append(merged)
    return tuple(out)


def xorify_with_provenance(f: CnfFormula, g: BipartiteGraph) -> tuple[CnfFormula, dict[Clause, Clause]]:
    """XORify a formula, also mapping each output clause to one source axiom."""
    for v in sorted(f.variables()):
        if v not in g.adj:
            raise UncoveredVariableError(f"formula variable {v} is not a left vertex")
        if not g.adj[v]:
            raise IsolatedLeftVertexError(f"formula variable {v} has no neighbours")
    provenance: dict[Clause, Clause] = {}
    out: list[Clause] = []
    for axiom in f.clauses:
        for c in xorify_clause(axiom, g):
            if c not in provenance:
                provenance[c] = axiom
                out.append(c)
    num_vars = max(g.right, default=0)
    return CnfFormula(tuple(out), num_vars), provenance


def xorify(f: CnfFormula, g: BipartiteGraph) -> CnfFormula:
    return xorify_with_provenance(f, g)[0]


def disjoint_xor_graph(num_vars: int, arity: int) -> BipartiteGraph:
    """Classical substitution pattern: left vertex i gets fresh right vertices
    (i-1)*arity + 1 .. i*arity."""
    if arity < 1:
        raise ValueError("arity must be >= 1")
    neighbours = [range((i - 1) * arity + 1, i * arity + 1) for i in range(1, num_vars + 1)]
    return BipartiteGraph.dense(num_vars, num_vars * arity, neighbours)


def matching_graph(num_vars: int, right_size: int | None = None) -> BipartiteGraph:
    """Degree-1 identity substitution, optionally padded with isolated right vertices."""
    if right_size is None:
        right_size = num_vars
    if right_size < num_vars:
        raise ValueError("right side too small for a matching")
    return BipartiteGraph.dense(num_vars, right_size, [(i,) for i in range(1, num_vars + 1)])


def format_bipartite(g: BipartiteGraph) -> str:
    """Dense file format: ``p bip <N> <n>`` then one 0-terminated line per left vertex."""
    if g.left != tuple(range(1, g.left_size + 1)) or g.right != tuple(range(1, g.right_size + 1)):
        raise ValueError("only dense graphs (contiguous vertex ids) can be serialized")
    lines = [f"p bip {g.left_size} {g.right_size}"]
    for u in g.left:
        ns = " ".join(str(v) for v in sorted(g.adj[u]))
        lines.append(f"{u} {ns} 0" if ns else f"{u} 0")
    return "\n".join(lines) + "\n"


def parse_bipartite(text: str) -> BipartiteGraph:
    left_size = right_size = None
    adj: dict[int, tuple[int, ...]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "bip":
                raise ValueError(f"bad header: {line!r}")
            left_size, right_size = int(parts[2]), int(parts[3])
            continue
        if left_size is None or right_size is None:
            raise ValueError("missing 'p bip' header")
        nums = [int(t) for t in parts]
        if len(nums) < 2 or nums[-1] != 0:
            raise ValueError(f"bad adjacency line: {line!r}")
        adj[nums[0]] = tuple(nums[1:-1])
    if left_size is None or right_size is None:
        raise ValueError("missing 'p bip' header")
    return BipartiteGraph(range(1, left_size + 1), range(1, right_size + 1), adj)
