"""DAG families and pebbling formulas.

Vertices are numbered 1..n in topological order with sources first, so
DIMACS output is reproducible.  Every non-source has fan-in exactly two and
there is a unique sink.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clauses import Clause, CnfFormula


@dataclass(frozen=True)
class Dag:
    """Fan-in-2 DAG given by the predecessor pair of each non-source vertex."""

    num_vertices: int
    preds: tuple[tuple[int, tuple[int, int]], ...]
    pred_map: dict[int, tuple[int, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pred_map: dict[int, tuple[int, int]] = {}
        for v, (p1, p2) in self.preds:
            if v in pred_map:
                raise ValueError(f"vertex {v} listed twice")
            if p1 == p2:
                raise ValueError(f"vertex {v} has duplicate predecessors")
            if not (1 <= p1 < v <= self.num_vertices and 1 <= p2 < v):
                raise ValueError(f"vertex {v} breaks topological numbering")
            pred_map[v] = (p1, p2)
        used = {p for ps in pred_map.values() for p in ps}
        sinks = [v for v in range(1, self.num_vertices + 1) if v not in used]
        if len(sinks) != 1:
            raise ValueError(f"expected a unique sink, found {sinks}")
        object.__setattr__(self, "preds", tuple(sorted(pred_map.items())))
        object.__setattr__(self, "pred_map", pred_map)

    @property
    def sink(self) -> int:
        used = {p for ps in self.pred_map.values() for p in ps}
        return next(v for v in range(1, self.num_vertices + 1) if v not in used)

    @property
    def sources(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.num_vertices + 1) if v not in self.pred_map)

    @property
    def num_edges(self) -> int:
        return 2 * len(self.pred_map)


def pyramid_dag(height: int) -> Dag:
    """A pyramid with ``height + 1`` layers; the apex is the sink.

    Layer i (from the apex, 0-based) has i + 1 vertices; the bottom layer
    holds the sources.  Total vertex count is (h+1)(h+2)/2.
    """
    if height < 1:
        raise ValueError("height must be >= 1")
    layers: list[list[int]] = []
    nxt = 1
    for size in range(height + 1, 0, -1):
        layers.append(list(range(nxt, nxt + size)))
        nxt += size
    preds = []
    for below, above in zip(layers, layers[1:]):
        for j, v in enumerate(above):
            preds.append((v, (below[j], below[j + 1])))
    return Dag(nxt - 1, tuple(preds))


def path_dag(length: int) -> Dag:
    """A chain of the given length where every link consumes a fresh auxiliary source.

    length 1 degenerates to a single vertex; otherwise there are 2*length - 1
    vertices: the chain start, length - 1 auxiliary sources, and the chain.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if length == 1:
        return Dag(1, ())
    preds = []
    prev = 1
    for step in range(2, length + 1):
        v = length + step - 1
        aux = step
        preds.append((v, (prev, aux)))
        prev = v
    return Dag(2 * length - 1, tuple(preds))


def pebbling_formula(dag: Dag) -> CnfFormula:
    """One variable per vertex: sources hold, pebbles propagate, the sink fails.

    Sources contribute unit clauses, each non-source v with predecessors
    u1, u2 contributes ~u1 | ~u2 | v, and the sink contributes a negated unit.
    """
    clauses: list[Clause] = []
    for s in dag.sources:
        clauses.append(Clause((s,)))
    for v, (p1, p2) in dag.preds:
        clauses.append(Clause((-p1, -p2, v)))
    clauses.append(Clause((-dag.sink,)))
    return CnfFormula(tuple(clauses), dag.num_vertices)


def format_dag(dag: Dag) -> str:
    lines = [f"p dag {dag.num_vertices}"]
    for v, (p1, p2) in dag.preds:
        lines.append(f"{v} {p1} {p2}")
    return "\n".join(lines) + "\n"


def parse_dag(text: str) -> Dag:
    num_vertices = None
    preds = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "dag":
                raise ValueError(f"bad header: {line!r}")
            num_vertices = int(parts[2])
            continue
        if num_vertices is None:
            raise ValueError("missing 'p dag' header")
        if len(parts) != 3:
            raise ValueError(f"bad vertex line: {line!r}")
        v, p1, p2 = (int(t) for t in parts)
        preds.append((v, (p1, p2)))
    if num_vertices is None:
        raise ValueError("missing 'p dag' header")
    return Dag(num_vertices, tuple(preds))
