"""Boundary expanders: certification, sampling, closure and peeling.

A bipartite graph is an (r, c)-boundary expander if every left subset U' of
size at most r has at least c * |U'| unique neighbours (right vertices with
exactly one edge into U').  Certification is by exhaustive subset
enumeration and is exponential; callers keep r small.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable

from .xor import BipartiteGraph


class PreconditionViolatedError(Exception):
    """A closure precondition or postcondition failed for the given graph."""


class NoBoundaryVertexError(Exception):
    """Peeling got stuck: the working set has an empty boundary."""


def boundary(g: BipartiteGraph, uset: Iterable[int]) -> frozenset[int]:
    """Right vertices with exactly one neighbour inside uset."""
    us = set(uset)
    count: dict[int, int] = {}
    for u in us:
        for v in g.adj[u]:
            count[v] = count.get(v, 0) + 1
    return frozenset(v for v, k in count.items() if k == 1)


def kernel(g: BipartiteGraph, vset: Iterable[int]) -> frozenset[int]:
    """Left vertices whose entire neighbourhood lies inside vset."""
    vs = set(vset)
    return frozenset(u for u in g.left if g.adj[u] <= vs)


def remove(g: BipartiteGraph, vset: Iterable[int]) -> BipartiteGraph:
    """Delete vset on the right, then the left vertices this isolates.

    Vertex identifiers are retained, so the result is a subgraph view.
    """
    vs = set(vset)
    dead = kernel(g, vs)
    left = [u for u in g.left if u not in dead]
    right = [v for v in g.right if v not in vs]
    adj = {u: g.adj[u] - vs for u in left}
    return BipartiteGraph(left, right, adj)


@dataclass(frozen=True)
class ExpansionCertificate:
    passed: bool
    r: int
    c: float
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out: dict = {"pass": self.passed, "r": self.r, "c": self.c}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _expansion_violation(g: BipartiteGraph, r: int, c: float) -> tuple[int, ...] | None:
    """First (by size, then lexicographic) left subset violating expansion."""
    limit = min(r, len(g.left))
    for size in range(1, limit + 1):
        for combo in itertools.combinations(g.left, size):
            if len(boundary(g, combo)) < c * size:
                return combo
    return None


def is_boundary_expander(
    g: BipartiteGraph, r: int, c: float, *, subset_guard: int = 20
) -> ExpansionCertificate:
    """Exhaustively certify (r, c)-boundary expansion, caching per (r, c)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if min(r, len(g.left)) > subset_guard:
        raise ValueError(
            f"refusing to enumerate subsets of size up to {min(r, len(g.left))}; "
            f"raise subset_guard to override"
        )
    key = (r, c)
    if key in g._cert_cache:
        return g._cert_cache[key]
    witness = _expansion_violation(g, r, c)
    cert = ExpansionCertificate(witness is None, r, c, witness)
    g._cert_cache[key] = cert
    return cert


def sample_expander(left_size: int, right_size: int, degree: int, seed: int) -> BipartiteGraph:
    """For each left vertex draw ``degree`` right neighbours uniformly with
    repetition, then deduplicate; realized degrees may be smaller."""
    if left_size < 1 or right_size < 1 or degree < 1:
        raise ValueError("sizes and degree must be positive")
    rng = random.Random(seed)
    neighbours = []
    for _ in range(left_size):
        draws = [rng.randrange(1, right_size + 1) for _ in range(degree)]
        neighbours.append(tuple(sorted(set(draws))))
    return BipartiteGraph.dense(left_size, right_size, neighbours)


@dataclass(frozen=True)
class ExpanderParams:
    """Concrete parameter tuple tying the condensation contract to instances.

    ``from_contract`` derives everything from (k, eps, ell, n):
    delta = eps/(10k), d0 = 5/eps, d = floor(ell/(2k)), r = floor(2 ell log2 n),
    N = floor(n^(delta*ell)), lam = eps/2 - 1/d0 - delta, n0 = 3^(2/lam).
    """

    k: int
    eps: float
    ell: int
    n: int
    delta: float
    d0: float
    d: int
    r: int
    N: int
    n0: float

    @classmethod
    def from_contract(cls, k: int, eps: float, ell: int, n: int) -> "ExpanderParams":
        if k < 1 or not (0 < eps <= 0.5):
            raise ValueError("need k >= 1 and 0 < eps <= 1/2")
        if not k <= ell:
            raise ValueError("need k <= ell")
        if ell > n ** (0.5 - eps):
            raise ValueError("need ell <= n^(1/2 - eps)")
        delta = eps / (10 * k)
        d0 = 5.0 / eps
        lam = eps / 2 - 1 / d0 - delta
        if lam <= 0:
            raise ValueError("lambda = eps/2 - 1/d0 - delta must be positive")
        return cls(
            k=k,
            eps=eps,
            ell=ell,
            n=n,
            delta=delta,
            d0=d0,
            d=ell // (2 * k),
            r=math.floor(2 * ell * math.log2(n)),
            N=math.floor(n ** (delta * ell)),
            n0=3.0 ** (2 / lam),
        )

    def contract_violations(self) -> list[str]:
        """Asymptotic preconditions that fail at these concrete sizes."""
        out = []
        if self.delta + 1 / self.d0 >= self.eps / 2:
            out.append("delta + 1/d0 >= eps/2")
        if self.n < self.n0:
            out.append(f"n < n0 = {self.n0:.3g}")
        if self.r > math.sqrt(self.n):
            out.append("r > sqrt(n)")
        if not (self.d <= self.ell <= self.n ** (0.5 - self.eps)):
            out.append("degree/width window violated")
        return out

    def sample(self, seed: int) -> BipartiteGraph:
        return sample_expander(self.N, self.n, self.d, seed)


def closure(
    g: BipartiteGraph,
    vset: Iterable[int],
    r: int,
    *,
    certificate: ExpansionCertificate | None = None,
    check_postconditions: bool = True,
) -> frozenset[int]:
    """Grow vset to a closed right set whose removal leaves an (r/2, 1)-expander.

    Iteratively removes the full neighbourhood of any left set violating
    (r/2, 1)-expansion in the current subgraph (smallest such set first,
    lexicographically) until none is left.  For an (r, 2)-expander the result
    is guaranteed to satisfy |Ker(closure)| <= |vset|; both postconditions
    are verified here unless disabled.
    """
    vs = frozenset(vset)
    if 2 * len(vs) > r:
        raise PreconditionViolatedError(f"|vset| = {len(vs)} exceeds r/2 = {r / 2}")
    if certificate is not None and not (certificate.passed and certificate.r == r and certificate.c == 2):
        raise PreconditionViolatedError("graph is not certified as an (r, 2)-expander")
    half = r // 2
    current = vs
    while True:
        sub = remove(g, current)
        violator = _expansion_violation(sub, half, 1.0)
        if violator is None:
            break
        grown = current | g.neighbourhood(violator)
        if grown == current:
            raise PreconditionViolatedError("closure iteration stalled")
        current = grown
    if check_postconditions:
        if len(kernel(g, current)) > len(vs):
            raise PreconditionViolatedError(
                f"closure kernel has {len(kernel(g, current))} vertices > |vset| = {len(vs)}"
            )
        if _expansion_violation(remove(g, current), half, 1.0) is not None:
            raise PreconditionViolatedError("closure subgraph is not an (r/2, 1)-expander")
    return current


def peel_order(g: BipartiteGraph, uset: Iterable[int]) -> tuple[tuple[int, int], ...]:
    """Order uset as u_1..u_l with matched v_i in N(u_i) outside N({u_1..u_{i-1}}).

    Built back to front: repeatedly match the smallest boundary vertex to its
    unique neighbour and peel that neighbour off.
    """
    working = set(uset)
    for u in working:
        if u not in g.adj:
            raise ValueError(f"unknown left vertex {u}")
    order: list[tuple[int, int]] = []
    while working:
        bnd = boundary(g, working)
        if not bnd:
            raise NoBoundaryVertexError(
                f"no unique neighbour for {sorted(working)}; expansion precondition violated"
            )
        v = min(bnd)
        (u,) = [u for u in working if v in g.adj[u]]
        order.append((u, v))
        working.remove(u)
    return tuple(reversed(order))
