"""Hardness condensation: turn a small-width refutation of the XORified
formula F[G] into a width- and space-comparable refutation of F.

The transform keeps, for every clause C held by the input proof, the set of
original-variable clauses over Ker(closure(Vars(C))) that are simultaneously
falsifiable with C.  Downloads become download-plus-weakening of original
axioms, and homogeneous resolutions and weakenings are replayed by short
peeling ladders scheduled in small space.  Simultaneous falsifiability is an
affine feasibility question over GF(2) and is decided exactly.
"""

from __future__ import annotations

import itertools

from .clauses import Clause, CnfFormula, subsumes
from .expanders import (
    ExpansionCertificate,
    closure,
    kernel,
    peel_order,
    remove,
)
from .gf2 import ParitySystem
from .proofs import (
    Axiom,
    DerivationTree,
    Erase,
    ProofBuilder,
    Refutation,
    Resolve,
    Weaken,
    realize_in_space,
    replay_clauses,
    verify,
)
from .xor import BipartiteGraph, xorify_with_provenance


class NotHomogeneousError(Exception):
    """The input proof contains a resolution step outside the C|x, C|~x shape."""


class WidthExceedsRadiusError(Exception):
    """A clause is too wide for the expander's certified radius (need 2w <= r)."""


class InternalInvariantError(Exception):
    """A clause required by the construction is missing; signals a bug."""


def simultaneously_falsifiable(
    d_clause: Clause, c_clause: Clause, graph: BipartiteGraph
) -> tuple[bool, dict[int, int] | None]:
    """Decide whether one assignment falsifies both D[G] and C.

    Falsifying C forces each of its literals false (unit constraints);
    falsifying D[G] forces, for each literal over u in D, the parity of
    alpha over N(u) to 0 for a positive and 1 for a negative literal.
    Returns a total witness assignment over the right vertices when feasible.
    """
    system = ParitySystem()
    for a in c_clause.lits:
        system.require_value(abs(a), 0 if a > 0 else 1)
    for a in d_clause.lits:
        u = abs(a)
        if u not in graph.adj:
            raise ValueError(f"variable {u} is not a left vertex")
        system.require_parity(graph.adj[u], 0 if a > 0 else 1)
    solution = system.solve()
    if solution is None:
        return False, None
    return True, {v: solution.get(v, 0) for v in graph.right}


class CondensationContext:
    """Caches closures, kernels and inverse images for one (F, G, r) run."""

    def __init__(
        self,
        formula: CnfFormula,
        graph: BipartiteGraph,
        radius: int,
        certificate: ExpansionCertificate | None = None,
    ):
        self.formula = formula
        self.graph = graph
        self.radius = radius
        self.certificate = certificate
        self.xorified, self.provenance = xorify_with_provenance(formula, graph)
        self._closures: dict[frozenset[int], frozenset[int]] = {}
        self._kernels: dict[frozenset[int], frozenset[int]] = {}
        self._subgraphs: dict[frozenset[int], BipartiteGraph] = {}
        self._inverse: dict[Clause, tuple[Clause, ...]] = {}

    def closure_of(self, right_vars: frozenset[int]) -> frozenset[int]:
        vs = frozenset(right_vars)
        if vs not in self._closures:
            self._closures[vs] = closure(
                self.graph, vs, self.radius, certificate=self.certificate
            )
        return self._closures[vs]

    def kernel_of(self, right_vars: frozenset[int]) -> frozenset[int]:
        vs = frozenset(right_vars)
        if vs not in self._kernels:
            self._kernels[vs] = kernel(self.graph, self.closure_of(vs))
        return self._kernels[vs]

    def subgraph_off(self, right_vars: frozenset[int]) -> BipartiteGraph:
        """The expander with the closure of right_vars (and its kernel) removed."""
        vs = frozenset(right_vars)
        if vs not in self._subgraphs:
            self._subgraphs[vs] = remove(self.graph, self.closure_of(vs))
        return self._subgraphs[vs]

    def simultaneously_falsifiable(self, d_clause: Clause, c_clause: Clause):
        return simultaneously_falsifiable(d_clause, c_clause, self.graph)

    def sign_patterns(self, variables: frozenset[int], c_clause: Clause) -> tuple[Clause, ...]:
        """All total sign patterns over ``variables`` simultaneously falsifiable with C."""
        ordered = sorted(variables)
        out = []
        for signs in itertools.product((1, -1), repeat=len(ordered)):
            d = Clause(tuple(s * u for s, u in zip(signs, ordered)))
            ok, _ = simultaneously_falsifiable(d, c_clause, self.graph)
            if ok:
                out.append(d)
        return tuple(out)

    def inverse_image(self, c_clause: Clause) -> tuple[Clause, ...]:
        """G^{-1}(C): sign patterns over Ker(closure(Vars(C))) compatible with
        falsifying C; at most 2^width(C) clauses of width at most width(C)."""
        if c_clause not in self._inverse:
            vars_c = c_clause.variables()
            if 2 * len(vars_c) > self.radius:
                raise WidthExceedsRadiusError(
                    f"width {len(vars_c)} exceeds r/2 = {self.radius / 2}"
                )
            self._inverse[c_clause] = self.sign_patterns(self.kernel_of(vars_c), c_clause)
        return self._inverse[c_clause]


def inverse_image(c_clause: Clause, ctx: CondensationContext) -> tuple[Clause, ...]:
    return ctx.inverse_image(c_clause)


def condense(
    formula: CnfFormula,
    graph: BipartiteGraph,
    proof: Refutation,
    *,
    radius: int,
    certificate: ExpansionCertificate | None = None,
) -> tuple[Refutation, dict]:
    """Transform a homogeneous refutation of xorify(formula, graph) into a
    verified homogeneous refutation of the original formula.

    The output has width at most w and clause space at most
    2^w * space(input) + w + 3, where w is the input width (requires 2w <= r).
    Returns the refutation and a JSON-able report of all measured quantities.
    """
    ctx = CondensationContext(formula, graph, radius, certificate)
    return condense_with_context(ctx, proof)


def condense_with_context(ctx: CondensationContext, proof: Refutation) -> tuple[Refutation, dict]:
    in_measures = verify(ctx.xorified, proof, allow_weakening=True, require_refutation=True)
    if not in_measures.homogeneous:
        raise NotHomogeneousError("input refutation must use only homogeneous resolutions")
    w = in_measures.width
    if 2 * w > ctx.radius:
        raise WidthExceedsRadiusError(f"proof width {w} exceeds r/2 = {ctx.radius / 2}")

    clauses = replay_clauses(proof)
    builder = ProofBuilder(ctx.formula.num_vars)
    live_count: dict[Clause, int] = {}
    need: dict[Clause, int] = {}
    out_step: dict[Clause, int] = {}
    stats = {"ladders": 0, "max_ladder_depth": 0}

    def derive_by_axiom(c_clause: Clause, missing: list[Clause]) -> None:
        axiom = ctx.provenance.get(c_clause)
        if axiom is None:
            raise InternalInvariantError(f"downloaded clause {c_clause} has no source axiom")
        for d in missing:
            if not subsumes(axiom, d):
                raise InternalInvariantError(f"axiom {axiom} does not subsume {d}")
            idx = builder.axiom(axiom)
            if axiom != d:
                widx = builder.weaken_step(idx, d)
                builder.erase(idx)
                idx = widx
            out_step[d] = idx

    def derive_by_ladder(c_clause: Clause, missing: list[Clause], big_kernel: frozenset[int]) -> None:
        """Peeling ladder of Claims 1/2: derive members of G^{-1}(C) from live
        clauses over ``big_kernel`` (the kernel on the premise side)."""
        ker_c = ctx.kernel_of(c_clause.variables())
        sub = ctx.subgraph_off(c_clause.variables())
        peel_set = big_kernel - ker_c
        base = ker_c & big_kernel
        order = [u for u, _ in peel_order(sub, peel_set)]
        depth = len(order)

        def check_member(d: Clause) -> None:
            ok, _ = ctx.simultaneously_falsifiable(d, c_clause)
            if not ok:
                raise InternalInvariantError(f"ladder clause {d} fails falsifiability with {c_clause}")

        def build_tree(d: Clause, level: int) -> DerivationTree:
            if level == depth:
                if d not in out_step:
                    raise InternalInvariantError(f"ladder leaf {d} is not in memory")
                return DerivationTree(d)
            u = order[level]
            children = []
            for lit in (u, -u):
                child = Clause(d.lits + (lit,))
                check_member(child)
                children.append(build_tree(child, level + 1))
            return DerivationTree(d, tuple(children))

        for d_star in missing:
            d0 = d_star.restrict_to(base)
            check_member(d0)
            tree = build_tree(d0, 0)
            ladder_depth = depth
            if not tree.children:
                # Empty peel set: the target is a weakening of a live top-rung
                # clause, which stays in memory and must not be erased.
                src = out_step[d0]
                if d0 == d_star:
                    raise InternalInvariantError(f"{d_star} was already in memory")
                idx = builder.weaken_step(src, d_star)
                ladder_depth += 1
            else:
                idx = realize_in_space(tree, builder, leaf_steps=out_step)
                if d0 != d_star:
                    widx = builder.weaken_step(idx, d_star)
                    builder.erase(idx)
                    idx = widx
                    ladder_depth += 1
            out_step[d_star] = idx
            stats["ladders"] += 1
            stats["max_ladder_depth"] = max(stats["max_ladder_depth"], ladder_depth)

    def acquire(c_clause: Clause, derive) -> None:
        if live_count.get(c_clause, 0) == 0:
            targets = ctx.inverse_image(c_clause)
            missing = [d for d in targets if need.get(d, 0) == 0]
            derive(missing)
            for d in targets:
                need[d] = need.get(d, 0) + 1
        live_count[c_clause] = live_count.get(c_clause, 0) + 1

    def release(c_clause: Clause) -> None:
        live_count[c_clause] -= 1
        if live_count[c_clause] == 0:
            del live_count[c_clause]
            for d in ctx.inverse_image(c_clause):
                need[d] -= 1
                if need[d] == 0:
                    del need[d]
                    builder.erase(out_step.pop(d))

    k = 0
    for step in proof.steps:
        if isinstance(step, Erase):
            release(clauses[step.target - 1])
            continue
        k += 1
        c_clause = clauses[k - 1]
        if isinstance(step, Axiom):
            acquire(c_clause, lambda missing: derive_by_axiom(c_clause, missing))
        elif isinstance(step, Resolve):
            premise_left = clauses[step.left - 1]
            premise_right = clauses[step.right - 1]
            big_vars = c_clause.variables() | {step.pivot}
            big_kernel = ctx.kernel_of(big_vars)
            # Claim 1 identity: the clause set over the premise kernel that is
            # falsifiable with C is exactly the union of the premise images.
            ladder_top = set(ctx.sign_patterns(big_kernel, c_clause))
            expected = set(ctx.inverse_image(premise_left)) | set(ctx.inverse_image(premise_right))
            if ladder_top != expected:
                raise InternalInvariantError(
                    "top ladder rung differs from the union of premise images"
                )
            acquire(c_clause, lambda missing: derive_by_ladder(c_clause, missing, big_kernel))
        else:
            assert isinstance(step, Weaken)
            source = clauses[step.source - 1]
            big_kernel = ctx.kernel_of(source.variables())
            # Claim 2 inclusion: the top rung embeds into the source image.
            ladder_top = set(ctx.sign_patterns(big_kernel, c_clause))
            if not ladder_top <= set(ctx.inverse_image(source)):
                raise InternalInvariantError("top ladder rung escapes the source image")
            acquire(c_clause, lambda missing: derive_by_ladder(c_clause, missing, big_kernel))

    out = builder.build()
    out_measures = verify(ctx.formula, out, allow_weakening=True, require_refutation=True)
    bound = (2**w) * in_measures.clause_space + w + 3
    report = {
        "width_in": w,
        "space_in": in_measures.clause_space,
        "length_in": in_measures.length,
        "width_out": out_measures.width,
        "space_out": out_measures.clause_space,
        "length_out": out_measures.length,
        "space_bound": bound,
        "width_ok": out_measures.width <= w,
        "space_ok": out_measures.clause_space <= bound,
        "homogeneous_out": out_measures.homogeneous,
        "ladder_count": stats["ladders"],
        "max_ladder_depth": stats["max_ladder_depth"],
    }
    return out, report
