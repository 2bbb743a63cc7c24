"""Command-line surface for the workbench.

Exit codes: 0 on success or Pass, 1 on Fail or a verification error, 2 on
usage errors.  All randomness is controlled by --seed and every artifact is
written atomically, so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .clauses import CnfFormula, from_dimacs, to_dimacs
from .condense import (
    CondensationContext,
    InternalInvariantError,
    NotHomogeneousError,
    WidthExceedsRadiusError,
    condense_with_context,
)
from .expanders import (
    NoBoundaryVertexError,
    PreconditionViolatedError,
    closure,
    is_boundary_expander,
    kernel,
    peel_order,
    sample_expander,
)
from .experiments import (
    condensation_experiment,
    curve_is_monotone,
    tradeoff_csv,
    tradeoff_scan,
)
from .formulas import format_dag, path_dag, pebbling_formula, pyramid_dag
from .oracles import OK, SearchBudget, min_depth, min_space, min_width
from .proofs import (
    IllegalStepError,
    NotARefutationError,
    format_proof,
    parse_proof,
    tolerate_subsumed_downloads,
    verify,
)
from .xor import (
    disjoint_xor_graph,
    format_bipartite,
    matching_graph,
    parse_bipartite,
    xorify,
)

USER_ERRORS = (
    IllegalStepError,
    NotARefutationError,
    NotHomogeneousError,
    WidthExceedsRadiusError,
    InternalInvariantError,
    PreconditionViolatedError,
    NoBoundaryVertexError,
    ValueError,
)


def _write(path: str, text: str) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _write(out, text)


def _read(path: str) -> str:
    with open(path) as handle:
        return handle.read()


def _parse_ids(raw: str) -> tuple[int, ...]:
    raw = raw.replace(",", " ")
    return tuple(int(tok) for tok in raw.split())


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(
        max_width=getattr(args, "width_cap", None) or 16,
        max_space=getattr(args, "space_cap", None) or 8,
        max_states=args.budget_states,
        time_limit=args.budget_seconds,
    )


def _cmd_gen_pebbling(args: argparse.Namespace) -> int:
    if args.dag == "pyramid":
        dag = pyramid_dag(args.height)
    else:
        dag = path_dag(args.height)
    formula = pebbling_formula(dag)
    _emit(to_dimacs(formula), args.out)
    if args.out_dag:
        _write(args.out_dag, format_dag(dag))
    return 0


def _cmd_xorify(args: argparse.Namespace) -> int:
    formula = from_dimacs(_read(args.formula))
    if args.graph:
        graph = parse_bipartite(_read(args.graph))
    elif args.disjoint:
        graph = disjoint_xor_graph(formula.num_vars, args.disjoint)
    else:
        graph = matching_graph(formula.num_vars)
    _emit(to_dimacs(xorify(formula, graph)), args.out)
    return 0


def _cmd_sample_expander(args: argparse.Namespace) -> int:
    graph = sample_expander(args.left, args.right, args.degree, args.seed)
    _emit(format_bipartite(graph), args.out)
    return 0


def _cmd_check_expander(args: argparse.Namespace) -> int:
    graph = parse_bipartite(_read(args.graph))
    cert = is_boundary_expander(graph, args.r, args.c, subset_guard=args.subset_guard)
    _emit(json.dumps(cert.to_json(), sort_keys=True) + "\n", args.out)
    return 0 if cert.passed else 1


def _cmd_closure(args: argparse.Namespace) -> int:
    graph = parse_bipartite(_read(args.graph))
    gamma = closure(graph, _parse_ids(args.vset), args.r)
    payload = {
        "vset": sorted(_parse_ids(args.vset)),
        "closure": sorted(gamma),
        "kernel": sorted(kernel(graph, gamma)),
        "r": args.r,
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_peel(args: argparse.Namespace) -> int:
    graph = parse_bipartite(_read(args.graph))
    pairs = peel_order(graph, _parse_ids(args.uset))
    payload = {"uset": sorted(_parse_ids(args.uset)), "order": [list(p) for p in pairs]}
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    formula = from_dimacs(_read(args.formula))
    proof = parse_proof(_read(args.proof))
    if args.tolerate_subsumed:
        proof = tolerate_subsumed_downloads(formula, proof)
    measures = verify(formula, proof, allow_weakening=not args.no_weakening)
    payload = {
        "length": measures.length,
        "width": measures.width,
        "clause_space": measures.clause_space,
        "var_space": measures.var_space,
        "depth": measures.depth,
        "refuted": measures.refuted,
        "homogeneous": measures.homogeneous,
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    formula = from_dimacs(_read(args.formula))
    budget = _budget(args)
    if args.measure == "width":
        result = min_width(formula, budget)
    elif args.measure == "space":
        result = min_space(formula, args.width_cap, budget)
    else:
        result = min_depth(formula, args.width_cap, budget)
    witness_path = None
    if result.witness is not None and args.witness:
        _write(args.witness, format_proof(result.witness))
        witness_path = args.witness
    _emit(json.dumps(result.to_json(witness_path), sort_keys=True) + "\n", args.out)
    return 0 if result.status == OK else 1


def _cmd_condense(args: argparse.Namespace) -> int:
    formula = from_dimacs(_read(args.formula))
    graph = parse_bipartite(_read(args.graph))
    proof = parse_proof(_read(args.proof))
    certificate = is_boundary_expander(graph, args.radius, 2, subset_guard=args.subset_guard)
    ctx = CondensationContext(
        formula, graph, args.radius, certificate if certificate.passed else None
    )
    out_proof, report = condense_with_context(ctx, proof)
    if args.out_proof:
        _write(args.out_proof, format_proof(out_proof))
        report["proof_out"] = args.out_proof
    _emit(json.dumps(report, sort_keys=True) + "\n", args.out)
    return 0 if report["width_ok"] and report["space_ok"] else 1


def _cmd_experiment(args: argparse.Namespace) -> int:
    run = condensation_experiment(
        args.height, args.graph, seed=args.seed, budget=_budget(args)
    )
    if args.out:
        _write(os.path.join(args.out, "formula.cnf"), to_dimacs(run.formula))
        _write(os.path.join(args.out, "xorified.cnf"), to_dimacs(run.xorified))
        try:
            _write(os.path.join(args.out, "graph.bip"), format_bipartite(run.graph))
        except ValueError:
            pass
        _write(os.path.join(args.out, "proof_in.res"), format_proof(run.proof_in))
        _write(os.path.join(args.out, "proof_out.res"), format_proof(run.proof_out))
        _write(
            os.path.join(args.out, "report.json"),
            json.dumps(run.report, sort_keys=True, indent=2) + "\n",
        )
    sys.stdout.write(json.dumps(run.report, sort_keys=True) + "\n")
    return 0 if run.report["pass"] else 1


def _cmd_tradeoff(args: argparse.Namespace) -> int:
    formula = from_dimacs(_read(args.formula))
    rows = tradeoff_scan(formula, range(args.min_width, args.max_width + 1), _budget(args))
    _emit(tradeoff_csv(rows), args.out)
    return 0 if curve_is_monotone(rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reslab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, budget: bool = False) -> None:
        p.add_argument("--out", help="output file (default: stdout)")
        if budget:
            p.add_argument("--budget-states", type=int, default=2_000_000)
            p.add_argument("--budget-seconds", type=float, default=600.0)

    p = sub.add_parser("gen-pebbling", help="emit a pebbling formula as DIMACS")
    p.add_argument("--dag", choices=("pyramid", "path"), default="pyramid")
    p.add_argument("--height", type=int, required=True, help="pyramid height / path length")
    p.add_argument("--out-dag", help="also write the DAG file")
    common(p)
    p.set_defaults(func=_cmd_gen_pebbling)

    p = sub.add_parser("xorify", help="substitute XORs over a bipartite graph")
    p.add_argument("formula")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--graph", help="bipartite graph file")
    group.add_argument("--disjoint", type=int, help="fresh-variable substitution of this arity")
    group.add_argument("--matching", action="store_true", help="identity substitution")
    common(p)
    p.set_defaults(func=_cmd_xorify)

    p = sub.add_parser("sample-expander", help="random left-regular bipartite graph")
    p.add_argument("--left", type=int, required=True)
    p.add_argument("--right", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_sample_expander)

    p = sub.add_parser("check-expander", help="exhaustive boundary-expansion certificate")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--subset-guard", type=int, default=20)
    common(p)
    p.set_defaults(func=_cmd_check_expander)

    p = sub.add_parser("closure", help="grow a right set until the rest expands")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--vset", required=True, help="right vertex ids, comma or space separated")
    common(p)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("peel", help="peeling order with fresh matched neighbours")
    p.add_argument("graph")
    p.add_argument("--uset", required=True, help="left vertex ids")
    common(p)
    p.set_defaults(func=_cmd_peel)

    p = sub.add_parser("verify", help="replay and measure a proof trace")
    p.add_argument("formula")
    p.add_argument("proof")
    p.add_argument("--no-weakening", action="store_true", help="reject weakening steps")
    p.add_argument(
        "--tolerate-subsumed",
        action="store_true",
        help="rewrite downloads of subsumed clauses into explicit weakenings",
    )
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="exact minimal width / space / depth")
    p.add_argument("measure", choices=("width", "space", "depth"))
    p.add_argument("formula")
    p.add_argument("--width-cap", type=int)
    p.add_argument("--space-cap", type=int)
    p.add_argument("--witness", help="write the witness trace here")
    common(p, budget=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("condense", help="shrink a refutation of F[G] to one of F")
    p.add_argument("formula", help="original formula (DIMACS)")
    p.add_argument("graph", help="bipartite graph file")
    p.add_argument("proof", help="homogeneous refutation of the XORified formula")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--subset-guard", type=int, default=20)
    p.add_argument("--out-proof", help="write the condensed trace here")
    common(p)
    p.set_defaults(func=_cmd_condense)

    p = sub.add_parser("experiment", help="end-to-end pipeline with a report")
    p.add_argument("kind", choices=("condensation",))
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--graph", choices=("matching", "disjoint2", "expander"), default="matching")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="artifact directory")
    p.add_argument("--budget-states", type=int, default=2_000_000)
    p.add_argument("--budget-seconds", type=float, default=600.0)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("tradeoff", help="minimal space under a range of width caps")
    p.add_argument("formula")
    p.add_argument("--min-width", type=int, required=True)
    p.add_argument("--max-width", type=int, required=True)
    p.add_argument("--space-cap", type=int)
    common(p, budget=True)
    p.set_defaults(func=_cmd_tradeoff)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
