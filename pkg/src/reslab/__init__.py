"""Resolution proof-complexity workbench.

Pebbling formulas, XOR substitution with recycled variables over bipartite
boundary expanders, a measuring proof verifier, hardness condensation, and
exact brute-force oracles for width, clause space and depth at desk scale.
"""

from .clauses import (
    EMPTY_CLAUSE,
    Clause,
    CnfFormula,
    PivotAbsentError,
    TrivialClauseError,
    from_dimacs,
    neg,
    resolve,
    subsumes,
    to_dimacs,
    weaken,
)
from .condense import (
    CondensationContext,
    InternalInvariantError,
    NotHomogeneousError,
    WidthExceedsRadiusError,
    condense,
    inverse_image,
    simultaneously_falsifiable,
)
from .expanders import (
    ExpanderParams,
    ExpansionCertificate,
    NoBoundaryVertexError,
    PreconditionViolatedError,
    boundary,
    closure,
    is_boundary_expander,
    kernel,
    peel_order,
    remove,
    sample_expander,
)
from .formulas import Dag, path_dag, pebbling_formula, pyramid_dag
from .gf2 import ParitySystem
from .oracles import (
    INCONCLUSIVE,
    NO_REFUTATION,
    OK,
    OracleResult,
    SearchBudget,
    min_depth,
    min_space,
    min_width,
)
from .proofs import (
    Axiom,
    DerivationTree,
    Erase,
    IllegalStepError,
    InputHasWeakeningError,
    MalformedDagError,
    NotARefutationError,
    ProofBuilder,
    ProofMeasures,
    Refutation,
    Resolve,
    SequenceStep,
    Weaken,
    format_proof,
    homogenize,
    parse_proof,
    realize_in_space,
    sequence_space,
    to_configuration_style,
    to_sequence,
    verify,
)
from .xor import (
    BipartiteGraph,
    IsolatedLeftVertexError,
    UncoveredVariableError,
    disjoint_xor_graph,
    matching_graph,
    xorify,
    xorify_literal,
    xorify_with_provenance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
