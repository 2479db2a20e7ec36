"""Khovanov-type link homologies, transverse c-invariants, and the RBW s-invariant."""

from .coeffs import BN, GF2, GF3, KH, RATIONALS, TLEE, FieldSpec, PolyU
from .complexes import ChainComplex, build_complex
from .diagram import (
    BraidWord,
    Crossing,
    OrientedDiagram,
    braid_closure,
    builtin_diagram,
    builtin_names,
    conjugate,
    connected_sum,
    disjoint_union,
    generate_D,
    generate_U,
    mirror,
    parse_any,
    parse_braid,
    parse_diagram,
    print_braid,
    print_diagram,
    stabilize_negative,
    stabilize_positive,
    writhe,
)
from .homology import (
    BigradedDims,
    BNHomology,
    ModuleDecomposition,
    divisibility,
    filtration_degree,
    homology_bn,
    homology_field,
    homology_ranks,
    is_boundary,
)
from .invariants import (
    BetaCycle,
    DecompositionWitness,
    InvariantReport,
    bennequin_report,
    beta,
    c_invariants,
    canonical_generators,
    lemma_states,
    negative_row_divisor,
    psi,
    s_invariant,
    theorem_decomposition,
)
from .resolution import (
    CircleSet,
    NestingAssignment,
    Resolution,
    cube_neighbors,
    nesting_parities,
    oriented_resolution,
    resolve,
)
from .seifert import (
    BoundReport,
    Quantities,
    SeifertGraph,
    almost_positive_check,
    bounds,
    build_graph,
    quantities,
)

__version__ = "0.1.0"
