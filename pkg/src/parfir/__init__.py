"""parfir: synthesis and exact verification of fast parallel FIR structures."""

from .costs import (
    SCHEME_FAST_CONVOLUTION,
    ReconcileReport,
    SchemeCosts,
    closed_form,
    comparison_table,
    reconcile,
)
from .graph import (
    CostReport,
    GraphBuilder,
    InvalidGraphError,
    NetlistFormatError,
    Node,
    StructureGraph,
    SubfilterSpec,
    count_costs,
    export_dot,
    export_json,
    graphs_isomorphic,
    import_json,
    transpose_graph,
)
from .polymatrix import Poly, PolyMatrix, pm_diag, pm_kron, pm_mul
from .polymatrix import factorization_hybrid4, factorization_iterated4, transfer_of_graph
from .polyphase import (
    convolve_serial,
    interleave_phases,
    naive_parallel_reference,
    polyphase_decompose,
    pseudocirculant,
)
from .primitives import ALL_FORMS, ConstantMatrixSet, Ffa2Form, build_ffa2, constant_matrices
from .sharing import REGION_BOTH, REGION_INPUT, REGION_OUTPUT, share_substructures
from .simulate import simulate, verify_equivalence
from .synthesis import (
    SCHEME_HYBRID,
    SCHEME_ITERATED,
    SCHEME_NAIVE,
    DivisibilityError,
    Scheme,
    nesting_order,
    subfilter_taps,
    synthesize,
    synthesize_hybrid,
    synthesize_iterated,
    synthesize_naive,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
