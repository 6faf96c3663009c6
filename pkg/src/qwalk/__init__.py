"""Coined quantum walks on symmetric colored graphs.

Builds walks on Cayley graphs, hypercubes, and glued binary trees, reduces
them to quotient walks via automorphism-subgroup orbits, and analyzes
measured-walk hitting times including the detection of initial states that
never arrive.
"""

from .errors import (
    BlockStructureError,
    CommutationFailure,
    DimensionLimit,
    MeasurementSymmetryViolation,
    NotAnAutomorphism,
    NotOrbitCompatible,
    QwalkError,
)
from .graphs import (
    ColoredGraph,
    adjacency_matrix,
    build_cayley,
    build_glued_trees,
    build_hypercube,
    graph_from_edges,
    shift_matrix,
    shift_permutation,
)
from .hitting import (
    CoinOverlap,
    HittingReport,
    InfiniteSubspace,
    Measurement,
    c_matrix,
    devectorize,
    hitting_time,
    infinite_projector,
    intersection_dimension,
    measurement_for_vertices,
    p_sequence,
    quotient_infinite_check,
    restrict_measurement,
    superoperators,
    vectorize,
)
from .perm import (
    Permutation,
    PermutationGroup,
    compose,
    cycle_string,
    generate_group,
    inverse,
    parse_cycles,
)
from .symmetry import (
    BasisPermutation,
    OrbitBasis,
    QuotientGraph,
    compute_orbits,
    direction_automorphism,
    glued_trees_column_subgroup,
    left_translation,
    load_subgroup,
    projector_PH,
    quotient_automorphism,
    quotient_graph,
    verify_automorphism,
)
from .walk import (
    CoinSpec,
    WalkOperator,
    continuous_hamiltonian,
    custom_coin,
    dft_coin,
    evolve_continuous,
    evolve_discrete,
    factor_quotient_walk,
    grover_coin,
    identity_coin,
    induced_walk,
    quotient_hamiltonian,
    symmetry_commutes,
    walk_unitary,
)

__version__ = "0.1.0"
