"""Integer multicommodity flow on planar acyclic digraphs.

Exact feasibility solver for instances whose capacity-plus-request load is
balanced at every vertex (so any solution saturates every arc), together
with a brute-force oracle, uncrossing and structural checkers, instance
generators, file formats and a CLI.
"""

from .embedding import (
    Behaviour,
    CyclicOrder,
    EmbeddedDigraph,
    Face,
    Side,
    Violation,
    between,
    classify_behaviour,
    strictly_between,
    trace_faces,
    validate_embedding,
)
from .errors import (
    BadEmbeddingError,
    BudgetExceededError,
    DestinationOnWalkError,
    DisconnectedError,
    GenerationError,
    InstanceFormatError,
    NormalizeError,
    NotAcyclicError,
    NotEulerianError,
    PlanarMCFError,
    PreconditionViolatedError,
)
from .fixtures import fixture_half_integral, fixture_half_integral_doubled
from .generators import gen_grid, gen_outer_boundary
from .geometry import (
    ClosedWalk,
    Region,
    RegionPartition,
    VertexSide,
    first_common_vertex,
    make_walk,
    partition_faces,
    regions_of_demand,
    side_of_destination,
    vertex_side,
)
from .instances import (
    Demand,
    Instance,
    NormalizedInstance,
    TopoOrder,
    add_terminals,
    check_eulerian,
    expand_capacities,
    normalize,
    scale_instance,
    topological_order,
)
from .io import (
    parse_instance,
    parse_solution,
    read_instance,
    read_solution,
    write_instance,
    write_solution,
)
from .oracle import (
    CrossVector,
    OracleResult,
    brute_force,
    check_interval_structure,
    check_uncrossed,
    count_crossings,
    uncross,
)
from .schemes import (
    BEHAVIOUR_MATRIX,
    IntervalPartition4,
    RoutingScheme,
    SchemeSpace,
    behaviour_lookup,
    enumerate_schemes,
    partitions_matching,
    partitions_of,
    scheme_count,
    scheme_count_bound,
)
from .solver import (
    PartialPath,
    met_pair_behaviours,
    Solution,
    SolveResult,
    TrialFailure,
    required_behaviours,
    route_vertex,
    routing_candidate,
    run_scheme,
    solve,
    solve_outer_boundary,
    solve_with_schemes,
    verify_solution,
)

__version__ = "0.1.0"
