"""Path-diversity hierarchy of networks and recursive cycle routing."""

__version__ = "0.1.0"

from .cycles import (
    CycleBasis,
    EdgeIndex,
    EdgeVector,
    cycle_space_dimension,
    enumerate_simple_cycles,
    in_span,
    intersection,
    is_independent,
    minimal_cycle_basis,
    xor,
)
from .graph import (
    Graph,
    GraphError,
    collapse_trees,
    components,
    cut_edges,
    cut_vertices,
    shortest_path,
)
from .hierarchy import (
    AbridgmentError,
    LnaHierarchy,
    LnaLevel,
    abridge,
    build_next_level,
    diversity_density,
    level_report,
    resolve,
    topological_distance,
)
from .io import export_level, parse_edgelist
from .routing import LinkState, Router, RouteState, fundamental_cycle_route, plan_route, traverse_cut
from .simulator import (
    Demand,
    FailureEvent,
    SimReport,
    SimScenario,
    baseline_deflection,
    baseline_shortest_path,
    simulate,
)
