"""Maximum-lifetime data aggregation trees for wireless sensor networks."""
from .errors import *  # noqa: F401,F403
from .heuristic import HeuristicParams, build_max_lifetime_tree, leafify_low_energy, local_adjust
from .network import (
    DeploymentConfig,
    Network,
    NodeRecord,
    generate_network,
    is_connected,
    neighbors,
)
from .oracle import enumerate_spanning_trees, matrix_tree_count, optimal_tree_lifetime
from .scheduler import Schedule, apply_rounds, heuristic_schedule, run_schedule, sptbsa
from .spt import build_spt
from .tree import (
    UNBOUNDED,
    AggregationTree,
    EnergyModel,
    NodeStats,
    compute_stats,
    tree_lifetime,
    validate_tree,
)

__version__ = "0.1.0"
