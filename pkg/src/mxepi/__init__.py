"""Two-route epidemics on two-layer multiplex networks.

Percolation-based analytics (thresholds, outbreak sizes) and Monte Carlo
simulation for SIR spreading over two partially overlapping network layers.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    InfeasibleTargetError,
    InputError,
    SupercriticalError,
    UndefinedMetricError,
)
from .multiplex import (
    JointDegreeDistribution,
    MultiplexGraph,
    VectorDegree,
    VectorDegreeDistribution,
    asn,
    classify_edges,
    ddc,
    ddc_of_graph,
    empirical_vector_distribution,
    joint_degree_distribution,
    load_edgelist,
    vector_degree,
    write_edgelist,
)
from .netgen import (
    DdcResult,
    LayerSpec,
    couple_asn,
    couple_ddc,
    gen_er,
    gen_sf,
    independent_multiplex,
)
from .simulate import (
    RateGrid,
    SimConfig,
    SimResult,
    SweepResult,
    SweepRow,
    percolate_once,
    percolate_seed_fraction,
    phase_diagram,
    run_ensemble,
    sir_once,
)
from .theory import (
    MomentSet,
    OutbreakSolution,
    SpreadingRate,
    ThresholdCurve,
    branching_matrix,
    compose_lambda_c,
    diagonal_threshold,
    growth_matrix,
    mean_outbreak,
    moment_set,
    outbreak_size,
    perron_root,
    threshold_curve,
    threshold_lambda_a,
    threshold_point,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "InfeasibleTargetError",
    "InputError",
    "SupercriticalError",
    "UndefinedMetricError",
    "JointDegreeDistribution",
    "MultiplexGraph",
    "VectorDegree",
    "VectorDegreeDistribution",
    "asn",
    "classify_edges",
    "ddc",
    "ddc_of_graph",
    "empirical_vector_distribution",
    "joint_degree_distribution",
    "load_edgelist",
    "vector_degree",
    "write_edgelist",
    "DdcResult",
    "LayerSpec",
    "couple_asn",
    "couple_ddc",
    "gen_er",
    "gen_sf",
    "independent_multiplex",
    "RateGrid",
    "SimConfig",
    "SimResult",
    "SweepResult",
    "SweepRow",
    "percolate_once",
    "percolate_seed_fraction",
    "phase_diagram",
    "run_ensemble",
    "sir_once",
    "MomentSet",
    "OutbreakSolution",
    "SpreadingRate",
    "ThresholdCurve",
    "branching_matrix",
    "compose_lambda_c",
    "diagonal_threshold",
    "growth_matrix",
    "mean_outbreak",
    "moment_set",
    "outbreak_size",
    "perron_root",
    "threshold_curve",
    "threshold_lambda_a",
    "threshold_point",
]
