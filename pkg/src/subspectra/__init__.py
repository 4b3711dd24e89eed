"""Adjacency spectra of edge-subdivided graph families.

Construction of stretched and severed subdivision families, a
self-contained dense symmetric eigensolver with inertia-based interval
counting, eigenvector structure checks on internal paths, closed-form
subdivision limits, and a sweep/scan experiment harness with a CLI.
"""

from .graphs import (
    EdgeSubset,
    Graph,
    GraphFormatError,
    InternalPath,
    StructuralError,
    SubdivisionFamily,
    c4_with_pendant,
    complete_graph,
    cycle_graph,
    degree_two_cycles,
    format_edge_list,
    high_degree_set,
    internal_paths,
    parse_edge_list,
    path_graph,
    read_edge_list,
    spider_graph,
    star_graph,
    subdivide,
    subdivide_severed,
    validate_internal_path,
    write_edge_list,
)
from .eigen import (
    AmbiguousShiftError,
    CapacityError,
    EigenPair,
    IntervalCount,
    SolverConvergenceError,
    Spectrum,
    adjacency_matrix,
    count_below,
    count_interval,
    eigenpair_at,
    eigenpairs_outside,
    extreme_eigenvalues,
    full_spectrum,
)
from .limits import (
    DegreeSequence,
    PathRatioState,
    PoleError,
    WeightedPath,
    full_subdivision_limit,
    path_charpoly,
    path_ratio,
    path_ratio_limit,
    quotient_path_radius,
    quotient_path_radius_mp,
    spider_radius_limit,
)
from .checks import (
    DistancePartition,
    check_hub_bound,
    check_partition_decay,
    check_path_decay,
    check_principal_unimodality,
    check_single_subdivision_monotonicity,
    check_unimodality,
)
from .experiments import (
    ConvergenceTrace,
    CorpusSpec,
    ScanInstance,
    SolverBudget,
    StabilizationReport,
    load,
    persist,
    rerun_scan_instance,
    run_convergence,
    run_stabilization,
    scan_conjectures,
)

__version__ = "0.1.0"
