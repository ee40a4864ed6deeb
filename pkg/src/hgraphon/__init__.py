"""H-property analysis for step-graphons.

Skeleton graphs and concentration vectors, exact edge-polytope tests,
Hamiltonian decompositions of sampled graphs, and seeded Monte Carlo runs.
"""
from importlib import resources

from ._accel import backend
from .exactlp import LinearProgram, Optimal, Infeasible, Unbounded, RatMatrix, affine_rank, solve_lp
from .graphon import (
    ParseError,
    SampledGraph,
    StepGraphon,
    concentration_vector,
    empirical_concentration,
    load_graph,
    load_graphon,
    parse_graph,
    parse_graphon,
    refine_partition,
    sample,
    value_at,
)
from .hamdec import (
    Digraph,
    HamDecomposition,
    brute_force_ham,
    directed_version,
    extract_decomposition,
    has_hamiltonian_decomposition,
    rho,
)
from .montecarlo import ExperimentConfig, ExperimentRow, deviation_probability, run_experiment, trial_seed, wilson_interval
from .polytope import (
    EdgePolytope,
    PointClass,
    PointKind,
    Verdict,
    analyze,
    caratheodory_membership,
    classify_point,
    cycle_laplacian_decomposition,
    edge_polytope,
    extremal_generators,
    membership,
    polytope_rank,
    rowsum_membership,
    verdict,
)
from .skeleton import SkeletonGraph, connected_components, has_odd_cycle, incidence_matrix, skeleton_of

__version__ = "0.1.0"


def bundled_graphon(name: str) -> StepGraphon:
    """Load one of the packaged step-graphons, e.g. ``"exp_d"``."""
    return parse_graphon(resources.files(__package__).joinpath("data", f"{name}.hgraphon").read_text("utf-8"))


def bundled_path(name: str):
    return resources.files(__package__).joinpath("data", f"{name}.hgraphon")
