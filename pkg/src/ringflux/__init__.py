"""Exact and Monte Carlo analysis of conserved-flux particle systems on rings.

The package studies three local update rules on binary rings: a
deterministic five-site rule and two one-parameter stochastic variants
that share its conserved quantities. It provides exact sector
enumeration, symbolic transition matrices over rotation classes,
stationary distributions with a product-form candidate, counting tables
for the stationary flux, and a vectorized Monte Carlo path for rings too
long to enumerate.
"""

from .dynamics import (
    DETERMINISTIC,
    RULES,
    STOCHASTIC_U,
    STOCHASTIC_V,
    FluxRule,
    branch_outcomes,
    class_outcomes,
    expected_flux,
    pattern_flux_estimate,
    rule_named,
    step_deterministic,
    step_stochastic,
)
from .ensemble import (
    ENUMERATION_BOUND,
    OmegaSet,
    Sector,
    SectorDecomposition,
    enumerate_sector,
    feasible_pairs,
    recurrent_classes,
    sector_is_feasible,
    transition_graph,
)
from .errors import (
    EnumerationBoundError,
    InfeasibleSectorError,
    InvalidArgumentError,
    NumericalFailureError,
    RingfluxError,
)
from .exact import AlphaPoly, solve_stationary_exact
from .markov import (
    ConjectureReport,
    StationaryDistribution,
    TransitionMatrix,
    build_matrix,
    class_weight_exponents,
    conjecture_vector,
    stationary,
    stationary_exact,
    verify_conjecture,
)
from .montecarlo import (
    DiagramRow,
    FluxEstimate,
    SimulationSpec,
    deterministic_cycle_flux,
    generate_initial,
    run_flux,
    simulate_trajectory,
    sweep_diagram,
)
from .ring import (
    OrbitClass,
    Ring,
    canonical_rotation,
    conserved_pair,
    count_cyclic_pattern,
    orbit_size,
    reflect,
    rotate,
)
from .theory import (
    FluxPoint,
    LimitReport,
    PartitionTable,
    dominant_flux_gap,
    kmax,
    limit_check,
    partition_omega,
    partition_sector,
    partition_sector_dp,
    q_deterministic,
    q_theory,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaPoly",
    "ConjectureReport",
    "DETERMINISTIC",
    "DiagramRow",
    "ENUMERATION_BOUND",
    "EnumerationBoundError",
    "FluxEstimate",
    "FluxPoint",
    "FluxRule",
    "InfeasibleSectorError",
    "InvalidArgumentError",
    "LimitReport",
    "NumericalFailureError",
    "OmegaSet",
    "OrbitClass",
    "PartitionTable",
    "Ring",
    "RingfluxError",
    "RULES",
    "STOCHASTIC_U",
    "STOCHASTIC_V",
    "Sector",
    "SectorDecomposition",
    "SimulationSpec",
    "StationaryDistribution",
    "TransitionMatrix",
    "branch_outcomes",
    "build_matrix",
    "canonical_rotation",
    "class_outcomes",
    "class_weight_exponents",
    "conjecture_vector",
    "conserved_pair",
    "count_cyclic_pattern",
    "deterministic_cycle_flux",
    "dominant_flux_gap",
    "enumerate_sector",
    "expected_flux",
    "feasible_pairs",
    "generate_initial",
    "kmax",
    "limit_check",
    "orbit_size",
    "partition_omega",
    "partition_sector",
    "partition_sector_dp",
    "pattern_flux_estimate",
    "q_deterministic",
    "q_theory",
    "recurrent_classes",
    "reflect",
    "rotate",
    "rule_named",
    "run_flux",
    "sector_is_feasible",
    "simulate_trajectory",
    "solve_stationary_exact",
    "stationary",
    "stationary_exact",
    "step_deterministic",
    "step_stochastic",
    "sweep_diagram",
    "transition_graph",
    "verify_conjecture",
]
