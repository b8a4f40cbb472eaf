"""Exact classical bounds, singlet correlators, and violation landscapes
for the Bell and CHSH inequalities."""

__version__ = "0.1.0"

from .errors import (
    BellsimError,
    InputError,
    InternalConsistencyError,
    MixtureFileError,
    ScenarioTooLargeError,
)
from .inequalities import (
    BellExpression,
    ChshOptimum,
    CorrelatorTable,
    OptimizerConfig,
    TSIRELSON_BOUND,
    ViolationReport,
    bell1964_expression,
    bell1964_margin,
    chsh_expression,
    chsh_optimal_settings,
    chsh_quantum_max,
    chsh_value,
    evaluate,
    expression_value,
    table_from_state,
)
from .lhv import (
    DeterministicStrategy,
    EstimatedCorrelator,
    LhvMixture,
    Scenario,
    bell1964_scenario,
    chsh_scenario,
    classical_bound,
    classical_bound_witness,
    enumerate_strategies,
    filter_anticorrelated,
    mixture_correlator,
    mixture_table,
    monte_carlo_correlator,
    single_spin_lhv,
    single_spin_outcomes,
    strategy_correlator,
    strategy_table,
)
from .quantum import (
    JointDistribution,
    SpinObservable,
    TwoQubitState,
    UnitVector3,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    correlator,
    joint_distribution,
    product_up_up,
    sample_outcomes,
    singlet,
    singlet_correlator_closed_form,
    spin_observable,
)
from .scan import (
    GridSpec,
    LandscapePoint,
    cross_check_margin,
    directions_from_angles,
    find_min_margin,
    parametrized_margin,
    scan_landscape,
)
