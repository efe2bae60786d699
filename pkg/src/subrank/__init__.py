"""Ordering ground-set elements to minimize the weighted sum of submodular cover times."""
from .analysis import (
    approximation_report,
    audit_chain_sum,
    audit_potential_sums,
    epsilon_lower_bound,
    export_histograms,
    gamma_certificate,
    run_diagnostics,
)
from .generators import (
    SetCoverInput,
    from_set_cover,
    greedy_trap,
    min_sum_set_cover,
    multiple_intents,
    random_instance,
)
from .instance import (
    CoverReport,
    Instance,
    LinearOrdering,
    cover_times,
    marginal,
    normalize_thresholds,
    validate_instance,
)
from .solvers import (
    RunTrace,
    adaptive_residual_updates,
    brute_force_optimal,
    cumulative_greedy,
    potential_value,
)
from .valuations import (
    CoverageValuation,
    ExplicitValuation,
    ModularValuation,
    Valuation,
    check_submodular_monotone_normalized,
    make_coverage,
    make_explicit,
    make_modular,
)

__version__ = "0.1.0"
