"""Trading policies over matroid-constrained portfolios, with exact analytics.

The library models a market of k stocks whose price vectors arrive online.
A policy may hold any feasible set of a matroid over the stocks; the package
provides the optimal online policy, the hindsight-optimal offline policy, a
random-order variant, exact rational computation of their per-step expected
profits, and generators for the instances that pin the competitive ratios.
"""

from .analytics import (
    RatioReport,
    check_density_lemma,
    check_polynomial_inequality,
    check_uniform_offline_bound,
    check_uniform_online_formula,
    exact_offline_per_step,
    exact_online_per_step,
    exact_random_order_offline,
    exact_random_order_online,
    exact_ratio,
    hardness_sweep,
    leave_one_out_means,
    uniform_offline_values,
    uniform_online_values,
    write_ratio_reports,
)
from .engine import (
    IIDModel,
    MarketInstance,
    MonteCarloStats,
    POLICY_OFFLINE,
    POLICY_ONLINE_IID,
    POLICY_ONLINE_RANDOM_ORDER,
    RandomOrderModel,
    Trace,
    mixture_mean,
    monte_carlo,
    run_offline_optimal,
    run_online_iid,
    run_online_random_order,
    sample_price_path,
    write_stats_csv,
    write_trace_csv,
)
from .errors import (
    CapacityError,
    ConfigError,
    InputError,
    InvalidMatroidError,
    TradingError,
    UnsupportedKindError,
)
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    find_axiom_violation,
    max_feasible_weight,
    max_weight_feasible_set,
    verify_matroid_axioms,
)
from .pricing import (
    JointDiscreteDistribution,
    MarginalDistribution,
    as_fraction,
    format_fraction,
    half_hardness_instance,
    marginal,
    matroid_hardness_instance,
    mean,
    mixture,
    product,
    sample,
    shift,
    uniform_mixture,
    uniform_ratio_hardness_instance,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigError",
    "ExplicitMatroid",
    "GraphicMatroid",
    "IIDModel",
    "InputError",
    "InvalidMatroidError",
    "JointDiscreteDistribution",
    "MarginalDistribution",
    "MarketInstance",
    "Matroid",
    "MonteCarloStats",
    "PartitionMatroid",
    "POLICY_OFFLINE",
    "POLICY_ONLINE_IID",
    "POLICY_ONLINE_RANDOM_ORDER",
    "RandomOrderModel",
    "RatioReport",
    "Trace",
    "TradingError",
    "UniformMatroid",
    "UnsupportedKindError",
    "as_fraction",
    "check_density_lemma",
    "check_polynomial_inequality",
    "check_uniform_offline_bound",
    "check_uniform_online_formula",
    "exact_offline_per_step",
    "exact_online_per_step",
    "exact_random_order_offline",
    "exact_random_order_online",
    "exact_ratio",
    "find_axiom_violation",
    "format_fraction",
    "half_hardness_instance",
    "hardness_sweep",
    "leave_one_out_means",
    "marginal",
    "matroid_hardness_instance",
    "max_feasible_weight",
    "max_weight_feasible_set",
    "mean",
    "mixture",
    "mixture_mean",
    "monte_carlo",
    "product",
    "run_offline_optimal",
    "run_online_iid",
    "run_online_random_order",
    "sample",
    "sample_price_path",
    "shift",
    "uniform_mixture",
    "uniform_offline_values",
    "uniform_online_values",
    "uniform_ratio_hardness_instance",
    "verify_matroid_axioms",
    "write_ratio_reports",
    "write_stats_csv",
    "write_trace_csv",
]
