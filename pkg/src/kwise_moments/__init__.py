"""Sharp moment and tail bounds for sums of k-wise independent bounded
random variables, with exact rational reference computations."""

__version__ = "0.1.0"

from .combinatorics import (
    as_fraction,
    binomial,
    elementary_symmetric,
    factorial,
    format_rational,
    multinomial,
    stirling_estimate,
    symmetric_mean,
)
from .distributions import (
    DiscretePMF,
    bernoulli_p_from_sigma2,
    bernoulli_p_matches_sigma2,
    binomial_pmf,
    symmetrize,
    three_point,
)
from .exact_moments import (
    composition_weight,
    exact_moment_het_threepoint,
    exact_moment_iid_threepoint,
    exact_moment_symmetrized_binomial,
    het_threepoint_upper_bound,
)
from .sharp_bounds import (
    BoundQuery,
    BoundResult,
    Calibration,
    Regime,
    classify_regime,
    continuous_relaxation_max,
    discrete_max_bound,
    fit_calibration,
    load_calibration,
    moment_bound,
    tail_bound,
)
from .baselines import (
    BaselineQuery,
    ComparisonRow,
    bellare_rompel,
    bernstein_moment,
    compare_all,
    rosenthal_moment,
    schmidt_find_Cstar,
    schmidt_optimized,
    schmidt_raw,
)
from .oracle import (
    SumLaw,
    check_majorization,
    check_symmetrization_props,
    convolve_sum,
    moment_of_sum,
)
from .kwise_sim import (
    KWiseFamily,
    TailEstimate,
    build_family,
    empirical_moment,
    empirical_tail,
    exhaustive_moment,
    run_simulation,
)
