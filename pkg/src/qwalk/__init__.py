"""Simulator and analysis toolkit for 2-period coined quantum walks.

The package covers four connected pieces:

* :mod:`qwalk.core` evolves walks on the half line (reflecting edge) and on
  the line exactly, with amplitude arrays over the reachable support;
* :mod:`qwalk.measure` turns states into distributions and rescaled CDFs and
  measures distances between them;
* :mod:`qwalk.correspond` reconstructs the half-line walk from an associated
  line walk, amplitude by amplitude, and verifies the reconstruction;
* :mod:`qwalk.weak_limit` and :mod:`qwalk.closedform` evaluate the analytic
  descriptions (long-time laws, finite-time surrogates, and exact
  single-coin probability formulas) that the simulator is checked against.

``qwalk.cli`` exposes all of it as a command line tool.
"""

from .closedform import (
    ClosedFormQuery,
    FoldingReport,
    closedform_distribution,
    exact_probability,
    folding_relation_check,
    folding_relation_sweep,
)
from .core import (
    CoinOperator,
    HalfLineState,
    LineState,
    Protocol,
    evolve,
    halfline_step,
    iterate_steps,
    line_step,
    make_coin,
    make_delocalized_initial,
    make_line_initial,
    make_line_localized_initial,
    make_localized_initial,
)
from .correspond import (
    CorrespondenceReport,
    halfline_amps_from_line,
    halfline_dist_from_line,
    max_imaginary_drift,
    verify_amplitude_correspondence,
)
from .errors import (
    DegenerateAngle,
    DegenerateTime,
    DomainError,
    NormError,
    ParityContractError,
    QWalkError,
)
from .measure import (
    COMPONENTS,
    Distribution,
    RescaledCDF,
    distribution,
    kolmogorov_distance,
    rescaled_cdf,
    total_variation,
)
from .weak_limit import (
    LimitSpec,
    eta,
    eta_slope,
    eta_slope_localized,
    finite_time_approximation,
    halfline_limit_density,
    limit_cdf,
    limit_cdf_fn,
    line_limit_density,
    make_limit_spec,
    select_xi,
)

__version__ = "0.1.0"

__all__ = [
    "COMPONENTS",
    "ClosedFormQuery",
    "CoinOperator",
    "CorrespondenceReport",
    "DegenerateAngle",
    "DegenerateTime",
    "Distribution",
    "DomainError",
    "FoldingReport",
    "HalfLineState",
    "LimitSpec",
    "LineState",
    "NormError",
    "ParityContractError",
    "Protocol",
    "QWalkError",
    "RescaledCDF",
    "closedform_distribution",
    "distribution",
    "eta",
    "eta_slope",
    "eta_slope_localized",
    "evolve",
    "exact_probability",
    "finite_time_approximation",
    "folding_relation_check",
    "folding_relation_sweep",
    "halfline_amps_from_line",
    "halfline_dist_from_line",
    "halfline_limit_density",
    "halfline_step",
    "iterate_steps",
    "kolmogorov_distance",
    "limit_cdf",
    "limit_cdf_fn",
    "line_limit_density",
    "line_step",
    "make_coin",
    "make_delocalized_initial",
    "make_limit_spec",
    "make_line_initial",
    "make_line_localized_initial",
    "make_localized_initial",
    "max_imaginary_drift",
    "rescaled_cdf",
    "select_xi",
    "total_variation",
    "verify_amplitude_correspondence",
]
