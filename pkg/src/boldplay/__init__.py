"""Optimal stakes for simultaneous Bernoulli bets.

Exact tail probabilities of convex combinations of iid Bernoulli variables,
the set-family view used to search over all stake vectors, known optimality
regions for bold play, and binomial tail tools.
"""

__version__ = "0.1.0"

from .analysis import (
    best_average,
    bold_lower_hyp,
    candidate_ks,
    chaundy_bullard_check,
    classify,
    feige_upper,
    pz_upper,
    region_grid,
)
from .core import (
    Params,
    Stakes,
    StrategyValue,
    TailResult,
    as_fraction,
    average_play,
    bold_play,
    tail_dp,
    tail_enum,
    tail_mc,
)
from .errors import BoldPlayError, RegimeError, SizeCapError, StructureError
from .families import (
    IntervalFamily,
    SubsetFamily,
    enumerate_threshold_families,
    family_weight,
    fishburn_max,
    is_intersecting,
    matching_number,
    realizable,
    threshold_family,
)
from .optimizer import csoka_check, optimize_exhaustive, optimize_local

__all__ = [
    "BoldPlayError",
    "IntervalFamily",
    "Params",
    "RegimeError",
    "SizeCapError",
    "Stakes",
    "StrategyValue",
    "StructureError",
    "SubsetFamily",
    "TailResult",
    "as_fraction",
    "average_play",
    "best_average",
    "bold_lower_hyp",
    "bold_play",
    "candidate_ks",
    "chaundy_bullard_check",
    "classify",
    "csoka_check",
    "enumerate_threshold_families",
    "family_weight",
    "feige_upper",
    "fishburn_max",
    "is_intersecting",
    "matching_number",
    "optimize_exhaustive",
    "optimize_local",
    "pz_upper",
    "realizable",
    "region_grid",
    "tail_dp",
    "tail_enum",
    "tail_mc",
    "threshold_family",
]
