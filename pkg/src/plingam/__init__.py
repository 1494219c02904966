"""Parallel-ready DirectLiNGAM and VarLiNGAM with deterministic results."""

__version__ = "0.1.0"

from .direct import DirectLingamConfig, estimate_weights, fit, to_edges
from .errors import (
    DataError,
    LingamError,
    NumericError,
    ParseError,
    ZeroVarianceError,
)
from .metrics import MetricsReport, asymmetry_direction, compare_graphs, shd
from .ordering import causal_order, regress_out, search_causal_order, search_causal_order_parallel
from .simulate import SimSpec, gen_two_level_dag, sample_lingam, sample_svar
from .types import CausalOrder, DataMatrix, EdgeSet, VarModel, WeightedDag
from .var import TimeSeries, estimate_var, fit_varlingam, influence_ranking

__all__ = [
    "CausalOrder", "DataError", "DataMatrix", "DirectLingamConfig", "EdgeSet", "LingamError",
    "MetricsReport", "NumericError", "ParseError", "SimSpec", "TimeSeries", "VarModel",
    "WeightedDag", "ZeroVarianceError", "asymmetry_direction", "causal_order", "compare_graphs",
    "estimate_var", "estimate_weights", "fit", "fit_varlingam", "gen_two_level_dag",
    "influence_ranking", "regress_out", "sample_lingam", "sample_svar", "search_causal_order",
    "search_causal_order_parallel", "shd", "to_edges",
]
