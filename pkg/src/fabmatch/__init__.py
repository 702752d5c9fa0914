"""Elastic distances and geodesics between planar curves.

Curves are compared through the F_{a,b} transform, which turns the elastic
metric with bending weight ``a`` and stretching weight ``b`` into a flat L2
geometry. Two matching modes are provided: exact matching over
reparametrizations by dynamic programming, and relaxed matching where the
end curve only has to agree with the target up to a varifold penalty.
"""
from .analysis import (
    DistanceMatrix,
    NotEnoughPositiveEigenvalues,
    classical_mds,
    jacobi_eigh,
    kmeans_silhouette,
    pairwise_distances,
)
from .curves import DiscreteCurve, add_noise, edge_frame, elastic_metric, resample_uniform
from .errors import (
    CurveTooSmall,
    DegenerateEdge,
    DimensionMismatch,
    FabmatchError,
    NegativeNorm,
    ParamMismatch,
    ZeroCrossing,
    ZeroSample,
)
from .exact import ExactMatchConfig, Reparametrization, dp_match, exact_distance, reparametrize
from .lbfgs import LBFGSResult, lbfgs_minimize
from .relaxed import RelaxedConfig, objective, objective_gradient, relaxed_match
from .result import MatchResult
from .transform import FabImage, fab_forward, fab_inverse, geodesic, interpolate, l2_distance
from .varifold import (
    DiscreteVarifold,
    VarifoldKernel,
    curve_to_varifold,
    varifold_distance_gradient,
    varifold_distance_sq,
    varifold_inner,
)

__version__ = "0.1.0"
