"""Depth-based multivariate goodness-of-fit and two-sample scale tests."""

from .depth import (
    DepthKind,
    depth_profile,
    halfspace_depth_1d,
    halfspace_depth_2d_exact,
    halfspace_depth_approx,
    rank_transform,
    zonoid_depth,
)
from .distributions import DistributionSpec, Marginal, parse_spec
from .one_sample import GofConfig, SphericalGaussianOracle, TestReport, run_gof
from .simulate import ExperimentConfig, run_experiment
from .two_sample import (
    DepthRanks,
    PValueMethod,
    TwoSampleStat,
    ddplot_points,
    joint_depth_ranks,
    two_sample_test,
)
from .uniformity import (
    StatKind,
    ad_statistic,
    cvm_statistic,
    greenwood_statistic,
    ks_statistic,
    mc_null_table,
    mc_pvalue,
)

__version__ = "0.1.0"

__all__ = [
    "DepthKind",
    "DepthRanks",
    "DistributionSpec",
    "ExperimentConfig",
    "GofConfig",
    "Marginal",
    "PValueMethod",
    "SphericalGaussianOracle",
    "StatKind",
    "TestReport",
    "TwoSampleStat",
    "ad_statistic",
    "cvm_statistic",
    "ddplot_points",
    "depth_profile",
    "greenwood_statistic",
    "halfspace_depth_1d",
    "halfspace_depth_2d_exact",
    "halfspace_depth_approx",
    "joint_depth_ranks",
    "ks_statistic",
    "mc_null_table",
    "mc_pvalue",
    "parse_spec",
    "rank_transform",
    "run_experiment",
    "run_gof",
    "two_sample_test",
    "zonoid_depth",
]
