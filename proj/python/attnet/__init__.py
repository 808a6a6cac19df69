"""Media and public attention network analysis."""

from ._attnet import (
    AttnetError,
    ConfigError,
    StageError,
    chi2_test_2x2,
    disparity_backbone,
    f_sf,
    gini,
    granger_test,
    mann_whitney_u,
    run,
    simgen,
    spearman,
    triad_census,
)

__all__ = [
    "AttnetError",
    "ConfigError",
    "StageError",
    "chi2_test_2x2",
    "disparity_backbone",
    "f_sf",
    "gini",
    "granger_test",
    "mann_whitney_u",
    "run",
    "simgen",
    "spearman",
    "triad_census",
]
