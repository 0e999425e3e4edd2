from .kalman import kalman_loglik
from .model import (
    ArimaOrder,
    FitResult,
    RegressionDesign,
    coef_cov,
    difference,
    fit,
    t_ratio,
)
from .transform import constrain, unconstrain

__all__ = [
    "ArimaOrder",
    "FitResult",
    "RegressionDesign",
    "coef_cov",
    "constrain",
    "difference",
    "fit",
    "kalman_loglik",
    "t_ratio",
    "unconstrain",
]
