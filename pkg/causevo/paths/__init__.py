from .model import CurveMeasure
from .operations import (
    concatenate_curve_measures,
    induced_evolution,
    joint_pushforward,
    pad_with_rest_curves,
    pushforward_eval,
    resample_curve_measure,
)
from .dyadic import (
    DyadicConstructor,
    DyadicStepError,
    construct_sigma_on_grid,
    dyadic_construct_sigma,
    dyadic_times,
)
from .wasserstein import wasserstein_curve_distance

__all__ = [
    "CurveMeasure",
    "concatenate_curve_measures",
    "induced_evolution",
    "joint_pushforward",
    "pad_with_rest_curves",
    "pushforward_eval",
    "resample_curve_measure",
    "DyadicConstructor",
    "DyadicStepError",
    "construct_sigma_on_grid",
    "dyadic_construct_sigma",
    "dyadic_times",
    "wasserstein_curve_distance",
]
