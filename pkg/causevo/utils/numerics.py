import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike

Weight = Union[Fraction, float]


def central_difference(values: ArrayLike, times: ArrayLike) -> np.ndarray:
    """
    Derivative of sampled values along the grid: central differences at interior
    points, one-sided differences at both ends.
    """
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise ValueError("Differentiation needs a grid with at least two points")

    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (times[2:] - times[:-2])
    out[0] = (values[1] - values[0]) / (times[1] - times[0])
    out[-1] = (values[-1] - values[-2]) / (times[-1] - times[-2])
    return out


def trapezoid_weights(times: ArrayLike) -> np.ndarray:
    """Quadrature weights of the trapezoid rule on a (possibly nonuniform) grid."""
    times = np.asarray(times, dtype=float)
    w = np.zeros(times.shape)
    if times.size < 2:
        return w
    gaps = np.diff(times)
    w[:-1] += gaps / 2.0
    w[1:] += gaps / 2.0
    return w


def compensated_sum(values: Iterable[float]) -> float:
    return math.fsum(float(v) for v in values)


def weight_sum(weights: Sequence[Weight]) -> Weight:
    """Exact sum for rationals, compensated sum for floats."""
    if all(isinstance(w, Fraction) for w in weights):
        return sum(weights, Fraction(0))
    return math.fsum(float(w) for w in weights)


def is_unit_mass(weights: Sequence[Weight], tol: float = 1e-12) -> bool:
    total = weight_sum(weights)
    if isinstance(total, Fraction):
        return total == 1
    return abs(total - 1.0) < tol


def parse_weight_literal(literal: Union[str, int, float, Fraction], rational: bool = True) -> Weight:
    """
    Parse '1/3', '0.25' or a number.

    In rational mode decimals are read exactly ('0.1' -> 1/10); floats become their
    exact binary fraction.
    """
    if isinstance(literal, Fraction):
        return literal if rational else float(literal)
    if isinstance(literal, bool):
        raise ValueError(f"Invalid weight: {literal!r}")
    if isinstance(literal, (int, float)):
        return Fraction(literal) if rational else float(literal)
    text = str(literal).strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid weight literal '{literal}': {e}") from e
    return value if rational else float(value)


def format_weight(weight: Weight) -> str:
    if isinstance(weight, Fraction):
        return str(weight)
    return repr(float(weight))
