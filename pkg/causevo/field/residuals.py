from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from causevo.config import CONFIG
from causevo.field.builder import FieldBuilder
from causevo.field.model import FieldEvaluation
from causevo.measures.model import Evolution, eta_atoms
from causevo.paths.model import CurveMeasure
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.temporal import CANONICAL, TemporalFunction
from causevo.testfns.bumps import TestFunctionSupportError, check_interior_support
from causevo.testfns.outer import ComposedFunction, OuterFunction
from causevo.utils.numerics import central_difference, compensated_sum


class ToleranceSchedule:
    """First-order, second-order and round-off tolerances, scaled by the test function."""

    def __init__(
        self,
        cont_factor: Optional[float] = None,
        quad_factor: Optional[float] = None,
        roundoff_factor: Optional[float] = None,
    ):
        self.cont_factor = CONFIG.TOL_CONT_FACTOR if cont_factor is None else cont_factor
        self.quad_factor = CONFIG.TOL_QUAD_FACTOR if quad_factor is None else quad_factor
        self.roundoff_factor = CONFIG.ROUNDOFF_FACTOR if roundoff_factor is None else roundoff_factor

    def continuity(self, dt: float, scale: float = 1.0) -> float:
        return self.cont_factor * dt * scale

    def quadratic(self, dt: float, scale: float = 1.0) -> float:
        return self.quad_factor * dt ** 2 * scale

    def roundoff(self, dt: float, scale: float = 1.0) -> float:
        """Float error of a difference quotient over values of size `scale`."""
        return self.roundoff_factor * scale / dt


@dataclass(frozen=True)
class ResidualRecord:
    phi_id: str
    residual_kind: str
    dt: float
    value: float
    tolerance: float
    lower_bound: bool = False

    @property
    def passed(self) -> bool:
        if self.lower_bound:
            return self.value >= -self.tolerance
        return self.value <= self.tolerance

    def as_row(self) -> dict:
        return {
            "phi_id": self.phi_id,
            "residual_kind": self.residual_kind,
            "dt": self.dt,
            "value": self.value,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _as_builder(sigma_or_builder: Union[CurveMeasure, FieldBuilder], ev: Optional[Evolution]) -> FieldBuilder:
    if isinstance(sigma_or_builder, FieldBuilder):
        return sigma_or_builder
    if ev is None:
        raise ValueError("An evolution is needed to build the field")
    return FieldBuilder(sigma_or_builder, ev)


def continuity_residual(field: FieldEvaluation, ev: Evolution, phi: Optional[SpacetimeFunction] = None) -> float:
    """|int X(Phi) d eta|; Phi must vanish near the boundary slices."""
    if phi is not None:
        check_interior_support(phi, ev.times)
    return abs(compensated_sum(field.atoms.eta_weight * field.values))


def clock_normalization_residual(
    sigma: Union[CurveMeasure, FieldBuilder],
    ev: Optional[Evolution],
    phi: SpacetimeFunction,
    temporal: TemporalFunction = CANONICAL,
) -> float:
    """max |X(Phi T) - X(Phi) T - Phi| over the atoms of eta."""
    builder = _as_builder(sigma, ev)
    phi_t = builder.build(phi * temporal)
    x_phi = builder.build(phi)
    t_values = builder.values_at_atoms(temporal)
    phi_values = builder.values_at_atoms(phi)
    return float(np.max(np.abs(phi_t.values - x_phi.values * t_values - phi_values)))


def chain_rule_residual(
    sigma: Union[CurveMeasure, FieldBuilder],
    ev: Optional[Evolution],
    theta: OuterFunction,
    phis: Sequence[SpacetimeFunction],
) -> float:
    """max |X(Theta(Phi)) - sum_l d_l Theta(Phi) X(Phi_l)| over the atoms of eta."""
    theta.require_vanishing_at_zero()
    builder = _as_builder(sigma, ev)
    composite = builder.build(ComposedFunction(theta, phis))
    values = [builder.values_at_atoms(p) for p in phis]
    expected = np.zeros(len(builder.atoms))
    for partial, p in zip(theta.partials, phis):
        expected = expected + np.asarray(partial(*values)) * builder.build(p).values
    return float(np.max(np.abs(composite.values - expected)))


def causality_residual(
    sigma: Union[CurveMeasure, FieldBuilder],
    ev: Optional[Evolution],
    f: SpacetimeFunction,
    phi: SpacetimeFunction,
) -> float:
    """
    min of X(Phi f) - X(Phi) f over the atoms of eta.

    Along each curve this is [Phi+ (f+ - f0) + Phi- (f0 - f-)] / (t+ - t-), so a
    causally sampled curve gives a nonnegative value up to round-off.
    """
    builder = _as_builder(sigma, ev)
    phi_values = builder.values_at_atoms(phi)
    if np.any(phi_values < 0):
        raise TestFunctionSupportError(f"{phi.function_id} is negative at an atom")
    product = builder.build(phi * f)
    x_phi = builder.build(phi)
    return float(np.min(product.values - x_phi.values * builder.values_at_atoms(f)))


def lambda_curve(ev: Evolution, values: Union[FieldEvaluation, np.ndarray]) -> np.ndarray:
    """t_k -> sum_q mu_{t_k}(q) g(q) for g given at the atoms of eta."""
    if isinstance(values, FieldEvaluation):
        atoms, g = values.atoms, values.values
    else:
        atoms, g = eta_atoms(ev), np.asarray(values, dtype=float)
    out = np.zeros(len(ev))
    np.add.at(out, atoms.slice_index, atoms.slice_mass * g)
    return out


def lambda_derivative_check(
    sigma: Union[CurveMeasure, FieldBuilder],
    ev: Optional[Evolution],
    phi: SpacetimeFunction,
) -> float:
    """max over the grid of |d/dt Lambda(Phi) - Lambda(X Phi)|, derivative by central differences."""
    builder = _as_builder(sigma, ev)
    lam_phi = lambda_curve(builder.ev, builder.values_at_atoms(phi))
    lam_x = lambda_curve(builder.ev, builder.build(phi))
    return float(np.max(np.abs(central_difference(lam_phi, builder.ev.grid) - lam_x)))


def refinement_ratios(values: Sequence[float]) -> List[float]:
    """Ratios between residuals at successive grid halvings; about 2^order when converging."""
    return [a / b if b != 0 else float("inf") for a, b in zip(values[:-1], values[1:])]
