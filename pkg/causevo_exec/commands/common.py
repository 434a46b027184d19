from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from causevo.curves.model import CausalCurve
from causevo.measures.coupling import CouplingSolver
from causevo.measures.model import Evolution
from causevo.paths.dyadic import construct_sigma_on_grid
from causevo.paths.model import CurveMeasure
from causevo.paths.operations import induced_evolution, resample_curve_measure
from causevo.io.schema import (
    is_curve_measure_document,
    load_document,
    parse_curve_measure,
    parse_evolution,
)
from causevo.spacetime.functions import SpacetimeFunction
from causevo.spacetime.model import TWO_PI, GridMismatchError, SpacetimeKind, SpacetimeModel
from causevo.testfns.bumps import BumpFunction, check_interior_support
from causevo.testfns.causal import NullCoordinateArctan, TimeArctan
from causevo_exec.run_config import RunConfig

InputData = Union[Evolution, CurveMeasure]


def load_input(config: RunConfig) -> Tuple[SpacetimeModel, InputData]:
    """The evolution or curve measure named by --input; --model replaces the document's model."""
    document = load_document(config.input_path)
    descriptor = config.model_descriptor()
    if descriptor is not None:
        document = {**document, "model": descriptor}
    if is_curve_measure_document(document):
        return parse_curve_measure(document, config.rational)
    return parse_evolution(document, config.rational)


def load_evolution_input(config: RunConfig) -> Tuple[SpacetimeModel, Evolution]:
    model, data = load_input(config)
    if isinstance(data, CurveMeasure):
        return model, induced_evolution(data)
    return model, data


def solver_for(config: RunConfig, model: SpacetimeModel) -> CouplingSolver:
    return CouplingSolver(model, arithmetic=config.arithmetic)


def sigma_for(config: RunConfig, model: SpacetimeModel, data: InputData) -> CurveMeasure:
    """A curve measure for the input, on a grid no coarser than --dt when it is given."""
    sigma = data if isinstance(data, CurveMeasure) else construct_sigma_on_grid(model, data, solver_for(config, model))
    if config.dt is not None and len(sigma.grid) > 1 and float(np.max(np.diff(sigma.grid))) > config.dt:
        a, b = sigma.interval
        steps = int(np.ceil((b - a) / config.dt))
        sigma = resample_curve_measure(model, sigma, np.linspace(a, b, steps + 1))
    return sigma


def refinement_strides(levels: List[int]) -> Dict[int, int]:
    """The highest level is the input grid; each level below it doubles the step."""
    top = max(levels)
    return {level: 2 ** (top - level) for level in levels}


def subsample(sigma: CurveMeasure, stride: int) -> CurveMeasure:
    """Every stride-th sample of each curve; the grid ends must survive."""
    if stride == 1:
        return sigma
    size = len(sigma.grid)
    if (size - 1) % stride != 0:
        raise GridMismatchError(f"A grid of {size} times cannot be coarsened by a factor {stride}")
    curves = tuple(CausalCurve(c.times[::stride], c.coords[::stride], c.temporal) for c in sigma.curves)
    return CurveMeasure(curves, sigma.weights)


def failure(message: str, **extra: Any) -> Dict[str, Any]:
    return {"error_message": message, "input_error": False, **extra}


def success(**extra: Any) -> Dict[str, Any]:
    return {"error_message": None, **extra}


def event_list(events: Optional[List]) -> Optional[List[List[float]]]:
    return None if events is None else [e.as_list() for e in events]


def _anchor(sigma: CurveMeasure, t: float) -> float:
    """A position where sigma carries mass near time t: the heaviest curve's position."""
    k = int(np.argmin(np.abs(sigma.grid - t)))
    heaviest = int(np.argmax([float(w) for w in sigma.weights]))
    return float(sigma.curves[heaviest].xs[k])


def default_bumps(model: SpacetimeModel, sigma: CurveMeasure) -> List[BumpFunction]:
    """
    Three bumps following the heaviest curve in the middle third of the window,
    plus one bump that ignores position.
    """
    a, b = sigma.interval
    length = b - a
    period = TWO_PI if model.kind is SpacetimeKind.CYLINDER else None
    radius_t = length / 6.0
    battery = [
        BumpFunction(t0, _anchor(sigma, t0), radius_t, 1.0, period)
        for t0 in (a + length / 3.0, a + length / 2.0, a + 2.0 * length / 3.0)
    ]
    battery.append(BumpFunction(a + length / 2.0, 0.0, radius_t, None))
    for phi in battery:
        check_interior_support(phi, sigma.grid)
    return battery


def default_weights(model: SpacetimeModel, sigma: CurveMeasure) -> List[SpacetimeFunction]:
    """Functions paired against X(Psi) in the invariant-current check."""
    a, b = sigma.interval
    battery: List[SpacetimeFunction] = [TimeArctan(), BumpFunction((a + b) / 2.0, 0.0, (b - a) / 2.0, None)]
    if model.kind is SpacetimeKind.MINKOWSKI:
        battery.append(NullCoordinateArctan(1))
    return battery
