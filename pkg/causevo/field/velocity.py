import numpy as np

from causevo.curves.operations import unwrapped_xs
from causevo.field.builder import FieldBuilder
from causevo.spacetime.model import SpacetimeModel
from causevo.spacetime.temporal import CANONICAL, TemporalFunction


def coordinate_velocity(model: SpacetimeModel, builder: FieldBuilder) -> np.ndarray:
    """(X t, X x) at the atoms of eta, shape (atoms, 2); x is lifted across the cylinder's wrap."""
    curves = builder.sigma.curves
    xt = builder.build_from_samples("t", [c.ts for c in curves])
    xx = builder.build_from_samples("x", [unwrapped_xs(model, c) for c in curves])
    return np.column_stack([xt.values, xx.values])


def four_velocity(model: SpacetimeModel, builder: FieldBuilder, temporal: TemporalFunction = CANONICAL) -> np.ndarray:
    """Y = |grad T| X."""
    t, x = builder.atoms.coords[:, 0], builder.atoms.coords[:, 1]
    norm = temporal.gradient_norm(model, t, x)
    return coordinate_velocity(model, builder) * norm[:, None]


def three_velocity(model: SpacetimeModel, builder: FieldBuilder, temporal: TemporalFunction = CANONICAL) -> np.ndarray:
    """V = Y + grad T / |grad T|, the velocity seen by the observer of T (tangent to its slices)."""
    t, x = builder.atoms.coords[:, 0], builder.atoms.coords[:, 1]
    dt, dx = temporal.gradient(t, x)
    norm = temporal.gradient_norm(model, t, x)
    grad = np.column_stack([-np.asarray(dt) / model.alpha(t, x), np.asarray(dx) / model.spatial_metric(t, x)])
    return four_velocity(model, builder, temporal) + grad / norm[:, None]
