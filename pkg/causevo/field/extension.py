from typing import Optional, Sequence

import numpy as np

from causevo.field.builder import FieldBuilder
from causevo.field.model import FieldEvaluation
from causevo.spacetime.functions import SpacetimeFunction
from causevo.testfns.partition import uniform_time_partition


class PartitionOfUnityError(ValueError):
    pass


def extend_field(
    builder: FieldBuilder,
    psi: SpacetimeFunction,
    partition: Optional[Sequence[SpacetimeFunction]] = None,
    tol: float = 1e-12,
) -> FieldEvaluation:
    """
    X(Psi) = sum_j X(phi_j Psi) for a function Psi without compact support, where
    the phi_j sum to one at every atom of eta.
    """
    if partition is None:
        window = builder.ev.interval
        partition = uniform_time_partition(window, max((window[1] - window[0]) / 4.0, builder.grid_step)).members()
    members = list(partition)
    if not members:
        raise PartitionOfUnityError("Empty partition")

    t, x = builder.atoms.coords[:, 0], builder.atoms.coords[:, 1]
    total = np.sum([np.asarray(phi(t, x), dtype=float) for phi in members], axis=0)
    if np.any(np.abs(total - 1.0) > tol):
        worst = float(np.max(np.abs(total - 1.0)))
        raise PartitionOfUnityError(f"Partition does not sum to one on the atoms (off by {worst:.3g})")

    values = np.zeros(len(builder.atoms))
    for phi in members:
        values = values + builder.build(phi * psi).values
    return FieldEvaluation(psi.function_id, builder.atoms, values)
