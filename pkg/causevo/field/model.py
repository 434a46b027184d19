from dataclasses import dataclass
from typing import Optional

import numpy as np

from causevo.measures.model import EtaAtoms
from causevo.spacetime.model import Event


@dataclass(frozen=True)
class FieldEvaluation:
    """Values of X applied to one function, stored at the atoms of eta only."""
    function_id: str
    atoms: EtaAtoms
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    def value_at(self, k: int, event: Event) -> float:
        hits = np.nonzero(
            (self.atoms.slice_index == k)
            & (self.atoms.coords[:, 0] == event.t)
            & (self.atoms.coords[:, 1] == event.x)
        )[0]
        if hits.size == 0:
            raise KeyError(f"{event} is not an atom of slice {k}")
        return float(self.values[hits[0]])

    def scaled(self, factor: np.ndarray, function_id: Optional[str] = None) -> "FieldEvaluation":
        return FieldEvaluation(function_id or self.function_id, self.atoms, self.values * factor)
