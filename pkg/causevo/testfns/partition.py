from typing import List, Optional, Sequence, Tuple

import numpy as np

from causevo.spacetime.functions import SpacetimeFunction
from causevo.testfns.bumps import bump_profile


class TimePartition:
    """
    A smooth partition of unity in time: phi_j = b_j / sum_i b_i with
    b_j(t) = beta((t - c_j) / r). It sums to one wherever some b_i is positive.
    """

    def __init__(self, centers: Sequence[float], radius: float, label: str = "pu"):
        if radius <= 0:
            raise ValueError("Partition radius must be positive")
        self.centers = np.asarray(centers, dtype=float)
        self.radius = float(radius)
        self.label = label

    def _bumps(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        u = (np.asarray(t, dtype=float)[None, ...] - self.centers.reshape((-1,) + (1,) * np.ndim(t))) / self.radius
        b, db = bump_profile(u)
        return b, db / self.radius

    def members(self) -> List["PartitionMember"]:
        return [PartitionMember(self, j) for j in range(self.centers.size)]

    def total(self, t) -> np.ndarray:
        return np.sum(self._bumps(t)[0], axis=0)


class PartitionMember(SpacetimeFunction):
    def __init__(self, partition: TimePartition, index: int):
        self.partition = partition
        self.index = index
        self.function_id = f"{partition.label}[{index}]"

    def __call__(self, t, x):
        t, _ = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        b, _ = self.partition._bumps(t)
        total = np.sum(b, axis=0)
        return np.where(total > 0, b[self.index] / np.where(total > 0, total, 1.0), 0.0)

    def gradient(self, t, x):
        t, _ = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        b, db = self.partition._bumps(t)
        total, dtotal = np.sum(b, axis=0), np.sum(db, axis=0)
        safe = np.where(total > 0, total, 1.0)
        dt = np.where(total > 0, (db[self.index] * total - b[self.index] * dtotal) / safe ** 2, 0.0)
        return dt, np.zeros(t.shape)

    @property
    def time_support(self) -> Optional[Tuple[float, float]]:
        c = self.partition.centers[self.index]
        return c - self.partition.radius, c + self.partition.radius


def uniform_time_partition(window: Tuple[float, float], spacing: float, label: str = "pu") -> TimePartition:
    """Centers every `spacing` from one step before the window to one step after it."""
    a, b = window
    count = int(np.ceil((b - a) / spacing)) + 3
    centers = a - spacing + spacing * np.arange(count)
    return TimePartition(centers, spacing, label)
