import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from dockvision import exceptions
from dockvision.landmarks.components import ComponentSet
from dockvision.landmarks.kmeans import weighted_kmeans

logger = logging.getLogger(__name__)

Observation = Literal['Full', 'Partial']


@dataclass(frozen=True)
class LandmarkSet:
    centroids: list[tuple[float, float]] = field(default_factory=list)
    observation: Observation = 'Partial'
    expected: int = 8

    def __post_init__(self):
        if self.observation == 'Full' and len(self.centroids) != self.expected:
            raise exceptions.PartialObservation(
                f"A full observation needs {self.expected} centroids, got "
                f"{len(self.centroids)}."
            )

    @property
    def is_full(self) -> bool:
        return self.observation == 'Full'

    def as_array(self) -> np.ndarray:
        return np.array(self.centroids, dtype=np.float64).reshape(-1, 2)

    def shifted(self, du: float, dv: float) -> 'LandmarkSet':
        return LandmarkSet(
            [(u + du, v + dv) for u, v in self.centroids],
            self.observation,
            self.expected,
        )

    def to_dict(self) -> dict:
        return {
            'observation': self.observation,
            'centroids': [list(i) for i in self.centroids],
        }


def consolidate_landmarks(
    comps: ComponentSet, k: int = 8, seed: int = 0, max_iter: int = 50
) -> LandmarkSet:
    """
    Fewer than `k` components is a partial observation. More than `k` are merged by
     area weighted k-means over the component centroids.
    """
    if len(comps) < k:
        return LandmarkSet(
            [tuple(c.centroid) for c in comps.components], 'Partial', expected=k
        )
    if len(comps) == k:
        return LandmarkSet([tuple(c.centroid) for c in comps.components], 'Full', k)

    logger.debug(f"Merging {len(comps)} components into {k} landmarks.")
    result = weighted_kmeans(
        comps.centroids,
        comps.weights,
        k,
        np.random.default_rng(seed),
        max_iter=max_iter,
    )
    return LandmarkSet(
        [(float(u), float(v)) for u, v in result.centres], 'Full', expected=k
    )
