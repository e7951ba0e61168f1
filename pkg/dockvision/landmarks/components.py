from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from dockvision.landmarks.threshold import BinaryMask

EIGHT_CONNECTIVITY = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class Component:
    pixel_count: int
    centroid: tuple[float, float]
    # (left, top, right, bottom), inclusive pixel indices
    bbox: tuple[int, int, int, int]


@dataclass(frozen=True)
class ComponentSet:
    components: list[Component] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def centroids(self) -> np.ndarray:
        return np.array([c.centroid for c in self.components]).reshape(-1, 2)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.pixel_count for c in self.components], dtype=np.float64)


def connected_components(mask: BinaryMask, min_area: int = 3) -> ComponentSet:
    """8-connected labeling. Centroids are unweighted pixel means as (u, v)."""
    labels, count = ndimage.label(mask.bits, structure=EIGHT_CONNECTIVITY)
    components = []
    for index, region in enumerate(ndimage.find_objects(labels), start=1):
        if region is None:
            continue
        rows, cols = np.nonzero(labels[region] == index)
        if len(rows) < min_area:
            continue
        top, left = region[0].start, region[1].start
        components.append(
            Component(
                pixel_count=len(rows),
                centroid=(float(cols.mean() + left), float(rows.mean() + top)),
                bbox=(
                    int(cols.min() + left),
                    int(rows.min() + top),
                    int(cols.max() + left),
                    int(rows.max() + top),
                ),
            )
        )
    return ComponentSet(components)
