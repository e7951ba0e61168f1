import numpy as np

from dockvision import exceptions
from dockvision.landmarks.consolidate import LandmarkSet
from dockvision.types import FloatArray


def order_landmarks(landmarks: LandmarkSet) -> list[FloatArray]:
    """
    Centroids sorted by angle around their mean, clockwise on screen (v grows
     downwards) starting from the topmost one. Returns every cyclic shift of that
     order as (k, 2) arrays, the first one starting at the topmost centroid.
    """
    if not landmarks.is_full:
        raise exceptions.PartialObservation(
            "Correspondences need a full observation of the station."
        )
    points = landmarks.as_array()
    offsets = points - points.mean(axis=0)
    angles = np.arctan2(offsets[:, 1], offsets[:, 0])
    ordered = points[np.argsort(angles, kind='stable')]
    start = int(np.argmin(ordered[:, 1]))
    ordered = np.roll(ordered, -start, axis=0)
    return [np.roll(ordered, -shift, axis=0) for shift in range(len(ordered))]
