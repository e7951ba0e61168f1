"""Weighted k-means with k-means++ seeding."""
import logging
from dataclasses import dataclass

import numpy as np

from dockvision.types import FloatArray

logger = logging.getLogger(__name__)


@dataclass
class KMeansResult:
    centres: FloatArray
    labels: np.ndarray
    objective: float
    history: list[float]


def _distances(points: FloatArray, centres: FloatArray) -> FloatArray:
    return np.sum((points[:, None, :] - centres[None, :, :]) ** 2, axis=2)


def kmeans_plusplus(
    points: FloatArray, weights: FloatArray, k: int, rng: np.random.Generator
) -> FloatArray:
    """Seeds drawn with probability proportional to weight times squared distance."""
    first = rng.choice(len(points), p=weights / weights.sum())
    centres = [points[first]]
    for _ in range(1, k):
        closest = _distances(points, np.array(centres)).min(axis=1)
        score = weights * closest
        if score.sum() <= 0:
            # Fewer distinct points than clusters, reuse the heaviest one.
            centres.append(points[np.argmax(weights)])
            continue
        centres.append(points[rng.choice(len(points), p=score / score.sum())])
    return np.array(centres)


def weighted_kmeans(
    points: FloatArray,
    weights: FloatArray,
    k: int,
    rng: np.random.Generator,
    max_iter: int = 50,
    n_init: int = 4,
) -> KMeansResult:
    """
    Lloyd iterations from `n_init` k-means++ seedings, keeping the lowest weighted
     objective. Iteration stops once the assignments stop changing.
    """
    points = np.asarray(points, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    best = None
    for _ in range(n_init):
        centres = kmeans_plusplus(points, weights, k, rng)
        labels = np.full(len(points), -1)
        history: list[float] = []
        for iteration in range(max_iter):
            distances = _distances(points, centres)
            new_labels = np.argmin(distances, axis=1)
            nearest = distances[np.arange(len(points)), new_labels]
            objective = float(np.sum(weights * nearest))
            assert not history or objective <= history[-1] * (1 + 1e-12) + 1e-12, (
                "k-means objective increased"
            )
            history.append(objective)
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
            for cluster in range(k):
                members = labels == cluster
                if members.any():
                    centres[cluster] = np.average(
                        points[members], axis=0, weights=weights[members]
                    )
        logger.debug(f"k-means converged after {iteration + 1} iterations.")
        if best is None or history[-1] < best.objective:
            best = KMeansResult(centres.copy(), labels.copy(), history[-1], history)
    return best
