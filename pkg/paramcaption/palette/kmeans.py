"""
K-means over CIELab pixels for dominant palette extraction.

Seeding is scikit-learn's k-means++ from the given seed. Every Lloyd step is a one-iteration
KMeans fit started from the previous centers, so the inertia after each step is recorded.
scikit-learn moves empty clusters onto the points farthest from their centers. Deterministic for
a fixed (pixel order, k, seed).
"""
import logging
import warnings
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from sklearn.cluster import KMeans, kmeans_plusplus
from sklearn.exceptions import ConvergenceWarning
from threadpoolctl import threadpool_limits

from paramcaption.color import LabColor
from paramcaption.errors import EvaluationError

@dataclass(frozen=True)
class Cluster:
    center: LabColor
    weight: float

@dataclass(frozen=True)
class PaletteResult:
    clusters: Tuple[Cluster, ...]
    k: int
    total_foreground_pixels: int
    inertia_history: Tuple[float, ...] = ()
    iterations: int = 0

def _lloyd_step(points, centers, seed):
    model = KMeans(n_clusters=len(centers), init=centers, n_init=1, max_iter=1, tol=0.0,
                   random_state=seed, algorithm='lloyd')
    with warnings.catch_warnings():
        # Flat objects have fewer distinct colors than clusters
        warnings.simplefilter('ignore', ConvergenceWarning)
        model.fit(points)
    return model

def kmeans_lab(pixels, k, seed=0, max_iter=100, tol=1e-4):
    """Cluster Lab pixels.

    Params:
        pixels: (N, 3) array of Lab values (or a list of LabColor).
        k: Number of clusters.
        seed: Seed for k-means++ initialization.
        max_iter: Maximum number of Lloyd iterations.
        tol: Stop when no center moves further than this (Lab units).

    Returns:
        PaletteResult with k clusters (weights sum to 1, empty clusters have weight 0) and the
        inertia after every Lloyd step.

    Raises:
        EvaluationError: fewer pixels than clusters.
    """
    if isinstance(pixels, (list, tuple)) and pixels and isinstance(pixels[0], LabColor):
        pixels = [p.as_tuple() for p in pixels]
    points = np.asarray(pixels, dtype=np.float64).reshape(-1, 3)
    if len(points) == 0:
        raise ValueError('kmeans_lab needs at least one pixel')
    if k < 1:
        raise ValueError('k must be at least 1, got %d' % k)
    if len(points) < k:
        raise EvaluationError('%d foreground pixels cannot fill %d clusters' % (len(points), k))

    inertia_history = []
    iteration = 0
    # One OpenMP thread: reductions run in a fixed order, so equal inputs give bit-identical centers
    with threadpool_limits(limits=1, user_api='openmp'):
        centers, _ = kmeans_plusplus(points, n_clusters=k, random_state=seed)
        labels = None
        for iteration in range(1, max_iter + 1):
            model = _lloyd_step(points, centers, seed)
            inertia_history.append(float(model.inertia_))
            shift = np.sqrt(((model.cluster_centers_ - centers) ** 2).sum(axis=1)).max()
            centers, labels = model.cluster_centers_, model.labels_
            if shift < tol:
                break

    weights = np.bincount(labels, minlength=k) / len(points)

    clusters = tuple(Cluster(LabColor(*(float(v) for v in center)), float(weight))
                     for center, weight in zip(centers, weights))
    logging.debug('kmeans k=%d converged after %d iterations' % (k, iteration))

    return PaletteResult(
        clusters=clusters,
        k=k,
        total_foreground_pixels=len(points),
        inertia_history=tuple(inertia_history),
        iterations=iteration,
    )

def filter_clusters(palette, min_fraction=0.05):
    """Drop clusters holding less than min_fraction of the pixels. Order is preserved.

    Raises:
        EvaluationError: every cluster was filtered out.
    """
    kept = tuple(cluster for cluster in palette.clusters if cluster.weight >= min_fraction)
    if not kept:
        raise EvaluationError('all %d clusters are below %g of the pixels' % (
            len(palette.clusters), min_fraction))

    return replace(palette, clusters=kept)
