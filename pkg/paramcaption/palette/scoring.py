"""
Color fidelity scoring: nearest palette cluster to a target color and mean/median/p90 summaries.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from paramcaption.color import (
    ColorDifference, ab_distance_array, ciede2000_array, lab_array, srgb_array_to_lab, srgb_to_lab
)
from paramcaption.errors import EvaluationError
from paramcaption.palette.foreground import extract_foreground
from paramcaption.palette.kmeans import Cluster, filter_clusters, kmeans_lab

DELTA_E00 = 'deltaE00'
AB_DISTANCE = 'abDistance'
METRICS = (AB_DISTANCE, DELTA_E00)

METRIC_FUNCTIONS = {
    DELTA_E00: ciede2000_array,
    AB_DISTANCE: ab_distance_array,
}

@dataclass(frozen=True)
class PaletteConfig:
    white_threshold: int = 245
    erosion: int = 1
    min_fraction: float = 0.05
    seed: int = 0
    max_iter: int = 100
    tol: float = 1e-4

@dataclass(frozen=True)
class ColorCaseResult:
    case_id: str
    target: Tuple[int, int, int]
    k: int
    chosen: Dict[str, Tuple[Cluster, float]]
    difference: ColorDifference
    model: Optional[str] = None
    clusters: int = 0

    def to_dict(self):
        chosen = {}
        for metric, (cluster, distance) in sorted(self.chosen.items()):
            chosen[metric] = {
                'center': list(cluster.center.as_tuple()),
                'weight': cluster.weight,
                'distance': distance,
            }
        return {
            'caseId': self.case_id,
            'model': self.model,
            'k': self.k,
            'target': list(self.target),
            'clusters': self.clusters,
            'chosen': chosen,
            DELTA_E00: self.difference.delta_e00,
            AB_DISTANCE: self.difference.ab_distance,
        }

@dataclass(frozen=True)
class Summary:
    mean: float
    median: float
    p90: float

@dataclass(frozen=True)
class ColorStats:
    stats: Dict[str, Summary] = field(default_factory=dict)
    count: int = 0

    def to_dict(self):
        document = {'count': self.count}
        for metric, summary in sorted(self.stats.items()):
            document[metric] = {'mean': summary.mean, 'median': summary.median, 'p90': summary.p90}
        return document

def nearest_cluster(palette, target, metric=DELTA_E00):
    """Cluster closest to the target RgbColor under one metric.

    Ties go to the larger weight, then the lower cluster index.

    Returns:
        (Cluster, distance)
    """
    if not palette.clusters:
        raise EvaluationError('palette has no clusters')
    if metric not in METRIC_FUNCTIONS:
        raise ValueError('Unknown metric "%s". Try "%s" or "%s".' % (metric, DELTA_E00, AB_DISTANCE))

    target_lab = np.array(srgb_to_lab(target).as_tuple())
    centers = lab_array([cluster.center for cluster in palette.clusters])
    distances = METRIC_FUNCTIONS[metric](centers, target_lab)

    best = min(range(len(palette.clusters)),
               key=lambda i: (distances[i], -palette.clusters[i].weight, i))

    return palette.clusters[best], float(distances[best])

def eval_color_case(image, target, k, config=None, case_id='', model=None):
    """Score one generated image against its target color.

    extract_foreground -> kmeans_lab -> filter_clusters -> nearest_cluster, once per metric.

    Raises:
        EmptyForegroundError: the image has no object pixels.
    """
    config = config or PaletteConfig()
    mask = extract_foreground(image, config.white_threshold, config.erosion)
    pixels = srgb_array_to_lab(np.asarray(image)[mask])

    palette = kmeans_lab(pixels, k, seed=config.seed, max_iter=config.max_iter, tol=config.tol)
    palette = filter_clusters(palette, config.min_fraction)

    chosen = {metric: nearest_cluster(palette, target, metric) for metric in METRICS}

    return ColorCaseResult(
        case_id=case_id,
        target=target.as_tuple(),
        k=k,
        chosen=chosen,
        difference=ColorDifference(
            delta_e00=chosen[DELTA_E00][1],
            ab_distance=chosen[AB_DISTANCE][1],
        ),
        model=model,
        clusters=len(palette.clusters),
    )

def summarize(values):
    """Mean, median and p90 with linear interpolation between closest ranks."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    median, p90 = np.percentile(values, [50, 90])
    return Summary(mean=float(values.mean()), median=float(median), p90=float(p90))

def aggregate_color(results):
    """Summaries of both distances over a set of usable case results.

    Raises:
        EvaluationError: no results to aggregate.
    """
    results = sorted(results, key=lambda result: result.case_id)
    if not results:
        raise EvaluationError('no usable color cases to aggregate')

    stats = {
        DELTA_E00: summarize([result.difference.delta_e00 for result in results]),
        AB_DISTANCE: summarize([result.difference.ab_distance for result in results]),
    }

    return ColorStats(stats=stats, count=len(results))
