"""
COCO/LVIS style box alignment metrics.

AP is the 101-point interpolated average precision, averaged over IoU thresholds
0.50:0.05:0.95 and over categories that have ground truth. AR is the recall at
`max_detections` per image and category, averaged the same way. Area buckets follow COCO
(32^2 and 96^2 pixel boundaries) and rarity buckets follow LVIS (rare/common/frequent).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from paramcaption.boxes.matching import greedy_match, group_by_image_category
from paramcaption.errors import EvaluationError

IOU_THRESHOLDS = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))
RECALL_POINTS = np.linspace(0.0, 1.0, 101)

AREA_RANGES = {
    'small': (0.0, 32.0 ** 2),
    'medium': (32.0 ** 2, 96.0 ** 2),
    'large': (96.0 ** 2, float('inf')),
}

RARITIES = ('rare', 'common', 'frequent')
RARITY_ALIASES = {'r': 'rare', 'c': 'common', 'f': 'frequent'}

@dataclass(frozen=True)
class CategoryMeta:
    """Rarity class per category, for LVIS style AP_r / AP_c / AP_f."""
    rarity: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, mapping):
        rarity = {}
        for category, value in mapping.items():
            value = RARITY_ALIASES.get(value, value)
            if value not in RARITIES:
                raise ValueError('Invalid rarity "%s" for category "%s"' % (value, category))
            rarity[category] = value
        return cls(rarity)

@dataclass(frozen=True)
class ApReport:
    AP: float
    AP50: float
    AR: float
    AP_s: Optional[float] = None
    AP_m: Optional[float] = None
    AP_l: Optional[float] = None
    AP_r: Optional[float] = None
    AP_c: Optional[float] = None
    AP_f: Optional[float] = None
    per_category: Dict[str, float] = field(default_factory=dict)

    COLUMNS = ('AP', 'AP50', 'AR', 'AP_s', 'AP_m', 'AP_l', 'AP_r', 'AP_c', 'AP_f')

    def to_dict(self):
        document = {column: getattr(self, column) for column in self.COLUMNS}
        document['perCategory'] = dict(sorted(self.per_category.items()))
        return document

def average_precision(scored, num_ground_truths):
    """101-point interpolated AP.

    Params:
        scored: (Detection, is_true_positive) pairs at one IoU threshold.
        num_ground_truths: Ground truths the detections compete for.

    Returns:
        AP in [0, 1], or None when there is no ground truth (the category is skipped).
    """
    if num_ground_truths == 0:
        return None

    ordered = sorted(scored, key=lambda entry: entry[0].sort_key())
    if not ordered:
        return 0.0

    hits = np.array([is_tp for _, is_tp in ordered], dtype=bool)
    tp = np.cumsum(hits)
    fp = np.cumsum(~hits)
    recall = tp / num_ground_truths
    precision = tp / (tp + fp)

    # Precision envelope: running max from the right
    precision = np.maximum.accumulate(precision[::-1])[::-1]

    indices = np.searchsorted(recall, RECALL_POINTS, side='left')
    sampled = np.where(indices < len(precision), precision[np.minimum(indices, len(precision) - 1)], 0.0)

    return float(sampled.mean())

def _in_range(area, area_range):
    low, high = area_range
    return low <= area < high

def _accumulate(detection_groups, gt_groups, categories, max_detections, area_range=None,
                areas=None):
    """AP and recall per (threshold, category). Entries are None for categories without
    ground truth in this area range."""
    scored = {(t, c): [] for t in IOU_THRESHOLDS for c in categories}
    found = {(t, c): 0 for t in IOU_THRESHOLDS for c in categories}
    counted = {c: 0 for c in categories}

    for key in sorted(set(detection_groups) | set(gt_groups)):
        image_id, category = key
        dets = detection_groups.get(key, [])[:max_detections]
        gts = gt_groups.get(key, [])

        gt_ignore = [False] * len(gts)
        det_outside = [False] * len(dets)
        if area_range is not None:
            gt_ignore = [not _in_range(areas['gt'][id(gt)], area_range) for gt in gts]
            det_outside = [not _in_range(areas['det'][id(det)], area_range) for det in dets]
        counted[category] += gt_ignore.count(False)

        for threshold in IOU_THRESHOLDS:
            assigned, _, ignored = greedy_match(dets, gts, threshold, gt_ignore)
            for det, index, is_ignored, outside in zip(dets, assigned, ignored, det_outside):
                if index is None and outside:
                    continue
                if is_ignored:
                    continue
                scored[(threshold, category)].append((det, index is not None))
                if index is not None:
                    found[(threshold, category)] += 1

    precision, recall = {}, {}
    for threshold in IOU_THRESHOLDS:
        for category in categories:
            total = counted[category]
            precision[(threshold, category)] = average_precision(scored[(threshold, category)], total)
            recall[(threshold, category)] = found[(threshold, category)] / total if total else None

    return precision, recall

def _mean(values):
    values = [v for v in values if v is not None]
    if not values:
        return None
    return float(np.mean(values))

def _pixel_areas(detections, ground_truths, image_dims):
    areas = {'gt': {}, 'det': {}}
    for kind, items in (('gt', ground_truths), ('det', detections)):
        for item in items:
            if kind == 'gt' and item.area_pixels is not None:
                areas['gt'][id(item)] = item.area_pixels
                continue
            if item.image_id not in image_dims:
                raise EvaluationError('no image dimensions for image "%s"' % item.image_id)
            width, height = image_dims[item.image_id]
            areas[kind][id(item)] = item.box.area() * width * height
    return areas

def evaluate_boxes(detections, ground_truths, meta=None, image_dims=None, area_buckets=False,
                   rarity_buckets=False, max_detections=100):
    """Full box alignment report.

    Params:
        detections: Detection list (any order).
        ground_truths: GroundTruthBox list.
        meta: CategoryMeta, required when rarity_buckets is set.
        image_dims: {image id: (width, height)}, required when area_buckets is set.

    Raises:
        EvaluationError: missing dimensions or rarity metadata for a requested bucket.
    """
    detections = list(detections)
    ground_truths = list(ground_truths)
    categories = sorted(set(gt.category for gt in ground_truths) | set(d.category for d in detections))

    areas = None
    if area_buckets:
        if image_dims is None:
            raise EvaluationError('area buckets need image dimensions')
        areas = _pixel_areas(detections, ground_truths, image_dims)

    if rarity_buckets:
        if meta is None:
            raise EvaluationError('rarity buckets need category metadata')
        missing = sorted(set(gt.category for gt in ground_truths) - set(meta.rarity))
        if missing:
            raise EvaluationError('no rarity for categories: %s' % ', '.join(missing))

    detection_groups, gt_groups = group_by_image_category(detections, ground_truths)
    precision, recall = _accumulate(detection_groups, gt_groups, categories, max_detections)

    per_category = {}
    for category in categories:
        value = _mean(precision[(t, category)] for t in IOU_THRESHOLDS)
        if value is not None:
            per_category[category] = value

    report = {
        'AP': _mean(precision.values()) or 0.0,
        'AP50': _mean(precision[(0.5, c)] for c in categories) or 0.0,
        'AR': _mean(recall.values()) or 0.0,
        'per_category': per_category,
    }

    if area_buckets:
        for name, column in (('small', 'AP_s'), ('medium', 'AP_m'), ('large', 'AP_l')):
            bucket, _ = _accumulate(detection_groups, gt_groups, categories, max_detections,
                                    AREA_RANGES[name], areas)
            report[column] = _mean(bucket.values())

    if rarity_buckets:
        for rarity, column in zip(RARITIES, ('AP_r', 'AP_c', 'AP_f')):
            members = [c for c in per_category if meta.rarity.get(c) == rarity]
            report[column] = _mean(per_category[c] for c in members)

    logging.info('Box evaluation: %d detections, %d ground truths, %d categories, AP %.4f' % (
        len(detections), len(ground_truths), len(categories), report['AP']))

    return ApReport(**report)
