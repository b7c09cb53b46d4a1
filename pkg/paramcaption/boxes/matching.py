"""
IoU and greedy COCO-style matching of detections to ground-truth boxes.

Matching is scoped per (image, category). Detections are visited by descending score (ties by
detection id) and each takes the unmatched ground truth with the highest IoU at or above the
threshold.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from paramcaption.schema import BoundingBox

@dataclass(frozen=True)
class Detection:
    image_id: str
    category: str
    score: float
    box: BoundingBox
    det_id: str = ''

    def sort_key(self):
        return (-self.score, self.det_id, self.image_id, self.category, self.box.as_tuple())

@dataclass(frozen=True)
class GroundTruthBox:
    image_id: str
    category: str
    box: BoundingBox
    area_pixels: Optional[float] = None

@dataclass
class MatchResult:
    """Outcome of matching at one IoU threshold.

    matches holds (detection, ground truth or None, iou) for every detection in visiting order.
    """
    iou_threshold: float
    matches: List[Tuple[Detection, Optional[GroundTruthBox], float]] = field(default_factory=list)
    unmatched: List[GroundTruthBox] = field(default_factory=list)

    @property
    def true_positives(self):
        return [(det, gt) for det, gt, _ in self.matches if gt is not None]

    @property
    def false_positives(self):
        return [det for det, gt, _ in self.matches if gt is None]

    @property
    def false_negatives(self):
        return list(self.unmatched)

    def scored(self, category=None):
        """(detection, is_true_positive) pairs for average_precision()."""
        return [(det, gt is not None) for det, gt, _ in self.matches
                if category is None or det.category == category]

    def ground_truth_count(self, category=None):
        matched = sum(1 for _, gt, _ in self.matches if gt is not None
                      and (category is None or gt.category == category))
        missed = sum(1 for gt in self.unmatched if category is None or gt.category == category)
        return matched + missed

def iou(a, b):
    """Intersection over union of two boxes, in [0, 1]."""
    width = min(a.x1, b.x1) - max(a.x0, b.x0)
    height = min(a.y1, b.y1) - max(a.y0, b.y0)
    if width <= 0 or height <= 0:
        return 0.0

    intersection = width * height
    union = a.area() + b.area() - intersection
    if union <= 0:
        return 0.0

    return min(intersection / union, 1.0)

def greedy_match(detections, ground_truths, iou_threshold, gt_ignore=None):
    """Match one (image, category) group.

    Params:
        detections: Detections already sorted by Detection.sort_key.
        ground_truths: Ground truths of the same image and category.
        gt_ignore: Optional flags; ignored ground truths are only taken when no regular one
            qualifies, and a detection matched to one is itself ignored.

    Returns:
        (gt index or None per detection, iou per detection, ignored flag per detection)
    """
    gt_ignore = gt_ignore or [False] * len(ground_truths)
    taken = [False] * len(ground_truths)
    assigned, overlaps, ignored = [], [], []

    for det in detections:
        best, best_iou, best_ignored = None, -1.0, True
        for index, gt in enumerate(ground_truths):
            if taken[index]:
                continue
            overlap = iou(det.box, gt.box)
            if overlap < iou_threshold:
                continue
            # Regular ground truths win over ignored ones, then the higher IoU
            if (best_ignored and not gt_ignore[index]) or (
                    best_ignored == gt_ignore[index] and overlap > best_iou):
                best, best_iou, best_ignored = index, overlap, gt_ignore[index]

        if best is not None:
            taken[best] = True
            assigned.append(best)
            overlaps.append(best_iou)
            ignored.append(best_ignored)
        else:
            assigned.append(None)
            overlaps.append(0.0)
            ignored.append(False)

    return assigned, overlaps, ignored

def group_by_image_category(detections, ground_truths):
    detection_groups = defaultdict(list)
    for det in detections:
        detection_groups[(det.image_id, det.category)].append(det)
    gt_groups = defaultdict(list)
    for gt in ground_truths:
        gt_groups[(gt.image_id, gt.category)].append(gt)

    for group in detection_groups.values():
        group.sort(key=Detection.sort_key)

    return detection_groups, gt_groups

def match_detections(detections, ground_truths, iou_threshold=0.5):
    """Greedy category-scoped matching at one IoU threshold.

    Returns:
        MatchResult listing every detection with its matched ground truth (or None for a false
        positive) and every ground truth left unmatched (false negatives).
    """
    detection_groups, gt_groups = group_by_image_category(detections, ground_truths)
    result = MatchResult(iou_threshold=iou_threshold)

    for key in sorted(set(detection_groups) | set(gt_groups)):
        dets = detection_groups.get(key, [])
        gts = gt_groups.get(key, [])
        assigned, overlaps, _ = greedy_match(dets, gts, iou_threshold)

        for det, index, overlap in zip(dets, assigned, overlaps):
            result.matches.append((det, gts[index] if index is not None else None, overlap))
        matched = set(index for index in assigned if index is not None)
        result.unmatched.extend(gt for index, gt in enumerate(gts) if index not in matched)

    result.matches.sort(key=lambda match: match[0].sort_key())

    return result
