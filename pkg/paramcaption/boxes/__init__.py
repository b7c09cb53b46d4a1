from .matching import Detection, GroundTruthBox, MatchResult, iou, match_detections
from .average_precision import (
    IOU_THRESHOLDS, ApReport, CategoryMeta, average_precision, evaluate_boxes
)
from .io import (
    load_caption_ground_truth, load_category_meta, load_coco_ground_truth, load_detections,
    load_image_dims
)
