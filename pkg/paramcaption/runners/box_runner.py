import logging
import os

from paramcaption.boxes import (
    ApReport, evaluate_boxes, load_caption_ground_truth, load_category_meta, load_coco_ground_truth,
    load_detections, load_image_dims
)
from paramcaption.errors import EvaluationError
from paramcaption.render import boxes_as_detections
from paramcaption.schema import parse_caption

def caption_detections(directory):
    """Score-1 detections from a directory of captions, e.g. the captions that conditioned generation."""
    detections = []
    for filename in sorted(os.listdir(directory)):
        if not filename.endswith('.json'):
            continue
        with open(os.path.join(directory, filename), 'r', encoding='utf-8') as caption_file:
            caption = parse_caption(caption_file.read())
        detections.extend(boxes_as_detections(caption, os.path.splitext(filename)[0]))

    logging.info('Built %d detections from captions in %s' % (len(detections), directory))

    return detections

class BoxRunner:
    def __init__(self, config):
        self.area_buckets = config.area_buckets
        self.rarity_buckets = config.rarity_buckets
        self.max_detections = config.max_detections

    def load(self, detections_path, ground_truth_path, dims_path=None):
        """Ground truth is a COCO annotations file or a caption directory (then image dimensions
        come from the dims manifest). Detections are a COCO results file or a caption directory.
        """
        image_dims = load_image_dims(dims_path) if dims_path else None
        category_names = {}
        if os.path.isdir(ground_truth_path):
            ground_truths, _ = load_caption_ground_truth(ground_truth_path)
        else:
            ground_truths, coco_dims, category_names = load_coco_ground_truth(ground_truth_path)
            image_dims = dict(coco_dims, **(image_dims or {}))

        if os.path.isdir(detections_path):
            detections = caption_detections(detections_path)
        else:
            if image_dims is None:
                raise EvaluationError('pixel detections need image dimensions (--dims)')
            detections = load_detections(detections_path, image_dims, category_names)

        return detections, ground_truths, image_dims

    def evaluate(self, detections, ground_truths, image_dims=None, meta_path=None):
        meta = load_category_meta(meta_path) if meta_path else None
        area_buckets = self.area_buckets
        if area_buckets and image_dims is None:
            logging.warning('No image dimensions given, skipping area buckets (pass --dims)')
            area_buckets = False

        return evaluate_boxes(
            detections,
            ground_truths,
            meta=meta,
            image_dims=image_dims,
            area_buckets=area_buckets,
            rarity_buckets=self.rarity_buckets,
            max_detections=self.max_detections,
        )

    @staticmethod
    def to_rows(report):
        """Box alignment table: a single row with every column; missing buckets are blank."""
        row = []
        for column in ApReport.COLUMNS:
            value = getattr(report, column)
            row.append('' if value is None else '%.4f' % value)
        return list(ApReport.COLUMNS), [row]
