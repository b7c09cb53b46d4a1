"""
File loaders for box evaluation: COCO results detections, COCO annotation ground truth, caption
directory ground truth, image dimension manifests and category rarity metadata.

Every malformed record raises SchemaError naming its path, e.g. 'detections.json[3].bbox'.
"""
import json
import logging
import math
import os

from paramcaption.boxes.average_precision import CategoryMeta
from paramcaption.boxes.matching import Detection, GroundTruthBox
from paramcaption.errors import SchemaError
from paramcaption.schema import BoundingBox, object_category, parse_caption
from paramcaption.schema.parser import is_number

def _read_json(path):
    with open(path, 'r', encoding='utf-8') as json_file:
        try:
            return json.load(json_file)
        except json.JSONDecodeError as error:
            raise SchemaError(path, 'malformed JSON: %s' % error)

def _field(record, key, path):
    if not isinstance(record, dict):
        raise SchemaError(path, 'expected a JSON object')
    if key not in record:
        raise SchemaError(path, 'missing required field "%s"' % key)
    return record[key]

def _identifier(record, key, path):
    value = _field(record, key, path)
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError('%s.%s' % (path, key), 'expected an integer or string id')
    return value

def _number(record, key, path):
    value = _field(record, key, path)
    if not is_number(value) or not math.isfinite(value):
        raise SchemaError('%s.%s' % (path, key), 'expected a finite number')
    return float(value)

def _dimension(record, key, path):
    value = _number(record, key, path)
    if value <= 0:
        raise SchemaError('%s.%s' % (path, key), 'must be positive')
    return value

def _xywh(record, path):
    value = _field(record, 'bbox', path)
    if (not isinstance(value, list) or len(value) != 4
            or not all(is_number(v) and math.isfinite(v) for v in value)):
        raise SchemaError(path + '.bbox', 'bbox must be [x, y, width, height]')
    return [float(v) for v in value]

def load_image_dims(path):
    """{image id: [width, height]} manifest."""
    document = _read_json(path)
    if not isinstance(document, dict):
        raise SchemaError(path, 'expected an object of image id -> [width, height]')

    dims = {}
    for image_id, value in document.items():
        if (not isinstance(value, list) or len(value) != 2
                or not all(is_number(v) and math.isfinite(v) and v > 0 for v in value)):
            raise SchemaError('%s.%s' % (path, image_id), 'expected [width, height]')
        dims[str(image_id)] = (float(value[0]), float(value[1]))
    return dims

def load_category_meta(path):
    document = _read_json(path)
    if not isinstance(document, dict):
        raise SchemaError(path, 'expected an object of category -> rarity')
    try:
        return CategoryMeta.from_mapping(document)
    except ValueError as error:
        raise SchemaError(path, str(error))

def load_coco_ground_truth(path):
    """COCO annotations file -> (ground truths, image dims, category names by id)."""
    document = _read_json(path)
    if not isinstance(document, dict):
        raise SchemaError(path, 'expected a COCO annotations object')
    for key in ('images', 'categories', 'annotations'):
        if not isinstance(document.get(key, []), list):
            raise SchemaError('%s.%s' % (path, key), 'expected a list')

    images = {}
    for index, image in enumerate(document.get('images', [])):
        where = '%s.images[%d]' % (path, index)
        images[str(_identifier(image, 'id', where))] = (
            _dimension(image, 'width', where), _dimension(image, 'height', where))

    names = {}
    for index, category in enumerate(document.get('categories', [])):
        where = '%s.categories[%d]' % (path, index)
        name = _field(category, 'name', where)
        if not isinstance(name, str):
            raise SchemaError(where + '.name', 'expected str')
        names[_identifier(category, 'id', where)] = name

    ground_truths = []
    for index, annotation in enumerate(document.get('annotations', [])):
        where = '%s.annotations[%d]' % (path, index)
        image_id = str(_identifier(annotation, 'image_id', where))
        if image_id not in images:
            raise SchemaError(where + '.image_id', 'annotation for unknown image "%s"' % image_id)
        category_id = _identifier(annotation, 'category_id', where)
        width, height = images[image_id]
        box = BoundingBox.from_xywh(*_xywh(annotation, where), width, height)
        if box.area() <= 0:
            logging.warning('Skipping zero-area ground truth in image %s' % image_id)
            continue
        ground_truths.append(GroundTruthBox(image_id, names.get(category_id, str(category_id)), box))

    logging.info('Loaded %d ground truth boxes over %d images' % (len(ground_truths), len(images)))

    return ground_truths, images, names

def load_caption_ground_truth(directory, image_dims=None):
    """Every *.json caption in a directory; the image id is the file stem."""
    ground_truths = []
    for filename in sorted(os.listdir(directory)):
        if not filename.endswith('.json'):
            continue
        image_id = os.path.splitext(filename)[0]
        with open(os.path.join(directory, filename), 'r', encoding='utf-8') as caption_file:
            caption = parse_caption(caption_file.read())

        for obj in caption.objects:
            if obj.box is None:
                continue
            ground_truths.append(GroundTruthBox(image_id, object_category(obj), obj.box))

    logging.info('Loaded %d ground truth boxes from captions in %s' % (len(ground_truths), directory))

    return ground_truths, image_dims

def load_detections(path, image_dims, category_names=None):
    """COCO results file: [{image_id, category or category_id, bbox: [x, y, w, h], score}].

    Boxes are in absolute pixels and normalized with the image dimensions. Parts outside the
    image are clipped; zero-area boxes are dropped.
    """
    records = _read_json(path)
    if not isinstance(records, list):
        raise SchemaError(path, 'detections must be a JSON array')

    category_names = category_names or {}
    detections = []
    for index, record in enumerate(records):
        where = '%s[%d]' % (path, index)
        image_id = str(_identifier(record, 'image_id', where))
        if image_id not in image_dims:
            raise SchemaError(where + '.image_id', 'no dimensions for image "%s"' % image_id)

        score = _number(record, 'score', where)
        if not 0 <= score <= 1:
            raise SchemaError(where + '.score', 'score must be in [0, 1]')

        if 'category' in record:
            category = _field(record, 'category', where)
            if not isinstance(category, str):
                raise SchemaError(where + '.category', 'expected str')
        else:
            category_id = _identifier(record, 'category_id', where)
            category = category_names.get(category_id, str(category_id))

        width, height = image_dims[image_id]
        box = BoundingBox.from_xywh(*_xywh(record, where), width, height)
        if box.area() <= 0:
            logging.warning('Dropping zero-area detection %d in image %s' % (index, image_id))
            continue

        detections.append(Detection(image_id, category, score, box, det_id='%06d' % index))

    logging.info('Loaded %d detections from %s' % (len(detections), path))

    return detections
