"""
Parsing, validation and canonical serialization of caption documents.

Caption document (UTF-8 JSON):
    {
      "scene": "...",
      "aspect": "16:9",                      optional
      "units": "percent",                    optional, boxes given on a 0-100 scale
      "palette": [[r, g, b], ...],           optional
      "objects": [{"id", "description", "box": [x0, y0, x1, y1], "colors": [[r, g, b], ...],
                   "depth": 1.5, "attributes": {"key": "text"}}]
    }

Coordinates live in [0, 1] internally. Percent form only exists in documents.
"""
import json
import math
from collections import Counter
from decimal import ROUND_HALF_UP, Decimal

from paramcaption.errors import SchemaError
from paramcaption.schema.types import (
    MAX_PALETTE_COLORS, AnnotationBundle, BoundingBox, ObjectAnnotation, ObjectSpec, RgbColor,
    ScenePalette, StructuredCaption, Violation, aspect_ratio
)

UNIT = 'unit'
PERCENT = 'percent'
FORMS = (UNIT, PERCENT)

def _load_json(text):
    if isinstance(text, bytes):
        text = text.decode('utf-8')
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise SchemaError('$', 'malformed document: %s' % error)

def _require(mapping, key, kind, path):
    if key not in mapping:
        raise SchemaError(path, 'missing required field "%s"' % key)
    value = mapping[key]
    if not isinstance(value, kind):
        raise SchemaError('%s.%s' % (path, key), 'expected %s' % _kind_name(kind))
    return value

def _kind_name(kind):
    if isinstance(kind, tuple):
        return ' or '.join(k.__name__ for k in kind)
    return kind.__name__

def is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)

def parse_color(value, path):
    """Read a color written as [r, g, b] or '#RRGGBB'."""
    if isinstance(value, str):
        try:
            return RgbColor.from_hex(value)
        except ValueError as error:
            raise SchemaError(path, str(error))

    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(path, 'color must be [r, g, b] or "#RRGGBB"')
    for channel, name in zip(value, 'rgb'):
        if isinstance(channel, bool) or not isinstance(channel, int):
            if is_number(channel) and float(channel).is_integer():
                continue
            raise SchemaError('%s.%s' % (path, name), 'channel must be an integer')

    return RgbColor(*(int(channel) for channel in value))

def _parse_colors(value, path):
    if not isinstance(value, list):
        raise SchemaError(path, 'expected a list of colors')
    return tuple(parse_color(color, '%s[%d]' % (path, i)) for i, color in enumerate(value))

def _raw_box(value, path):
    if not isinstance(value, list) or len(value) != 4 or not all(is_number(v) for v in value):
        raise SchemaError(path, 'box must be [x0, y0, x1, y1]')
    return [float(v) for v in value]

def _detect_scale(document, raw_boxes):
    """Percent flag wins; otherwise any coordinate above 1 means the document is in percent."""
    units = document.get('units')
    if units is not None:
        if units not in FORMS:
            raise SchemaError('units', 'must be "unit" or "percent"')
        return 100.0 if units == PERCENT else 1.0

    if any(v > 1 for box in raw_boxes for v in box):
        return 100.0

    return 1.0

def _to_box(raw, scale):
    return BoundingBox(*(v / scale for v in raw)).snapped()

def _parse_depth(value, path):
    if value is None:
        return None
    if not is_number(value):
        raise SchemaError(path, 'depth must be a number')
    return float(value)

def parse_caption(text):
    """Parse a caption document and return a validated StructuredCaption.

    Raises:
        SchemaError naming the offending path, carrying every violation found.
    """
    document = _load_json(text)
    if not isinstance(document, dict):
        raise SchemaError('$', 'document must be a JSON object')

    scene = _require(document, 'scene', str, '$')
    aspect = document.get('aspect')
    if aspect is not None and not isinstance(aspect, str):
        raise SchemaError('aspect', 'expected "W:H" string')

    palette = None
    if document.get('palette') is not None:
        palette = ScenePalette(_parse_colors(document['palette'], 'palette'))

    raw_objects = _require(document, 'objects', list, '$')
    raw_boxes = {}
    for i, raw in enumerate(raw_objects):
        path = 'objects[%d]' % i
        if not isinstance(raw, dict):
            raise SchemaError(path, 'object must be a JSON object')
        if raw.get('box') is not None:
            raw_boxes[i] = _raw_box(raw['box'], path + '.box')
    scale = _detect_scale(document, raw_boxes.values())

    objects = []
    for i, raw in enumerate(raw_objects):
        path = 'objects[%d]' % i
        object_id = _require(raw, 'id', str, path)
        description = raw.get('description', '')
        if not isinstance(description, str):
            raise SchemaError(path + '.description', 'expected str')

        attributes = raw.get('attributes') or {}
        if not isinstance(attributes, dict):
            raise SchemaError(path + '.attributes', 'expected an object of strings')
        for key, value in attributes.items():
            if not isinstance(value, str):
                raise SchemaError('%s.attributes.%s' % (path, key), 'expected str')

        objects.append(ObjectSpec(
            id=object_id,
            description=description,
            box=_to_box(raw_boxes[i], scale) if i in raw_boxes else None,
            colors=_parse_colors(raw.get('colors') or [], path + '.colors'),
            depth=_parse_depth(raw.get('depth'), path + '.depth'),
            attributes=dict(attributes),
        ))

    caption = StructuredCaption(scene=scene, objects=tuple(objects), palette=palette, aspect=aspect)

    violations = validate_caption(caption)
    if violations:
        first = violations[0]
        raise SchemaError(first.path, first.message, violations)

    return caption

def validate_caption(caption):
    """Check every type invariant. Returns a list of Violation, empty iff the caption is valid."""
    violations = []

    if caption.aspect is not None and aspect_ratio(caption.aspect) is None:
        violations.append(Violation('aspect', 'expected a positive "W:H" ratio'))

    if caption.palette is not None:
        violations.extend(palette_violations(caption.palette))

    counts = Counter(obj.id for obj in caption.objects)
    reported = set()
    for i, obj in enumerate(caption.objects):
        path = 'objects[%d]' % i
        if not obj.id:
            violations.append(Violation(path + '.id', 'id must not be empty'))
        elif counts[obj.id] > 1 and obj.id not in reported:
            reported.add(obj.id)
            violations.append(Violation(path + '.id', 'duplicate object id "%s"' % obj.id))

        if obj.box is not None:
            for problem in obj.box.problems():
                violations.append(Violation(path + '.box', problem))

        for j, color in enumerate(obj.colors):
            violations.extend(_color_violations(color, '%s.colors[%d]' % (path, j)))

        if obj.depth is not None and (not math.isfinite(obj.depth) or obj.depth < 0):
            violations.append(Violation(path + '.depth', 'depth must be finite and ≥ 0'))

    return violations

def palette_violations(palette):
    violations = []
    if not palette.colors:
        violations.append(Violation('palette', 'palette must not be empty'))
    elif len(palette.colors) > MAX_PALETTE_COLORS:
        violations.append(Violation('palette', 'at most %d colors' % MAX_PALETTE_COLORS))
    for i, color in enumerate(palette.colors):
        violations.extend(_color_violations(color, 'palette[%d]' % i))
    return violations

def _color_violations(color, path):
    violations = []
    for problem in color.problems():
        channel = problem.split(' ', 1)[0].split('=', 1)[0]
        violations.append(Violation('%s.%s' % (path, channel), problem))
    return violations

class _Number:
    """A number already formatted for output."""
    def __init__(self, text):
        self.text = text

def percent_text(value):
    """One-decimal percent text of a unit coordinate, rounded half-up from its 4-decimal form.

    Rounding the canonical digits keeps boxes at least MIN_BOX_EXTENT wide from collapsing.
    """
    percent = Decimal('%.4f' % value) * 100
    return str(percent.quantize(Decimal('0.1'), rounding=ROUND_HALF_UP))

def _coordinate(value, form):
    if form == PERCENT:
        return _Number(percent_text(value))
    return _Number('%.4f' % value)

def to_document(caption, form=UNIT):
    """Canonical document structure: fixed key order, formatted coordinates, sorted attributes."""
    if form not in FORMS:
        raise ValueError('Invalid form "%s". Try "unit" or "percent".' % form)

    document = {'scene': caption.scene}
    if caption.aspect is not None:
        document['aspect'] = caption.aspect
    if form == PERCENT:
        document['units'] = PERCENT
    if caption.palette is not None:
        document['palette'] = [list(color.as_tuple()) for color in caption.palette.colors]

    objects = []
    for obj in caption.objects:
        entry = {'id': obj.id, 'description': obj.description}
        if obj.box is not None:
            entry['box'] = [_coordinate(v, form) for v in obj.box.as_tuple()]
        entry['colors'] = [list(color.as_tuple()) for color in obj.colors]
        if obj.depth is not None:
            entry['depth'] = obj.depth
        entry['attributes'] = {key: obj.attributes[key] for key in sorted(obj.attributes)}
        objects.append(entry)
    document['objects'] = objects

    return document

def _emit(value, indent, level):
    pad = ' ' * (indent * (level + 1))
    end = ' ' * (indent * level)

    if isinstance(value, _Number):
        return value.text
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = ['%s%s: %s' % (pad, json.dumps(key, ensure_ascii=False), _emit(item, indent, level + 1))
                 for key, item in value.items()]
        return '{\n%s\n%s}' % (',\n'.join(items), end)
    if isinstance(value, list):
        if not value:
            return '[]'
        # Flat lists of numbers (boxes, colors) stay on one line
        if all(isinstance(item, (_Number, int, float)) for item in value):
            return '[%s]' % ', '.join(_emit(item, indent, level) for item in value)
        items = ['%s%s' % (pad, _emit(item, indent, level + 1)) for item in value]
        return '[\n%s\n%s]' % (',\n'.join(items), end)

    return json.dumps(value, ensure_ascii=False)

def serialize_caption(caption, form=UNIT):
    """Canonical text of a caption. Byte-stable for equal captions.

    Unit form writes coordinates with 4 decimals, percent form with 1 decimal.
    """
    return _emit(to_document(caption, form), 2, 0) + '\n'

def flatten_document(document, prefix=''):
    """Map every leaf of a canonical document to its path, e.g. 'objects[0].box[2]'. Empty
    containers have no leaves."""
    leaves = {}
    if isinstance(document, dict):
        for key, value in document.items():
            path = '%s.%s' % (prefix, key) if prefix else key
            leaves.update(flatten_document(value, path))
    elif isinstance(document, list):
        for i, value in enumerate(document):
            leaves.update(flatten_document(value, '%s[%d]' % (prefix, i)))
    elif isinstance(document, _Number):
        leaves[prefix] = document.text
    else:
        leaves[prefix] = json.dumps(document)

    return leaves

def caption_diff(before, after, form=UNIT):
    """Sorted leaf paths whose canonical values differ between two captions."""
    left = flatten_document(to_document(before, form))
    right = flatten_document(to_document(after, form))
    return sorted(path for path in set(left) | set(right) if left.get(path) != right.get(path))

def describe_caption(caption):
    """Free-text rendering of a caption with percent boxes and hex colors, for generators that
    only take plain prompts."""
    lines = [caption.scene.strip()]
    for obj in caption.objects:
        parts = [obj.description.strip() or obj.id]
        if obj.box is not None:
            parts.append('top left: (%s, %s), bottom right: (%s, %s)' % tuple(
                percent_text(v) for v in obj.box.as_tuple()))
        if obj.colors:
            parts.append('colors: %s' % ', '.join(color.hex for color in obj.colors))
        lines.append('%s.' % '; '.join(parts))
    if caption.palette is not None:
        lines.append('Palette: %s.' % ', '.join(color.hex for color in caption.palette.colors))

    return '\n'.join(line for line in lines if line)

def parse_annotations(text):
    """Parse an annotation bundle: {"objects": {id: {"box", "colors", "depth"}}, "palette"}.

    Boxes follow the same unit/percent rules as captions.
    """
    document = _load_json(text)
    if not isinstance(document, dict):
        raise SchemaError('$', 'annotation bundle must be a JSON object')

    raw_objects = document.get('objects') or {}
    if not isinstance(raw_objects, dict):
        raise SchemaError('objects', 'expected an object keyed by object id')

    raw_boxes = {}
    for object_id, raw in raw_objects.items():
        path = 'objects.%s' % object_id
        if not isinstance(raw, dict):
            raise SchemaError(path, 'annotation must be a JSON object')
        if raw.get('box') is None:
            raise SchemaError(path, 'missing required field "box"')
        raw_boxes[object_id] = _raw_box(raw['box'], path + '.box')
    scale = _detect_scale(document, raw_boxes.values())

    annotations = {}
    for object_id, raw in raw_objects.items():
        path = 'objects.%s' % object_id
        annotations[object_id] = ObjectAnnotation(
            box=_to_box(raw_boxes[object_id], scale),
            colors=_parse_colors(raw.get('colors') or [], path + '.colors'),
            depth=_parse_depth(raw.get('depth'), path + '.depth'),
        )

    palette = None
    if document.get('palette') is not None:
        palette = ScenePalette(_parse_colors(document['palette'], 'palette'))

    return AnnotationBundle(objects=annotations, palette=palette)
