"""
Deterministic parametric edits of a structured caption.

An edit only touches the fields it addresses: everything else in the canonical serialization of
the result is byte-identical to the input.
"""
import json
import logging

from paramcaption.errors import EditError, SchemaError
from paramcaption.schema.parser import is_number, parse_color
from paramcaption.schema.types import EDIT_KINDS, BoundingBox, EditOp, ScenePalette, MAX_PALETTE_COLORS

TARGET_COUNTS = {
    'move-box': 1,
    'resize-box': 1,
    'swap-boxes': 2,
    'set-color': 1,
    'set-palette': 0,
    'set-attribute': 1,
}

def _check_box(box, object_id):
    problems = box.problems()
    if problems:
        raise EditError('resulting box of "%s" is invalid: %s' % (object_id, '; '.join(problems)))
    return box.snapped()

def _check_colors(colors):
    for color in colors:
        problems = color.problems()
        if problems:
            raise EditError('color %s out of range: %s' % (color.as_tuple(), '; '.join(problems)))

def _index(caption, object_id):
    try:
        return caption.index_of(object_id)
    except KeyError:
        raise EditError('unknown target id "%s"' % object_id)

def _box_of(caption, index):
    obj = caption.objects[index]
    if obj.box is None:
        raise EditError('object "%s" has no box' % obj.id)
    return obj.box

def apply_edit(caption, edit):
    """Return a new caption with the edit applied. The input caption is never modified.

    Raises:
        EditError: unknown target, invalid resulting box or out of range color.
    """
    if edit.kind not in EDIT_KINDS:
        raise EditError('unknown edit kind "%s"' % edit.kind)
    if len(edit.targets) != TARGET_COUNTS[edit.kind]:
        raise EditError('%s takes %d target(s), got %d' % (
            edit.kind, TARGET_COUNTS[edit.kind], len(edit.targets)))

    indices = [_index(caption, target) for target in edit.targets]

    if edit.kind == 'move-box':
        index = indices[0]
        dx, dy = edit.delta or (0.0, 0.0)
        box = _box_of(caption, index)
        if dx == 0 and dy == 0:
            return caption
        moved = _check_box(box.translated(dx, dy), edit.targets[0])
        return caption.with_object(index, caption.objects[index].replace(box=moved))

    if edit.kind == 'resize-box':
        index = indices[0]
        if edit.box is not None:
            resized = edit.box
        elif edit.scale is not None:
            resized = _box_of(caption, index).scaled(*edit.scale)
        else:
            raise EditError('resize-box needs a box or a scale')
        resized = _check_box(resized, edit.targets[0])
        return caption.with_object(index, caption.objects[index].replace(box=resized))

    if edit.kind == 'swap-boxes':
        first, second = indices
        first_box, second_box = _box_of(caption, first), _box_of(caption, second)
        caption = caption.with_object(first, caption.objects[first].replace(box=second_box))
        return caption.with_object(second, caption.objects[second].replace(box=first_box))

    if edit.kind == 'set-color':
        index = indices[0]
        _check_colors(edit.colors)
        return caption.with_object(index, caption.objects[index].replace(colors=tuple(edit.colors)))

    if edit.kind == 'set-palette':
        if not edit.colors or len(edit.colors) > MAX_PALETTE_COLORS:
            raise EditError('palette needs 1 to %d colors' % MAX_PALETTE_COLORS)
        _check_colors(edit.colors)
        return caption.replace(palette=ScenePalette(tuple(edit.colors)))

    # set-attribute
    index = indices[0]
    if not edit.key:
        raise EditError('set-attribute needs a key')
    attributes = dict(caption.objects[index].attributes)
    if edit.value is None:
        attributes.pop(edit.key, None)
    else:
        attributes[edit.key] = edit.value
    return caption.with_object(index, caption.objects[index].replace(attributes=attributes))

def apply_edits(caption, edits):
    """Apply edits in order. The first failure aborts with an EditError naming its index."""
    for index, edit in enumerate(edits):
        try:
            caption = apply_edit(caption, edit)
        except EditError as error:
            raise EditError(str(error), index=index)
        logging.debug('Applied edit %d (%s %s)' % (index, edit.kind, ', '.join(edit.targets)))

    return caption

def _pair(value, path):
    if (not isinstance(value, list) or len(value) != 2
            or not all(is_number(v) for v in value)):
        raise SchemaError(path, 'expected a pair of numbers')
    return (float(value[0]), float(value[1]))

def parse_edit(record, index=0):
    """Build an EditOp from one edit script record.

    Record fields: kind, target (one id) or targets (list), delta, scale, box, colors, key, value.
    Boxes in edit records are always in unit form.
    """
    path = '[%d]' % index
    if not isinstance(record, dict):
        raise SchemaError(path, 'edit must be a JSON object')

    kind = record.get('kind')
    if kind not in EDIT_KINDS:
        raise SchemaError(path + '.kind', 'must be one of %s' % ', '.join(EDIT_KINDS))

    targets = record.get('targets')
    if targets is None:
        targets = [record['target']] if record.get('target') is not None else []
    if not isinstance(targets, list) or not all(isinstance(t, str) for t in targets):
        raise SchemaError(path + '.targets', 'expected a list of object ids')

    box = None
    if record.get('box') is not None:
        raw = record['box']
        if not isinstance(raw, list) or len(raw) != 4 or not all(is_number(v) for v in raw):
            raise SchemaError(path + '.box', 'box must be [x0, y0, x1, y1]')
        box = BoundingBox(*(float(v) for v in raw))

    colors = tuple(parse_color(color, '%s.colors[%d]' % (path, i))
                   for i, color in enumerate(record.get('colors') or []))

    value = record.get('value')
    if value is not None and not isinstance(value, str):
        raise SchemaError(path + '.value', 'expected str or null')

    return EditOp(
        kind=kind,
        targets=tuple(targets),
        delta=_pair(record['delta'], path + '.delta') if record.get('delta') is not None else None,
        scale=_pair(record['scale'], path + '.scale') if record.get('scale') is not None else None,
        box=box,
        colors=colors,
        key=record.get('key'),
        value=value,
    )

def parse_edit_script(text):
    """Parse a JSON array of edit records into a list of EditOp."""
    try:
        records = json.loads(text)
    except json.JSONDecodeError as error:
        raise SchemaError('$', 'malformed edit script: %s' % error)
    if not isinstance(records, list):
        raise SchemaError('$', 'edit script must be a JSON array')

    return [parse_edit(record, i) for i, record in enumerate(records)]
