"""
Enrichment: replace semantic location and qualitative color terms with the numeric boxes, colors
and depths produced by external perception models, and attach the global scene palette.
"""
import logging
import math
from collections import namedtuple

from paramcaption.errors import EnrichError
from paramcaption.schema.parser import palette_violations

DEFAULT_SEMANTIC_KEYS = ('location', 'position', 'color')

EnrichResult = namedtuple('EnrichResult', ['caption', 'unannotated'])

def enrich_caption(base, annotations, semantic_keys=DEFAULT_SEMANTIC_KEYS):
    """Merge an AnnotationBundle into a caption.

    Params:
        base: StructuredCaption to enrich.
        annotations: AnnotationBundle keyed by object id.
        semantic_keys: Attribute keys holding descriptive location/color text. They are removed
            from every annotated object.

    Returns:
        EnrichResult(caption, unannotated) where unannotated lists the ids that got no annotation.
    """
    known = set(base.ids())
    for object_id in annotations.objects:
        if object_id not in known:
            raise EnrichError(object_id, 'annotation references an unknown object id')

    for object_id, annotation in annotations.objects.items():
        problems = annotation.box.problems()
        if problems:
            raise EnrichError(object_id, 'invalid annotation box: %s' % '; '.join(problems))
        for color in annotation.colors:
            if color.problems():
                raise EnrichError(object_id, 'invalid annotation color %s' % (color.as_tuple(),))
        if annotation.depth is not None and (not math.isfinite(annotation.depth) or annotation.depth < 0):
            raise EnrichError(object_id, 'annotation depth must be finite and ≥ 0')

    if annotations.palette is not None:
        violations = palette_violations(annotations.palette)
        if violations:
            raise EnrichError('palette', '; '.join(str(v) for v in violations))

    objects = []
    unannotated = []
    for obj in base.objects:
        annotation = annotations.objects.get(obj.id)
        if annotation is None:
            unannotated.append(obj.id)
            objects.append(obj)
            continue

        attributes = {key: value for key, value in obj.attributes.items() if key not in semantic_keys}
        objects.append(obj.replace(
            box=annotation.box.snapped(),
            colors=tuple(annotation.colors) if annotation.colors else obj.colors,
            depth=annotation.depth if annotation.depth is not None else obj.depth,
            attributes=attributes,
        ))

    caption = base.replace(objects=tuple(objects))
    if annotations.palette is not None:
        caption = caption.replace(palette=annotations.palette)

    if unannotated:
        logging.info('Unannotated objects: %s' % ', '.join(unannotated))

    return EnrichResult(caption, tuple(unannotated))
