from .types import (
    AnnotationBundle, BoundingBox, EditOp, ObjectAnnotation, ObjectSpec, RgbColor, ScenePalette,
    StructuredCaption, Violation, object_category
)
from .parser import (
    PERCENT, UNIT, caption_diff, describe_caption, parse_annotations, parse_caption,
    serialize_caption, validate_caption
)
from .edits import apply_edit, apply_edits, parse_edit_script
from .enrich import DEFAULT_SEMANTIC_KEYS, enrich_caption
