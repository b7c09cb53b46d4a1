"""
Value types of the parametric caption schema.

All types are frozen dataclasses. Constructors do not validate: validate_caption() reports what
is wrong with a caption as a list of violations, parse_caption() refuses to return one that has any.
"""
import math
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

EDIT_KINDS = ('move-box', 'resize-box', 'swap-boxes', 'set-color', 'set-palette', 'set-attribute')
ASPECT_PATTERN = re.compile(r'^\s*(\d+(?:\.\d+)?)\s*:\s*(\d+(?:\.\d+)?)\s*$')
MAX_PALETTE_COLORS = 16
# Unit form keeps 4 decimals; percent form keeps 1 decimal, i.e. 0.001 in unit terms
BOX_DECIMALS = 4
MIN_BOX_EXTENT = 0.001

@dataclass(frozen=True)
class BoundingBox:
    """Normalized box, origin top-left, x rightward and y downward.

    Boxes read from documents or produced by edits are snapped to BOX_DECIMALS, so the canonical
    text of a caption reads back to the same boxes.
    """
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0

    def area(self):
        return self.width * self.height

    def as_tuple(self):
        return (self.x0, self.y0, self.x1, self.y1)

    def problems(self):
        """Return a list of invariant violations as short messages. Empty when valid."""
        values = self.as_tuple()
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in values):
            return ['coordinates must be finite numbers']

        problems = []
        for name, value in zip(('x0', 'y0', 'x1', 'y1'), values):
            if value < 0 or value > 1:
                problems.append('%s=%g outside [0, 1]' % (name, value))
        if self.x1 <= self.x0:
            problems.append('x1 ≤ x0 (%g ≤ %g)' % (self.x1, self.x0))
        if self.y1 <= self.y0:
            problems.append('y1 ≤ y0 (%g ≤ %g)' % (self.y1, self.y0))
        if problems:
            return problems

        snapped = self.snapped()
        if round(snapped.width, BOX_DECIMALS) < MIN_BOX_EXTENT:
            problems.append('width %g below %g' % (self.width, MIN_BOX_EXTENT))
        if round(snapped.height, BOX_DECIMALS) < MIN_BOX_EXTENT:
            problems.append('height %g below %g' % (self.height, MIN_BOX_EXTENT))

        return problems

    def is_valid(self):
        return not self.problems()

    def snapped(self):
        """Coordinates rounded to the canonical unit precision."""
        return BoundingBox(*(round(v, BOX_DECIMALS) for v in self.as_tuple()))

    def translated(self, dx, dy):
        return BoundingBox(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)

    def scaled(self, sx, sy):
        """Scale about the box center."""
        cx = (self.x0 + self.x1) / 2
        cy = (self.y0 + self.y1) / 2
        half_w = self.width * sx / 2
        half_h = self.height * sy / 2
        return BoundingBox(cx - half_w, cy - half_h, cx + half_w, cy + half_h)

    def to_pixels(self, width, height):
        """Absolute (x0, y0, x1, y1) in pixels."""
        return (self.x0 * width, self.y0 * height, self.x1 * width, self.y1 * height)

    @classmethod
    def from_xywh(cls, x, y, w, h, width, height):
        """From a COCO style absolute [x, y, w, h] box, clipped to the image."""
        x0 = min(max(x / width, 0.0), 1.0)
        y0 = min(max(y / height, 0.0), 1.0)
        x1 = min(max((x + w) / width, 0.0), 1.0)
        y1 = min(max((y + h) / height, 0.0), 1.0)
        return cls(x0, y0, x1, y1)

@dataclass(frozen=True)
class RgbColor:
    r: int
    g: int
    b: int

    def as_tuple(self):
        return (self.r, self.g, self.b)

    @property
    def hex(self):
        return '#%02X%02X%02X' % self.as_tuple()

    @classmethod
    def from_hex(cls, text):
        text = text.strip().lstrip('#')
        if len(text) != 6:
            raise ValueError('Hex color must have 6 digits: %r' % text)
        return cls(int(text[0:2], 16), int(text[2:4], 16), int(text[4:6], 16))

    def problems(self):
        problems = []
        for name, value in zip('rgb', self.as_tuple()):
            if isinstance(value, bool) or not isinstance(value, int):
                problems.append('%s must be an integer' % name)
            elif value < 0 or value > 255:
                problems.append('%s=%d outside [0, 255]' % (name, value))
        return problems

@dataclass(frozen=True)
class ObjectSpec:
    id: str
    description: str = ''
    box: Optional[BoundingBox] = None
    colors: Tuple[RgbColor, ...] = ()
    depth: Optional[float] = None
    attributes: Dict[str, str] = field(default_factory=dict)

    def replace(self, **changes):
        return replace(self, **changes)

@dataclass(frozen=True)
class ScenePalette:
    colors: Tuple[RgbColor, ...]

@dataclass(frozen=True)
class StructuredCaption:
    scene: str
    objects: Tuple[ObjectSpec, ...] = ()
    palette: Optional[ScenePalette] = None
    aspect: Optional[str] = None

    def index_of(self, object_id):
        for index, obj in enumerate(self.objects):
            if obj.id == object_id:
                return index
        raise KeyError(object_id)

    def get(self, object_id):
        return self.objects[self.index_of(object_id)]

    def ids(self):
        return [obj.id for obj in self.objects]

    def with_object(self, index, obj):
        objects = list(self.objects)
        objects[index] = obj
        return replace(self, objects=tuple(objects))

    def replace(self, **changes):
        return replace(self, **changes)

@dataclass(frozen=True)
class EditOp:
    """One deterministic parametric edit.

    kind is one of EDIT_KINDS. targets holds one object id, two for swap-boxes and none for
    set-palette. Only the payload fields the kind uses are read:
        move-box: delta (dx, dy)
        resize-box: box, or scale (sx, sy) about the box center
        set-color / set-palette: colors
        set-attribute: key, value (None removes the key)
    """
    kind: str
    targets: Tuple[str, ...] = ()
    delta: Optional[Tuple[float, float]] = None
    scale: Optional[Tuple[float, float]] = None
    box: Optional[BoundingBox] = None
    colors: Tuple[RgbColor, ...] = ()
    key: Optional[str] = None
    value: Optional[str] = None

    def addressed_paths(self, caption):
        """Path prefixes of the canonical document this edit is allowed to change."""
        if self.kind == 'set-palette':
            return ['palette']

        paths = []
        for target in self.targets:
            index = caption.index_of(target)
            if self.kind in ('move-box', 'resize-box', 'swap-boxes'):
                paths.append('objects[%d].box' % index)
            elif self.kind == 'set-color':
                paths.append('objects[%d].colors' % index)
            elif self.kind == 'set-attribute':
                paths.append('objects[%d].attributes.%s' % (index, self.key))

        return paths

@dataclass(frozen=True)
class ObjectAnnotation:
    box: BoundingBox
    colors: Tuple[RgbColor, ...] = ()
    depth: Optional[float] = None

@dataclass(frozen=True)
class AnnotationBundle:
    """Perception outputs for a caption: per object id box/colors/depth, plus a scene palette."""
    objects: Dict[str, ObjectAnnotation] = field(default_factory=dict)
    palette: Optional[ScenePalette] = None

@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return '%s: %s' % (self.path, self.message)

def aspect_ratio(aspect):
    """Width over height for a 'W:H' string, or None when it does not parse."""
    match = ASPECT_PATTERN.match(aspect or '')
    if match is None:
        return None
    width, height = float(match.group(1)), float(match.group(2))
    if width <= 0 or height <= 0:
        return None
    return width / height

def object_category(obj):
    """Detection category of an object: its 'category' attribute, else the first word of its
    description, else its id."""
    category = obj.attributes.get('category')
    if category:
        return category.strip().lower()

    words = [word.strip('.,;:').lower() for word in obj.description.split()]
    words = [word for word in words if word and word not in ('a', 'an', 'the')]
    if words:
        return words[0]

    return obj.id
