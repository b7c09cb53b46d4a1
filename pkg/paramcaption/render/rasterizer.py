"""
Reference rasterizer: draws a structured caption as flat, hard-edged shapes.

A pixel belongs to a box when its center falls inside it: x0 * W <= col + 0.5 < x1 * W, and the
same for rows. Objects are painted from the largest depth to the smallest (missing depth is 0),
ties in list order, so nearer and later objects end up on top.
"""
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from paramcaption.boxes import Detection
from paramcaption.errors import RenderError
from paramcaption.palette import load_image
from paramcaption.schema import RgbColor, object_category

RECTANGLE = 'rectangle'
ELLIPSE = 'ellipse'
SHAPES = (RECTANGLE, ELLIPSE)

WHITE = RgbColor(255, 255, 255)

@dataclass(frozen=True)
class RenderConfig:
    width: int = 512
    height: int = 512
    shape: str = RECTANGLE
    background: RgbColor = WHITE
    palette_background: bool = False

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError('Render size must be at least 1x1, got %dx%d' % (self.width, self.height))
        if self.shape not in SHAPES:
            raise ValueError('Invalid shape "%s". Try "rectangle" or "ellipse".' % self.shape)

def coverage(box, width, height):
    """Boolean (height, width) mask of the pixels whose centers fall inside the box."""
    cols = np.arange(width) + 0.5
    rows = np.arange(height) + 0.5
    inside_x = (cols >= box.x0 * width) & (cols < box.x1 * width)
    inside_y = (rows >= box.y0 * height) & (rows < box.y1 * height)
    return inside_y[:, None] & inside_x[None, :]

def _ellipse(box, width, height):
    cols = np.arange(width) + 0.5
    rows = np.arange(height) + 0.5
    cx, cy = (box.x0 + box.x1) / 2 * width, (box.y0 + box.y1) / 2 * height
    rx, ry = box.width / 2 * width, box.height / 2 * height
    inside = ((cols[None, :] - cx) / rx) ** 2 + ((rows[:, None] - cy) / ry) ** 2 <= 1
    return inside & coverage(box, width, height)

def painter_order(caption):
    """Object indices from farthest to nearest."""
    return sorted(range(len(caption.objects)),
                  key=lambda i: (-(caption.objects[i].depth or 0.0), i))

def rasterize(caption, config=None):
    """Render a caption into a (height, width, 3) uint8 array.

    Raises:
        RenderError: an object has no box or no color.
    """
    config = config or RenderConfig()
    for obj in caption.objects:
        if obj.box is None or not obj.colors:
            raise RenderError('object "%s" needs a box and at least one color to be rendered' % obj.id)

    background = config.background
    if config.palette_background and caption.palette is not None and caption.palette.colors:
        background = caption.palette.colors[0]

    image = np.empty((config.height, config.width, 3), dtype=np.uint8)
    image[:, :] = background.as_tuple()

    for index in painter_order(caption):
        obj = caption.objects[index]
        if config.shape == ELLIPSE:
            mask = _ellipse(obj.box, config.width, config.height)
        else:
            mask = coverage(obj.box, config.width, config.height)
        image[mask] = obj.colors[0].as_tuple()

    return image

def _pixel_edges(box, width, height):
    """First and last covered column/row of a box, or None when it covers no pixel."""
    mask = coverage(box, width, height)
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if len(rows) == 0 or len(cols) == 0:
        return None
    return int(cols[0]), int(rows[0]), int(cols[-1]), int(rows[-1])

def overlay_boxes(image, boxes, stroke=2):
    """Draw box outlines on a copy of the image; pixels inside the outline are untouched.

    Params:
        boxes: (BoundingBox, RgbColor) pairs.
        stroke: Outline width in pixels, drawn inward from the box edge.
    """
    image = np.ascontiguousarray(image, dtype=np.uint8)
    if not boxes:
        return image.copy()

    height, width = image.shape[:2]
    canvas = Image.fromarray(image)
    draw = ImageDraw.Draw(canvas)
    for box, color in boxes:
        edges = _pixel_edges(box, width, height)
        if edges is not None:
            draw.rectangle(edges, outline=color.as_tuple(), width=stroke)

    return np.asarray(canvas, dtype=np.uint8).copy()

def boxes_as_detections(caption, image_id=''):
    """One score-1 detection per object, for upper-bound (oracle) evaluations."""
    detections = []
    for obj in caption.objects:
        if obj.box is None:
            raise RenderError('object "%s" has no box' % obj.id)
        detections.append(Detection(image_id, object_category(obj), 1.0, obj.box, det_id=obj.id))
    return detections

def save_png(image, path):
    Image.fromarray(np.ascontiguousarray(image, dtype=np.uint8)).save(path, format='PNG')

def load_png(path):
    """8-bit RGB array of an image file; alpha is composited over white."""
    return np.array(load_image(path), dtype=np.uint8)
