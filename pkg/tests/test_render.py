import numpy as np
import pytest

from paramcaption.errors import RenderError
from paramcaption.render import (
    ELLIPSE, RenderConfig, boxes_as_detections, coverage, load_png, overlay_boxes, painter_order,
    rasterize, save_png
)
from paramcaption.schema import BoundingBox, ObjectSpec, RgbColor, ScenePalette, StructuredCaption

RED = RgbColor(255, 0, 0)
BLUE = RgbColor(0, 0, 255)

def _caption(*objects, palette=None):
    return StructuredCaption(scene='test', objects=tuple(objects), palette=palette)

def test_coverage_uses_pixel_centers():
    mask = coverage(BoundingBox(0.25, 0.25, 0.75, 0.75), 4, 4)
    assert mask.sum() == 4
    assert mask[1:3, 1:3].all()

    # Centers at 0.5 and 1.5: only column 0 falls in [0, 0.2 * 4)
    assert coverage(BoundingBox(0, 0, 0.2, 1), 4, 4)[:, 0].all()
    assert coverage(BoundingBox(0, 0, 0.2, 1), 4, 4).sum() == 4

def test_rasterize_single_box():
    caption = _caption(ObjectSpec('a', box=BoundingBox(0.25, 0.25, 0.75, 0.75), colors=(RED,)))
    image = rasterize(caption, RenderConfig(width=8, height=8))
    assert image.shape == (8, 8, 3)
    assert image.dtype == np.uint8
    assert (image[2:6, 2:6] == (255, 0, 0)).all()
    assert (image[0, 0] == (255, 255, 255)).all()
    assert (image[6:, :] == 255).all()

def test_nearer_objects_paint_last():
    far = ObjectSpec('far', box=BoundingBox(0, 0, 1, 1), colors=(RED,), depth=5.0)
    near = ObjectSpec('near', box=BoundingBox(0.25, 0.25, 0.75, 0.75), colors=(BLUE,), depth=1.0)
    caption = _caption(near, far)
    assert painter_order(caption) == [1, 0]

    image = rasterize(caption, RenderConfig(width=8, height=8))
    assert tuple(image[4, 4]) == (0, 0, 255)
    assert tuple(image[0, 0]) == (255, 0, 0)

def test_list_order_breaks_depth_ties():
    first = ObjectSpec('first', box=BoundingBox(0, 0, 1, 1), colors=(RED,))
    second = ObjectSpec('second', box=BoundingBox(0, 0, 1, 1), colors=(BLUE,))
    image = rasterize(_caption(first, second), RenderConfig(width=4, height=4))
    assert (image == (0, 0, 255)).all()

def test_ellipse_stays_inside_its_box():
    box = BoundingBox(0.1, 0.1, 0.9, 0.9)
    caption = _caption(ObjectSpec('a', box=box, colors=(RED,)))
    image = rasterize(caption, RenderConfig(width=20, height=20, shape=ELLIPSE))
    painted = (image == (255, 0, 0)).all(axis=2)
    assert not (painted & ~coverage(box, 20, 20)).any()
    assert painted[10, 10]
    assert not painted[2, 2]

def test_palette_background():
    caption = _caption(ObjectSpec('a', box=BoundingBox(0, 0, 0.5, 0.5), colors=(RED,)),
                       palette=ScenePalette((RgbColor(10, 20, 30),)))
    image = rasterize(caption, RenderConfig(width=4, height=4, palette_background=True))
    assert tuple(image[3, 3]) == (10, 20, 30)

def test_missing_box_or_color_fails():
    with pytest.raises(RenderError):
        rasterize(_caption(ObjectSpec('a', colors=(RED,))))
    with pytest.raises(RenderError):
        rasterize(_caption(ObjectSpec('a', box=BoundingBox(0, 0, 1, 1))))

def test_invalid_config():
    with pytest.raises(ValueError):
        RenderConfig(width=0)
    with pytest.raises(ValueError):
        RenderConfig(shape='star')

def test_overlay_draws_outline_only():
    image = np.full((20, 20, 3), 255, dtype=np.uint8)
    box = BoundingBox(0.25, 0.25, 0.75, 0.75)
    drawn = overlay_boxes(image, [(box, BLUE)], stroke=1)

    assert tuple(drawn[5, 5]) == (0, 0, 255)
    assert tuple(drawn[14, 14]) == (0, 0, 255)
    assert tuple(drawn[10, 10]) == (255, 255, 255)
    assert tuple(drawn[0, 0]) == (255, 255, 255)
    # The input is not modified
    assert (image == 255).all()

    assert (overlay_boxes(image, []) == image).all()

def test_boxes_as_detections():
    caption = _caption(
        ObjectSpec('mug1', description='a mug', box=BoundingBox(0, 0, 0.5, 0.5), colors=(RED,)),
        ObjectSpec('x', box=BoundingBox(0.5, 0.5, 1, 1), colors=(RED,), attributes={'category': 'Plate'}),
    )
    detections = boxes_as_detections(caption, 'img')
    assert [(d.det_id, d.category, d.score, d.image_id) for d in detections] == [
        ('mug1', 'mug', 1.0, 'img'), ('x', 'plate', 1.0, 'img')]

def test_png_round_trip(tmp_path):
    caption = _caption(ObjectSpec('a', box=BoundingBox(0.1, 0.2, 0.6, 0.9), colors=(RgbColor(12, 34, 56),)))
    image = rasterize(caption, RenderConfig(width=16, height=12))
    path = str(tmp_path / 'out.png')
    save_png(image, path)
    assert (load_png(path) == image).all()

def test_single_object_foreground_has_its_color():
    rng = np.random.default_rng(12)
    for shape in ('rectangle', ELLIPSE):
        for _ in range(30):
            x0, y0 = rng.uniform(0, 0.5, size=2)
            box = BoundingBox(float(x0), float(y0), float(x0 + rng.uniform(0.2, 0.5)), float(y0 + rng.uniform(0.2, 0.5)))
            color = RgbColor(*(int(c) for c in rng.integers(0, 200, size=3)))
            image = rasterize(_caption(ObjectSpec('a', box=box, colors=(color,))),
                              RenderConfig(width=64, height=48, shape=shape))
            foreground = (image != 255).any(axis=2)
            assert foreground.sum() > 0
            matching = (image[foreground] == color.as_tuple()).all(axis=1)
            assert matching.mean() >= 0.99

def test_disjoint_objects_cover_exactly_their_boxes():
    left = BoundingBox(0.05, 0.1, 0.45, 0.7)
    right = BoundingBox(0.55, 0.3, 0.95, 0.9)
    image = rasterize(_caption(ObjectSpec('l', box=left, colors=(RED,)), ObjectSpec('r', box=right, colors=(BLUE,))),
                      RenderConfig(width=40, height=30))

    left_mask, right_mask = coverage(left, 40, 30), coverage(right, 40, 30)
    assert not (left_mask & right_mask).any()
    assert (image[left_mask] == RED.as_tuple()).all()
    assert (image[right_mask] == BLUE.as_tuple()).all()
    assert (image[~(left_mask | right_mask)] == 255).all()
