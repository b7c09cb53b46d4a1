from .rasterizer import (
    ELLIPSE, RECTANGLE, RenderConfig, RenderError, boxes_as_detections, coverage, overlay_boxes,
    load_png, painter_order, rasterize, save_png
)
