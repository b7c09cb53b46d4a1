from .box_runner import BoxRunner, caption_detections
from .color_runner import ColorCase, ColorRunner
from .reports import ensure_parent, report_paths, write_csv, write_json
