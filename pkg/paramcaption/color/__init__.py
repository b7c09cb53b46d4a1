from .lab import LabColor, LinearRgb, lab_array, srgb_array_to_lab, srgb_to_lab, srgb_to_linear
from .difference import (
    ColorDifference, ab_distance, ab_distance_array, ciede2000, ciede2000_array, color_difference
)
