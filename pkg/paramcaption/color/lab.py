"""
sRGB to CIELab (D65 white, 2 degree observer).

Chain: channel / 255 -> inverse sRGB companding -> XYZ (sRGB D65 matrix) -> Lab.
"""
from dataclasses import dataclass

import numpy as np

SRGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])

# Reference white is the image of sRGB white so (255, 255, 255) lands exactly on L=100, a=b=0
D65_WHITE = SRGB_TO_XYZ.sum(axis=1)

LAB_EPSILON = 216 / 24389
LAB_KAPPA = 24389 / 27

@dataclass(frozen=True)
class LinearRgb:
    r: float
    g: float
    b: float

@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float

    def as_tuple(self):
        return (self.L, self.a, self.b)

def srgb_array_to_linear(rgb):
    """Inverse sRGB companding of an (..., 3) array of 0-255 channel values."""
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)

def _lab_f(t):
    return np.where(t > LAB_EPSILON, np.cbrt(t), (LAB_KAPPA * t + 16) / 116)

def srgb_array_to_lab(rgb):
    """Convert an (..., 3) array of 0-255 sRGB values to an (..., 3) float64 Lab array."""
    xyz = srgb_array_to_linear(rgb) @ SRGB_TO_XYZ.T
    f = _lab_f(xyz / D65_WHITE)

    L = 116 * f[..., 1] - 16
    a = 500 * (f[..., 0] - f[..., 1])
    b = 200 * (f[..., 1] - f[..., 2])

    return np.stack([L, a, b], axis=-1)

def srgb_to_linear(color):
    return LinearRgb(*(float(v) for v in srgb_array_to_linear(color.as_tuple())))

def srgb_to_lab(color):
    """RgbColor -> LabColor."""
    return LabColor(*(float(v) for v in srgb_array_to_lab(color.as_tuple())))

def lab_array(colors):
    """Stack LabColor values (or (L, a, b) tuples) into an (N, 3) array."""
    return np.array([c.as_tuple() if isinstance(c, LabColor) else tuple(c) for c in colors],
                    dtype=np.float64).reshape(-1, 3)
