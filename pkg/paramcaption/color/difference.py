"""
Perceptual color differences in CIELab: CIEDE2000 and the Euclidean a-b (chromaticity) distance.

Array forms work on (..., 3) Lab arrays and broadcast; scalar forms take LabColor values.
"""
from dataclasses import dataclass

import numpy as np

from paramcaption.color.lab import LabColor

POW25_7 = 25.0 ** 7

@dataclass(frozen=True)
class ColorDifference:
    delta_e00: float
    ab_distance: float

def _as_array(lab):
    if isinstance(lab, LabColor):
        return np.array(lab.as_tuple(), dtype=np.float64)
    return np.asarray(lab, dtype=np.float64)

def ciede2000_array(lab1, lab2, kL=1.0, kC=1.0, kH=1.0):
    """CIEDE2000 color difference, elementwise over the leading axes."""
    lab1, lab2 = np.broadcast_arrays(_as_array(lab1), _as_array(lab2))
    L1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    L2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    C1 = np.hypot(a1, b1)
    C2 = np.hypot(a2, b2)
    C_mean7 = ((C1 + C2) / 2) ** 7
    G = 0.5 * (1 - np.sqrt(C_mean7 / (C_mean7 + POW25_7)))

    a1p = (1 + G) * a1
    a2p = (1 + G) * a2
    C1p = np.hypot(a1p, b1)
    C2p = np.hypot(a2p, b2)
    C_product = C1p * C2p
    achromatic = C_product == 0

    # Hue angles in degrees, 0 for achromatic colors
    h1p = np.where((a1p == 0) & (b1 == 0), 0.0, np.degrees(np.arctan2(b1, a1p)) % 360)
    h2p = np.where((a2p == 0) & (b2 == 0), 0.0, np.degrees(np.arctan2(b2, a2p)) % 360)

    dLp = L2 - L1
    dCp = C2p - C1p

    dh = h2p - h1p
    dhp = np.where(dh > 180, dh - 360, np.where(dh < -180, dh + 360, dh))
    dhp = np.where(achromatic, 0.0, dhp)
    dHp = 2 * np.sqrt(C_product) * np.sin(np.radians(dhp / 2))

    Lp_mean = (L1 + L2) / 2
    Cp_mean = (C1p + C2p) / 2

    h_sum = h1p + h2p
    hp_mean = np.where(
        np.abs(h1p - h2p) <= 180,
        h_sum / 2,
        np.where(h_sum < 360, (h_sum + 360) / 2, (h_sum - 360) / 2),
    )
    hp_mean = np.where(achromatic, h_sum, hp_mean)

    T = (1
         - 0.17 * np.cos(np.radians(hp_mean - 30))
         + 0.24 * np.cos(np.radians(2 * hp_mean))
         + 0.32 * np.cos(np.radians(3 * hp_mean + 6))
         - 0.20 * np.cos(np.radians(4 * hp_mean - 63)))

    d_theta = 30 * np.exp(-(((hp_mean - 275) / 25) ** 2))
    Cp_mean7 = Cp_mean ** 7
    R_C = 2 * np.sqrt(Cp_mean7 / (Cp_mean7 + POW25_7))
    L_term = (Lp_mean - 50) ** 2
    S_L = 1 + 0.015 * L_term / np.sqrt(20 + L_term)
    S_C = 1 + 0.045 * Cp_mean
    S_H = 1 + 0.015 * Cp_mean * T
    R_T = -np.sin(np.radians(2 * d_theta)) * R_C

    lightness = dLp / (kL * S_L)
    chroma = dCp / (kC * S_C)
    hue = dHp / (kH * S_H)

    squared = lightness ** 2 + chroma ** 2 + hue ** 2 + R_T * chroma * hue
    return np.sqrt(np.maximum(squared, 0.0))

def ab_distance_array(lab1, lab2):
    """Euclidean distance in the a-b plane; lightness is ignored."""
    lab1, lab2 = np.broadcast_arrays(_as_array(lab1), _as_array(lab2))
    return np.hypot(lab1[..., 1] - lab2[..., 1], lab1[..., 2] - lab2[..., 2])

def ciede2000(p, q):
    return float(ciede2000_array(p, q))

def ab_distance(p, q):
    return float(ab_distance_array(p, q))

def color_difference(p, q):
    return ColorDifference(delta_e00=ciede2000(p, q), ab_distance=ab_distance(p, q))
