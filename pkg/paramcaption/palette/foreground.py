"""
Foreground extraction for single objects photographed (or generated) on a white background.

Images are (height, width, 3) uint8 numpy arrays; masks are (height, width) boolean arrays.
"""
import logging

import numpy as np
from PIL import Image
from scipy import ndimage

from paramcaption.errors import EmptyForegroundError

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)

def check_image(image):
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3 or image.shape[0] < 1 or image.shape[1] < 1:
        raise ValueError('Expected a (height, width, 3) image, got shape %s' % (image.shape,))
    return image

def load_image(path):
    """Load a PNG as an RGB array. Alpha is composited over white."""
    with Image.open(path) as source:
        rgba = source.convert('RGBA')
    background = Image.new('RGBA', rgba.size, (255, 255, 255, 255))
    composited = Image.alpha_composite(background, rgba).convert('RGB')

    return np.asarray(composited, dtype=np.uint8)

def extract_foreground(image, white_threshold=245, erosion=1):
    """Mask of object pixels.

    Background is every near-white pixel (all channels >= white_threshold) 4-connected to a
    near-white border pixel. Foreground is the rest, eroded `erosion` times to drop anti-aliased
    fringe pixels.

    Raises:
        EmptyForegroundError: no foreground pixel survives.
    """
    image = check_image(image)
    near_white = np.all(image >= white_threshold, axis=2)

    labels, _ = ndimage.label(near_white, structure=FOUR_CONNECTED)
    border = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    border_labels = np.unique(border[border > 0])
    background = np.isin(labels, border_labels)

    foreground = ~background
    if erosion > 0 and foreground.any():
        foreground = ndimage.binary_erosion(foreground, structure=FOUR_CONNECTED, iterations=erosion)

    if not foreground.any():
        raise EmptyForegroundError('no foreground pixels (threshold %d, erosion %d)' % (
            white_threshold, erosion))

    logging.debug('Foreground: %d of %d pixels' % (foreground.sum(), foreground.size))

    return foreground
