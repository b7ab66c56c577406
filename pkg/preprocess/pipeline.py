"""Branch input construction: normalize, resize, then filter and transform."""

from typing import Tuple

import numpy as np

from imaging import DEFAULT_SIZE, FeatureMap, RawImage, normalize, resize_bilinear

from .dct import dct2, dct2_fast
from .filters import FilterSpec, local_std_filter


def signed_log(x: FeatureMap) -> FeatureMap:
    """sign(x) * log(1 + |x|); compresses the DC term of DCT maps."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.log1p(np.abs(x))


def branch_inputs(
    img: RawImage,
    spec: FilterSpec = FilterSpec(),
    size: int = DEFAULT_SIZE,
    signed_log_dct: bool = False,
    fast_dct: bool = False,
) -> Tuple[FeatureMap, FeatureMap]:
    """
    Produce the (std-filter map, DCT map) pair for one image.

    Args:
        img: Decoded image
        spec: Window geometry of the standard-deviation filter
        size: Side length both maps are resized to
        signed_log_dct: Apply signed_log to the DCT coefficients
        fast_dct: Use the scipy DCT path instead of the separable reference

    Returns:
        Tuple of two size x size float64 maps
    """
    resized = resize_bilinear(normalize(img), size, size)
    std_map = local_std_filter(resized, spec)
    dct_map = dct2_fast(resized) if fast_dct else dct2(resized)
    if signed_log_dct:
        dct_map = signed_log(dct_map)
    return std_map, dct_map
