"""Branch front-ends: local standard-deviation filter and 2D DCT."""

from imaging import FeatureMap

from .dct import dct1d, dct2, dct2_fast, dct_matrix, idct2, idct2_fast
from .errors import (
    FeatureMapFormatError,
    InvalidFilterSpecError,
    PadTooWideError,
    PreprocessError,
)
from .filters import FilterSpec, local_mean, local_std_filter, symmetric_pad
from .fmap import (
    decode_feature_map,
    encode_feature_map,
    read_feature_map,
    write_feature_map,
)
from .pipeline import branch_inputs, signed_log

__all__ = [
    "FeatureMap",
    "FeatureMapFormatError",
    "FilterSpec",
    "InvalidFilterSpecError",
    "PadTooWideError",
    "PreprocessError",
    "branch_inputs",
    "dct1d",
    "dct2",
    "dct2_fast",
    "dct_matrix",
    "decode_feature_map",
    "encode_feature_map",
    "idct2",
    "idct2_fast",
    "local_mean",
    "local_std_filter",
    "read_feature_map",
    "signed_log",
    "symmetric_pad",
    "write_feature_map",
]
