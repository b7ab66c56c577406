"""Two-branch classifier: architecture config, network and checkpoints."""

from .arch import (
    ARCH_VERSION,
    ArchConfig,
    Mode,
    count_parameters,
    format_layer,
    layer_ledger,
    load_arch,
    parameter_count,
    parse_arch,
    parse_layer,
)
from .checkpoint import decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from .errors import (
    CorruptCheckpointError,
    InvalidArchitectureError,
    ModelError,
    VersionMismatchError,
)
from .network import (
    TwoBranchNetwork,
    build_model,
    forward_fused,
    predict_class,
    top_prediction,
)

__all__ = [
    "ARCH_VERSION",
    "ArchConfig",
    "CorruptCheckpointError",
    "InvalidArchitectureError",
    "Mode",
    "ModelError",
    "TwoBranchNetwork",
    "VersionMismatchError",
    "build_model",
    "count_parameters",
    "decode_checkpoint",
    "encode_checkpoint",
    "format_layer",
    "forward_fused",
    "layer_ledger",
    "load_arch",
    "load_checkpoint",
    "parameter_count",
    "parse_arch",
    "parse_layer",
    "predict_class",
    "save_checkpoint",
    "top_prediction",
]
