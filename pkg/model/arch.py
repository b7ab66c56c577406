"""Architecture configuration: parsing, validation and parameter counting.

Architecture files use dotenv KEY=VALUE syntax. Layer lists are
comma-separated `kind[:arg[:arg]]` tokens, e.g.

    BRANCH1="conv2d:16:3:sigmoid, maxpool2d:3, batchnorm, flatten"
"""

import logging
import os
from dataclasses import dataclass, replace
from enum import Enum
from io import StringIO
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from dotenv import dotenv_values

from nn import DegenerateOutputError, LayerSpec, Shape, ShapeMismatchError, create_layer_registry

from .errors import InvalidArchitectureError

logger = logging.getLogger(__name__)

ARCH_VERSION = 1
INPUT_CHANNELS = 1
CONV_KERNEL = 3
REQUIRED_KEYS = ("ARCH_VERSION", "NUM_CLASSES", "INPUT_SIZE", "BRANCH1", "BRANCH2", "CLASSIFIER")

_registry = create_layer_registry()


class Mode(str, Enum):
    FUSED = "fused"
    BRANCH1_ONLY = "branch1_only"
    BRANCH2_ONLY = "branch2_only"

    @classmethod
    def parse(cls, value: Union[str, "Mode"]) -> "Mode":
        """Accept enum values and the short CLI names `branch1` / `branch2`."""
        if isinstance(value, Mode):
            return value
        aliases = {"branch1": cls.BRANCH1_ONLY, "branch2": cls.BRANCH2_ONLY}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise InvalidArchitectureError(
                f"Unknown mode '{value}'. Available: fused, branch1, branch2"
            )

    @property
    def uses_branch1(self) -> bool:
        return self is not Mode.BRANCH2_ONLY

    @property
    def uses_branch2(self) -> bool:
        return self is not Mode.BRANCH1_ONLY


# ---------------------------------------------------------------------
# Layer tokens
# ---------------------------------------------------------------------
def parse_layer(token: str) -> LayerSpec:
    """Parse one `kind[:arg[:arg]]` token into a LayerSpec."""
    parts = [p.strip() for p in token.strip().split(":")]
    kind, args = parts[0], parts[1:]
    try:
        if kind == "conv2d":
            filters, kernel, activation = args
            params = {"filters": int(filters), "kernel": int(kernel), "activation": activation}
        elif kind == "dense":
            units, activation = args
            params = {"units": int(units), "activation": activation}
        elif kind == "maxpool2d":
            (pool,) = args
            params = {"pool": int(pool)}
        elif kind == "dropout":
            (rate,) = args
            params = {"rate": float(rate)}
        elif kind in ("batchnorm", "flatten", "sigmoid", "relu", "softmax"):
            if args:
                raise ValueError(f"{kind} takes no arguments")
            params = {}
        else:
            raise ValueError(f"unknown layer kind '{kind}'")
        return LayerSpec(kind, params)
    except ValueError as e:
        raise InvalidArchitectureError(f"Bad layer token '{token.strip()}': {e}") from e


def format_layer(spec: LayerSpec) -> str:
    """Inverse of parse_layer."""
    if spec.kind == "conv2d":
        return f"conv2d:{spec.get('filters')}:{spec.get('kernel')}:{spec.get('activation')}"
    if spec.kind == "dense":
        return f"dense:{spec.get('units')}:{spec.get('activation')}"
    if spec.kind == "maxpool2d":
        return f"maxpool2d:{spec.get('pool')}"
    if spec.kind == "dropout":
        return f"dropout:{spec.get('rate')}"
    return spec.kind


def parse_layers(value: str) -> Tuple[LayerSpec, ...]:
    tokens = [t for t in value.split(",") if t.strip()]
    return tuple(parse_layer(t) for t in tokens)


def count_parameters(specs: Sequence[LayerSpec], in_shape: Shape) -> Tuple[int, Shape]:
    """
    Walk a layer list from an input shape.

    Returns:
        Tuple of (trainable scalar count, output shape)

    Raises:
        InvalidArchitectureError: if a layer cannot accept its input shape
    """
    total = 0
    shape = tuple(in_shape)
    for position, spec in enumerate(specs):
        try:
            total += _registry.count_parameters(spec, shape)
            shape = _registry.output_shape(spec, shape)
        except (ShapeMismatchError, DegenerateOutputError) as e:
            raise InvalidArchitectureError(f"Layer {position} ({format_layer(spec)}): {e}") from e
    return total, shape


# ---------------------------------------------------------------------
# ArchConfig
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class ArchConfig:
    """Two convolutional branches feeding one dense classifier."""
    branch1: Tuple[LayerSpec, ...]
    branch2: Tuple[LayerSpec, ...]
    classifier: Tuple[LayerSpec, ...]
    num_classes: int = 14
    input_size: int = 128
    mode: Mode = Mode.FUSED
    version: int = ARCH_VERSION

    @property
    def input_shape(self) -> Shape:
        return (INPUT_CHANNELS, self.input_size, self.input_size)

    def with_mode(self, mode: Union[str, Mode]) -> "ArchConfig":
        return replace(self, mode=Mode.parse(mode))

    def branch_feature_lengths(self) -> Tuple[int, int]:
        """Flattened feature length of each branch, whether or not the mode uses it."""
        _, out1 = count_parameters(self.branch1, self.input_shape)
        _, out2 = count_parameters(self.branch2, self.input_shape)
        return out1[0], out2[0]

    def feature_length(self) -> int:
        """Length of the vector entering the classifier under this mode."""
        len1, len2 = self.branch_feature_lengths()
        return (len1 if self.mode.uses_branch1 else 0) + (len2 if self.mode.uses_branch2 else 0)

    def validate(self) -> None:
        """
        Check every structural rule.

        Raises:
            InvalidArchitectureError: naming the first violated rule
        """
        if self.version != ARCH_VERSION:
            raise InvalidArchitectureError(
                f"ARCH_VERSION {self.version} unsupported (expected {ARCH_VERSION})"
            )
        if self.num_classes < 2:
            raise InvalidArchitectureError(f"num_classes must be >= 2, got {self.num_classes}")

        _check_branch(
            "branch1", self.branch1, conv_count=3,
            activations={"sigmoid": 2, "relu": 1},
        )
        _check_branch(
            "branch2", self.branch2, conv_count=4,
            activations={"relu": 4},
        )
        _check_classifier(self.classifier, self.num_classes)

        for name, specs in (("branch1", self.branch1), ("branch2", self.branch2)):
            _, shape = count_parameters(specs, self.input_shape)
            if len(shape) != 1:
                raise InvalidArchitectureError(f"{name} must end in a flat feature vector, got {shape}")
        count_parameters(self.classifier, (self.feature_length(),))

    def to_text(self) -> str:
        """Serialize in the dotenv schema read by parse_arch."""
        def layers(specs):
            return ", ".join(format_layer(s) for s in specs)

        lines = [
            f"ARCH_VERSION={self.version}",
            f"NUM_CLASSES={self.num_classes}",
            f"INPUT_SIZE={self.input_size}",
            f"MODE={self.mode.value}",
            f'BRANCH1="{layers(self.branch1)}"',
            f'BRANCH2="{layers(self.branch2)}"',
            f'CLASSIFIER="{layers(self.classifier)}"',
        ]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (
            f"<ArchConfig: v{self.version} {self.mode.value} "
            f"{len(self.branch1)}+{len(self.branch2)}+{len(self.classifier)} layers, "
            f"{self.num_classes} classes>"
        )


def _count(specs: Sequence[LayerSpec], kind: str) -> int:
    return sum(1 for s in specs if s.kind == kind)


def _check_branch(name: str, specs: Sequence[LayerSpec], conv_count: int, activations: Dict[str, int]) -> None:
    convs = [s for s in specs if s.kind == "conv2d"]
    if len(convs) != conv_count:
        raise InvalidArchitectureError(f"{name} must have exactly {conv_count} conv layers, got {len(convs)}")
    seen: Dict[str, int] = {}
    for conv in convs:
        seen[conv.get("activation")] = seen.get(conv.get("activation"), 0) + 1
        if conv.get("kernel") != CONV_KERNEL:
            raise InvalidArchitectureError(
                f"{name}: all conv kernels must be {CONV_KERNEL}x{CONV_KERNEL}, got {conv.get('kernel')}"
            )
    if seen != activations:
        raise InvalidArchitectureError(f"{name} conv activations must be {activations}, got {seen}")
    if _count(specs, "maxpool2d") != 3:
        raise InvalidArchitectureError(f"{name} must have exactly 3 maxpool layers")
    if _count(specs, "batchnorm") != 1:
        raise InvalidArchitectureError(f"{name} must have exactly 1 batchnorm layer")
    if _count(specs, "concat") or _count(specs, "dense"):
        raise InvalidArchitectureError(f"{name} may not contain dense or concat layers")
    if not specs or specs[-1].kind != "flatten":
        raise InvalidArchitectureError(f"{name} must end in flatten")


def _check_classifier(specs: Sequence[LayerSpec], num_classes: int) -> None:
    if _count(specs, "dense") != 5:
        raise InvalidArchitectureError(f"classifier must have exactly 5 dense layers, got {_count(specs, 'dense')}")
    if _count(specs, "dropout") < 1:
        raise InvalidArchitectureError("classifier must have at least 1 dropout layer")
    last = specs[-1]
    if last.kind != "dense" or last.get("units") != num_classes or last.get("activation") != "softmax":
        raise InvalidArchitectureError(
            f"classifier must end in dense:{num_classes}:softmax, got {format_layer(last)}"
        )
    if any(s.kind not in ("dense", "dropout", "batchnorm", "sigmoid", "relu") for s in specs):
        raise InvalidArchitectureError("classifier may only hold dense, dropout, batchnorm and activation layers")


# ---------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------
def parse_arch(text: str, mode: Optional[Union[str, Mode]] = None) -> ArchConfig:
    """
    Parse and validate architecture text.

    Args:
        text: dotenv-style architecture description
        mode: Overrides the file's MODE when given

    Raises:
        InvalidArchitectureError: on missing keys, bad tokens or broken rules
    """
    values = dotenv_values(stream=StringIO(text))
    missing = [k for k in REQUIRED_KEYS if not values.get(k)]
    if missing:
        raise InvalidArchitectureError(f"Missing keys: {missing}")
    try:
        version = int(values["ARCH_VERSION"])
        num_classes = int(values["NUM_CLASSES"])
        input_size = int(values["INPUT_SIZE"])
    except ValueError as e:
        raise InvalidArchitectureError(f"Bad integer field: {e}") from e

    cfg = ArchConfig(
        branch1=parse_layers(values["BRANCH1"]),
        branch2=parse_layers(values["BRANCH2"]),
        classifier=parse_layers(values["CLASSIFIER"]),
        num_classes=num_classes,
        input_size=input_size,
        mode=Mode.parse(mode if mode is not None else values.get("MODE") or Mode.FUSED.value),
        version=version,
    )
    cfg.validate()
    return cfg


def load_arch(path: Union[str, os.PathLike], mode: Optional[Union[str, Mode]] = None) -> ArchConfig:
    path = Path(path)
    cfg = parse_arch(path.read_text(encoding="utf-8"), mode)
    logger.debug(f"Loaded {cfg} from {path}")
    return cfg


def parameter_count(cfg: ArchConfig) -> int:
    """Exact number of trainable scalars for the config's mode."""
    total = 0
    if cfg.mode.uses_branch1:
        total += count_parameters(cfg.branch1, cfg.input_shape)[0]
    if cfg.mode.uses_branch2:
        total += count_parameters(cfg.branch2, cfg.input_shape)[0]
    total += count_parameters(cfg.classifier, (cfg.feature_length(),))[0]
    return total


def layer_ledger(cfg: ArchConfig) -> List[Tuple[str, str, Shape, int]]:
    """Per-layer (section, token, output shape, parameter count) rows for the active mode."""
    rows = []
    sections = []
    if cfg.mode.uses_branch1:
        sections.append(("branch1", cfg.branch1, cfg.input_shape))
    if cfg.mode.uses_branch2:
        sections.append(("branch2", cfg.branch2, cfg.input_shape))
    sections.append(("classifier", cfg.classifier, (cfg.feature_length(),)))
    for section, specs, shape in sections:
        for spec in specs:
            count = _registry.count_parameters(spec, shape)
            shape = _registry.output_shape(spec, shape)
            rows.append((section, format_layer(spec), shape, count))
    return rows
