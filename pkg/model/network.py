"""Two-branch convolutional network with a shared dense classifier."""

import logging
from collections import OrderedDict
from typing import Dict, List, Optional, Tuple

import numpy as np

from nn import BaseLayer, ShapeMismatchError, Tensor, concat, create_layer_registry, softmax
from nn.layers import Dense, Dropout

from .arch import ArchConfig, Mode, parameter_count
from .errors import VersionMismatchError

logger = logging.getLogger(__name__)

DTYPES = {"float64": np.float64, "float32": np.float32}


class TwoBranchNetwork:
    """
    Std-filter branch and DCT branch, flattened, concatenated and classified.

    Branch-only modes build just the active branch; the unused input is
    never read.
    """

    def __init__(self, cfg: ArchConfig, seed: int = 0, dtype=np.float64):
        cfg.validate()
        self.cfg = cfg
        self.seed = seed
        self.dtype = np.dtype(dtype)
        self.metadata: Dict = {"seed": seed, "precision": self.dtype.name}

        registry = create_layer_registry()
        rng = np.random.default_rng(seed)
        self.sections: "OrderedDict[str, List[BaseLayer]]" = OrderedDict()

        def build(specs, in_shape):
            layers = []
            shape = in_shape
            for spec in specs:
                layer = registry.build(spec, shape, rng, self.dtype)
                layers.append(layer)
                shape = layer.out_shape
            return layers

        if cfg.mode.uses_branch1:
            self.sections["branch1"] = build(cfg.branch1, cfg.input_shape)
        if cfg.mode.uses_branch2:
            self.sections["branch2"] = build(cfg.branch2, cfg.input_shape)
        self.sections["classifier"] = build(cfg.classifier, (cfg.feature_length(),))

        self.reseed_dropout(seed)
        logger.info(f"Built {cfg} with {self.parameter_count} parameters")

    @property
    def mode(self) -> Mode:
        return self.cfg.mode

    @property
    def parameter_count(self) -> int:
        return parameter_count(self.cfg)

    def reseed_dropout(self, *entropy: int) -> None:
        """Give every dropout layer one shared generator seeded from `entropy`."""
        self.dropout_rng = np.random.default_rng(list(entropy))
        for layers in self.sections.values():
            for layer in layers:
                if isinstance(layer, Dropout):
                    layer.rng = self.dropout_rng

    def _prepare(self, x, name: str) -> Tensor:
        arr = x.data if isinstance(x, Tensor) else np.asarray(x)
        expected = self.cfg.input_shape
        if arr.ndim != 4 or arr.shape[1:] != expected:
            raise ShapeMismatchError(f"{name} must be [batch, {', '.join(map(str, expected))}], got {arr.shape}")
        return Tensor(arr.astype(self.dtype, copy=False))

    def _run(self, section: str, x: Tensor, training: bool) -> Tensor:
        for layer in self.sections[section]:
            x = layer.forward(x, training)
        return x

    def logits(self, x1, x2, training: bool = False) -> Tensor:
        """
        Pre-softmax class scores.

        Args:
            x1: Std-filter maps [batch, 1, size, size]; ignored in branch2-only mode
            x2: DCT maps [batch, 1, size, size]; ignored in branch1-only mode
            training: Batch statistics and dropout on when True

        Returns:
            Tensor [batch, num_classes]
        """
        features = []
        if self.mode.uses_branch1:
            features.append(self._run("branch1", self._prepare(x1, "x1"), training))
        if self.mode.uses_branch2:
            features.append(self._run("branch2", self._prepare(x2, "x2"), training))
        h = features[0] if len(features) == 1 else concat(features, axis=1)

        classifier = self.sections["classifier"]
        for layer in classifier[:-1]:
            h = layer.forward(h, training)
        head: Dense = classifier[-1]
        return head.forward(h, training, activate=False)

    def forward(self, x1, x2, training: bool = False) -> Tensor:
        """Class probabilities [batch, num_classes]."""
        return softmax(self.logits(x1, x2, training))

    def predict_proba(self, x1, x2, batch_size: int = 64) -> np.ndarray:
        """Infer-mode probabilities for a stack of inputs, evaluated in chunks."""
        reference = x1 if self.mode.uses_branch1 else x2
        n = len(reference)
        chunks = []
        for start in range(0, n, batch_size):
            stop = start + batch_size
            a = x1[start:stop] if self.mode.uses_branch1 else None
            b = x2[start:stop] if self.mode.uses_branch2 else None
            chunks.append(self.forward(a, b, training=False).data)
        if not chunks:
            return np.zeros((0, self.cfg.num_classes), dtype=self.dtype)
        return np.concatenate(chunks, axis=0)

    def parameters(self) -> "OrderedDict[str, Tensor]":
        """Trainable tensors named `<section>.<layer index>.<name>`."""
        params = OrderedDict()
        for section, layers in self.sections.items():
            for index, layer in enumerate(layers):
                for name, tensor in layer.parameters().items():
                    params[f"{section}.{index}.{name}"] = tensor
        return params

    def buffers(self) -> "OrderedDict[str, np.ndarray]":
        """Non-trainable state (batch-norm running statistics)."""
        bufs = OrderedDict()
        for section, layers in self.sections.items():
            for index, layer in enumerate(layers):
                for name, arr in layer.buffers().items():
                    bufs[f"{section}.{index}.{name}"] = arr
        return bufs

    def named_arrays(self) -> "OrderedDict[str, np.ndarray]":
        arrays = OrderedDict((k, t.data) for k, t in self.parameters().items())
        arrays.update(self.buffers())
        return arrays

    def load_arrays(self, arrays: Dict[str, np.ndarray]) -> None:
        """
        Copy stored values into parameters and buffers.

        Raises:
            VersionMismatchError: on a missing, unexpected or mis-shaped entry
        """
        own = self.named_arrays()
        missing = sorted(set(own) - set(arrays))
        unexpected = sorted(set(arrays) - set(own))
        if missing or unexpected:
            raise VersionMismatchError(f"State does not match architecture: missing {missing}, unexpected {unexpected}")
        for name, target in own.items():
            value = np.asarray(arrays[name])
            if value.shape != target.shape:
                raise VersionMismatchError(f"{name}: stored shape {value.shape} != model shape {target.shape}")
            target[...] = value.astype(self.dtype)

    def zero_grad(self) -> None:
        for p in self.parameters().values():
            p.zero_grad()

    def __repr__(self) -> str:
        return f"<TwoBranchNetwork: {self.mode.value}, {self.parameter_count} parameters>"


def build_model(cfg: ArchConfig, seed: int = 0, precision: str = "float64") -> TwoBranchNetwork:
    """
    Build a seeded model.

    Raises:
        InvalidArchitectureError: naming the violated rule
    """
    if precision not in DTYPES:
        raise ValueError(f"Unknown precision '{precision}'. Available: {list(DTYPES)}")
    return TwoBranchNetwork(cfg, seed=seed, dtype=DTYPES[precision])


def _single(fm: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if fm is None:
        return None
    arr = np.asarray(fm)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"Expected one 2D feature map, got shape {arr.shape}")
    return arr[None, None, :, :]


def forward_fused(model: TwoBranchNetwork, x1, x2, mode: str = "infer") -> np.ndarray:
    """
    Class probabilities for one (std map, DCT map) pair.

    Args:
        model: Network to run
        x1: Std-filter map [size, size]; may be None in branch2-only mode
        x2: DCT map [size, size]; may be None in branch1-only mode
        mode: "infer" or "train"

    Returns:
        Probability vector [num_classes]
    """
    if mode not in ("infer", "train"):
        raise ValueError(f"mode must be 'infer' or 'train', got '{mode}'")
    a = _single(x1) if model.mode.uses_branch1 else None
    b = _single(x2) if model.mode.uses_branch2 else None
    return model.forward(a, b, training=(mode == "train")).data[0]


def predict_class(probs: np.ndarray):
    """Argmax over the last axis; ties go to the lowest class index."""
    probs = np.asarray(probs)
    if probs.ndim == 1:
        return int(np.argmax(probs))
    return np.argmax(probs, axis=-1)


def top_prediction(probs: np.ndarray, class_names) -> Tuple[str, float]:
    index = predict_class(probs)
    return class_names[index], float(probs[index])
