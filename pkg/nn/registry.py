"""Registry mapping layer kinds to layer classes."""

from typing import Dict, List, Type

import numpy as np

from .layers import (
    Activation,
    BaseLayer,
    BatchNorm,
    Conv2D,
    Dense,
    Dropout,
    Flatten,
    LayerSpec,
    MaxPool2D,
    Shape,
)


class LayerRegistry:
    """Registry for building layers from specs."""

    def __init__(self):
        self._layers: Dict[str, Type[BaseLayer]] = {}

    def register(self, kind: str, layer_cls: Type[BaseLayer]) -> None:
        """Register a layer class under a kind."""
        self._layers[kind] = layer_cls

    def get(self, kind: str) -> Type[BaseLayer]:
        """Get a layer class by kind."""
        if kind not in self._layers:
            raise ValueError(f"Layer '{kind}' not found. Available: {list(self._layers.keys())}")
        return self._layers[kind]

    def build(
        self,
        spec: LayerSpec,
        in_shape: Shape,
        rng: np.random.Generator,
        dtype=np.float64,
    ) -> BaseLayer:
        """Instantiate the layer for a spec at a given input shape."""
        return self.get(spec.kind)(spec, in_shape, rng, dtype)

    def output_shape(self, spec: LayerSpec, in_shape: Shape) -> Shape:
        return self.get(spec.kind).output_shape(spec, in_shape)

    def count_parameters(self, spec: LayerSpec, in_shape: Shape) -> int:
        return self.get(spec.kind).count_parameters(spec, in_shape)

    def list_kinds(self) -> List[str]:
        """List all registered layer kinds."""
        return list(self._layers.keys())

    def __len__(self) -> int:
        return len(self._layers)

    def __repr__(self) -> str:
        return f"<LayerRegistry: {self.list_kinds()}>"


def create_layer_registry() -> LayerRegistry:
    """Registry with every buildable layer kind. Concatenation is done by the network."""
    registry = LayerRegistry()
    registry.register("conv2d", Conv2D)
    registry.register("dense", Dense)
    registry.register("maxpool2d", MaxPool2D)
    registry.register("batchnorm", BatchNorm)
    registry.register("dropout", Dropout)
    registry.register("flatten", Flatten)
    for kind in ("sigmoid", "relu", "softmax"):
        registry.register(kind, Activation)
    return registry
