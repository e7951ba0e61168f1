"""Toy convolutional grid detector with hand written reverse mode gradients."""
import logging
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dockvision import exceptions
from dockvision.detector.layers import (
    Conv2D,
    Dense,
    Flatten,
    GridHead,
    Layer,
    MaxPool2,
    ReLU,
)
from dockvision.image import ImageBuffer
from dockvision.types import FloatArray

logger = logging.getLogger(__name__)

# Initial head outputs per box: centred, a quarter of the image wide and a low
# confidence logit.
HEAD_BIAS = (0.5, 0.5, 0.25, 0.25, -3.0)
HEAD_WEIGHT_SCALE = 0.01


class NetArch(BaseModel):
    input_size: int = Field(112, gt=0, description="Square input side in pixels.")
    channels: int = Field(3, description="Input channels, 1 or 3.")
    filters: list[int] = Field(
        [8, 16, 32, 64], min_length=1, description="Filters of each conv stage."
    )
    kernel: int = Field(3, gt=0, description="Odd convolution kernel size.")
    dense: list[int] = Field(
        [256, 512], description="Hidden sizes of the fully connected stages."
    )
    G: int = Field(7, gt=0, description="Grid cells per side.")
    B: int = Field(2, gt=0, description="Boxes per cell.")

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    @model_validator(mode='after')
    def check_sizes(self) -> 'NetArch':
        if self.input_size % 2 ** len(self.filters):
            raise ValueError(
                f"input_size={self.input_size} must be divisible by "
                f"{2 ** len(self.filters)} for {len(self.filters)} pooling stages."
            )
        if self.kernel % 2 != 1:
            raise ValueError("kernel must be odd.")
        return self

    @property
    def output_size(self) -> int:
        return self.G * self.G * self.B * 5

    @property
    def feature_size(self) -> int:
        side = self.input_size // 2 ** len(self.filters)
        return side * side * self.filters[-1]


def build_layers(arch: NetArch) -> list[Layer]:
    layers: list[Layer] = []
    in_channels = arch.channels
    for index, filters in enumerate(arch.filters):
        layers += [
            Conv2D(f'conv{index + 1}', in_channels, filters, arch.kernel),
            ReLU(),
            MaxPool2(),
        ]
        in_channels = filters
    layers.append(Flatten())
    sizes = [arch.feature_size, *arch.dense, arch.output_size]
    for index in range(len(sizes) - 1):
        layers.append(Dense(f'fc{index + 1}', sizes[index], sizes[index + 1]))
        if index < len(sizes) - 2:
            layers.append(ReLU())
    layers.append(GridHead(arch.G, arch.B))
    return layers


class TinyNet:
    """
    Conv -> ReLU -> maxpool stages followed by dense stages ending in G*G*B*5 outputs.
     Every parameter lives in the flat vector `params`, `parameters` exposes named
     views into it.
    """

    def __init__(
        self,
        arch: NetArch | None = None,
        params: FloatArray | None = None,
        seed: int = 0,
        dtype=np.float64,
    ):
        self.arch = arch or NetArch()
        self.dtype = np.dtype(dtype)
        self.layers = build_layers(self.arch)
        self.shapes: dict[str, tuple[int, ...]] = {}
        for layer in self.layers:
            self.shapes.update(layer.param_shapes())
        self.size = int(sum(np.prod(i) for i in self.shapes.values()))

        if params is None:
            self.params = np.zeros(self.size, dtype=self.dtype)
            self.initialize(seed)
        else:
            params = np.asarray(params, dtype=self.dtype)
            if params.shape != (self.size,):
                raise exceptions.ShapeMismatch(
                    f"The architecture has {self.size} parameters, got {params.shape}."
                )
            self.params = params.copy()

    def views(self, flat: FloatArray) -> dict[str, FloatArray]:
        out, offset = {}, 0
        for name, shape in self.shapes.items():
            count = int(np.prod(shape))
            out[name] = flat[offset : offset + count].reshape(shape)
            offset += count
        return out

    @property
    def parameters(self) -> dict[str, FloatArray]:
        return self.views(self.params)

    def initialize(self, seed: int = 0):
        """He normal weights, zero biases and a damped head."""
        rng = np.random.default_rng(seed)
        self.params[:] = 0.0
        for name, view in self.parameters.items():
            if name.endswith('.weight'):
                fan_in = int(np.prod(view.shape[:-1]))
                view[...] = rng.normal(0.0, np.sqrt(2.0 / fan_in), view.shape)
        head = f'fc{len(self.arch.dense) + 1}'
        self.parameters[f'{head}.weight'][...] *= HEAD_WEIGHT_SCALE
        self.parameters[f'{head}.bias'][...] = np.tile(
            HEAD_BIAS, self.arch.G * self.arch.G * self.arch.B
        )

    def _batch(self, images) -> FloatArray:
        if isinstance(images, ImageBuffer):
            images = images.data
        elif isinstance(images, (list, tuple)):
            images = np.stack(
                [i.data if isinstance(i, ImageBuffer) else i for i in images]
            )
        x = np.asarray(images, dtype=self.dtype)
        if x.ndim == 3:
            x = x[None]
        expected = (self.arch.input_size, self.arch.input_size, self.arch.channels)
        if x.ndim != 4 or x.shape[1:] != expected:
            raise exceptions.ShapeMismatch(
                f"The network expects images of shape {expected}, got {x.shape}."
            )
        return x

    def _forward(self, x: FloatArray):
        params = self.parameters
        caches = []
        for layer in self.layers:
            x, cache = layer.forward(x, params)
            caches.append(cache)
        return x, caches

    def _backward(self, caches, grad_out: FloatArray) -> FloatArray:
        params = self.parameters
        flat = np.zeros(self.size, dtype=self.dtype)
        grads = self.views(flat)
        grad = np.asarray(grad_out, dtype=self.dtype)
        for layer, cache in zip(reversed(self.layers), reversed(caches)):
            grad = layer.backward(grad, cache, params, grads)
        return flat

    def forward(self, images) -> FloatArray:
        """(N, G, G, B, 5) predictions."""
        return self._forward(self._batch(images))[0]

    def backward(self, images, grad_out: FloatArray) -> FloatArray:
        """Flat gradient of sum(grad_out * forward(images)) w.r.t. `params`."""
        x = self._batch(images)
        out, caches = self._forward(x)
        grad_out = np.asarray(grad_out).reshape(out.shape)
        return self._backward(caches, grad_out)

    def value_and_grad(
        self,
        images,
        loss_fn: Callable[[FloatArray], tuple[float, FloatArray]],
    ) -> tuple[float, FloatArray]:
        """Forward, `loss_fn(pred) -> (value, dvalue/dpred)`, then one backward pass."""
        out, caches = self._forward(self._batch(images))
        value, grad_out = loss_fn(out)
        return value, self._backward(caches, grad_out)
