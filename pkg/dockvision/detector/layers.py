"""
Layers of the toy detection network. Activations are (N, H, W, C) for the convolution
stages and (N, D) for the dense stages. Every layer reads its parameters from views into
one flat parameter vector and writes its parameter gradients into views of a matching
flat gradient vector.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit

from dockvision import exceptions
from dockvision.types import FloatArray


class Layer:
    name: str = ''

    def param_shapes(self) -> dict[str, tuple[int, ...]]:
        return {}

    def forward(self, x: FloatArray, params: dict[str, FloatArray]):
        """Return (output, cache)."""
        raise NotImplementedError

    def backward(self, grad: FloatArray, cache, params, grads) -> FloatArray:
        """Accumulate parameter gradients into `grads` and return the input gradient."""
        raise NotImplementedError


class Conv2D(Layer):
    """Stride 1 convolution with zero padding keeping the spatial size."""

    def __init__(self, name: str, in_channels: int, out_channels: int, kernel: int = 3):
        if kernel % 2 != 1:
            raise exceptions.ShapeMismatch("Convolution kernels need an odd size.")
        self.name = name
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel

    def param_shapes(self):
        k = self.kernel
        return {
            f'{self.name}.weight': (k, k, self.in_channels, self.out_channels),
            f'{self.name}.bias': (self.out_channels,),
        }

    def _columns(self, x: FloatArray) -> FloatArray:
        pad = self.kernel // 2
        padded = np.pad(x, ((0, 0), (pad, pad), (pad, pad), (0, 0)))
        windows = sliding_window_view(padded, (self.kernel, self.kernel), axis=(1, 2))
        # (N, H, W, C, k, k) -> (N, H, W, k, k, C)
        return windows.transpose(0, 1, 2, 4, 5, 3)

    def forward(self, x, params):
        if x.ndim != 4 or x.shape[3] != self.in_channels:
            raise exceptions.ShapeMismatch(
                f"{self.name} expects (N, H, W, {self.in_channels}) inputs, got "
                f"{x.shape}."
            )
        n, h, w, _ = x.shape
        weight = params[f'{self.name}.weight'].reshape(-1, self.out_channels)
        columns = self._columns(x).reshape(n * h * w, -1)
        out = columns @ weight + params[f'{self.name}.bias']
        return out.reshape(n, h, w, self.out_channels), (x.shape, columns)

    def backward(self, grad, cache, params, grads):
        shape, columns = cache
        n, h, w, c = shape
        k = self.kernel
        flat_grad = grad.reshape(-1, self.out_channels)
        grads[f'{self.name}.weight'] += (columns.T @ flat_grad).reshape(
            k, k, c, self.out_channels
        )
        grads[f'{self.name}.bias'] += flat_grad.sum(axis=0)

        weight = params[f'{self.name}.weight'].reshape(-1, self.out_channels)
        grad_columns = (flat_grad @ weight.T).reshape(n, h, w, k, k, c)
        pad = k // 2
        grad_padded = np.zeros((n, h + 2 * pad, w + 2 * pad, c), dtype=grad.dtype)
        for di in range(k):
            for dj in range(k):
                window = grad_columns[:, :, :, di, dj, :]
                grad_padded[:, di : di + h, dj : dj + w, :] += window
        return grad_padded[:, pad : pad + h, pad : pad + w, :]


class ReLU(Layer):
    name = 'relu'

    def forward(self, x, params):
        mask = x > 0
        return x * mask, mask

    def backward(self, grad, cache, params, grads):
        return grad * cache


class MaxPool2(Layer):
    """2x2 max pooling with stride 2, gradients routed to the first maximum found."""

    name = 'maxpool'

    def forward(self, x, params):
        n, h, w, c = x.shape
        if h % 2 or w % 2:
            raise exceptions.ShapeMismatch(
                f"Max pooling needs even spatial sizes, got {h}x{w}."
            )
        windows = (
            x.reshape(n, h // 2, 2, w // 2, 2, c)
            .transpose(0, 1, 3, 5, 2, 4)
            .reshape(n, h // 2, w // 2, c, 4)
        )
        winners = np.argmax(windows, axis=4)
        out = np.take_along_axis(windows, winners[..., None], axis=4)[..., 0]
        return out, (x.shape, winners)

    def backward(self, grad, cache, params, grads):
        (n, h, w, c), winners = cache
        routed = np.zeros((n, h // 2, w // 2, c, 4), dtype=grad.dtype)
        np.put_along_axis(routed, winners[..., None], grad[..., None], axis=4)
        return (
            routed.reshape(n, h // 2, w // 2, c, 2, 2)
            .transpose(0, 1, 4, 2, 5, 3)
            .reshape(n, h, w, c)
        )


class Flatten(Layer):
    name = 'flatten'

    def forward(self, x, params):
        return x.reshape(len(x), -1), x.shape

    def backward(self, grad, cache, params, grads):
        return grad.reshape(cache)


class Dense(Layer):
    def __init__(self, name: str, in_features: int, out_features: int):
        self.name = name
        self.in_features = in_features
        self.out_features = out_features

    def param_shapes(self):
        return {
            f'{self.name}.weight': (self.in_features, self.out_features),
            f'{self.name}.bias': (self.out_features,),
        }

    def forward(self, x, params):
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise exceptions.ShapeMismatch(
                f"{self.name} expects (N, {self.in_features}) inputs, got {x.shape}."
            )
        return x @ params[f'{self.name}.weight'] + params[f'{self.name}.bias'], x

    def backward(self, grad, cache, params, grads):
        grads[f'{self.name}.weight'] += cache.T @ grad
        grads[f'{self.name}.bias'] += grad.sum(axis=0)
        return grad @ params[f'{self.name}.weight'].T


class GridHead(Layer):
    """Reshape to (N, G, G, B, 5) and squash the confidence channel with a sigmoid."""

    name = 'head'

    def __init__(self, G: int, B: int):
        self.G = G
        self.B = B

    def forward(self, x, params):
        out = x.reshape(len(x), self.G, self.G, self.B, 5).copy()
        out[..., 4] = expit(out[..., 4])
        return out, out[..., 4].copy()

    def backward(self, grad, cache, params, grads):
        grad = grad.copy()
        grad[..., 4] *= cache * (1.0 - cache)
        return grad.reshape(len(grad), -1)
