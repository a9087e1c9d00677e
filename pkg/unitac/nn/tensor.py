#  * Copyright (c) 2024-2026. Authors: see NOTICE file.
#  *
#  * Licensed under the Apache License, Version 2.0 (the "License");
#  * you may not use this file except in compliance with the License.
#  * You may obtain a copy of the License at
#  *
#  *      http://www.apache.org/licenses/LICENSE-2.0
#  *
#  * Unless required by applicable law or agreed to in writing, software
#  * distributed under the License is distributed on an "AS IS" BASIS,
#  * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  * See the License for the specific language governing permissions and
#  * limitations under the License.
"""
Dense tensors with reverse-mode automatic differentiation.

Every operation returns a new tensor and, when gradients are enabled and
one of its operands requires them, records its operands and a closure
propagating the output gradient back to them. `Tensor.backward` walks the
recorded graph in reverse topological order.
"""
from __future__ import annotations

import threading
from contextlib import contextmanager
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from unitac.exceptions import NumericProblem

ArrayLike = Union[np.ndarray, float, int, Sequence]

FLOAT_TYPES = (np.float64, np.float32)


class _AutogradState(threading.local):
    # Thread-local: `no_grad` only affects the calling thread.
    grad_enabled: bool = True


class _CheckState:
    check_finite: bool = False


_state = _AutogradState()
_checks = _CheckState()


@contextmanager
def no_grad() -> Iterator[None]:
    """Disable graph recording within the block."""
    previous = _state.grad_enabled
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = previous


def is_grad_enabled() -> bool:
    return _state.grad_enabled


def set_check_finite(enabled: bool) -> None:
    """In check mode, any operation producing NaN or Inf raises `NumericProblem`."""
    _checks.check_finite = bool(enabled)


@contextmanager
def check_finite(enabled: bool = True) -> Iterator[None]:
    previous = _checks.check_finite
    _checks.check_finite = enabled
    try:
        yield
    finally:
        _checks.check_finite = previous


def _as_array(value: ArrayLike, dtype=None) -> np.ndarray:
    array = np.asarray(value)
    if dtype is not None:
        return array.astype(dtype, copy=False)
    if array.dtype not in FLOAT_TYPES:
        array = array.astype(np.float64)
    return array


def unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back to `shape`."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    __slots__ = ('data', 'grad', 'requires_grad', '_parents', '_backward')
    __array_ufunc__ = None

    def __init__(self, data: ArrayLike, requires_grad: bool = False, dtype=None):
        self.data: np.ndarray = _as_array(data, dtype)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self._parents: Tuple[Tensor, ...] = tuple()
        self._backward: Optional[Callable[[np.ndarray], None]] = None

    @classmethod
    def _make(
        cls, data: np.ndarray, parents: Tuple[Tensor, ...],
        backward: Callable[[np.ndarray], None]
    ) -> Tensor:
        if _checks.check_finite and not np.all(np.isfinite(data)):
            raise NumericProblem(detail=f"Non-finite values produced (shape {data.shape}).")
        out = cls(data)
        if _state.grad_enabled and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = parents
            out._backward = backward
        return out

    def _accumulate(self, grad: np.ndarray) -> None:
        if not self.requires_grad:
            return
        if self.grad is None:
            self.grad = np.array(grad, dtype=self.data.dtype)
        else:
            self.grad = self.grad + grad

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def detach(self) -> Tensor:
        return Tensor(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.dtype}, requires_grad={self.requires_grad})"

    def __len__(self) -> int:
        return self.data.shape[0]

    def backward(self, grad: Optional[np.ndarray] = None) -> None:
        """
        Accumulate the gradient of this tensor with respect to every leaf
        requiring gradients. The graph is released afterwards.
        """
        if not self.requires_grad:
            raise NumericProblem(detail="backward() called on a tensor that does not require grad.")
        if grad is None:
            if self.data.size != 1:
                raise NumericProblem(detail="backward() without gradient needs a scalar tensor.")
            grad = np.ones_like(self.data)

        order = self._topological_order()
        self._accumulate(grad)
        for node in reversed(order):
            if node._backward is None:
                continue
            if node.grad is not None:
                node._backward(node.grad)
            node.grad = None
            node._parents = tuple()
            node._backward = None

    def _topological_order(self) -> List[Tensor]:
        order, visited = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))
        return order

    # Arithmetic

    def _wrap(self, other: Union[Tensor, ArrayLike]) -> Tensor:
        if isinstance(other, Tensor):
            return other
        return Tensor(_as_array(other, self.data.dtype))

    def __add__(self, other) -> Tensor:
        other = self._wrap(other)
        a, b = self, other

        def backward(g):
            a._accumulate(unbroadcast(g, a.shape))
            b._accumulate(unbroadcast(g, b.shape))
        return Tensor._make(a.data + b.data, (a, b), backward)

    __radd__ = __add__

    def __neg__(self) -> Tensor:
        a = self

        def backward(g):
            a._accumulate(-g)
        return Tensor._make(-a.data, (a,), backward)

    def __sub__(self, other) -> Tensor:
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> Tensor:
        return self._wrap(other) + (-self)

    def __mul__(self, other) -> Tensor:
        other = self._wrap(other)
        a, b = self, other

        def backward(g):
            if a.requires_grad:
                a._accumulate(unbroadcast(g * b.data, a.shape))
            if b.requires_grad:
                b._accumulate(unbroadcast(g * a.data, b.shape))
        return Tensor._make(a.data * b.data, (a, b), backward)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Tensor:
        other = self._wrap(other)
        a, b = self, other

        def backward(g):
            if a.requires_grad:
                a._accumulate(unbroadcast(g / b.data, a.shape))
            if b.requires_grad:
                b._accumulate(unbroadcast(-g * a.data / (b.data ** 2), b.shape))
        return Tensor._make(a.data / b.data, (a, b), backward)

    def __rtruediv__(self, other) -> Tensor:
        return self._wrap(other) / self

    def __pow__(self, exponent: float) -> Tensor:
        if isinstance(exponent, Tensor):
            raise TypeError("Only constant exponents are supported.")
        a = self

        def backward(g):
            a._accumulate(g * exponent * a.data ** (exponent - 1))
        return Tensor._make(a.data ** exponent, (a,), backward)

    def __matmul__(self, other) -> Tensor:
        other = self._wrap(other)
        a, b = self, other
        if a.ndim < 2 or b.ndim < 2:
            raise ValueError("matmul operands must have at least 2 dimensions")

        def backward(g):
            if a.requires_grad:
                a._accumulate(unbroadcast(g @ np.swapaxes(b.data, -1, -2), a.shape))
            if b.requires_grad:
                b._accumulate(unbroadcast(np.swapaxes(a.data, -1, -2) @ g, b.shape))
        return Tensor._make(a.data @ b.data, (a, b), backward)

    # Reductions and shape

    def sum(self, axis=None, keepdims: bool = False) -> Tensor:
        a = self

        def backward(g):
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            a._accumulate(np.broadcast_to(g, a.shape))
        return Tensor._make(a.data.sum(axis=axis, keepdims=keepdims), (a,), backward)

    def mean(self, axis=None, keepdims: bool = False) -> Tensor:
        if axis is None:
            count = self.data.size
        else:
            axes = axis if isinstance(axis, tuple) else (axis,)
            count = int(np.prod([self.shape[i] for i in axes]))
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape) -> Tensor:
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        a = self

        def backward(g):
            a._accumulate(g.reshape(a.shape))
        return Tensor._make(a.data.reshape(shape), (a,), backward)

    def transpose(self, *axes) -> Tensor:
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(axes))
        a = self

        def backward(g):
            a._accumulate(np.transpose(g, inverse))
        return Tensor._make(np.transpose(a.data, axes), (a,), backward)

    def __getitem__(self, index) -> Tensor:
        if isinstance(index, Tensor):
            index = index.data.astype(np.int64)
        a = self

        def backward(g):
            full = np.zeros_like(a.data)
            np.add.at(full, index, g)
            a._accumulate(full)
        return Tensor._make(a.data[index], (a,), backward)

    # Elementwise functions

    def exp(self) -> Tensor:
        a = self
        out = np.exp(a.data)

        def backward(g):
            a._accumulate(g * out)
        return Tensor._make(out, (a,), backward)

    def log(self) -> Tensor:
        a = self

        def backward(g):
            a._accumulate(g / a.data)
        return Tensor._make(np.log(a.data), (a,), backward)

    def tanh(self) -> Tensor:
        a = self
        out = np.tanh(a.data)

        def backward(g):
            a._accumulate(g * (1.0 - out ** 2))
        return Tensor._make(out, (a,), backward)

    def sqrt(self) -> Tensor:
        a = self
        out = np.sqrt(a.data)

        def backward(g):
            a._accumulate(g * 0.5 / out)
        return Tensor._make(out, (a,), backward)

    def relu(self) -> Tensor:
        a = self

        def backward(g):
            a._accumulate(g * (a.data > 0))
        return Tensor._make(np.maximum(a.data, 0), (a,), backward)


def tensor(data: ArrayLike, requires_grad: bool = False, dtype=None) -> Tensor:
    return Tensor(data, requires_grad=requires_grad, dtype=dtype)


def concatenate(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    tensors = tuple(tensors)
    sizes = [t.shape[axis] for t in tensors]
    bounds = np.cumsum([0] + sizes)

    def backward(g):
        for t, start, stop in zip(tensors, bounds[:-1], bounds[1:]):
            if t.requires_grad:
                index = [slice(None)] * g.ndim
                index[axis] = slice(int(start), int(stop))
                t._accumulate(g[tuple(index)])
    return Tensor._make(np.concatenate([t.data for t in tensors], axis=axis), tensors, backward)
