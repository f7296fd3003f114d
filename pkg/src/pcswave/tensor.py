"""Dense n-D signals with periodic indexing, in float64 or exact-rational mode.

Rational mode exists for verification: every transform identity holds exactly
there, so it is the ground truth the float64 path is judged against. Data is
row-major; all coordinate access is reduced modulo the shape, matching the
Z^n periodization the transforms assume.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from .errors import DomainError, ShapeMismatch

FLOAT64 = "float64"
RATIONAL = "rational"


def _strides(shape: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [1] * len(shape)
    for a in range(len(shape) - 2, -1, -1):
        out[a] = out[a + 1] * shape[a + 1]
    return tuple(out)


class Tensor:
    """Row-major dense array over float64 or Fraction scalars."""

    __slots__ = ("shape", "mode", "data", "strides")

    def __init__(self, shape, mode: str, data):
        shape = tuple(int(s) for s in shape)
        if not shape or any(s < 1 for s in shape):
            raise DomainError(f"bad shape {shape}")
        if mode not in (FLOAT64, RATIONAL):
            raise DomainError(f"unknown scalar mode {mode!r}")
        self.shape = shape
        self.mode = mode
        self.strides = _strides(shape)
        size = self.size
        if mode == FLOAT64:
            arr = np.ascontiguousarray(data, dtype=np.float64).reshape(shape)
            self.data = arr
        else:
            vals = list(data)
            if len(vals) != size:
                raise ShapeMismatch(f"{len(vals)} values for shape {shape}")
            self.data = [Fraction(v) for v in vals]

    @property
    def size(self) -> int:
        n = 1
        for s in self.shape:
            n *= s
        return n

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @classmethod
    def zeros(cls, shape, mode: str = FLOAT64) -> "Tensor":
        shape = tuple(int(s) for s in shape)
        size = int(np.prod(shape))
        if mode == FLOAT64:
            return cls(shape, mode, np.zeros(shape))
        return cls(shape, mode, [Fraction(0)] * size)

    @classmethod
    def from_numpy(cls, arr) -> "Tensor":
        return cls(np.asarray(arr).shape, FLOAT64, arr)

    @classmethod
    def impulse(cls, shape, at=None, mode: str = RATIONAL) -> "Tensor":
        t = cls.zeros(shape, mode)
        at = tuple(at) if at is not None else (0,) * len(t.shape)
        one = 1.0 if mode == FLOAT64 else Fraction(1)
        t.set(at, one)
        return t

    def flat_index(self, idx) -> int:
        return sum(((i % s) * st) for i, s, st in zip(idx, self.shape, self.strides))

    def get(self, idx):
        if self.mode == FLOAT64:
            return float(self.data[tuple(i % s for i, s in zip(idx, self.shape))])
        return self.data[self.flat_index(idx)]

    def set(self, idx, value) -> None:
        if self.mode == FLOAT64:
            self.data[tuple(i % s for i, s in zip(idx, self.shape))] = value
        else:
            self.data[self.flat_index(idx)] = Fraction(value)

    def flat(self):
        """Flat row-major scalar list (a raveled view for float64)."""
        if self.mode == FLOAT64:
            return self.data.ravel()
        return self.data

    def to_numpy(self) -> np.ndarray:
        if self.mode == FLOAT64:
            return self.data
        return np.array([float(v) for v in self.data]).reshape(self.shape)

    def copy(self) -> "Tensor":
        if self.mode == FLOAT64:
            return Tensor(self.shape, FLOAT64, self.data.copy())
        return Tensor(self.shape, RATIONAL, list(self.data))

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.shape != other.shape or self.mode != other.mode:
            return False
        if self.mode == FLOAT64:
            return bool(np.array_equal(self.data, other.data))
        return self.data == other.data

    def max_abs_diff(self, other: "Tensor") -> float:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")
        a, b = self.to_numpy(), other.to_numpy()
        return float(np.max(np.abs(a - b))) if a.size else 0.0

    def __repr__(self):
        return f"Tensor(shape={self.shape}, mode={self.mode})"


@dataclass
class MultiresCoeffs:
    """Coarse tensor y_0 plus detail tensors w_{nu,j} for a J-level transform.

    Level j tensors have shape input_shape / p^(J-j); the coarse tensor sits
    at level 0, details at levels 0 .. J-1 keyed by (nu, level).
    """

    p: int
    n: int
    gamma: Tuple[Tuple[int, ...], ...]
    levels: int
    coarse: Tensor
    details: Dict[Tuple[Tuple[int, ...], int], Tensor]

    @property
    def mode(self) -> str:
        return self.coarse.mode

    def input_shape(self) -> Tuple[int, ...]:
        scale = self.p ** self.levels
        return tuple(s * scale for s in self.coarse.shape)
