from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Sorted index/value pairs over dimension ``dim``; zeros are never stored.

    Use :meth:`from_pairs` or :meth:`from_dense` to build one from raw data;
    the constructor validates but does not repair its input.
    """

    dim: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.ascontiguousarray(self.indices, dtype=np.int64)
        val = np.ascontiguousarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or idx.shape != val.shape:
            raise ValueError("indices and values must be 1-d arrays of equal length")
        if self.dim < 0:
            raise ValueError("dim must be non-negative")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.dim:
                raise ValueError(f"indices must lie in [0, {self.dim})")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
        if np.any(val == 0):
            raise ValueError("explicit zeros must not be stored")
        if not np.all(np.isfinite(val)):
            raise ValueError("values must be finite")
        idx.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @classmethod
    def from_pairs(cls, dim: int, pairs) -> "SparseVector":
        pairs = [(int(i), float(v)) for i, v in pairs if v != 0]
        pairs.sort()
        idx = np.array([i for i, _ in pairs], dtype=np.int64)
        val = np.array([v for _, v in pairs], dtype=np.float64)
        return cls(dim, idx, val)

    @classmethod
    def from_dense(cls, x) -> "SparseVector":
        x = np.asarray(x, dtype=np.float64).ravel()
        (idx,) = np.nonzero(x)
        return cls(x.size, idx, x[idx])

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def scaled(self, c: float) -> "SparseVector":
        return SparseVector(self.dim, self.indices, self.values * c)

    def __neg__(self) -> "SparseVector":
        return self.scaled(-1.0)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"SparseVector(dim={self.dim}, nnz={self.nnz})"


def as_sparse(x) -> SparseVector:
    """Pass SparseVectors through; densify anything array-like."""
    if isinstance(x, SparseVector):
        return x
    return SparseVector.from_dense(x)


@dataclass(frozen=True, eq=False)
class EncodedFeatures:
    """Sparse binary vector of one-hot blocks.

    ``ones`` holds the sorted positions of the ones; there is exactly one per
    block of ``block_size`` columns, so ``length == block_size * n_blocks``.
    """

    length: int
    ones: np.ndarray
    block_size: int

    def __post_init__(self):
        ones = np.ascontiguousarray(self.ones, dtype=np.int64)
        if self.block_size < 1 or self.length % self.block_size:
            raise ValueError("length must be a positive multiple of block_size")
        n_blocks = self.length // self.block_size
        if ones.shape != (n_blocks,) or not np.array_equal(
            ones // self.block_size, np.arange(n_blocks)
        ):
            raise ValueError("expected exactly one position per block, in order")
        ones.flags.writeable = False
        object.__setattr__(self, "ones", ones)

    @property
    def n_blocks(self) -> int:
        return self.length // self.block_size

    def dot(self, other: "EncodedFeatures") -> int:
        if other.length != self.length:
            raise ValueError("feature lengths differ")
        return int(np.intersect1d(self.ones, other.ones, assume_unique=True).size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.int8)
        out[self.ones] = 1
        return out

    def __eq__(self, other):
        if not isinstance(other, EncodedFeatures):
            return NotImplemented
        return (
            self.length == other.length
            and self.block_size == other.block_size
            and np.array_equal(self.ones, other.ones)
        )
