"""Immutable sparse vectors with strictly increasing indices.

All feature vectors in the library (sentence tf-idf vectors, state
features, state-action features) share this representation: parallel
``indices``/``values`` arrays plus a notional dense dimension. Zero-valued
entries are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SparseVector", "sparse_from_counts", "sparse_mean"]


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray  # float64, no stored zeros
    dim: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)
        if idx.shape != val.shape:
            raise ValueError("indices and values must have equal length")
        if idx.size and (np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= self.dim):
            raise ValueError("indices must be strictly increasing and within [0, dim)")

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dot_dense(self, dense: np.ndarray) -> float:
        if dense.shape[0] != self.dim:
            raise ValueError(f"dimension mismatch: vector dim {self.dim}, array dim {dense.shape[0]}")
        return float(dense[self.indices] @ self.values)

    def dot(self, other: "SparseVector") -> float:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        common, ia, ib = np.intersect1d(self.indices, other.indices, assume_unique=True, return_indices=True)
        if common.size == 0:
            return 0.0
        return float(self.values[ia] @ other.values[ib])

    def scaled(self, factor: float) -> "SparseVector":
        if factor == 0.0:
            return SparseVector(np.empty(0, dtype=np.int64), np.empty(0), self.dim)
        return SparseVector(self.indices, self.values * factor, self.dim)

    def normalized(self) -> "SparseVector":
        """L2-normalized copy; the empty vector is returned unchanged."""
        n = self.norm()
        if n == 0.0:
            return self
        return self.scaled(1.0 / n)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    @staticmethod
    def empty(dim: int) -> "SparseVector":
        return SparseVector(np.empty(0, dtype=np.int64), np.empty(0), dim)

    @staticmethod
    def from_dense(dense: np.ndarray) -> "SparseVector":
        dense = np.asarray(dense, dtype=np.float64)
        idx = np.nonzero(dense)[0]
        return SparseVector(idx.astype(np.int64), dense[idx], dense.shape[0])


def sparse_from_counts(counts: dict[int, float], dim: int) -> SparseVector:
    """Build a vector from an index -> weight mapping, dropping zeros."""
    items = sorted((i, w) for i, w in counts.items() if w != 0.0)
    if not items:
        return SparseVector.empty(dim)
    idx, val = zip(*items)
    return SparseVector(np.array(idx, dtype=np.int64), np.array(val, dtype=np.float64), dim)


def sparse_mean(vectors: list[SparseVector], dim: int) -> SparseVector:
    """Arithmetic mean of sparse vectors; the divisor is len(vectors)."""
    if not vectors:
        return SparseVector.empty(dim)
    acc: dict[int, float] = {}
    for v in vectors:
        for i, x in zip(v.indices.tolist(), v.values.tolist()):
            acc[i] = acc.get(i, 0.0) + x
    inv = 1.0 / len(vectors)
    return sparse_from_counts({i: x * inv for i, x in acc.items()}, dim)
