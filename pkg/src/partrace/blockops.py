"""Block structure over a flat ``(mn, mn)`` matrix.

A :class:`BlockMatrix` is a tag ``(m, n)`` on a square array: block ``(i, j)``
occupies rows ``[i*n, (i+1)*n)`` and columns ``[j*n, (j+1)*n)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from partrace.errors import DimensionError
from partrace.matkernel import as_matrix, kron


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    m: int
    n: int
    data: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DimensionError(f"block counts must be positive, got m={self.m}, n={self.n}")
        data = as_matrix(self.data)
        d = self.m * self.n
        if data.shape != (d, d):
            raise DimensionError(f"data shape {data.shape} does not match m*n={d}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.m * self.n

    def blocks(self) -> np.ndarray:
        """View as an ``(m, m, n, n)`` array indexed ``[i, j, :, :]``."""
        m, n = self.m, self.n
        return self.data.reshape(m, n, m, n).transpose(0, 2, 1, 3)

    def with_data(self, data) -> "BlockMatrix":
        return BlockMatrix(self.m, self.n, data)

    def __repr__(self):
        return f"BlockMatrix(m={self.m}, n={self.n})"


def assemble(blocks) -> BlockMatrix:
    """Build a block matrix from an ``m x m`` grid of ``n x n`` blocks."""
    m = len(blocks)
    if m == 0:
        raise DimensionError("empty block grid")
    rows = []
    n = None
    for i, row in enumerate(blocks):
        if len(row) != m:
            raise DimensionError(f"row {i} has {len(row)} blocks, expected {m}")
        converted = []
        for j, blk in enumerate(row):
            blk = np.asarray(blk, dtype=np.complex128)
            if blk.ndim != 2 or blk.shape[0] != blk.shape[1]:
                raise DimensionError(f"block ({i}, {j}) is not square: {blk.shape}")
            if n is None:
                n = blk.shape[0]
            elif blk.shape[0] != n:
                raise DimensionError(f"block ({i}, {j}) has size {blk.shape[0]}, expected {n}")
            converted.append(blk)
        rows.append(converted)
    return BlockMatrix(m, n, np.block(rows))


def block_at(a: BlockMatrix, i: int, j: int) -> np.ndarray:
    if not (0 <= i < a.m and 0 <= j < a.m):
        raise IndexError(f"block index ({i}, {j}) out of range for m={a.m}")
    n = a.n
    return a.data[i * n:(i + 1) * n, j * n:(j + 1) * n].copy()


def partial_trace_1(a: BlockMatrix) -> np.ndarray:
    """Sum of the diagonal blocks (``n x n``)."""
    b = a.blocks()
    return np.einsum("iikl->kl", b).copy()


def partial_trace_2(a: BlockMatrix) -> np.ndarray:
    """Matrix of block traces (``m x m``)."""
    b = a.blocks()
    return np.einsum("ijkk->ij", b).copy()


def partial_transpose(a: BlockMatrix) -> BlockMatrix:
    """Swap blocks ``(i, j)`` and ``(j, i)``; the blocks themselves are not transposed."""
    m, n = a.m, a.n
    swapped = a.blocks().transpose(1, 0, 2, 3)
    return BlockMatrix(m, n, swapped.transpose(0, 2, 1, 3).reshape(m * n, m * n))


def embed_left(x, m: int) -> BlockMatrix:
    """``I_m (x) x``."""
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionError(f"x must be square, got {x.shape}")
    n = x.shape[0]
    return BlockMatrix(m, n, kron(np.eye(m), x))


def embed_right(y, n: int) -> BlockMatrix:
    """``y (x) I_n``."""
    y = np.asarray(y, dtype=np.complex128)
    if y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise DimensionError(f"y must be square, got {y.shape}")
    m = y.shape[0]
    return BlockMatrix(m, n, kron(y, np.eye(n)))
