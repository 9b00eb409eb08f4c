"""Exact linear algebra over the two-element field.

Vectors are numpy uint8 arrays of 0/1 entries.  Matrices pack their rows
into uint64 words so Gaussian elimination stays fast on the product
complexes (tens of thousands of rows), which keeps every rank, kernel and
reduction in the package exact.
"""
from __future__ import annotations

import numpy as np

_WORD = 64


def _pack(vec: np.ndarray, nwords: int) -> np.ndarray:
    out = np.zeros(nwords, dtype=np.uint64)
    idx = np.nonzero(vec)[0]
    np.bitwise_or.at(out, idx >> 6, np.uint64(1) << (idx & 63).astype(np.uint64))
    return out


def _unpack(words: np.ndarray, ncols: int) -> np.ndarray:
    out = np.zeros(ncols, dtype=np.uint8)
    for j in range(ncols):
        out[j] = (words[j >> 6] >> np.uint64(j & 63)) & np.uint64(1)
    return out


def _unpack_fast(words: np.ndarray, ncols: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:ncols].astype(np.uint8)


class F2Matrix:
    """A dense matrix over F2 with bit-packed rows."""

    def __init__(self, packed: np.ndarray, ncols: int):
        self.packed = packed
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        nwords = max(1, (ncols + _WORD - 1) // _WORD)
        return cls(np.zeros((nrows, nwords), dtype=np.uint64), ncols)

    @classmethod
    def from_rows(cls, rows, ncols: int) -> "F2Matrix":
        rows = list(rows)
        m = cls.zeros(len(rows), ncols)
        for i, r in enumerate(rows):
            r = np.asarray(r, dtype=np.uint8)
            if r.shape[0] != ncols:
                raise ValueError(f"row length {r.shape[0]} != ncols {ncols}")
            m.packed[i] = _pack(r, m.packed.shape[1])
        return m

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "F2Matrix":
        dense = np.asarray(dense, dtype=np.uint8) & 1
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows(dense, dense.shape[1])

    @property
    def nrows(self) -> int:
        return self.packed.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def to_dense(self) -> np.ndarray:
        return np.array([_unpack_fast(row, self.ncols) for row in self.packed],
                        dtype=np.uint8).reshape(self.nrows, self.ncols)

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.packed.copy(), self.ncols)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-vector product over F2 (vec indexed by columns)."""
        vec = np.asarray(vec, dtype=np.uint8) & 1
        if vec.shape[0] != self.ncols:
            raise ValueError("vector length mismatch")
        packed_v = _pack(vec, self.packed.shape[1])
        parities = np.bitwise_count(self.packed & packed_v).sum(axis=1)
        return (parities & 1).astype(np.uint8)

    def rref(self) -> tuple["F2Matrix", list[int]]:
        """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
        rows = self.packed.copy()
        nrows = rows.shape[0]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r == nrows:
                break
            w = c >> 6
            b = np.uint64(c & 63)
            col = (rows[r:, w] >> b) & np.uint64(1)
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                rows[[r, i]] = rows[[i, r]]
            mask = ((rows[:, w] >> b) & np.uint64(1)).astype(bool)
            mask[r] = False
            if mask.any():
                rows[mask] ^= rows[r]
            pivots.append(c)
            r += 1
        return F2Matrix(rows[:r].copy(), self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[np.ndarray]:
        """Basis of {v : M v = 0}, as uint8 vectors of length ncols."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        free_cols = [c for c in range(self.ncols) if c not in pivot_set]
        dense = reduced.to_dense() if pivots else None
        piv_idx = np.array(pivots, dtype=np.intp)
        basis = []
        for fc in free_cols:
            v = np.zeros(self.ncols, dtype=np.uint8)
            v[fc] = 1
            if dense is not None:
                v[piv_idx] = dense[:, fc]
            basis.append(v)
        return basis


try:
    from numba import njit as _njit

    @_njit(cache=True)
    def _reduce_kernel(rows, pivots, vecs):
        nrows = rows.shape[0]
        for k in range(vecs.shape[0]):
            for i in range(nrows):
                p = pivots[i]
                if (vecs[k, p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
                    vecs[k] ^= rows[i]

    _HAVE_REDUCE_KERNEL = True
except Exception:  # pragma: no cover - environment without numba
    _HAVE_REDUCE_KERNEL = False


def _reduce_rows_python(rows, pivots, vecs):
    for k in range(vecs.shape[0]):
        for i in range(rows.shape[0]):
            p = int(pivots[i])
            if (vecs[k, p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
                vecs[k] ^= rows[i]


class F2RowSpace:
    """Incrementally built row space in reduced echelon form.

    Supports canonical reduction of vectors modulo the space, which is how
    cocycles get reduced modulo coboundaries everywhere in the package.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.nwords = max(1, (ncols + _WORD - 1) // _WORD)
        self._rows = np.zeros((0, self.nwords), dtype=np.uint64)
        self._pivots = np.zeros(0, dtype=np.int64)

    @classmethod
    def from_matrix(cls, m: F2Matrix) -> "F2RowSpace":
        space = cls(m.ncols)
        reduced, pivots = m.rref()
        space._rows = reduced.packed[:len(pivots)].copy()
        space._pivots = np.array(pivots, dtype=np.int64)
        return space

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def _reduce_packed_batch(self, packed: np.ndarray) -> np.ndarray:
        vecs = packed.copy()
        if self._rows.shape[0]:
            if _HAVE_REDUCE_KERNEL:
                _reduce_kernel(self._rows, self._pivots, vecs)
            else:
                _reduce_rows_python(self._rows, self._pivots, vecs)
        return vecs

    def reduce_packed(self, packed_vec: np.ndarray) -> np.ndarray:
        return self._reduce_packed_batch(packed_vec[None, :])[0]

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Canonical representative of vec modulo the row space."""
        vec = np.asarray(vec, dtype=np.uint8) & 1
        return _unpack_fast(self.reduce_packed(_pack(vec, self.nwords)), self.ncols)

    def reduce_batch(self, vecs) -> list[np.ndarray]:
        packed = np.stack([_pack(np.asarray(v, dtype=np.uint8) & 1, self.nwords)
                           for v in vecs])
        reduced = self._reduce_packed_batch(packed)
        return [_unpack_fast(row, self.ncols) for row in reduced]

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def add_packed(self, packed_vec: np.ndarray) -> bool:
        v = self.reduce_packed(packed_vec)
        if not v.any():
            return False
        bits = np.unpackbits(v.view(np.uint8), bitorder="little")
        p = int(np.nonzero(bits)[0][0])
        if self._rows.shape[0]:
            # keep reduced form: clear the new pivot bit from existing rows
            mask = ((self._rows[:, p >> 6] >> np.uint64(p & 63))
                    & np.uint64(1)).astype(bool)
            if mask.any():
                self._rows[mask] ^= v
        pos = int(np.searchsorted(self._pivots, p))
        self._rows = np.insert(self._rows, pos, v, axis=0)
        self._pivots = np.insert(self._pivots, pos, p)
        return True

    def add(self, vec: np.ndarray) -> bool:
        """Insert vec; returns True if it enlarged the space."""
        vec = np.asarray(vec, dtype=np.uint8) & 1
        return self.add_packed(_pack(vec, self.nwords))
