"""
MATRICES

A module for dense 64-bit float matrices. A `Matrix` holds its shape and a
row-major `numpy.ndarray` in the `data` attribute; all arithmetic is performed
on that array. Entries are required to be finite at construction, so a NaN
produced anywhere upstream surfaces at the first matrix it touches.

`matmul` is the product used by the dense networks. `naive_matmul` keeps the
triple loop as a reference implementation.
"""

import numpy as np

from selectq.errors import NonFiniteError, ShapeError


class Matrix:
    """
    Dense real matrix with `nrows`, `ncols` and float64 `data`.

    Construct from nested lists (`entries`), from an existing array (`data`),
    or as a zero matrix of a given size.
    """

    def __init__(self, *, nrows=None, ncols=None, entries=None, data=None):
        if data is not None:
            array = np.asarray(data, dtype=np.float64)
            if array.ndim != 2:
                raise ShapeError(f"Matrix data must be two-dimensional, got {array.ndim}.")
        elif entries is not None:
            if len(entries) == 0:
                array = np.zeros((0, ncols or 0), dtype=np.float64)
            else:
                array = np.array(entries, dtype=np.float64)
                if array.ndim != 2:
                    raise ShapeError("Entries must be a list of equal-length rows.")
        else:
            if nrows is None or ncols is None:
                raise ShapeError("Not enough information provided to construct Matrix.")
            array = np.zeros((nrows, ncols), dtype=np.float64)

        if nrows is not None and array.shape[0] != nrows:
            raise ShapeError(f"Expected {nrows} rows, got {array.shape[0]}.")
        if ncols is not None and array.shape[1] != ncols:
            raise ShapeError(f"Expected {ncols} columns, got {array.shape[1]}.")
        if not np.all(np.isfinite(array)):
            raise NonFiniteError("Matrix entries must be finite.")

        self.data = np.ascontiguousarray(array)
        self.nrows, self.ncols = self.data.shape

    def size(self):
        """Returns size of a matrix as a tuple (rows, cols)."""
        return (self.nrows, self.ncols)

    def T(self):
        """Alias for the transpose() method."""
        return self.transpose()

    def transpose(self):
        """Returns a transposed copy of self."""
        return Matrix(data=self.data.T.copy())

    def copy(self):
        return Matrix(data=self.data.copy())

    def tolist(self):
        return self.data.tolist()

    def __add__(self, other):
        if self.size() != other.size():
            raise ShapeError(
                f"Cannot add matrix of size {self.nrows}x{self.ncols} to matrix of size {other.nrows}x{other.ncols}."
            )
        return Matrix(data=self.data + other.data)

    def __sub__(self, other):
        if self.size() != other.size():
            raise ShapeError(
                f"Cannot subtract matrix of size {other.nrows}x{other.ncols} from matrix of size {self.nrows}x{self.ncols}."
            )
        return Matrix(data=self.data - other.data)

    def __neg__(self):
        return Matrix(data=-self.data)

    def __mul__(self, other):
        """Matrix product for a Matrix `other`, entrywise scaling for a float."""
        if isinstance(other, Matrix):
            return matmul(self, other)
        return Matrix(data=self.data * float(other))

    def __rmul__(self, other):
        return Matrix(data=self.data * float(other))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.size() == other.size() and bool(np.array_equal(self.data, other.data))

    def __getitem__(self, args):
        """
        If i=args[0] and j=args[1] are integers, returns that entry as a float.
        Slices return a sub-Matrix.
        """
        r, c = args
        if isinstance(r, slice) or isinstance(c, slice):
            block = self.data[r, c]
            return Matrix(data=np.atleast_2d(block))
        return float(self.data[r, c])

    def __setitem__(self, args, val):
        if not np.isfinite(val):
            raise NonFiniteError("Matrix entries must be finite.")
        self.data[args] = val

    def __str__(self):
        return str(self.tolist())

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.tolist()})"


# Functions for matrices


def matmul(a, b):
    """Standard product a*b; raises ShapeError unless a.ncols == b.nrows."""
    if a.ncols != b.nrows:
        raise ShapeError(
            f"Cannot multiply matrix of size {a.nrows}x{a.ncols} with matrix of size {b.nrows}x{b.ncols}."
        )
    if a.nrows == 0 or b.ncols == 0 or a.ncols == 0:
        return Matrix(data=np.zeros((a.nrows, b.ncols)))
    return Matrix(data=a.data @ b.data)


def naive_matmul(a, b):
    """Triple-loop product, used as the reference for `matmul`."""
    if a.ncols != b.nrows:
        raise ShapeError(
            f"Cannot multiply matrix of size {a.nrows}x{a.ncols} with matrix of size {b.nrows}x{b.ncols}."
        )
    se = a.data
    oe = b.data
    new_entries = []
    for i in range(a.nrows):
        new_entries.append([])
        for j in range(b.ncols):
            new_entry = 0.0
            for k in range(a.ncols):
                new_entry += se[i][k] * oe[k][j]
            new_entries[i].append(new_entry)
    return Matrix(nrows=a.nrows, ncols=b.ncols, entries=new_entries)


def identity(n):
    """The n x n identity."""
    return Matrix(data=np.eye(n))


def generate(value, nrows, ncols):
    """Generates a constant matrix of size (nrows, ncols)."""
    return Matrix(data=np.full((nrows, ncols), float(value)))


def random(rng, nrows, ncols, low=-1.0, high=1.0):
    """Uniform random matrix drawn from a SeededRng."""
    return Matrix(data=rng.uniform(low, high, size=(nrows, ncols)))
