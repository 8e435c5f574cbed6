"""Sparse and structured linear operators (forward plus adjoint products)."""

import numpy as np


class LinearOperator:
    """m-by-n operator defined by forward and adjoint matrix-vector products.

    Implementations are immutable after construction; apply calls are
    deterministic and safe to issue concurrently.
    """

    def __init__(self, shape):
        m, n = shape
        self._shape = (int(m), int(n))

    @property
    def shape(self):
        return self._shape

    def apply(self, v):
        raise NotImplementedError

    def apply_adjoint(self, w):
        raise NotImplementedError

    def _check(self, x, length, what):
        x = np.asarray(x, dtype=float)
        if x.shape != (length,):
            raise ValueError(f"{what} has shape {x.shape}, expected ({length},)")
        return x


class DenseOperator(LinearOperator):
    """Operator backed by an explicit dense matrix."""

    def __init__(self, a):
        a = np.asarray(a, dtype=float)
        if a.ndim != 2:
            raise ValueError("dense operator needs a 2-d array")
        super().__init__(a.shape)
        self.a = a

    def apply(self, v):
        return self.a @ self._check(v, self.shape[1], "input vector")

    def apply_adjoint(self, w):
        return self.a.T @ self._check(w, self.shape[0], "input vector")


class SparseMatrixCSR(LinearOperator):
    """Compressed sparse row matrix.

    Row pointers are nondecreasing and column indices strictly increase
    within each row; both are checked at construction.
    """

    def __init__(self, shape, indptr, indices, data):
        super().__init__(shape)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.data = np.ascontiguousarray(data, dtype=float)
        self._validate()
        self._rowids = np.repeat(
            np.arange(self.shape[0], dtype=np.int64), np.diff(self.indptr)
        )

    def _validate(self):
        m, n = self.shape
        if self.indptr.shape != (m + 1,) or self.indptr[0] != 0:
            raise ValueError("malformed row pointer array")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("row pointers must be nondecreasing")
        nnz = int(self.indptr[-1])
        if self.indices.shape != (nnz,) or self.data.shape != (nnz,):
            raise ValueError("index/value arrays inconsistent with row pointers")
        if nnz:
            if self.indices.min() < 0 or self.indices.max() >= n:
                raise ValueError("column index out of range")
            rid = np.repeat(np.arange(m, dtype=np.int64), np.diff(self.indptr))
            same_row = rid[1:] == rid[:-1]
            if np.any(same_row & (np.diff(self.indices) <= 0)):
                raise ValueError("column indices must strictly increase within a row")

    @property
    def nnz(self):
        return int(self.indptr[-1])

    @classmethod
    def from_coo(cls, shape, rows, cols, vals):
        """Build from coordinate triplets; duplicates are summed."""
        m, n = shape
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=float)
        if rows.size:
            if rows.min() < 0 or rows.max() >= m or cols.min() < 0 or cols.max() >= n:
                raise ValueError("coordinate out of range")
        keys = rows * n + cols
        uniq, inverse = np.unique(keys, return_inverse=True)
        data = np.bincount(inverse, weights=vals, minlength=uniq.size)
        urows = uniq // n
        ucols = uniq % n
        indptr = np.zeros(m + 1, dtype=np.int64)
        np.add.at(indptr, urows + 1, 1)
        indptr = np.cumsum(indptr)
        return cls(shape, indptr, ucols, data)

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=float)
        rows, cols = np.nonzero(a)
        return cls.from_coo(a.shape, rows, cols, a[rows, cols])

    def to_dense(self):
        out = np.zeros(self.shape)
        out[self._rowids, self.indices] = self.data
        return out

    def row(self, i):
        sl = slice(self.indptr[i], self.indptr[i + 1])
        return self.indices[sl], self.data[sl]

    def apply(self, v):
        v = self._check(v, self.shape[1], "input vector")
        return np.bincount(
            self._rowids, weights=self.data * v[self.indices], minlength=self.shape[0]
        )

    def apply_adjoint(self, w):
        w = self._check(w, self.shape[0], "input vector")
        return np.bincount(
            self.indices, weights=self.data * w[self._rowids], minlength=self.shape[1]
        )

    def transpose(self):
        m, n = self.shape
        return SparseMatrixCSR.from_coo((n, m), self.indices, self._rowids, self.data)


def csr_matmul(a, b):
    """Sparse-sparse product a @ b as a new CSR matrix."""
    m, ka = a.shape
    kb, n = b.shape
    if ka != kb:
        raise ValueError("inner dimensions do not match")
    indptr = [0]
    all_cols = []
    all_vals = []
    for i in range(m):
        acols, avals = a.row(i)
        parts_c = []
        parts_v = []
        for kcol, aval in zip(acols.tolist(), avals.tolist()):
            bcols, bvals = b.row(kcol)
            parts_c.append(bcols)
            parts_v.append(aval * bvals)
        if parts_c:
            row_cols = np.concatenate(parts_c)
            row_vals = np.concatenate(parts_v)
            uniq, inverse = np.unique(row_cols, return_inverse=True)
            sums = np.bincount(inverse, weights=row_vals, minlength=uniq.size)
            all_cols.append(uniq)
            all_vals.append(sums)
            indptr.append(indptr[-1] + uniq.size)
        else:
            indptr.append(indptr[-1])
    cols = np.concatenate(all_cols) if all_cols else np.zeros(0, dtype=np.int64)
    vals = np.concatenate(all_vals) if all_vals else np.zeros(0)
    return SparseMatrixCSR((m, n), np.array(indptr, dtype=np.int64), cols, vals)


def gram_column(a, basis, v_new):
    """Bordered column of the projected normal matrix for a new direction.

    Returns (c, delta) with c = basis^T A^T (A v_new) and delta = ||A v_new||^2;
    the product A v_new is formed once and reused for both quantities.
    """
    v_new = np.asarray(v_new, dtype=float)
    w = a.apply(v_new)
    delta = float(w @ w)
    if basis is None or basis.shape[1] == 0:
        return np.zeros(0), delta
    c = basis.T @ a.apply_adjoint(w)
    return c, delta


def kron_left_apply(x, v):
    """Apply I (x) X to a column-stacked matrix: vec(Y) -> vec(X Y)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    n, p = x.shape
    if v.ndim != 1 or v.size % p:
        raise ValueError("vector length is not a multiple of the column count")
    ymat = v.reshape((p, v.size // p), order="F")
    return (x @ ymat).ravel(order="F")


def kron_right_apply(y, v):
    """Apply Y^T (x) I to a column-stacked matrix: vec(X) -> vec(X Y)."""
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    p, _ = y.shape
    if v.ndim != 1 or v.size % p:
        raise ValueError("vector length is not a multiple of the row count")
    xmat = v.reshape((v.size // p, p), order="F")
    return (xmat @ y).ravel(order="F")


class KroneckerLeft(LinearOperator):
    """Operator I_m (x) X without materializing the Kronecker matrix."""

    def __init__(self, x, ncols):
        x = np.asarray(x, dtype=float)
        n, p = x.shape
        super().__init__((n * ncols, p * ncols))
        self.x = x

    def apply(self, v):
        return kron_left_apply(self.x, self._check(v, self.shape[1], "input vector"))

    def apply_adjoint(self, w):
        return kron_left_apply(self.x.T, self._check(w, self.shape[0], "input vector"))


class KroneckerRight(LinearOperator):
    """Operator Y^T (x) I_n without materializing the Kronecker matrix."""

    def __init__(self, y, nrows):
        y = np.asarray(y, dtype=float)
        p, mc = y.shape
        super().__init__((nrows * mc, nrows * p))
        self.y = y

    def apply(self, v):
        return kron_right_apply(self.y, self._check(v, self.shape[1], "input vector"))

    def apply_adjoint(self, w):
        return kron_right_apply(self.y.T, self._check(w, self.shape[0], "input vector"))


def laplacian_2d(g):
    """Finite-difference Laplacian on a g-by-g interior grid of the unit square.

    Kronecker sum of the 1D second-difference stencil (-1, 2, -1) scaled by
    (g + 1)^2; the result is symmetric positive definite.
    """
    if g < 2:
        raise ValueError("grid size must be at least 2")
    s = float((g + 1) ** 2)
    rows, cols, vals = [], [], []
    for i in range(g):
        for j in range(g):
            r = i * g + j
            if i > 0:
                rows.append(r), cols.append(r - g), vals.append(-s)
            if j > 0:
                rows.append(r), cols.append(r - 1), vals.append(-s)
            rows.append(r), cols.append(r), vals.append(4.0 * s)
            if j < g - 1:
                rows.append(r), cols.append(r + 1), vals.append(-s)
            if i < g - 1:
                rows.append(r), cols.append(r + g), vals.append(-s)
    return SparseMatrixCSR.from_coo((g * g, g * g), rows, cols, vals)


def as_linear_operator(obj):
    """Coerce a LinearOperator or 2-d array into the operator contract."""
    if isinstance(obj, LinearOperator):
        return obj
    arr = np.asarray(obj)
    if arr.ndim == 2:
        return DenseOperator(arr)
    raise TypeError("expected a LinearOperator or a 2-d array")
