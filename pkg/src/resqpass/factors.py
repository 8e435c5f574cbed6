"""Dense triangular and orthonormal factors with cheap column updates.

These kernels back both solver loops: the outer loop grows a Cholesky
factor of the projected Hessian one bordered column at a time, and the
inner active-set loop keeps a thin QR factorization of the working-set
matrix in sync while constraints enter and leave.
"""

import numpy as np
from scipy.linalg import solve_triangular


class SingularFactorError(ValueError):
    """A triangular solve met a zero diagonal entry."""


class DegenerateColumnError(ValueError):
    """An appended column is numerically inside the current span."""


class LowerTriangular:
    """Square lower-triangular matrix that can grow by one bordered row."""

    def __init__(self, data=None):
        if data is None:
            self._data = np.zeros((0, 0))
        else:
            a = np.asarray(data, dtype=float)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError("lower-triangular factor must be square")
            self._data = np.tril(a)

    @property
    def order(self):
        return self._data.shape[0]

    @property
    def array(self):
        return self._data

    def diagonal(self):
        return np.diagonal(self._data)

    def extended(self, row, diag):
        """Copy with (row, diag) appended as the last bordered row."""
        k = self.order
        out = np.zeros((k + 1, k + 1))
        out[:k, :k] = self._data
        out[k, :k] = row
        out[k, k] = diag
        return LowerTriangular(out)


def _require_valid(lower):
    if np.any(lower.diagonal() == 0.0):
        raise SingularFactorError("zero diagonal entry in triangular factor")


def forward_solve(lower, c):
    """Solve L l = c by forward substitution (c may carry extra columns)."""
    c = np.asarray(c, dtype=float)
    if c.shape[0] != lower.order:
        raise ValueError("right-hand side does not match the factor order")
    if lower.order == 0:
        return np.zeros_like(c)
    _require_valid(lower)
    return solve_triangular(lower.array, c, lower=True)


def backward_solve(lower, c):
    """Solve L^T z = c by backward substitution."""
    c = np.asarray(c, dtype=float)
    if c.shape[0] != lower.order:
        raise ValueError("right-hand side does not match the factor order")
    if lower.order == 0:
        return np.zeros_like(c)
    _require_valid(lower)
    return solve_triangular(lower.array, c, lower=True, trans="T")


def cholesky_append(lower, c, delta, eps=1e-12):
    """Grow the factor of G to cover the bordered matrix [[G, c], [c^T, delta]].

    Returns the extended factor, or None when positive definiteness is lost
    at the eps level, i.e. delta - l^T l <= eps**2 for L l = c. A None return
    is a termination signal for the outer iteration, not an error.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (lower.order,):
        raise ValueError("border column does not match the factor order")
    l = forward_solve(lower, c) if lower.order else np.zeros(0)
    rem = float(delta) - float(l @ l)
    if rem <= eps * eps:
        return None
    return lower.extended(l, np.sqrt(rem))


class QRFactors:
    """Thin QR of a tracked tall matrix, updated as columns come and go.

    Q (orthonormal columns) and R (upper triangular) are stored explicitly;
    the column count stays small, so explicit storage keeps removal simple.
    """

    def __init__(self, nrows):
        self.nrows = int(nrows)
        self.q = np.zeros((self.nrows, 0))
        self.r = np.zeros((0, 0))

    @property
    def ncols(self):
        return self.r.shape[1]

    def append_column(self, x, dep_tol=1e-14):
        """Append a column (Gram-Schmidt with one reorthogonalization pass)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.nrows,):
            raise ValueError("column has the wrong length")
        y = self.q.T @ x
        w = x - self.q @ y
        correction = self.q.T @ w
        w = w - self.q @ correction
        y = y + correction
        rho = np.linalg.norm(w)
        if rho < dep_tol:
            raise DegenerateColumnError("appended column lies in the current span")
        t = self.ncols
        r = np.zeros((t + 1, t + 1))
        r[:t, :t] = self.r
        r[:t, t] = y
        r[t, t] = rho
        self.q = np.column_stack([self.q, w / rho])
        self.r = r

    def remove_column(self, j):
        """Delete column j; a Givens sweep restores R to triangular form."""
        t = self.ncols
        if not 0 <= j < t:
            raise IndexError("column index out of range")
        r = np.delete(self.r, j, axis=1)
        q = self.q.copy()
        for i in range(j, t - 1):
            a, b = r[i, i], r[i + 1, i]
            rad = np.hypot(a, b)
            if rad == 0.0:
                continue
            cs, sn = a / rad, b / rad
            rot = np.array([[cs, sn], [-sn, cs]])
            r[i:i + 2, i:] = rot @ r[i:i + 2, i:]
            q[:, i:i + 2] = q[:, i:i + 2] @ rot.T
        self.q = q[:, :t - 1]
        self.r = r[:t - 1, :]
