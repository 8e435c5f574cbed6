"""Preconditioners applied to the outer residual recursion."""

import heapq

import numpy as np


class FactorizationFailedError(RuntimeError):
    """Incomplete elimination hit a zero pivot."""


class Preconditioner:
    """Contract: solve(r) returns M^{-1} r for an n-by-n operator M."""

    def __init__(self, order):
        self.order = int(order)

    def solve(self, r):
        raise NotImplementedError

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        if r.shape != (self.order,):
            raise ValueError("vector length does not match the preconditioner order")
        return r


class IdentityPreconditioner(Preconditioner):
    def solve(self, r):
        return self._check(r).copy()


class ILUTFactorization(Preconditioner):
    """Incomplete LU factors; solve applies the two triangular sweeps.

    The lower factor has an implicit unit diagonal; the upper factor's
    diagonal is stored separately and must be nonzero throughout.
    """

    def __init__(self, lower_rows, upper_rows, upper_diag, tau):
        super().__init__(len(lower_rows))
        self.tau = float(tau)
        self._lower = lower_rows
        self._upper = upper_rows
        self._diag = np.asarray(upper_diag, dtype=float)
        if np.any(self._diag == 0.0):
            raise FactorizationFailedError("zero diagonal in the upper factor")

    def solve(self, r):
        r = self._check(r)
        n = self.order
        y = np.zeros(n)
        for i in range(n):
            idx, val = self._lower[i]
            y[i] = r[i] - (val @ y[idx] if idx.size else 0.0)
        x = np.zeros(n)
        for i in range(n - 1, -1, -1):
            idx, val = self._upper[i]
            acc = val @ x[idx] if idx.size else 0.0
            x[i] = (y[i] - acc) / self._diag[i]
        return x

    def lower_to_dense(self):
        out = np.eye(self.order)
        for i, (idx, val) in enumerate(self._lower):
            out[i, idx] = val
        return out

    def upper_to_dense(self):
        out = np.diag(self._diag)
        for i, (idx, val) in enumerate(self._upper):
            out[i, idx] = val
        return out


def ilut_factor(s, tau):
    """Row-wise incomplete LU of a square CSR matrix with threshold dropping.

    While eliminating row i, entries whose magnitude falls below
    tau * ||row_i||_2 are dropped; the pivot is never dropped. tau = 0
    reproduces the complete factorization when no pivoting is needed.
    """
    m, n = s.shape
    if m != n:
        raise ValueError("matrix must be square")
    if tau < 0:
        raise ValueError("drop tolerance must be nonnegative")
    lower_rows = []
    upper_rows = []
    diag = np.zeros(n)
    for i in range(n):
        cols, vals = s.row(i)
        droptol = tau * float(np.linalg.norm(vals))
        w = dict(zip(cols.tolist(), vals.tolist()))
        heap = [c for c in w if c < i]
        heapq.heapify(heap)
        lcols, lvals = [], []
        while heap:
            kcol = heapq.heappop(heap)
            if kcol not in w:
                continue
            factor = w.pop(kcol) / diag[kcol]
            if abs(factor) < droptol:
                continue
            lcols.append(kcol)
            lvals.append(factor)
            ucols, uvals = upper_rows[kcol]
            for c, u in zip(ucols.tolist(), uvals.tolist()):
                if c in w:
                    w[c] -= factor * u
                else:
                    w[c] = -factor * u
                    if c < i:
                        heapq.heappush(heap, c)
        pivot = w.pop(i, 0.0)
        if pivot == 0.0:
            raise FactorizationFailedError(f"zero pivot in row {i}")
        diag[i] = pivot
        keep = sorted(c for c in w if abs(w[c]) >= droptol)
        lower_rows.append(
            (np.asarray(lcols, dtype=np.int64), np.asarray(lvals, dtype=float))
        )
        upper_rows.append(
            (
                np.asarray(keep, dtype=np.int64),
                np.asarray([w[c] for c in keep], dtype=float),
            )
        )
    return ILUTFactorization(lower_rows, upper_rows, diag, tau)
