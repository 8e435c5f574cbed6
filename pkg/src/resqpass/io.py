"""Matrix Market coordinate files and plain-text vector files."""

import numpy as np

from .operators import SparseMatrixCSR

_HEADER = "%%MatrixMarket matrix coordinate real general"


def write_matrix_market(a, path):
    """Write a CSR matrix in 1-based coordinate format."""
    m, n = a.shape
    with open(path, "w") as fh:
        fh.write(_HEADER + "\n")
        fh.write(f"{m} {n} {a.nnz}\n")
        for i in range(m):
            idx, vals = a.row(i)
            for c, v in zip(idx.tolist(), vals.tolist()):
                fh.write(f"{i + 1} {c + 1} {v:.17g}\n")


def read_matrix_market(path):
    """Read a coordinate-format Matrix Market file into a CSR matrix."""
    with open(path) as fh:
        header = fh.readline()
        tokens = header.strip().lower().split()
        if tokens[:5] != ["%%matrixmarket", "matrix", "coordinate", "real", "general"]:
            raise ValueError(f"unsupported Matrix Market header: {header.strip()!r}")
        size_line = None
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            size_line = stripped
            break
        if size_line is None:
            raise ValueError("missing size line")
        m, n, nnz = (int(tok) for tok in size_line.split())
        rows = np.zeros(nnz, dtype=np.int64)
        cols = np.zeros(nnz, dtype=np.int64)
        vals = np.zeros(nnz)
        count = 0
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            if count >= nnz:
                raise ValueError("more entries than declared")
            i, j, v = stripped.split()
            rows[count] = int(i) - 1
            cols[count] = int(j) - 1
            vals[count] = float(v)
            count += 1
        if count != nnz:
            raise ValueError(f"declared {nnz} entries but found {count}")
    return SparseMatrixCSR.from_coo((m, n), rows, cols, vals)


def write_vector(v, path):
    """Write a dense vector, one decimal value per line."""
    with open(path, "w") as fh:
        for x in np.asarray(v, dtype=float):
            fh.write(f"{x:.17g}\n")


def read_vector(path):
    """Read a dense vector written one value per line (inf allowed)."""
    values = []
    with open(path) as fh:
        for line in fh:
            stripped = line.strip()
            if stripped:
                values.append(float(stripped))
    return np.asarray(values, dtype=float)
