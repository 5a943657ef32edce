"""Dual-mode (float / exact rational) dense matrices and rank predicates.

Matrices are plain numpy arrays.  dtype float64 means float mode; dtype
object means exact mode with ``fractions.Fraction`` entries.  The mode is
uniform within a matrix and every predicate dispatches on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, EmptyMatrix


@dataclass(frozen=True)
class Tolerance:
    """Thresholds used only in float mode; exact mode compares exactly.

    rel_rank_tol: singular values below rel_rank_tol * s_max * max(rows, cols)
    are treated as zero.  col_match_tol: max-norm threshold for column
    equality.
    """

    rel_rank_tol: float = 1e-9
    col_match_tol: float = 1e-8

    def __post_init__(self):
        if self.rel_rank_tol <= 0 or self.col_match_tol <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def is_exact(m: np.ndarray) -> bool:
    return m.dtype == object


def exact_matrix(rows) -> np.ndarray:
    """Build an exact-mode matrix from nested sequences of rationals."""
    data = [[Fraction(x) for x in row] for row in rows]
    out = np.empty((len(data), len(data[0]) if data else 0), dtype=object)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def exact_zeros(nrows: int, ncols: int) -> np.ndarray:
    out = np.empty((nrows, ncols), dtype=object)
    out[...] = Fraction(0)
    return out


def to_float(m: np.ndarray) -> np.ndarray:
    return m.astype(float)


def zeros_like_mode(exact: bool, nrows: int, ncols: int) -> np.ndarray:
    return exact_zeros(nrows, ncols) if exact else np.zeros((nrows, ncols))


def rank(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of a dense matrix: exact elimination or SVD depending on mode."""
    if m.size == 0:
        raise EmptyMatrix(f"rank of empty {m.shape} matrix")
    if is_exact(m):
        return _rank_exact(m)
    s = np.linalg.svd(_equilibrated(m), compute_uv=False)
    if s[0] == 0.0:
        return 0
    cutoff = tol.rel_rank_tol * s[0] * max(m.shape)
    return int(np.sum(s > cutoff))


def _equilibrated(m: np.ndarray) -> np.ndarray:
    """Iterative max-norm row/column scaling; preserves rank.

    Monomial-structured columns differ in scale by many orders of
    magnitude, which would otherwise push genuine directions below the
    relative singular-value cutoff.
    """
    out = np.array(m, dtype=float)
    for _ in range(5):
        rs = np.max(np.abs(out), axis=1, keepdims=True)
        rs[rs == 0.0] = 1.0
        out /= rs
        cs = np.max(np.abs(out), axis=0, keepdims=True)
        cs[cs == 0.0] = 1.0
        out /= cs
    return out


def subspace_contains(a: np.ndarray, b: np.ndarray,
                      tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the column span of ``a`` lies inside the column span of ``b``."""
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    if a.shape[1] == 0:
        return True
    return rank(np.hstack([a, b]), tol) == rank(b, tol)


def columns_subset_of(a: np.ndarray, b: np.ndarray,
                      tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every column of ``a`` equals some column of ``b``.

    Stronger than span containment: equality is exact in exact mode and
    within ``col_match_tol`` in max norm in float mode.
    """
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    exact = is_exact(a)
    for j in range(a.shape[1]):
        col = a[:, j]
        found = False
        for k in range(b.shape[1]):
            other = b[:, k]
            if exact:
                if all(col[i] == other[i] for i in range(len(col))):
                    found = True
                    break
            else:
                if np.max(np.abs(col - other)) <= tol.col_match_tol:
                    found = True
                    break
        if not found:
            return False
    return True


def _integer_rows(m: np.ndarray) -> list[list[int]]:
    """Scale each row by the LCM of its denominators; rank is unchanged."""
    rows = []
    for i in range(m.shape[0]):
        dens = [m[i, j].denominator for j in range(m.shape[1])]
        scale = math.lcm(*dens) if dens else 1
        rows.append([int(m[i, j] * scale) for j in range(m.shape[1])])
    return rows


def _rank_exact(m: np.ndarray) -> int:
    """Fraction-free Gaussian elimination over the integers.

    Cross-multiplication row updates keep entries integral; each updated
    row is reduced by its gcd to bound coefficient growth.  Rows whose
    pivot-column entry is already zero are skipped, which keeps the cost
    low on the block-sparse matrices this package produces.
    """
    rows = _integer_rows(m)
    nrows, ncols = len(rows), len(rows[0])
    piv_r = 0
    for piv_c in range(ncols):
        pivot_row = None
        for r in range(piv_r, nrows):
            if rows[r][piv_c] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[piv_r], rows[pivot_row] = rows[pivot_row], rows[piv_r]
        piv = rows[piv_r][piv_c]
        for r in range(piv_r + 1, nrows):
            f = rows[r][piv_c]
            if f == 0:
                continue
            row = [piv * rows[r][c] - f * rows[piv_r][c]
                   for c in range(ncols)]
            g = math.gcd(*row)
            if g > 1:
                row = [x // g for x in row]
            rows[r] = row
        piv_r += 1
        if piv_r == nrows:
            break
    return piv_r


def solve_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b exactly for square exact-mode ``a``.

    Gauss-Jordan over Fractions; zero multipliers are skipped so the
    block-diagonal systems built elsewhere stay cheap.  Raises
    numpy.linalg.LinAlgError on a singular system, mirroring
    numpy.linalg.solve.
    """
    n = a.shape[0]
    if a.shape[1] != n or b.shape[0] != n:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    ncols = b.shape[1]
    aug = [[a[i, j] for j in range(n)] + [b[i, j] for j in range(ncols)]
           for i in range(n)]
    width = n + ncols
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if aug[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            raise np.linalg.LinAlgError("singular exact system")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        piv = aug[col][col]
        if piv != 1:
            aug[col] = [x / piv for x in aug[col]]
        prow = aug[col]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if f == 0:
                continue
            aug[r] = [aug[r][c] - f * prow[c] for c in range(width)]
    out = np.empty((n, ncols), dtype=object)
    for i in range(n):
        for j in range(ncols):
            out[i, j] = aug[i][n + j]
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product working in both modes (np.matmul rejects object dtype)."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return a.dot(b)
