"""Dense phase-1 simplex for feasibility of ``A x = b, x >= 0``.

Pivoting follows Bland's rule: the entering column is the lowest-index column
with negative reduced cost, ties in the ratio test go to the lowest-index basic
variable. This guarantees termination on degenerate problems.
"""
from typing import NamedTuple

import numpy as np

from .errors import OptimizationError


class Phase1Result(NamedTuple):
    feasible: bool
    x: np.ndarray
    infeasibility: float  # optimal sum of artificial variables
    residual: float  # max |A x - b| of the returned x
    pivots: int


def phase1(A, b, tol: float = 1e-9, pivot_tol: float = 1e-11, max_pivots: int = None) -> Phase1Result:
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    if max_pivots is None:
        max_pivots = 50 * (n + m) + 1000
    pivots = 0
    while True:
        cost = T[m, :-1]
        candidates = np.flatnonzero(cost < -pivot_tol)
        if candidates.size == 0:
            break
        col = int(candidates[0])
        column = T[:m, col]
        rows = np.flatnonzero(column > pivot_tol)
        if rows.size == 0:
            # cannot happen in phase 1 (objective bounded below by 0)
            raise OptimizationError("phase-1 simplex reported an unbounded direction")
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + pivot_tol * max(1.0, abs(best))]
        row = int(min(tied, key=lambda r: basis[r]))
        T[row] /= T[row, col]
        others = np.arange(m + 1) != row
        T[others] -= np.outer(T[others, col], T[row])
        basis[row] = col
        pivots += 1
        if pivots > max_pivots:
            raise OptimizationError(f"phase-1 simplex exceeded {max_pivots} pivots")

    full = np.zeros(n + m)
    for r, var in enumerate(basis):
        full[var] = T[r, -1]
    x = np.clip(full[:n], 0.0, None)
    infeasibility = float(max(-T[m, -1], 0.0))
    residual = float(np.max(np.abs(A @ x - b))) if m else 0.0
    return Phase1Result(infeasibility <= tol and residual <= 10 * tol, x, infeasibility, residual, pivots)
