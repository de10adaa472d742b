"""Maximum-weight bipartite matching over score matrices with forbidden pairs.

Shared by the field mapper and the parameter mapper. A score of exactly -1 is
a sentinel: that pair may never be matched. Leaving rows or columns unmatched
is always allowed, so the optimum never includes a pair that lowers the total.
Among equal-weight optima the lexicographically smallest pair set (row-major)
is returned, which keeps results reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

SENTINEL = -1.0
_EPS = 1e-9


@dataclass(frozen=True)
class ScoreMatrix:
    """Rectangular real scores in [-1, 1]; exactly -1 marks a forbidden pair."""

    rows: int
    cols: int
    data: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix data does not match shape")
        for row in self.data:
            for v in row:
                if not (-1.0 <= v <= 1.0 + _EPS):
                    raise ValueError(f"score {v} outside [-1, 1]")

    @staticmethod
    def init(rows: int, cols: int) -> "ScoreMatrix":
        """All-forbidden matrix, mirroring the mappers' initialization step."""
        return ScoreMatrix(rows, cols, tuple((SENTINEL,) * cols for _ in range(rows)))

    @staticmethod
    def from_rows(rows_data) -> "ScoreMatrix":
        data = tuple(tuple(float(v) for v in row) for row in rows_data)
        cols = len(data[0]) if data else 0
        return ScoreMatrix(len(data), cols, data)

    def with_entry(self, i: int, j: int, value: float) -> "ScoreMatrix":
        data = [list(r) for r in self.data]
        data[i][j] = float(value)
        return ScoreMatrix.from_rows(data)

    def entry(self, i: int, j: int) -> float:
        return self.data[i][j]


def _best_total(
    scores: np.ndarray, row_start: int, cols_free: np.ndarray
) -> float:
    """Max total over partial matchings on rows[row_start:] x free columns.

    Solved as a square assignment with zero-cost dummy rows/columns so that
    leaving anything unmatched is free and forbidden pairs cost infinity.
    """
    rows = scores.shape[0] - row_start
    cols = int(cols_free.sum())
    if rows <= 0 or cols <= 0:
        return 0.0
    sub = scores[row_start:, cols_free]
    n = rows + cols
    cost = np.zeros((n, n), dtype=np.float64)
    block = np.where(sub == SENTINEL, np.inf, -sub)
    cost[:rows, :cols] = block
    r, c = linear_sum_assignment(cost)
    # dummy rows/columns cost zero, so the sum is exactly the matched block
    return float(-cost[r, c].sum())


def optimize(m: ScoreMatrix) -> tuple[tuple[int, int], ...]:
    """Optimal one-to-one matching, excluding sentinel pairs.

    Returns row-major sorted pairs. Maximizes the matched score total; among
    optima the lexicographically smallest pair sequence wins.
    """
    if m.rows == 0 or m.cols == 0:
        return ()
    scores = np.array(m.data, dtype=np.float64)
    all_free = np.ones(m.cols, dtype=bool)
    opt = _best_total(scores, 0, all_free)

    chosen: list[tuple[int, int]] = []
    acc = 0.0
    free = all_free.copy()
    for i in range(m.rows):
        if acc >= opt - _EPS:
            break
        for j in range(m.cols):
            if not free[j] or scores[i, j] == SENTINEL:
                continue
            rest = free.copy()
            rest[j] = False
            total = acc + scores[i, j] + _best_total(scores, i + 1, rest)
            if total >= opt - _EPS:
                chosen.append((i, j))
                acc += scores[i, j]
                free = rest
                break
    return tuple(chosen)


def matching_total(m: ScoreMatrix, matching) -> float:
    return float(sum(m.entry(i, j) for i, j in matching))
