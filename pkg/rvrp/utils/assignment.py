import numpy as np
from scipy.optimize import linear_sum_assignment

from rvrp.errors import ParameterError

# relative cost difference below which two matchings count as tied
TIE_TOLERANCE = 1e-9


def min_cost_matching(cost: np.ndarray) -> list[tuple[int, int]]:
    """
    Rectangular minimum-cost assignment of every row to a distinct column.

    Among tied matchings the one with the lowest total column index wins,
    so the lowest-numbered robots are preferred. Returns ``(row, column)``
    pairs sorted by row; requires rows <= columns.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] > cost.shape[1]:
        raise ParameterError(
            f"assignment needs at most as many rows as columns, got {cost.shape}"
        )
    if not np.all(np.isfinite(cost)):
        raise ParameterError("assignment costs must be finite")
    n_cols = cost.shape[1]
    scale = max(1.0, float(np.abs(cost).max(initial=0.0)))
    # the whole index penalty of a row stays below TIE_TOLERANCE * scale
    step = TIE_TOLERANCE * scale / max(1, n_cols)
    rows, cols = linear_sum_assignment(cost + step * np.arange(n_cols))
    return sorted(zip(rows.tolist(), cols.tolist()))
