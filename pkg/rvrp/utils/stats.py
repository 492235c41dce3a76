import math
from typing import Sequence

import numpy as np
from scipy import stats


def mean_ci(values: Sequence[float], z: float = 1.96) -> tuple[float, float, float]:
    """
    Mean and normal-approximation confidence interval
    ``mean ± z * sem``; a single value has a zero-width interval.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        return math.nan, math.nan, math.nan
    mean = float(data.mean())
    if data.size == 1:
        return mean, mean, mean
    half = z * float(stats.sem(data))
    return mean, mean - half, mean + half


def nearest_rank(values: Sequence[float], p: float) -> float:
    """
    Nearest-rank percentile: the smallest value whose 1-based rank
    exceeds ``p * n``.
    """
    data = np.sort(np.asarray(values, dtype=float))
    if data.size == 0:
        raise ValueError("percentile of an empty sample")
    rank = min(int(math.floor(p * data.size)) + 1, data.size)
    return float(data[rank - 1])
