import math

import numpy as np
import pytest

from rvrp.core.config import read_config_file
from rvrp.utils.seeds import derive_rng
from rvrp.utils.stats import mean_ci, nearest_rank


def test_nearest_rank_examples():
    assert nearest_rank(list(range(100)), 0.95) == 95
    assert nearest_rank([120.0], 0.95) == 120.0
    assert nearest_rank([3.0, 1.0, 2.0], 1.0) == 3.0
    with pytest.raises(ValueError):
        nearest_rank([], 0.5)


def test_mean_ci():
    mean, low, high = mean_ci([1.0, 2.0, 3.0, 4.0])
    half = 1.96 * np.std([1, 2, 3, 4], ddof=1) / 2
    assert mean == 2.5
    assert (low, high) == pytest.approx((2.5 - half, 2.5 + half))
    assert mean_ci([7.0]) == (7.0, 7.0, 7.0)
    assert all(math.isnan(v) for v in mean_ci([]))


def test_derived_streams_are_independent_of_order():
    first = [derive_rng(1, k).random() for k in range(5)]
    second = [derive_rng(1, k).random() for k in reversed(range(5))][::-1]
    assert first == second
    assert derive_rng(1, 0).random() != derive_rng(2, 0).random()


def test_read_config_file(tmp_path):
    path = tmp_path / "run.manifest"
    path.write_text("subcommand=bench\nSERIES=B\niterations=3\n")
    assert read_config_file(str(path)) == {"subcommand": "bench", "series": "B", "iterations": "3"}


def test_settings_from_environment(monkeypatch):
    from rvrp.core.config import Settings

    monkeypatch.setenv("RVRP_SEED", "42")
    monkeypatch.setenv("RVRP_BATCH_SECONDS", "30")
    settings = Settings()
    assert settings.SEED == 42
    assert settings.BATCH_SECONDS == 30.0
    assert settings.JOBS >= 1


def test_settings_reject_p_min(monkeypatch):
    from pydantic import ValidationError

    from rvrp.core.config import Settings

    monkeypatch.setenv("RVRP_P_MIN", "1.5")
    with pytest.raises(ValidationError):
        Settings()
