import numpy as np

from rvrp.core.config import settings


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Independent generator for the stream identified by ``keys`` under
    ``seed``; results do not depend on how streams are scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def resolve_seed(seed: int | None) -> int:
    return settings.SEED if seed is None else int(seed)


def as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(resolve_seed(seed))
