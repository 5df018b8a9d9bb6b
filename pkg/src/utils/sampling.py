"""
Seeded sampling helpers shared by the checkers and estimators

Samples are drawn in a fixed number of partitions, each with its own generator spawned
from the master seed, so results do not depend on how many workers evaluate them.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Sequence, Tuple

import numpy as np

from src.constants import DEFAULT_PARTITIONS, DEFAULT_SEED
from src.models.errors import ConfigError

logger = logging.getLogger(__name__)


def partition_generators(seed: int, partitions: int) -> List[np.random.Generator]:
    """Independent generators derived from one master seed."""
    children = np.random.SeedSequence(seed).spawn(partitions)
    return [np.random.default_rng(child) for child in children]


def partition_sizes(n: int, partitions: int) -> List[int]:
    base, extra = divmod(n, partitions)
    return [base + (1 if i < extra else 0) for i in range(partitions)]


def _draw(draw_fn: Callable[[np.random.Generator, int], List[Any]], n: int, seed: int,
          partitions: int) -> List[Any]:
    partitions = max(1, min(partitions, n)) if n > 0 else 1
    drawn: List[Any] = []
    for rng, size in zip(partition_generators(seed, partitions), partition_sizes(n, partitions)):
        if size:
            drawn.extend(draw_fn(rng, size))
    logger.debug("drew %d items in %d partitions (seed=%d)", len(drawn), partitions, seed)
    return drawn


def draw_elements(structure, n: int, seed: int = DEFAULT_SEED,
                  partitions: int = DEFAULT_PARTITIONS) -> List[Any]:
    """n elements from the structure's sampler, or its full carrier when finite."""
    if structure.is_finite:
        return structure.elements()
    if structure.sampler is None:
        raise ConfigError(f"{structure.name} has neither a sampler nor a finite carrier")
    return _draw(structure.sampler, n, seed, partitions)


def draw_pairs(structure, n: int, seed: int = DEFAULT_SEED,
               partitions: int = DEFAULT_PARTITIONS) -> List[Tuple[Any, Any]]:
    """n pairs; finite carriers yield every ordered pair."""
    if structure.is_finite:
        elements = structure.elements()
        return list(itertools.product(elements, elements))
    if structure.pair_sampler is not None:
        return _draw(structure.pair_sampler, n, seed, partitions)

    def pairs(rng, size):
        items = structure.sampler(rng, 2 * size)
        return list(zip(items[:size], items[size:]))

    return _draw(pairs, n, seed, partitions)


def draw_triples(structure, n: int, seed: int = DEFAULT_SEED,
                 partitions: int = DEFAULT_PARTITIONS) -> List[Tuple[Any, Any, Any]]:
    """n triples; finite carriers yield every ordered triple."""
    if structure.is_finite:
        elements = structure.elements()
        return list(itertools.product(elements, elements, elements))
    if structure.sampler is None:
        raise ConfigError(f"{structure.name} has no element sampler")

    def triples(rng, size):
        items = structure.sampler(rng, 3 * size)
        return list(zip(items[:size], items[size:2 * size], items[2 * size:]))

    return _draw(triples, n, seed, partitions)


def is_exhaustive(structure) -> bool:
    return structure.is_finite


def map_partitioned(fn: Callable[[Any], Any], cases: Sequence[Any], workers: int = 1,
                    partitions: int = DEFAULT_PARTITIONS) -> List[Any]:
    """Evaluate fn over cases, optionally across worker threads; results keep case order."""
    if workers <= 1 or len(cases) < 2:
        return [fn(case) for case in cases]
    chunks = [list(range(len(cases)))[i::partitions] for i in range(partitions)]

    def run(indices):
        return [(i, fn(cases[i])) for i in indices]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        merged = [item for chunk in pool.map(run, chunks) for item in chunk]
    merged.sort(key=lambda item: item[0])
    return [value for _, value in merged]
