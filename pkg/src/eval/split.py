"""
Train/validation/test partitioning.
Purpose: Stratified 8:1:1 split by label, shuffled by a seeded numpy Generator.
"""
from typing import List, Sequence, Tuple

import numpy as np
import structlog

from src.errors import EmptyInputError
from src.store.models import Label, UtteranceRecord

logger = structlog.get_logger()

SPLIT_NAMES = ("train", "val", "test")


def held_out_size(n: int) -> int:
    """floor(0.1 * n), in integer arithmetic"""
    return n // 10


def dataset_split(
    records: Sequence[UtteranceRecord], seed: int
) -> Tuple[List[UtteranceRecord], List[UtteranceRecord], List[UtteranceRecord]]:
    """
    Split records into (train, val, test).
    Purpose: Per label, floor(n/10) go to val, floor(n/10) to test and the rest to train.
    Labels are drawn in enum order from one generator; every part keeps input order.
    """
    if not records:
        raise EmptyInputError("cannot split an empty record list")

    rng = np.random.default_rng(seed)
    assignment = np.zeros(len(records), dtype=np.int8)
    for label in Label:
        positions = np.array([i for i, r in enumerate(records) if r.label is label], dtype=np.intp)
        if positions.size == 0:
            continue
        shuffled = rng.permutation(positions)
        k = held_out_size(positions.size)
        assignment[shuffled[:k]] = 1
        assignment[shuffled[k : 2 * k]] = 2

    parts = tuple(
        [r for r, a in zip(records, assignment) if a == part] for part in range(len(SPLIT_NAMES))
    )
    logger.info(
        "dataset_split",
        seed=seed,
        train=len(parts[0]),
        val=len(parts[1]),
        test=len(parts[2]),
    )
    return parts
