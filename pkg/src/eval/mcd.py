"""
Mel-cepstral distortion.
Purpose: dB distance between two cepstral sequences over their DTW alignment, c0 excluded by default.
"""
import math
from typing import Sequence, Tuple

import numpy as np
import structlog

from src.errors import DimensionError, EmptyInputError
from src.eval.dtw import dtw_align
from src.prosody.features import FrameFeatures

logger = structlog.get_logger()

MCD_CONSTANT = 10.0 / math.log(10.0) * math.sqrt(2.0)


def mcd(x: FrameFeatures, y: FrameFeatures, exclude_c0: bool = True) -> float:
    """Mean over aligned frame pairs of (10 / ln 10) * sqrt(2 * sum_d (c_d - c'_d)^2)"""
    if x.dim != y.dim:
        raise DimensionError(f"cepstral dims differ: {x.dim} vs {y.dim}")
    first = 1 if exclude_c0 else 0
    if first >= x.dim:
        raise DimensionError("no cepstral coefficients left after excluding c0")

    xs = FrameFeatures(x.values[:, first:])
    ys = FrameFeatures(y.values[:, first:])
    path, _ = dtw_align(xs, ys)
    i, j = path.indices()
    diff = xs.values[i] - ys.values[j]
    per_pair = MCD_CONSTANT * np.sqrt(np.sum(diff**2, axis=1))
    return float(np.mean(per_pair))


def mcd_batch(
    pairs: Sequence[Tuple[FrameFeatures, FrameFeatures]], exclude_c0: bool = True
) -> Tuple[float, float, int]:
    """Mean, population std and count of per-utterance MCD, reduced in input order"""
    if not pairs:
        raise EmptyInputError("MCD batch is empty")
    values = np.array([mcd(x, y, exclude_c0) for x, y in pairs])
    logger.info("mcd_batch_computed", count=len(values), mean=float(values.mean()))
    return float(values.mean()), float(values.std()), int(values.size)
