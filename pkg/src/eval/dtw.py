"""
Dynamic time warping.
Purpose: Exact minimum-cost monotonic alignment of two frame sequences under steps (1,0), (0,1), (1,1).
"""
from dataclasses import dataclass
from typing import Tuple

import librosa
import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist

from src.errors import DimensionError, EmptyInputError
from src.prosody.features import FrameFeatures

# Order is the backtrace preference on equal cost: diagonal, then (1,0), then (0,1)
STEP_SIZES = np.array([[1, 1], [1, 0], [0, 1]])


@dataclass(frozen=True)
class AlignmentPath:
    pairs: Tuple[Tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def indices(self) -> Tuple[NDArray[np.intp], NDArray[np.intp]]:
        i, j = zip(*self.pairs)
        return np.array(i, dtype=np.intp), np.array(j, dtype=np.intp)


def frame_distances(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
    """Euclidean distance between every frame of x and every frame of y"""
    if x.shape[1] != y.shape[1]:
        raise DimensionError(f"feature dims differ: {x.shape[1]} vs {y.shape[1]}")
    return cdist(x, y, metric="euclidean")


def dtw_align(x: FrameFeatures, y: FrameFeatures) -> Tuple[AlignmentPath, float]:
    """Optimal path and its summed Euclidean frame distance"""
    if x.n_frames == 0 or y.n_frames == 0:
        raise EmptyInputError("DTW needs two non-empty sequences")
    local = frame_distances(x.values, y.values)
    acc, wp = librosa.sequence.dtw(C=local, step_sizes_sigma=STEP_SIZES)
    # librosa returns the warping path end-first
    pairs = tuple((int(i), int(j)) for i, j in wp[::-1])
    return AlignmentPath(pairs), float(acc[-1, -1])
