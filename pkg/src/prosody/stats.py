"""
Utterance-level prosody statistics.
Purpose: Mean and population standard deviation of pitch (voiced frames only) and energy.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel

from src.errors import EmptyInputError
from src.prosody.features import FrameFeatures
from src.prosody.pitch import F0Track


class ProsodyReport(BaseModel):
    pitch_mean: Optional[float] = None
    pitch_std: Optional[float] = None
    energy_mean: float
    energy_std: float
    voiced_count: int


def prosody_stats(f0: F0Track, energy: FrameFeatures) -> ProsodyReport:
    """Pitch fields stay absent when no frame is voiced"""
    if energy.n_frames < 1:
        raise EmptyInputError("prosody statistics need at least one energy frame")
    values = energy.values[:, 0]
    voiced = f0.voiced_f0()

    pitch_mean = pitch_std = None
    if voiced.size:
        pitch_mean = float(np.mean(voiced))
        pitch_std = float(np.std(voiced))

    return ProsodyReport(
        pitch_mean=pitch_mean,
        pitch_std=pitch_std,
        energy_mean=float(np.mean(values)),
        energy_std=float(np.std(values)),
        voiced_count=int(voiced.size),
    )
