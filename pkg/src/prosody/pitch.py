"""
Autocorrelation pitch tracker.
Purpose: Per-frame F0 with a voicing decision, searching lags that correspond to the configured frequency band.
"""
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import fft
import structlog

from src.errors import ParameterError, ValidationError
from src.prosody.audio import Waveform
from src.prosody.features import FrameSpec, frame_signal

logger = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class F0Track:
    """Per-frame voicing flags and F0 in Hz (0.0 where unvoiced)"""

    voiced: NDArray[np.bool_]
    f0: NDArray[np.float64]

    def __post_init__(self):
        voiced = np.asarray(self.voiced, dtype=bool)
        f0 = np.asarray(self.f0, dtype=np.float64)
        if voiced.shape != f0.shape or voiced.ndim != 1:
            raise ValidationError("voicing flags and f0 values must be equal-length vectors")
        object.__setattr__(self, "voiced", voiced)
        object.__setattr__(self, "f0", np.where(voiced, f0, 0.0))

    @property
    def n_frames(self) -> int:
        return int(self.voiced.shape[0])

    @property
    def voiced_count(self) -> int:
        return int(np.count_nonzero(self.voiced))

    def voiced_f0(self) -> NDArray[np.float64]:
        return self.f0[self.voiced]

    def to_matrix(self) -> NDArray[np.float64]:
        """Columns: voiced flag (0/1), f0 Hz"""
        return np.column_stack([self.voiced.astype(np.float64), self.f0])


def lag_range(sample_rate: int, f0_min: float, f0_max: float, frame_len: int):
    """Integer lag band [ceil(sr/f0_max), floor(sr/f0_min)]"""
    if not 0 < f0_min < f0_max:
        raise ParameterError(f"invalid pitch band {f0_min}-{f0_max} Hz")
    if sample_rate / f0_min > frame_len:
        raise ParameterError(
            f"frame of {frame_len} samples cannot hold one period at {f0_min} Hz ({sample_rate} Hz)"
        )
    lag_min = math.ceil(sample_rate / f0_max)
    lag_max = min(math.floor(sample_rate / f0_min), frame_len - 1)
    if lag_min < 1 or lag_min > lag_max:
        raise ParameterError(f"pitch band {f0_min}-{f0_max} Hz leaves no lag at {sample_rate} Hz")
    return lag_min, lag_max


def autocorrelation(frames: NDArray[np.float64]) -> NDArray[np.float64]:
    """Biased autocorrelation r(tau) for tau in [0, frame_len) per frame, via zero-padded FFT"""
    n = frames.shape[1]
    spectrum = fft.rfft(frames, n=2 * n, axis=1)
    return fft.irfft(np.abs(spectrum) ** 2, n=2 * n, axis=1)[:, :n]


def estimate_f0(
    w: Waveform,
    spec: FrameSpec,
    f0_min: float,
    f0_max: float,
    voicing_threshold: float,
) -> F0Track:
    """
    Estimate F0 frame by frame.
    Purpose: Normalize r(tau) by the zero-lag energy, take the best lag in band; below threshold the frame is unvoiced.
    """
    lag_min, lag_max = lag_range(w.sample_rate, f0_min, f0_max, spec.frame_len)
    frames = frame_signal(w, spec)
    energy = np.einsum("ij,ij->i", frames, frames)
    acf = autocorrelation(frames)

    n_frames = frames.shape[0]
    voiced = np.zeros(n_frames, dtype=bool)
    f0 = np.zeros(n_frames, dtype=np.float64)
    for i in range(n_frames):
        if energy[i] == 0.0:
            continue
        normalized = acf[i, lag_min : lag_max + 1] / energy[i]
        best = int(np.argmax(normalized))
        if normalized[best] < voicing_threshold:
            continue
        voiced[i] = True
        f0[i] = w.sample_rate / (lag_min + best)

    track = F0Track(voiced=voiced, f0=f0)
    logger.debug("f0_estimated", frames=n_frames, voiced=track.voiced_count)
    return track
