"""
Frame-level prosodic features and pooling.
Purpose: Energy and mel-cepstra per frame, and the mean pooling that turns frame features into a fixed-length prosody embedding.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import librosa
import numpy as np
from numpy.typing import NDArray
from scipy import fft, signal
import structlog

from src.errors import EmptyInputError, ParameterError
from src.numerics import Matrix, Vector, as_matrix, as_vector, mean_pool_rows
from src.prosody.audio import Waveform
from src.store.blob import read_blob, write_blob

logger = structlog.get_logger()

LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class FrameSpec:
    frame_len: int
    hop: int

    def __post_init__(self):
        if not 0 < self.hop <= self.frame_len:
            raise ParameterError(
                f"frame spec needs 0 < hop <= frame_len, got hop={self.hop}, frame_len={self.frame_len}"
            )

    @classmethod
    def from_settings(cls, settings) -> "FrameSpec":
        return cls(frame_len=settings.frame_len, hop=settings.hop)

    def n_frames(self, n_samples: int) -> int:
        return (n_samples - self.frame_len) // self.hop + 1


@dataclass(frozen=True, eq=False)
class FrameFeatures:
    """One row per analysis frame"""

    values: Matrix

    def __post_init__(self):
        object.__setattr__(self, "values", as_matrix(self.values, name="frame features"))

    @property
    def n_frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True, eq=False)
class ProsodyEmbedding:
    """E_w, the pooled fixed-length vector"""

    values: Vector

    def __post_init__(self):
        object.__setattr__(self, "values", as_vector(self.values, name="prosody embedding"))

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def frame_signal(w: Waveform, spec: FrameSpec) -> NDArray[np.float64]:
    """Slice the waveform into (n_frames, frame_len) overlapping frames, dropping the partial tail"""
    if len(w) < spec.frame_len:
        raise EmptyInputError(
            f"waveform of {len(w)} samples is shorter than one frame ({spec.frame_len})"
        )
    frames = librosa.util.frame(
        np.ascontiguousarray(w.samples), frame_length=spec.frame_len, hop_length=spec.hop, axis=0
    )
    return np.array(frames, dtype=np.float64)


def frame_energy(w: Waveform, spec: FrameSpec) -> FrameFeatures:
    """Per-frame root-mean-square amplitude"""
    frames = frame_signal(w, spec)
    rms = np.sqrt(np.mean(frames**2, axis=1))
    return FrameFeatures(rms[:, np.newaxis])


def fft_size(frame_len: int) -> int:
    """Smallest power of two holding a frame"""
    return 1 << (frame_len - 1).bit_length()


def mel_cepstra(w: Waveform, spec: FrameSpec, n_mels: int, n_ceps: int) -> FrameFeatures:
    """
    Mel-cepstral coefficients per frame, c0 first.
    Purpose: Hann window -> magnitude spectrum -> triangular mel filterbank -> floored natural log -> orthonormal DCT-II.
    """
    if n_mels < 1 or n_ceps < 1:
        raise ParameterError(f"n_mels and n_ceps must be positive, got {n_mels}, {n_ceps}")
    if n_ceps > n_mels:
        raise ParameterError(f"n_ceps ({n_ceps}) cannot exceed n_mels ({n_mels})")

    frames = frame_signal(w, spec)
    n_fft = fft_size(spec.frame_len)
    window = signal.get_window("hann", spec.frame_len)
    magnitude = np.abs(fft.rfft(frames * window, n=n_fft, axis=1))

    filterbank = librosa.filters.mel(
        sr=w.sample_rate, n_fft=n_fft, n_mels=n_mels, htk=True, norm=None, dtype=np.float64
    )
    mel = magnitude @ filterbank.T
    log_mel = np.log(np.maximum(mel, LOG_FLOOR))
    cepstra = fft.dct(log_mel, type=2, norm="ortho", axis=1)[:, :n_ceps]

    logger.debug("mel_cepstra_computed", frames=cepstra.shape[0], n_fft=n_fft, n_ceps=n_ceps)
    return FrameFeatures(cepstra)


def pool_frames(f: FrameFeatures) -> ProsodyEmbedding:
    """Mean over frames"""
    if f.n_frames < 1:
        raise EmptyInputError("cannot pool zero frames")
    return ProsodyEmbedding(mean_pool_rows(f.values))


def read_frame_features(path: Union[str, Path]) -> FrameFeatures:
    """Ingest externally produced frame features stored as a SEMB blob"""
    return FrameFeatures(read_blob(path))


def write_frame_features(path: Union[str, Path], f: FrameFeatures) -> None:
    write_blob(path, f.values)
