"""
Exemplar database types and on-disk manifest schemas.
Purpose: In-memory records of the sarcastic-utterance index plus the pydantic models its JSON manifest is validated against.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.errors import DimensionError, ValidationError, ZeroNormError

FORMAT_VERSION = 1


class Label(str, Enum):
    SARCASTIC = "sarcastic"
    NON_SARCASTIC = "non_sarcastic"


@dataclass(frozen=True, eq=False)
class UtteranceRecord:
    """
    One (u_i, a_i) entry of the exemplar database.
    Purpose: Carry utterance metadata with its precomputed semantic vector, stored at float32 width.
    """

    id: str
    label: Label
    embedding: NDArray[np.float32]
    text: Optional[str] = None
    audio_path: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("record id must be a non-empty string")
        try:
            label = Label(self.label)
        except ValueError as e:
            raise ValidationError(f"record {self.id}: unknown label {self.label!r}") from e
        embedding = np.array(self.embedding, dtype=np.float32)
        if embedding.ndim != 1 or embedding.shape[0] == 0:
            raise DimensionError(f"record {self.id}: embedding must be a non-empty vector")
        if not np.all(np.isfinite(embedding)):
            raise ValidationError(f"record {self.id}: embedding has non-finite entries")
        if not np.any(embedding):
            raise ZeroNormError(f"record {self.id}: embedding has zero norm")
        embedding.setflags(write=False)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "embedding", embedding)

    @property
    def dim(self) -> int:
        return int(self.embedding.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, UtteranceRecord):
            return NotImplemented
        return (
            self.id == other.id
            and self.label == other.label
            and self.text == other.text
            and self.audio_path == other.audio_path
            and self.embedding.tobytes() == other.embedding.tobytes()
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ExemplarIndex:
    """The database D; immutable once built"""

    dim: int
    records: Tuple[UtteranceRecord, ...]
    version: int = FORMAT_VERSION

    @property
    def count(self) -> int:
        return len(self.records)

    @cached_property
    def embeddings(self) -> NDArray[np.float64]:
        """All a_i stacked row-major and promoted to float64"""
        return np.vstack([r.embedding for r in self.records]).astype(np.float64)

    def ids(self) -> List[str]:
        return [r.id for r in self.records]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExemplarIndex):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.version == other.version
            and self.records == other.records
        )

    __hash__ = None


# --- Manifest Models ---

class ManifestRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    label: Label
    text: Optional[str] = None
    audio_path: Optional[str] = None
    row: int = Field(..., ge=0, description="Row of this record's embedding in the blob")


class IndexManifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int
    dim: int = Field(..., gt=0)
    count: int = Field(..., gt=0)
    records: List[ManifestRecord]
