"""
Fusion and LoRA parameter sets.
Purpose: Shape-checked containers for W_q, W_k, W_v, W_w and the low-rank adapter, seeded initialization, and on-disk parameter directories.
"""
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError
import structlog

from src.errors import DimensionError, FormatError, IoError, ParameterError, ValidationError
from src.numerics import Matrix, as_matrix
from src.store.blob import read_blob, write_blob
from src.store.models import FORMAT_VERSION

logger = structlog.get_logger()

PARAMS_MANIFEST = "params.json"


@dataclass(frozen=True)
class FusionDims:
    d_p: int = 8
    d_t: int = 8
    d_k: int = 8
    d_v: int = 8
    d_w: int = 4

    def __post_init__(self):
        for name in ("d_p", "d_t", "d_k", "d_v", "d_w"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value <= 0:
                raise ParameterError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True, eq=False)
class FusionParams:
    """Learned projections of the cross-attention and prosody-conditioning layers"""

    W_q: Matrix
    W_k: Matrix
    W_v: Matrix
    W_w: Matrix

    def __post_init__(self):
        for name in ("W_q", "W_k", "W_v", "W_w"):
            object.__setattr__(self, name, as_matrix(getattr(self, name), name=name))
        if self.W_q.shape[1] != self.W_k.shape[1]:
            raise DimensionError(f"W_q {self.W_q.shape} and W_k {self.W_k.shape} disagree on d_k")
        if self.W_k.shape[0] != self.W_v.shape[0]:
            raise DimensionError(f"W_k {self.W_k.shape} and W_v {self.W_v.shape} disagree on d_t")
        if self.W_w.shape[1] != self.W_v.shape[1]:
            raise DimensionError(f"W_w {self.W_w.shape} and W_v {self.W_v.shape} disagree on d_v")

    @property
    def dims(self) -> FusionDims:
        return FusionDims(
            d_p=self.W_q.shape[0],
            d_t=self.W_k.shape[0],
            d_k=self.W_q.shape[1],
            d_v=self.W_v.shape[1],
            d_w=self.W_w.shape[0],
        )

    def as_dict(self) -> Dict[str, Matrix]:
        return {"W_q": self.W_q, "W_k": self.W_k, "W_v": self.W_v, "W_w": self.W_w}

    def updated(self, **matrices: Matrix) -> "FusionParams":
        return replace(self, **matrices)


@dataclass(frozen=True, eq=False)
class LoraAdapter:
    """
    Frozen base weight plus a trainable rank-r delta.
    Purpose: y = x (W_base + (alpha/r) A B); only A and B are ever updated.
    """

    W_base: Matrix
    A: Matrix
    B: Matrix
    alpha: float

    def __post_init__(self):
        for name in ("W_base", "A", "B"):
            object.__setattr__(self, name, as_matrix(getattr(self, name), name=name))
        d_in, d_out = self.W_base.shape
        if self.A.shape[0] != d_in or self.B.shape[1] != d_out or self.A.shape[1] != self.B.shape[0]:
            raise DimensionError(
                f"adapter shapes W_base {self.W_base.shape}, A {self.A.shape}, B {self.B.shape} are inconsistent"
            )
        if self.rank > min(d_in, d_out):
            raise ParameterError(f"rank {self.rank} exceeds min(d_in, d_out) = {min(d_in, d_out)}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def rank(self) -> int:
        return int(self.A.shape[1])

    @property
    def scale(self) -> float:
        return self.alpha / self.rank

    def delta(self) -> Matrix:
        return self.scale * (self.A @ self.B)

    def effective_weight(self) -> Matrix:
        return self.W_base + self.delta()

    def updated(self, A: Matrix, B: Matrix) -> "LoraAdapter":
        """New adapter with the same W_base values and the given A and B"""
        return replace(self, A=A, B=B)


def _uniform(rng: np.random.Generator, fan_in: int, shape) -> Matrix:
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_params(dims: FusionDims, seed: int) -> FusionParams:
    """Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], seeded"""
    rng = np.random.default_rng(seed)
    return FusionParams(
        W_q=_uniform(rng, dims.d_p, (dims.d_p, dims.d_k)),
        W_k=_uniform(rng, dims.d_t, (dims.d_t, dims.d_k)),
        W_v=_uniform(rng, dims.d_t, (dims.d_t, dims.d_v)),
        W_w=_uniform(rng, dims.d_w, (dims.d_w, dims.d_v)),
    )


def init_adapter(d_in: int, d_out: int, rank: int, alpha: float, seed: int) -> LoraAdapter:
    """A random, B zero, so the initial delta is exactly zero"""
    for name, value in (("d_in", d_in), ("d_out", d_out), ("rank", rank)):
        if value <= 0:
            raise ParameterError(f"{name} must be positive, got {value}")
    rng = np.random.default_rng(seed)
    return LoraAdapter(
        W_base=_uniform(rng, d_in, (d_in, d_out)),
        A=_uniform(rng, d_in, (d_in, rank)),
        B=np.zeros((rank, d_out)),
        alpha=alpha,
    )


# --- Parameter directories ---

class MatrixEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    rows: int = Field(..., gt=0)
    cols: int = Field(..., gt=0)
    file: str


class ParamsManifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int
    matrices: List[MatrixEntry]
    lora_alpha: Optional[float] = None


_FUSION_NAMES = ("W_q", "W_k", "W_v", "W_w")
_LORA_NAMES = ("lora_W_base", "lora_A", "lora_B")


def save_params(
    directory: Union[str, Path],
    params: FusionParams,
    adapter: Optional[LoraAdapter] = None,
) -> None:
    """Write params.json plus one SEMB blob per matrix"""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create parameter directory {directory}: {e}") from e

    matrices = dict(params.as_dict())
    if adapter is not None:
        matrices.update(lora_W_base=adapter.W_base, lora_A=adapter.A, lora_B=adapter.B)

    entries = []
    for name, matrix in matrices.items():
        filename = f"{name}.semb"
        write_blob(directory / filename, matrix)
        entries.append(MatrixEntry(name=name, rows=matrix.shape[0], cols=matrix.shape[1], file=filename))

    manifest = ParamsManifest(
        version=FORMAT_VERSION,
        matrices=entries,
        lora_alpha=adapter.alpha if adapter is not None else None,
    )
    try:
        (directory / PARAMS_MANIFEST).write_text(
            manifest.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8"
        )
    except OSError as e:
        raise IoError(f"cannot write {directory / PARAMS_MANIFEST}: {e}") from e
    logger.info("params_saved", directory=str(directory), matrices=len(entries))


def load_params(directory: Union[str, Path]):
    """
    Read a parameter directory.
    Purpose: Returns (FusionParams, LoraAdapter or None), checking every blob against its manifest shape.
    """
    directory = Path(directory)
    path = directory / PARAMS_MANIFEST
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    try:
        manifest = ParamsManifest.model_validate_json(text)
    except PydanticValidationError as e:
        raise FormatError(f"{path} is not a valid parameter manifest: {e}") from e
    if manifest.version != FORMAT_VERSION:
        raise FormatError(f"unsupported parameter manifest version {manifest.version}")

    matrices = {}
    for entry in manifest.matrices:
        values = read_blob(directory / entry.file)
        if values.shape != (entry.rows, entry.cols):
            raise FormatError(
                f"{entry.name}: manifest shape ({entry.rows}, {entry.cols}) but blob holds {values.shape}"
            )
        matrices[entry.name] = values.astype(np.float64)

    missing = [n for n in _FUSION_NAMES if n not in matrices]
    if missing:
        raise FormatError(f"parameter directory lacks {', '.join(missing)}")
    try:
        params = FusionParams(**{n: matrices[n] for n in _FUSION_NAMES})
    except DimensionError as e:
        raise ValidationError(str(e)) from e

    adapter = None
    if any(n in matrices for n in _LORA_NAMES):
        if not all(n in matrices for n in _LORA_NAMES) or manifest.lora_alpha is None:
            raise FormatError("incomplete LoRA adapter in parameter directory")
        adapter = LoraAdapter(
            W_base=matrices["lora_W_base"],
            A=matrices["lora_A"],
            B=matrices["lora_B"],
            alpha=manifest.lora_alpha,
        )
    logger.info("params_loaded", directory=str(directory), lora=adapter is not None)
    return params, adapter
