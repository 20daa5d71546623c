"""
Forward passes of the conditioning core.
Purpose: Cross-attention of phoneme queries over semantic keys/values, additive prosody-exemplar conditioning, and the LoRA-adapted linear layer.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionError, ParameterError
from src.fusion.params import FusionParams, LoraAdapter
from src.numerics import Matrix, as_matrix, as_vector, matmul, softmax_rows
from src.prosody.features import ProsodyEmbedding
from src.retrieval.search import SemanticEmbedding

EXEMPLAR_MODES = ("sum", "mean")


@dataclass(frozen=True, eq=False)
class PhonemeEmbedding:
    """E_p, one row per phoneme"""

    values: Matrix

    def __post_init__(self):
        object.__setattr__(self, "values", as_matrix(self.values, name="phoneme embedding"))

    @property
    def seq_len(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True, eq=False)
class FusionOutput:
    H: Matrix
    attn: Matrix
    Z: Matrix


@dataclass(frozen=True, eq=False)
class FusionInputs:
    """
    Everything one forward pass consumes besides parameters.
    Purpose: `semantic` is E_s itself, or the text hidden states X when a LoRA adapter produces E_s.
    """

    e_p: PhonemeEmbedding
    semantic: Matrix
    exemplars: Tuple[ProsodyEmbedding, ...] = field(default_factory=tuple)
    exemplar_mode: str = "sum"

    def __post_init__(self):
        object.__setattr__(self, "semantic", as_matrix(self.semantic, name="semantic input"))
        object.__setattr__(
            self,
            "exemplars",
            tuple(e if isinstance(e, ProsodyEmbedding) else ProsodyEmbedding(e) for e in self.exemplars),
        )
        if self.exemplar_mode not in EXEMPLAR_MODES:
            raise ParameterError(f"exemplar mode must be one of {EXEMPLAR_MODES}, got {self.exemplar_mode!r}")


def check_attention_dims(e_p: PhonemeEmbedding, e_s: SemanticEmbedding, p: FusionParams) -> None:
    if e_p.dim != p.W_q.shape[0]:
        raise DimensionError(f"phoneme dim {e_p.dim} does not match W_q rows {p.W_q.shape[0]}")
    if e_s.dim != p.W_k.shape[0]:
        raise DimensionError(f"semantic dim {e_s.dim} does not match W_k rows {p.W_k.shape[0]}")


def cross_attention_forward(
    e_p: PhonemeEmbedding, e_s: SemanticEmbedding, p: FusionParams
) -> Tuple[Matrix, Matrix]:
    """Q = E_p W_q, K = E_s W_k, V = E_s W_v; H = softmax(Q K^T / sqrt(d_k)) V"""
    check_attention_dims(e_p, e_s, p)

    d_k = p.W_q.shape[1]
    Q = matmul(e_p.values, p.W_q)
    K = matmul(e_s.values, p.W_k)
    V = matmul(e_s.values, p.W_v)
    attn = softmax_rows(matmul(Q, K.T) / math.sqrt(d_k))
    return matmul(attn, V), attn


def exemplar_matrix(exemplars: Sequence[Any], d_w: int) -> Matrix:
    """Stack exemplars as rows (K x d_w); K may be zero"""
    rows = []
    for i, e in enumerate(exemplars):
        values = e.values if isinstance(e, ProsodyEmbedding) else as_vector(e, name="exemplar")
        if values.shape[0] != d_w:
            raise DimensionError(f"exemplar {i} has dim {values.shape[0]}, W_w expects {d_w}")
        rows.append(values)
    if not rows:
        return np.zeros((0, d_w))
    return np.vstack(rows)


def exemplar_weight(count: int, mode: str) -> float:
    if mode not in EXEMPLAR_MODES:
        raise ParameterError(f"exemplar mode must be one of {EXEMPLAR_MODES}, got {mode!r}")
    if mode == "mean" and count > 0:
        return 1.0 / count
    return 1.0


def prosody_condition(
    H: Matrix,
    exemplars: Sequence[Any],
    W_w: Matrix,
    mode: str = "sum",
) -> Matrix:
    """Z = H + sum_k E_wk W_w, the projected offset broadcast over every row of H"""
    H = as_matrix(H, name="H")
    W_w = as_matrix(W_w, name="W_w")
    if W_w.shape[1] != H.shape[1]:
        raise DimensionError(f"W_w maps to {W_w.shape[1]} dims but H has {H.shape[1]} columns")

    stacked = exemplar_matrix(exemplars, W_w.shape[0])
    weight = exemplar_weight(stacked.shape[0], mode)
    if stacked.shape[0] == 0:
        return H.copy()
    offset = weight * stacked.sum(axis=0) @ W_w
    return H + offset[np.newaxis, :]


def lora_forward(x: Matrix, adapter: LoraAdapter) -> Matrix:
    """y = x (W_base + (alpha/r) A B)"""
    x = as_matrix(x, name="x")
    if x.shape[1] != adapter.W_base.shape[0]:
        raise DimensionError(f"input has {x.shape[1]} columns, adapter expects {adapter.W_base.shape[0]}")
    return matmul(x, adapter.effective_weight())


def semantic_embedding(inputs: FusionInputs, adapter: Optional[LoraAdapter]) -> SemanticEmbedding:
    if adapter is None:
        return SemanticEmbedding(inputs.semantic)
    return SemanticEmbedding(lora_forward(inputs.semantic, adapter))


def fusion_forward(
    inputs: FusionInputs,
    params: FusionParams,
    adapter: Optional[LoraAdapter] = None,
) -> FusionOutput:
    """Full pipeline: optional LoRA encoder layer, cross-attention, prosody conditioning"""
    e_s = semantic_embedding(inputs, adapter)
    H, attn = cross_attention_forward(inputs.e_p, e_s, params)
    Z = prosody_condition(H, inputs.exemplars, params.W_w, inputs.exemplar_mode)
    return FusionOutput(H=H, attn=attn, Z=Z)
