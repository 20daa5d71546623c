"""
Analytic backward pass of the conditioning core.
Purpose: Gradients of a scalar loss, given dL/dZ, with respect to every input and parameter of fusion_forward.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import DimensionError
from src.fusion.attention import (
    FusionInputs,
    check_attention_dims,
    exemplar_matrix,
    exemplar_weight,
    semantic_embedding,
)
from src.fusion.params import FusionParams, LoraAdapter
from src.numerics import Matrix, as_matrix, softmax_rows


@dataclass(frozen=True, eq=False)
class FusionGradients:
    """
    One gradient per differentiable quantity.
    Purpose: LoRA fields (and x) are None without an adapter; W_base is reported but training never applies it.
    """

    e_p: Matrix
    e_s: Matrix
    W_q: Matrix
    W_k: Matrix
    W_v: Matrix
    W_w: Matrix
    exemplars: Matrix
    x: Optional[Matrix] = None
    A: Optional[Matrix] = None
    B: Optional[Matrix] = None
    W_base: Optional[Matrix] = None


def fusion_backward(
    inputs: FusionInputs,
    params: FusionParams,
    upstream_grad: Matrix,
    adapter: Optional[LoraAdapter] = None,
) -> FusionGradients:
    """
    Backpropagate dL/dZ.
    Purpose: Recomputes the forward intermediates, then applies the chain rule through conditioning, softmax attention and LoRA.
    """
    semantic = semantic_embedding(inputs, adapter)
    check_attention_dims(inputs.e_p, semantic, params)
    e_p = inputs.e_p.values
    e_s = semantic.values
    d_k = params.W_q.shape[1]
    sqrt_d_k = math.sqrt(d_k)

    Q = e_p @ params.W_q
    K = e_s @ params.W_k
    V = e_s @ params.W_v
    attn = softmax_rows((Q @ K.T) / sqrt_d_k)

    G = as_matrix(upstream_grad, name="upstream gradient")
    expected = (e_p.shape[0], params.W_v.shape[1])
    if G.shape != expected:
        raise DimensionError(f"upstream gradient has shape {G.shape}, Z has {expected}")

    # Z = H + w * (sum_k e_k) W_w
    exemplars = exemplar_matrix(inputs.exemplars, params.W_w.shape[0])
    weight = exemplar_weight(exemplars.shape[0], inputs.exemplar_mode)
    d_offset = G.sum(axis=0)
    if exemplars.shape[0]:
        total = weight * exemplars.sum(axis=0)
        grad_W_w = np.outer(total, d_offset)
        grad_exemplar = weight * (params.W_w @ d_offset)
        grad_exemplars = np.tile(grad_exemplar, (exemplars.shape[0], 1))
    else:
        grad_W_w = np.zeros_like(params.W_w)
        grad_exemplars = np.zeros_like(exemplars)

    # H = attn V
    d_attn = G @ V.T
    d_V = attn.T @ G

    # softmax rows: dS = attn * (dA - rowsum(dA * attn))
    d_scores = attn * (d_attn - np.sum(d_attn * attn, axis=1, keepdims=True))
    d_scores = d_scores / sqrt_d_k
    d_Q = d_scores @ K
    d_K = d_scores.T @ Q

    grad_W_q = e_p.T @ d_Q
    grad_e_p = d_Q @ params.W_q.T
    grad_W_k = e_s.T @ d_K
    grad_W_v = e_s.T @ d_V
    grad_e_s = d_K @ params.W_k.T + d_V @ params.W_v.T

    grad_x = grad_A = grad_B = grad_W_base = None
    if adapter is not None:
        x = inputs.semantic
        d_weight = x.T @ grad_e_s
        grad_x = grad_e_s @ adapter.effective_weight().T
        grad_W_base = d_weight
        grad_A = adapter.scale * (d_weight @ adapter.B.T)
        grad_B = adapter.scale * (adapter.A.T @ d_weight)

    return FusionGradients(
        e_p=grad_e_p,
        e_s=grad_e_s,
        W_q=grad_W_q,
        W_k=grad_W_k,
        W_v=grad_W_v,
        W_w=grad_W_w,
        exemplars=grad_exemplars,
        x=grad_x,
        A=grad_A,
        B=grad_B,
        W_base=grad_W_base,
    )
