"""
Finite-difference verification of the analytic backward pass.
Purpose: Compare fusion_backward against central differences of the real forward pass on seeded random problems.
"""
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel
import structlog

from src.fusion.attention import (
    EXEMPLAR_MODES,
    FusionInputs,
    PhonemeEmbedding,
    fusion_forward,
    lora_forward,
)
from src.fusion.backward import fusion_backward
from src.fusion.params import FusionDims, FusionParams, LoraAdapter, init_params

logger = structlog.get_logger()

FD_STEP = 1e-3
GRAD_TOLERANCE = 1e-3
_NORM_FLOOR = 1e-8

Arrays = Dict[str, np.ndarray]


class GradCheckReport(BaseModel):
    seed: int
    trials: int
    step: float
    tolerance: float
    max_relative_error: float
    per_parameter: Dict[str, float]
    passed: bool


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """||a - n|| / max(||a||, ||n||, 1e-8)"""
    denom = max(np.linalg.norm(analytic), np.linalg.norm(numeric), _NORM_FLOOR)
    return float(np.linalg.norm(analytic - numeric) / denom)


def numeric_gradient(loss: Callable[[Arrays], float], arrays: Arrays, key: str, h: float) -> np.ndarray:
    """Central differences over every entry of arrays[key]"""
    target = arrays[key]
    grad = np.zeros_like(target)
    for idx in np.ndindex(target.shape):
        original = target[idx]
        target[idx] = original + h
        plus = loss(arrays)
        target[idx] = original - h
        minus = loss(arrays)
        target[idx] = original
        grad[idx] = (plus - minus) / (2.0 * h)
    return grad


def _pack(inputs: FusionInputs, params: FusionParams, adapter: Optional[LoraAdapter]) -> Arrays:
    arrays = {
        "e_p": inputs.e_p.values.copy(),
        "semantic": inputs.semantic.copy(),
        "exemplars": np.array([e.values for e in inputs.exemplars]).reshape(-1, params.W_w.shape[0]),
    }
    arrays.update({name: m.copy() for name, m in params.as_dict().items()})
    if adapter is not None:
        arrays.update(lora_W_base=adapter.W_base.copy(), lora_A=adapter.A.copy(), lora_B=adapter.B.copy())
    return arrays


def _loss_fn(upstream: np.ndarray, mode: str, alpha: Optional[float]) -> Callable[[Arrays], float]:
    def loss(arrays: Arrays) -> float:
        inputs = FusionInputs(
            e_p=PhonemeEmbedding(arrays["e_p"]),
            semantic=arrays["semantic"],
            exemplars=tuple(arrays["exemplars"]),
            exemplar_mode=mode,
        )
        params = FusionParams(
            W_q=arrays["W_q"], W_k=arrays["W_k"], W_v=arrays["W_v"], W_w=arrays["W_w"]
        )
        adapter = None
        if alpha is not None:
            adapter = LoraAdapter(
                W_base=arrays["lora_W_base"], A=arrays["lora_A"], B=arrays["lora_B"], alpha=alpha
            )
        Z = fusion_forward(inputs, params, adapter).Z
        return float(np.sum(upstream * Z))

    return loss


def check_gradients(
    inputs: FusionInputs,
    params: FusionParams,
    upstream: np.ndarray,
    adapter: Optional[LoraAdapter] = None,
    h: float = FD_STEP,
) -> Dict[str, float]:
    """
    Relative error per differentiable quantity for the loss sum(upstream * Z).
    Purpose: With an adapter, E_s is checked by feeding the adapter's output back in as a plain semantic input.
    """
    grads = fusion_backward(inputs, params, upstream, adapter)
    alpha = adapter.alpha if adapter is not None else None
    arrays = _pack(inputs, params, adapter)
    loss = _loss_fn(upstream, inputs.exemplar_mode, alpha)

    # (report name, array key, analytic gradient)
    semantic_name = "x" if adapter is not None else "E_s"
    checks = [
        ("e_p", "e_p", grads.e_p),
        (semantic_name, "semantic", grads.x if adapter is not None else grads.e_s),
        ("W_q", "W_q", grads.W_q),
        ("W_k", "W_k", grads.W_k),
        ("W_v", "W_v", grads.W_v),
        ("W_w", "W_w", grads.W_w),
    ]
    if len(inputs.exemplars):
        checks.append(("exemplars", "exemplars", grads.exemplars))
    if adapter is not None:
        checks += [
            ("W_base", "lora_W_base", grads.W_base),
            ("A", "lora_A", grads.A),
            ("B", "lora_B", grads.B),
        ]

    errors = {
        name: relative_error(value, numeric_gradient(loss, arrays, key, h))
        for name, key, value in checks
    }

    if adapter is not None:
        plain = FusionInputs(
            inputs.e_p, lora_forward(inputs.semantic, adapter), inputs.exemplars, inputs.exemplar_mode
        )
        plain_loss = _loss_fn(upstream, inputs.exemplar_mode, None)
        plain_grad = numeric_gradient(plain_loss, _pack(plain, params, None), "semantic", h)
        errors["E_s"] = relative_error(grads.e_s, plain_grad)

    return errors


def random_problem(
    rng: np.random.Generator,
) -> Tuple[FusionInputs, FusionParams, LoraAdapter, np.ndarray]:
    """Random dims <= 8, sequence lengths <= 6, zero to three exemplars, nonzero LoRA delta"""
    dims = FusionDims(*(int(d) for d in rng.integers(2, 9, size=5)))
    t_p, t_t = (int(t) for t in rng.integers(1, 7, size=2))
    n_exemplars = int(rng.integers(0, 4))
    d_in = int(rng.integers(2, 9))
    rank = int(rng.integers(1, min(d_in, dims.d_t) + 1))

    params = init_params(dims, seed=int(rng.integers(0, 2**31)))
    adapter = LoraAdapter(
        W_base=rng.uniform(-1.0, 1.0, size=(d_in, dims.d_t)) / np.sqrt(d_in),
        A=rng.uniform(-0.5, 0.5, size=(d_in, rank)),
        B=rng.uniform(-0.5, 0.5, size=(rank, dims.d_t)),
        alpha=float(rng.uniform(0.5, 2.0)),
    )
    inputs = FusionInputs(
        e_p=PhonemeEmbedding(rng.uniform(-1.0, 1.0, size=(t_p, dims.d_p))),
        semantic=rng.uniform(-1.0, 1.0, size=(t_t, d_in)),
        exemplars=tuple(rng.uniform(-1.0, 1.0, size=(n_exemplars, dims.d_w))),
        exemplar_mode=EXEMPLAR_MODES[int(rng.integers(0, len(EXEMPLAR_MODES)))],
    )
    upstream = rng.normal(size=(t_p, dims.d_v))
    return inputs, params, adapter, upstream


def gradient_check(
    seed: int,
    trials: int,
    h: float = FD_STEP,
    tolerance: float = GRAD_TOLERANCE,
) -> GradCheckReport:
    """Worst relative error per quantity over seeded random trials"""
    rng = np.random.default_rng(seed)
    worst: Dict[str, float] = {}
    for _ in range(trials):
        inputs, params, adapter, upstream = random_problem(rng)
        for name, err in check_gradients(inputs, params, upstream, adapter, h).items():
            worst[name] = max(worst.get(name, 0.0), err)

    max_error = max(worst.values(), default=0.0)
    report = GradCheckReport(
        seed=seed,
        trials=trials,
        step=h,
        tolerance=tolerance,
        max_relative_error=max_error,
        per_parameter=dict(sorted(worst.items())),
        passed=max_error < tolerance,
    )
    logger.info("gradient_check_completed", trials=trials, max_relative_error=max_error)
    return report
