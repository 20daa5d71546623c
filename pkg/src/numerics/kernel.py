"""
Dense linear-algebra and statistics kernel.
Purpose: Numeric conventions for every other module - row-major float64 arrays, validated on entry.
"""
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy.special import softmax

from src.errors import DimensionError, EmptyInputError, ValidationError, ZeroNormError

Matrix = NDArray[np.float64]
Vector = NDArray[np.float64]


def as_matrix(values: Any, name: str = "matrix") -> Matrix:
    """
    Coerce to a 2-D float64 array.
    Purpose: Enforce the Matrix invariants (positive shape, finite entries) at construction.
    """
    m = np.array(values, dtype=np.float64, ndmin=2)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got {m.ndim}-D")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise EmptyInputError(f"{name} has empty shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


def as_vector(values: Any, name: str = "vector") -> Vector:
    """Coerce to a non-empty, finite 1-D float64 array"""
    v = np.array(values, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got {v.ndim}-D")
    if v.shape[0] == 0:
        raise EmptyInputError(f"{name} is empty")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} contains non-finite entries")
    return v


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product with 64-bit accumulation"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def softmax_rows(m: Matrix) -> Matrix:
    """
    Row-wise softmax.
    Purpose: Normalize attention scores; scipy subtracts the row max before exponentiating.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise EmptyInputError(f"softmax needs a non-empty matrix, got shape {m.shape}")
    return softmax(m, axis=1)


def mean_pool_rows(m: Matrix) -> Vector:
    """Arithmetic mean of each column"""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] == 0:
        raise EmptyInputError("mean pooling needs at least one row")
    return m.mean(axis=0)


def cosine_similarity(a: Vector, b: Vector) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1]"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"cosine needs equal 1-D shapes, got {a.shape} and {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNormError("cosine similarity is undefined for a zero-norm vector")
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return min(1.0, max(-1.0, value))
