from src.numerics.kernel import (
    Matrix,
    Vector,
    as_matrix,
    as_vector,
    cosine_similarity,
    matmul,
    mean_pool_rows,
    softmax_rows,
)

__all__ = [
    "Matrix",
    "Vector",
    "as_matrix",
    "as_vector",
    "cosine_similarity",
    "matmul",
    "mean_pool_rows",
    "softmax_rows",
]
