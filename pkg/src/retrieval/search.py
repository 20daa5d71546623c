"""
Exemplar retrieval.
Purpose: Pool the semantic embedding into a query vector, score it against every index entry by cosine, and return the top-K exemplars.
"""
from dataclasses import dataclass
from typing import List

import numpy as np
import structlog

from src.errors import DimensionError, InvalidKError, ZeroNormError
from src.numerics import Matrix, Vector, as_matrix, as_vector, cosine_similarity, mean_pool_rows
from src.store.models import ExemplarIndex

logger = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class SemanticEmbedding:
    """E_s, one row per text time step"""

    values: Matrix

    def __post_init__(self):
        object.__setattr__(self, "values", as_matrix(self.values, name="semantic embedding"))

    @property
    def seq_len(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class RetrievalHit:
    record_id: str
    score: float
    rank: int


def pool_query(e: SemanticEmbedding) -> Vector:
    """Mean over time steps; the reduction that turns E_s into a single query vector"""
    return mean_pool_rows(e.values)


def top_k(index: ExemplarIndex, query: Vector, k: int) -> List[RetrievalHit]:
    """
    Exact top-K cosine search.
    Purpose: Brute-force scan; hits sorted by descending score, ties by index position.
    """
    query = as_vector(query, name="query")
    if query.shape[0] != index.dim:
        raise DimensionError(f"query dim {query.shape[0]} does not match index dim {index.dim}")
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or not 1 <= k <= index.count:
        raise InvalidKError(f"k must be in [1, {index.count}], got {k}")
    if not np.any(query):
        raise ZeroNormError("query vector has zero norm")

    embeddings = index.embeddings
    scores = [cosine_similarity(query, embeddings[i]) for i in range(index.count)]
    order = sorted(range(index.count), key=lambda i: (-scores[i], i))[:k]

    hits = [
        RetrievalHit(record_id=index.records[i].id, score=scores[i], rank=rank)
        for rank, i in enumerate(order)
    ]
    logger.debug("retrieval_completed", k=k, top_id=hits[0].record_id, top_score=hits[0].score)
    return hits


def retrieve(index: ExemplarIndex, e: SemanticEmbedding, k: int) -> List[RetrievalHit]:
    """Pool then search"""
    return top_k(index, pool_query(e), k)
