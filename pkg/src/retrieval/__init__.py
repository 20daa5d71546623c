from src.retrieval.search import RetrievalHit, SemanticEmbedding, pool_query, retrieve, top_k

__all__ = ["RetrievalHit", "SemanticEmbedding", "pool_query", "retrieve", "top_k"]
