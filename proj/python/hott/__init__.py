"""Document distances by hierarchical optimal topic transport.

The heavy lifting lives in the compiled ``_hott`` extension; this package
re-exports it unchanged.
"""

from ._hott import (
    Corpus,
    DistanceMatrix,
    EmbeddingTable,
    TopicCostMatrix,
    TopicModel,
    build_corpus,
    check_bounds,
    corpus_proportions,
    fit_lda,
    frobenius_diff,
    hott_distance,
    knn_errors,
    load_corpus,
    load_distance_matrix,
    load_embeddings,
    load_topic_costs,
    load_topic_model,
    mantel,
    pairwise,
    rwmd,
    save_corpus,
    save_distance_matrix,
    save_topic_costs,
    save_topic_model,
    split_corpus,
    topic_costs,
    wmd,
)

__all__ = [
    "Corpus",
    "DistanceMatrix",
    "EmbeddingTable",
    "TopicCostMatrix",
    "TopicModel",
    "build_corpus",
    "check_bounds",
    "corpus_proportions",
    "fit_lda",
    "frobenius_diff",
    "hott_distance",
    "knn_errors",
    "load_corpus",
    "load_distance_matrix",
    "load_embeddings",
    "load_topic_costs",
    "load_topic_model",
    "mantel",
    "pairwise",
    "rwmd",
    "save_corpus",
    "save_distance_matrix",
    "save_topic_costs",
    "save_topic_model",
    "split_corpus",
    "topic_costs",
    "wmd",
]
