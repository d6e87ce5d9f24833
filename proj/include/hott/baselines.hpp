#pragma once

#include <span>
#include <string>
#include <vector>

#include "hott/corpus.hpp"
#include "hott/topics.hpp"

namespace hott {

/// Dense vector-space document representation: one row per document.
struct VectorRepresentation {
    std::string method;  // nbow | tfidf | lsi | lda
    int dim = 0;
    std::vector<double> rows;  // corpus.size() x dim, row-major

    std::span<const double> row(std::size_t i) const {
        return {rows.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

struct VectorParams {
    int lsi_dim = 0;  // required for lsi
};

/// nbow: dense normalized counts. tfidf: count * (1 + ln((1+n)/(1+df))),
/// rows then L2-normalized. lsi: rank-k projection of the tfidf matrix via a
/// truncated singular value decomposition (deterministic sign convention:
/// the largest-magnitude component of each right singular vector is made
/// positive). lda: doc_topic rows of the fitted model.
VectorRepresentation build_vectors(const Corpus& corpus, const std::string& method,
                                   const VectorParams& params = {},
                                   const TopicModel* model = nullptr);

/// euclidean: ||u - v||. cosine: 1 - u.v/(|u||v|), defined as 0 when both
/// vectors are zero and 1 when exactly one is.
double vector_distance(std::span<const double> u, std::span<const double> v,
                       const std::string& kind);

}  // namespace hott
