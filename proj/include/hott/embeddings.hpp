#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hott/corpus.hpp"

namespace hott {

/// Vocabulary-filtered word vectors, immutable after load.
class EmbeddingTable {
  public:
    EmbeddingTable() = default;
    EmbeddingTable(int vocab_size, int dimension);

    int dimension() const { return dimension_; }
    double coverage() const { return coverage_; }
    int vocab_size() const { return static_cast<int>(slot_.size()); }

    bool has(int vocab_id) const { return slot_[static_cast<std::size_t>(vocab_id)] >= 0; }
    std::span<const double> vector_of(int vocab_id) const;

    void set(int vocab_id, std::span<const double> v);
    void finalize_coverage();

  private:
    int dimension_ = 0;
    double coverage_ = 0.0;
    std::vector<int> slot_;     // vocab id -> row in data_, -1 if missing
    std::vector<double> data_;  // rows of length dimension_
};

/// Plain-text "token v1 v2 ... vD" lines; only vocabulary tokens are kept,
/// first occurrence wins on duplicates. Throws on inconsistent dimensions
/// (naming the line) and on zero coverage.
EmbeddingTable load_embeddings(std::istream& in, const Vocabulary& vocab);

/// File variant; transparently inflates gzip input (magic 1f 8b).
EmbeddingTable load_embeddings_file(const std::string& path, const Vocabulary& vocab);

struct CostMatrix {
    int rows = 0;
    int cols = 0;
    int ground_power = 1;
    std::vector<double> entries;  // row-major

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
    double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * cols + j]; }
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// entry(i,j) = ||v(A_i) - v(B_j)||^ground_power. Throws naming the word if a
/// vector is missing.
CostMatrix cost_matrix(std::span<const int> a_ids, std::span<const int> b_ids,
                       const EmbeddingTable& table, int ground_power = 1,
                       const Vocabulary* vocab_for_errors = nullptr);

}  // namespace hott
