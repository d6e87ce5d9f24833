#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hott/corpus.hpp"
#include "hott/embeddings.hpp"
#include "hott/topics.hpp"
#include "hott/transport.hpp"

namespace hott {

/// Precomputed transport distances between truncated topics; the ground
/// costs of the topic-level problem.
struct TopicCostMatrix {
    int num_topics = 0;
    int truncation_k = 0;
    int ground_power = 1;
    std::vector<double> entries;  // num_topics x num_topics, row-major

    double at(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * num_topics + j];
    }
    double& at(int i, int j) {
        return entries[static_cast<std::size_t>(i) * num_topics + j];
    }
};

/// Truncates every topic to its top truncation_k words, drops words without
/// embeddings (renormalizing), and solves one transport problem per topic
/// pair. Symmetric with an exactly zero diagonal.
TopicCostMatrix topic_cost_matrix(const TopicModel& model, const EmbeddingTable& table,
                                  int truncation_k, int ground_power = 1);

void save_topic_costs(std::ostream& out, const TopicCostMatrix& costs, const std::string& config);
TopicCostMatrix load_topic_costs(std::istream& in);
void save_topic_costs_file(const std::string& path, const TopicCostMatrix& costs,
                           const std::string& config);
TopicCostMatrix load_topic_costs_file(const std::string& path);

/// Word-level transport distance between two documents under the embedding
/// ground metric. Words without embeddings are dropped from the support with
/// renormalization; a document losing its whole support is an error.
double wmd(const DocumentDistribution& d1, const DocumentDistribution& d2,
           const EmbeddingTable& table, int ground_power = 1);

/// wmd after reducing each document to its k highest-mass words (ties prefer
/// the lower word id) and renormalizing.
double wmd_truncated(const DocumentDistribution& d1, const DocumentDistribution& d2,
                     const EmbeddingTable& table, int k, int ground_power = 1);

/// The one-marginal relaxation value (max of both directions) on the same
/// instance wmd solves; a lower bound on wmd.
double rwmd(const DocumentDistribution& d1, const DocumentDistribution& d2,
            const EmbeddingTable& table, int ground_power = 1);

/// Topic-level transport between two proportion vectors with the precomputed
/// topic costs as ground metric. truncate=true applies the 1/(|T|+1)
/// proportion cut to both sides first (the truncated variant); truncate=false
/// keeps full proportions (the full-topic variant).
double hott_distance(std::span<const double> p1, std::span<const double> p2,
                     const TopicCostMatrix& costs, bool truncate);

/// Names: wmd, wmd-t20, rwmd, hott, hofft, nbow, tfidf, lsi, lda, cosine.
struct MetricDescriptor {
    std::string name = "hott";
    int ground_power = 1;                       // transport-family metrics
    int truncation_k = 20;                      // wmd-t20 document truncation
    int lsi_dim = 0;                            // lsi; 0 means caller default
    std::string vector_distance = "euclidean";  // vector-family metrics

    bool is_transport() const;  // wmd, wmd-t20, rwmd
    bool is_topic() const;      // hott, hofft
    bool is_vector() const;     // nbow, tfidf, lsi, lda, cosine
    void validate() const;
    std::string to_string() const;
};

/// Prepared pair evaluator over one document sequence. All heavy per-document
/// work (embedding filtering, truncation) happens once at construction; the
/// call operator is pure and safe to invoke from many threads.
class PairDistance {
  public:
    struct Inputs {
        const EmbeddingTable* table = nullptr;       // transport family
        const TopicCostMatrix* topic_costs = nullptr;  // topic family
        std::vector<double> proportions;             // n x |T| row-major, topic family
        std::vector<double> vectors;                 // n x dim row-major, vector family
        int vector_dim = 0;
    };

    PairDistance(const MetricDescriptor& desc, const Corpus& corpus, Inputs inputs);

    double operator()(std::size_t i, std::size_t j) const;
    std::size_t size() const { return n_; }
    const MetricDescriptor& descriptor() const { return desc_; }

  private:
    struct TransportDoc {
        std::vector<int> ids;
        Histogram hist;
    };

    MetricDescriptor desc_;
    std::size_t n_ = 0;
    const EmbeddingTable* table_ = nullptr;
    const TopicCostMatrix* topic_costs_ = nullptr;
    std::vector<TransportDoc> docs_;     // transport family
    std::vector<double> proportions_;    // topic family
    int num_topics_ = 0;
    std::vector<double> vectors_;        // vector family
    int vector_dim_ = 0;
};

struct DistanceMatrix {
    int n = 0;
    std::string metric;  // descriptor string
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<double> values;  // n x n row-major, symmetric, zero diagonal

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
};

struct PairwiseStats {
    double wall_seconds = 0.0;
    double pairs_per_second = 0.0;
    std::size_t pair_count = 0;
};

/// All n(n-1)/2 pairs of the prepared metric, distributed across workers by
/// pair index. Output is exactly symmetric (each pair computed once and
/// mirrored) and independent of the worker count. Timing lands only in
/// stats, never in the matrix itself.
DistanceMatrix pairwise_matrix(const PairDistance& metric, const std::vector<std::string>& ids,
                               const std::vector<std::string>& labels, int workers,
                               PairwiseStats* stats = nullptr);

void save_distance_matrix(std::ostream& out, const DistanceMatrix& dm, const std::string& config);
DistanceMatrix load_distance_matrix(std::istream& in);
void save_distance_matrix_file(const std::string& path, const DistanceMatrix& dm,
                               const std::string& config);
DistanceMatrix load_distance_matrix_file(const std::string& path);

/// Plain CSV: header row "id,label,<id_0>,...", one row per document.
void export_distance_csv(std::ostream& out, const DistanceMatrix& dm);

}  // namespace hott
