#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hott/distances.hpp"

namespace hott {

struct KnnReport {
    std::string metric;
    std::vector<int> ks;
    std::vector<double> errors;  // parallel to ks, each in [0,1]
};

/// Distances from held-out documents to training documents for one metric.
/// Internally the two corpora (which must share a vocabulary) are evaluated
/// as one concatenated sequence; topic proportions come from the fitted rows
/// for the training side and fold-in inference for the test side.
class CrossMetric {
  public:
    struct Config {
        const EmbeddingTable* table = nullptr;
        const TopicModel* model = nullptr;
        const TopicCostMatrix* topic_costs = nullptr;
        int infer_iterations = 50;
        std::uint64_t infer_seed = 0;
    };

    CrossMetric(const MetricDescriptor& desc, const Corpus& train, const Corpus& test,
                const Config& config);

    double operator()(std::size_t test_idx, std::size_t train_idx) const;
    std::size_t train_size() const { return train_n_; }
    std::size_t test_size() const { return test_n_; }

  private:
    std::size_t train_n_ = 0;
    std::size_t test_n_ = 0;
    std::optional<PairDistance> pd_;  // over train followed by test
};

/// Majority vote over the k nearest training documents, for every requested
/// k. Distance ties prefer the lower train index; vote ties go to the label
/// of the nearest neighbor carrying a tied-top label.
KnnReport knn_evaluate(const std::function<double(std::size_t, std::size_t)>& distance,
                       const std::vector<std::string>& train_labels,
                       const std::vector<std::string>& test_labels, const std::vector<int>& ks,
                       const std::string& metric_name = "");

/// best_errors maps method tag -> best-k error per corpus (parallel across
/// methods). Returns each method's mean ratio against the reference method.
std::map<std::string, double> normalized_aggregate(
    const std::map<std::string, std::vector<double>>& best_errors, const std::string& reference);

struct MantelResult {
    double r = 0.0;  // Pearson correlation of the upper triangles
    double p = 1.0;  // permutation p-value, identity included
};

MantelResult mantel(const DistanceMatrix& d1, const DistanceMatrix& d2, int permutations,
                    std::uint64_t seed);

/// sqrt(sum over all entries of the squared difference).
double frobenius_diff(const DistanceMatrix& d1, const DistanceMatrix& d2);

struct BoundReport {
    double rwmd_value = 0.0;
    double wmd_value = 0.0;
    double hofft_value = 0.0;  // full proportions over untruncated topic costs
    double mix_w1 = 0.0;       // transport between the two topic mixtures
    double kl1 = 0.0;          // KL(d1 || mix1)
    double kl2 = 0.0;
    double diameter = 0.0;           // of the embedded vocabulary
    double hausdorff_value = 0.0;    // between the two supports
    double residual_rwmd_wmd = 0.0;  // rwmd - wmd                          (a)
    double residual_rwmd_hausdorff = 0.0;  // rwmd - hausdorff              (b)
    double residual_mix_hofft = 0.0;       // mix_w1 - hofft                (c)
    double residual_combined = 0.0;  // wmd - hofft - diam*(sqrt(kl1/2)+sqrt(kl2/2))  (d)
};

/// Verifies the lower/upper bound chain on one document pair. Topic costs
/// here are deliberately untruncated (full topic supports, full proportions)
/// — truncation would break the inequalities being checked. The expensive
/// shared state (vocabulary distance matrix, untruncated topic costs) is
/// built once per checker.
class BoundChecker {
  public:
    BoundChecker(const TopicModel& model, const EmbeddingTable& table);

    BoundReport check(const DocumentDistribution& d1, const DocumentDistribution& d2,
                      std::span<const double> p1, std::span<const double> p2) const;

  private:
    const TopicModel& model_;
    std::vector<int> embedded_;        // vocabulary ids with vectors, ascending
    std::vector<int> vocab_to_e_;      // vocab id -> index into embedded_, -1 if none
    CostMatrix e_dist_;                // pairwise distances over embedded_
    double diameter_ = 0.0;
    std::vector<double> topics_e_;     // num_topics x |E|: restricted, renormalized topics
    TopicCostMatrix full_costs_;       // untruncated topic-to-topic W1
};

/// One-shot convenience wrapper around BoundChecker.
BoundReport check_bounds(const DocumentDistribution& d1, const DocumentDistribution& d2,
                         std::span<const double> p1, std::span<const double> p2,
                         const TopicModel& model, const EmbeddingTable& table);

struct ThroughputReport {
    std::string metric;
    std::size_t pairs = 0;
    double seconds = 0.0;
    double pairs_per_second = 0.0;
};

/// Wall-clock over randomly sampled distinct pairs after a warmup; always
/// single-threaded so figures are comparable across metrics.
ThroughputReport benchmark_throughput(const PairDistance& metric, std::size_t pair_budget,
                                      std::size_t warmup, std::uint64_t seed);

}  // namespace hott
