#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hott/corpus.hpp"

namespace hott {

/// Smoothed point estimate of an LDA fit. Both matrices are row-stochastic
/// with strictly positive entries (the priors never vanish).
struct TopicModel {
    int num_topics = 0;
    int vocab_size = 0;
    int num_docs = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> topic_word;  // num_topics x vocab_size, row-major
    std::vector<double> doc_topic;   // num_docs x num_topics, row-major

    std::span<const double> topic_row(int k) const {
        return {topic_word.data() + static_cast<std::size_t>(k) * vocab_size,
                static_cast<std::size_t>(vocab_size)};
    }
    std::span<const double> doc_row(int i) const {
        return {doc_topic.data() + static_cast<std::size_t>(i) * num_topics,
                static_cast<std::size_t>(num_topics)};
    }
};

struct TruncatedTopic {
    std::vector<int> support;  // word ids, highest mass first (ties: lower id)
    std::vector<double> mass;  // renormalized, parallel to support
};

struct SparseProportions {
    std::vector<int> topics;   // surviving topic ids, ascending
    std::vector<double> mass;  // renormalized
    int kappa = 0;             // = topics.size()
};

inline constexpr double kDefaultBeta = 0.01;
inline double default_alpha(int num_topics) { return 50.0 / num_topics; }

/// Collapsed Gibbs sampling over token-topic assignments. The point estimate
/// comes from the final sweep's counts:
///   topic_word(k,v) = (n_kv + beta) / (n_k + |V| beta)
///   doc_topic(i,k)  = (n_ik + alpha) / (|d_i| + |T| alpha)
/// Bit-deterministic for a fixed (corpus, parameters, seed).
TopicModel fit_lda(const Corpus& corpus, int num_topics, double alpha, double beta,
                   int iterations, std::uint64_t seed);

/// Fold-in Gibbs for a held-out document: topic_word stays fixed, only the
/// document's topic counts move. Returns smoothed proportions over |T|.
std::vector<double> infer_proportions(const DocumentDistribution& doc, const TopicModel& model,
                                      int iterations, std::uint64_t seed);

/// Top-k words of a topic by mass (ties prefer the lower word id),
/// renormalized to sum 1.
TruncatedTopic truncate_topic(std::span<const double> topic, int k);

/// Drops proportions below 1/(|T|+1) and renormalizes the survivors; the
/// argmax always survives, so the result is never empty.
SparseProportions truncate_proportions(std::span<const double> dbar);

enum class ProportionSource {
    Auto,    // Fitted when corpus.size() == model.num_docs, else FoldIn
    Fitted,  // the model's doc_topic rows (requires matching size)
    FoldIn,  // always run fold-in inference
};

/// Topic proportions for every document of a corpus, row-major
/// corpus.size() x num_topics. Fold-in gives each document its own derived
/// seed so the result is independent of evaluation order.
std::vector<double> corpus_proportions(const Corpus& corpus, const TopicModel& model,
                                       int iterations, std::uint64_t seed,
                                       ProportionSource source = ProportionSource::Auto);

/// Header + row-major little-endian binary container; round-trips bit-exactly.
void save_topic_model(std::ostream& out, const TopicModel& model, const std::string& config);
TopicModel load_topic_model(std::istream& in);
void save_topic_model_file(const std::string& path, const TopicModel& model,
                           const std::string& config);
TopicModel load_topic_model_file(const std::string& path);

}  // namespace hott
