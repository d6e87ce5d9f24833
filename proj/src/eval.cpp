#include "hott/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hott/baselines.hpp"
#include "hott/rng.hpp"

namespace hott {

namespace {

Corpus concatenate(const Corpus& train, const Corpus& test) {
    if (train.vocabulary.words != test.vocabulary.words) {
        throw std::invalid_argument("train and test corpora must share a vocabulary");
    }
    Corpus all;
    all.vocabulary = train.vocabulary;
    all.documents = train.documents;
    all.documents.insert(all.documents.end(), test.documents.begin(), test.documents.end());
    all.labels = train.labels;
    all.labels.insert(all.labels.end(), test.labels.begin(), test.labels.end());
    for (const auto& id : train.ids) all.ids.push_back("train:" + id);
    for (const auto& id : test.ids) all.ids.push_back("test:" + id);
    all.class_set = train.class_set;
    for (const auto& c : test.class_set) {
        if (std::find(all.class_set.begin(), all.class_set.end(), c) == all.class_set.end()) {
            all.class_set.push_back(c);
        }
    }
    std::sort(all.class_set.begin(), all.class_set.end());
    return all;
}

// Proportions for the concatenated sequence: the training block may reuse
// fitted rows; held-out documents always fold in, seeded by their position
// in the concatenation.
std::vector<double> stacked_proportions(const Corpus& train, const Corpus& test,
                                        const TopicModel& model, int iterations,
                                        std::uint64_t seed) {
    const int T = model.num_topics;
    std::vector<double> rows = corpus_proportions(train, model, iterations, seed);
    rows.resize((train.size() + test.size()) * static_cast<std::size_t>(T));
    for (std::size_t i = 0; i < test.size(); ++i) {
        std::vector<double> p = infer_proportions(test.documents[i], model, iterations,
                                                  mix_seed(seed, train.size() + i));
        std::copy(p.begin(), p.end(),
                  rows.begin() + static_cast<std::ptrdiff_t>((train.size() + i) * T));
    }
    return rows;
}

}  // namespace

CrossMetric::CrossMetric(const MetricDescriptor& desc, const Corpus& train, const Corpus& test,
                         const Config& config)
    : train_n_(train.size()), test_n_(test.size()) {
    Corpus all = concatenate(train, test);
    PairDistance::Inputs inputs;
    if (desc.is_transport()) {
        inputs.table = config.table;
    } else if (desc.is_topic()) {
        if (config.model == nullptr) throw std::invalid_argument(desc.name + " needs a model");
        inputs.topic_costs = config.topic_costs;
        inputs.proportions = stacked_proportions(train, test, *config.model,
                                                 config.infer_iterations, config.infer_seed);
    } else if (desc.name == "lda") {
        if (config.model == nullptr) throw std::invalid_argument("lda needs a model");
        inputs.vectors = stacked_proportions(train, test, *config.model, config.infer_iterations,
                                             config.infer_seed);
        inputs.vector_dim = config.model->num_topics;
    } else {
        MetricDescriptor d = desc;
        if (desc.name == "lsi" && desc.lsi_dim < 1) {
            if (config.model == nullptr) {
                throw std::invalid_argument("lsi needs an explicit dimension or a model");
            }
            d.lsi_dim = config.model->num_topics;
        }
        const std::string method = desc.name == "cosine" ? "nbow" : desc.name;
        VectorParams params;
        params.lsi_dim = d.lsi_dim;
        VectorRepresentation rep = build_vectors(all, method, params, config.model);
        inputs.vectors = std::move(rep.rows);
        inputs.vector_dim = rep.dim;
        pd_.emplace(d, all, std::move(inputs));
        return;
    }
    pd_.emplace(desc, all, std::move(inputs));
}

double CrossMetric::operator()(std::size_t test_idx, std::size_t train_idx) const {
    if (test_idx >= test_n_ || train_idx >= train_n_) {
        throw std::out_of_range("document index out of range");
    }
    return (*pd_)(train_n_ + test_idx, train_idx);
}

KnnReport knn_evaluate(const std::function<double(std::size_t, std::size_t)>& distance,
                       const std::vector<std::string>& train_labels,
                       const std::vector<std::string>& test_labels, const std::vector<int>& ks,
                       const std::string& metric_name) {
    const std::size_t train_n = train_labels.size();
    const std::size_t test_n = test_labels.size();
    if (train_n == 0 || test_n == 0) throw std::invalid_argument("empty train or test set");
    if (ks.empty()) throw std::invalid_argument("no k values requested");
    for (int k : ks) {
        if (k < 1 || static_cast<std::size_t>(k) > train_n) {
            throw std::invalid_argument("k must be in [1, |train|]");
        }
    }

    KnnReport report;
    report.metric = metric_name;
    report.ks = ks;
    report.errors.assign(ks.size(), 0.0);
    std::vector<std::size_t> wrong(ks.size(), 0);

    std::vector<std::pair<double, std::size_t>> order(train_n);
    for (std::size_t t = 0; t < test_n; ++t) {
        for (std::size_t r = 0; r < train_n; ++r) order[r] = {distance(t, r), r};
        std::sort(order.begin(), order.end());  // distance, then lower train index

        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            const int k = ks[ki];
            std::map<std::string, int> votes;
            for (int i = 0; i < k; ++i) ++votes[train_labels[order[i].second]];
            int best = 0;
            for (const auto& [label, count] : votes) best = std::max(best, count);
            // vote tie: the nearest neighbor holding a tied-top label decides
            std::string predicted;
            for (int i = 0; i < k; ++i) {
                const std::string& candidate = train_labels[order[i].second];
                if (votes[candidate] == best) {
                    predicted = candidate;
                    break;
                }
            }
            if (predicted != test_labels[t]) ++wrong[ki];
        }
    }
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        report.errors[ki] = static_cast<double>(wrong[ki]) / static_cast<double>(test_n);
    }
    return report;
}

std::map<std::string, double> normalized_aggregate(
    const std::map<std::string, std::vector<double>>& best_errors, const std::string& reference) {
    auto ref_it = best_errors.find(reference);
    if (ref_it == best_errors.end()) {
        throw std::invalid_argument("reference method not present: " + reference);
    }
    const std::vector<double>& ref = ref_it->second;
    std::map<std::string, double> out;
    for (const auto& [method, errors] : best_errors) {
        if (errors.size() != ref.size()) {
            throw std::invalid_argument("method " + method +
                                        " reports a different corpus count than the reference");
        }
        double acc = 0.0;
        for (std::size_t c = 0; c < ref.size(); ++c) {
            double ratio = (errors[c] == 0.0 && ref[c] == 0.0) ? 1.0 : errors[c] / ref[c];
            acc += ratio;
        }
        out[method] = ref.empty() ? 1.0 : acc / static_cast<double>(ref.size());
    }
    return out;
}

MantelResult mantel(const DistanceMatrix& d1, const DistanceMatrix& d2, int permutations,
                    std::uint64_t seed) {
    if (d1.n != d2.n) throw std::invalid_argument("distance matrices differ in size");
    if (permutations < 1) throw std::invalid_argument("permutations must be >= 1");
    const int n = d1.n;
    if (n < 3) throw std::invalid_argument("mantel needs at least 3 documents");
    const std::size_t m = static_cast<std::size_t>(n) * (n - 1) / 2;

    std::vector<double> x, y;
    x.reserve(m);
    y.reserve(m);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            x.push_back(d1.at(i, j));
            y.push_back(d2.at(i, j));
        }
    }
    double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
    double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        sxy += (x[t] - mean_x) * (y[t] - mean_y);
        sxx += (x[t] - mean_x) * (x[t] - mean_x);
        syy += (y[t] - mean_y) * (y[t] - mean_y);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::runtime_error("zero variance in a distance matrix upper triangle");
    }
    // single square root of the product: identical inputs then give
    // sxy / sqrt(sxy^2) == 1.0 exactly
    const double denom = std::sqrt(sxx * syy);
    double r = sxy / denom;
    r = std::min(1.0, std::max(-1.0, r));

    // deviations of d2 addressable by (row, col) for permuted lookups
    std::vector<double> dev_y(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dev_y[static_cast<std::size_t>(i) * n + j] = d2.at(i, j) - mean_y;
    std::vector<double> dev_x(m);
    {
        std::size_t t = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++t) dev_x[t] = x[t] - mean_x;
    }

    std::mt19937_64 rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int hits = 1;  // the identity permutation reproduces r itself
    const double target = std::abs(r);
    for (int p = 0; p < permutations; ++p) {
        for (int i = n - 1; i > 0; --i) {
            int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(perm[i], perm[j]);
        }
        double sxy_p = 0.0;
        std::size_t t = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j, ++t) {
                sxy_p += dev_x[t] * dev_y[static_cast<std::size_t>(perm[i]) * n + perm[j]];
            }
        }
        if (std::abs(sxy_p / denom) >= target) ++hits;
    }
    MantelResult out;
    out.r = r;
    out.p = static_cast<double>(hits) / static_cast<double>(permutations + 1);
    return out;
}

double frobenius_diff(const DistanceMatrix& d1, const DistanceMatrix& d2) {
    if (d1.n != d2.n) throw std::invalid_argument("distance matrices differ in size");
    double acc = 0.0;
    for (std::size_t t = 0; t < d1.values.size(); ++t) {
        double diff = d1.values[t] - d2.values[t];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

BoundChecker::BoundChecker(const TopicModel& model, const EmbeddingTable& table) : model_(model) {
    const int V = model.vocab_size;
    if (table.vocab_size() != V) {
        throw std::invalid_argument("embedding table and model disagree on vocabulary size");
    }
    vocab_to_e_.assign(static_cast<std::size_t>(V), -1);
    for (int v = 0; v < V; ++v) {
        if (table.has(v)) {
            vocab_to_e_[v] = static_cast<int>(embedded_.size());
            embedded_.push_back(v);
        }
    }
    if (embedded_.empty()) throw std::runtime_error("embeddings cover no vocabulary token");
    e_dist_ = cost_matrix(embedded_, embedded_, table, 1);
    for (double e : e_dist_.entries) diameter_ = std::max(diameter_, e);

    const int T = model.num_topics;
    const int E = static_cast<int>(embedded_.size());
    topics_e_.resize(static_cast<std::size_t>(T) * E);
    for (int k = 0; k < T; ++k) {
        auto row = model.topic_row(k);
        double sum = 0.0;
        for (int e = 0; e < E; ++e) sum += row[embedded_[e]];
        if (sum <= 0.0) {
            throw std::runtime_error("topic " + std::to_string(k) +
                                     " has no mass on embedded words");
        }
        for (int e = 0; e < E; ++e) {
            topics_e_[static_cast<std::size_t>(k) * E + e] = row[embedded_[e]] / sum;
        }
    }

    // untruncated topic-to-topic costs: one transport problem per pair over
    // the full embedded supports
    full_costs_.num_topics = T;
    full_costs_.truncation_k = 0;  // marker: no truncation
    full_costs_.ground_power = 1;
    full_costs_.entries.assign(static_cast<std::size_t>(T) * T, 0.0);
    for (int i = 0; i < T; ++i) {
        Histogram hi;
        hi.mass.assign(topics_e_.begin() + static_cast<std::ptrdiff_t>(i) * E,
                       topics_e_.begin() + static_cast<std::ptrdiff_t>(i + 1) * E);
        for (int j = i + 1; j < T; ++j) {
            Histogram hj;
            hj.mass.assign(topics_e_.begin() + static_cast<std::ptrdiff_t>(j) * E,
                           topics_e_.begin() + static_cast<std::ptrdiff_t>(j + 1) * E);
            double w = solve_exact(hi, hj, e_dist_).cost;
            full_costs_.at(i, j) = w;
            full_costs_.at(j, i) = w;
        }
    }
}

BoundReport BoundChecker::check(const DocumentDistribution& d1, const DocumentDistribution& d2,
                                std::span<const double> p1, std::span<const double> p2) const {
    const int T = model_.num_topics;
    if (static_cast<int>(p1.size()) != T || static_cast<int>(p2.size()) != T) {
        throw std::invalid_argument("proportion length does not match the model");
    }
    const int E = static_cast<int>(embedded_.size());

    // documents restricted to embedded words, renormalized
    auto restrict = [&](const DocumentDistribution& d) {
        std::pair<std::vector<int>, Histogram> out;  // e-indices, masses
        double sum = 0.0;
        for (std::size_t j = 0; j < d.support.size(); ++j) {
            int e = vocab_to_e_[d.support[j]];
            if (e < 0) continue;
            out.first.push_back(e);
            out.second.mass.push_back(d.mass[j]);
            sum += d.mass[j];
        }
        if (out.first.empty()) throw std::runtime_error("document has no embedded words");
        for (double& x : out.second.mass) x /= sum;
        return out;
    };
    auto [e1, h1] = restrict(d1);
    auto [e2, h2] = restrict(d2);

    CostMatrix sub;
    sub.rows = static_cast<int>(e1.size());
    sub.cols = static_cast<int>(e2.size());
    sub.ground_power = 1;
    sub.entries.resize(e1.size() * e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i)
        for (std::size_t j = 0; j < e2.size(); ++j)
            sub.entries[i * e2.size() + j] = e_dist_.at(e1[i], e2[j]);

    BoundReport rep;
    rep.wmd_value = solve_exact(h1, h2, sub).cost;
    rep.rwmd_value = relaxed_cost(h1, h2, sub).value;
    rep.hausdorff_value = hausdorff(sub);
    rep.hofft_value = hott_distance(p1, p2, full_costs_, false);
    rep.diameter = diameter_;

    // the two topic mixtures, dense over the embedded vocabulary
    Histogram m1, m2;
    m1.mass.assign(static_cast<std::size_t>(E), 0.0);
    m2.mass.assign(static_cast<std::size_t>(E), 0.0);
    for (int k = 0; k < T; ++k) {
        const double* tk = topics_e_.data() + static_cast<std::size_t>(k) * E;
        for (int e = 0; e < E; ++e) {
            m1.mass[e] += p1[k] * tk[e];
            m2.mass[e] += p2[k] * tk[e];
        }
    }
    rep.mix_w1 = solve_exact(m1, m2, e_dist_).cost;

    auto kl_against_mix = [&](const std::vector<int>& idx, const Histogram& h,
                              const Histogram& mix) {
        double kl = 0.0;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            double q = mix.mass[static_cast<std::size_t>(idx[j])];
            if (q <= 0.0) {
                throw std::runtime_error("mixture puts zero mass on a supported word");
            }
            kl += h.mass[j] * std::log(h.mass[j] / q);
        }
        return std::max(0.0, kl);  // tiny negatives are float noise
    };
    rep.kl1 = kl_against_mix(e1, h1, m1);
    rep.kl2 = kl_against_mix(e2, h2, m2);

    rep.residual_rwmd_wmd = rep.rwmd_value - rep.wmd_value;
    rep.residual_rwmd_hausdorff = rep.rwmd_value - rep.hausdorff_value;
    rep.residual_mix_hofft = rep.mix_w1 - rep.hofft_value;
    rep.residual_combined =
        rep.wmd_value - rep.hofft_value -
        rep.diameter * (std::sqrt(0.5 * rep.kl1) + std::sqrt(0.5 * rep.kl2));
    return rep;
}

BoundReport check_bounds(const DocumentDistribution& d1, const DocumentDistribution& d2,
                         std::span<const double> p1, std::span<const double> p2,
                         const TopicModel& model, const EmbeddingTable& table) {
    return BoundChecker(model, table).check(d1, d2, p1, p2);
}

ThroughputReport benchmark_throughput(const PairDistance& metric, std::size_t pair_budget,
                                      std::size_t warmup, std::uint64_t seed) {
    if (pair_budget < 1) throw std::invalid_argument("pair budget must be >= 1");
    const std::size_t n = metric.size();
    if (n < 2) throw std::invalid_argument("need at least two documents to sample pairs");

    std::mt19937_64 rng(seed);
    auto sample_pair = [&]() {
        std::size_t i = static_cast<std::size_t>(uniform_below(rng, static_cast<int>(n)));
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, static_cast<int>(n) - 1));
        if (j >= i) ++j;
        return std::pair<std::size_t, std::size_t>{i, j};
    };

    volatile double sink = 0.0;
    for (std::size_t w = 0; w < warmup; ++w) {
        auto [i, j] = sample_pair();
        sink = sink + metric(i, j);
    }
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t p = 0; p < pair_budget; ++p) {
        auto [i, j] = sample_pair();
        sink = sink + metric(i, j);
    }
    auto t1 = std::chrono::steady_clock::now();

    ThroughputReport rep;
    rep.metric = metric.descriptor().to_string();
    rep.pairs = pair_budget;
    rep.seconds = std::chrono::duration<double>(t1 - t0).count();
    rep.pairs_per_second = rep.seconds > 0.0
                               ? static_cast<double>(pair_budget) / rep.seconds
                               : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace hott
