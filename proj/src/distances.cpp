#include "hott/distances.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hott/baselines.hpp"
#include "hott/container_io.hpp"

namespace hott {

namespace {

// Top-k unique words of a document by mass (ties prefer the lower word id),
// support re-sorted ascending, masses renormalized.
DocumentDistribution truncate_document(const DocumentDistribution& d, int k) {
    if (k < 1) throw std::invalid_argument("document truncation k must be >= 1");
    if (static_cast<int>(d.support.size()) <= k) return d;
    std::vector<std::size_t> order(d.support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (d.mass[a] != d.mass[b]) return d.mass[a] > d.mass[b];
        return d.support[a] < d.support[b];
    });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return d.support[a] < d.support[b]; });

    DocumentDistribution out;
    out.total_words = d.total_words;
    double sum = 0.0;
    for (std::size_t idx : order) {
        out.support.push_back(d.support[idx]);
        out.mass.push_back(d.mass[idx]);
        sum += d.mass[idx];
    }
    for (double& m : out.mass) m /= sum;
    return out;
}

struct FilteredDoc {
    std::vector<int> ids;
    Histogram hist;
};

// Drops words without embeddings and renormalizes what is left; the
// who-string lands in the error when nothing survives.
FilteredDoc filter_to_embedded(const DocumentDistribution& d, const EmbeddingTable& table,
                               const std::string& who) {
    FilteredDoc out;
    double sum = 0.0;
    for (std::size_t j = 0; j < d.support.size(); ++j) {
        if (!table.has(d.support[j])) continue;
        out.ids.push_back(d.support[j]);
        out.hist.mass.push_back(d.mass[j]);
        sum += d.mass[j];
    }
    if (out.ids.empty()) {
        throw std::runtime_error("document " + who + ": no words with embeddings");
    }
    for (double& m : out.hist.mass) m /= sum;
    return out;
}

double transport_pair(const FilteredDoc& a, const FilteredDoc& b, const EmbeddingTable& table,
                      int ground_power, bool relaxed) {
    CostMatrix c = cost_matrix(a.ids, b.ids, table, 1);
    if (!relaxed) return wasserstein(a.hist, b.hist, c, ground_power);
    if (ground_power == 2) {
        for (double& e : c.entries) e *= e;
        double v = relaxed_cost(a.hist, b.hist, c).value;
        return std::sqrt(std::max(0.0, v));
    }
    return relaxed_cost(a.hist, b.hist, c).value;
}

}  // namespace

double wmd(const DocumentDistribution& d1, const DocumentDistribution& d2,
           const EmbeddingTable& table, int ground_power) {
    FilteredDoc a = filter_to_embedded(d1, table, "(first)");
    FilteredDoc b = filter_to_embedded(d2, table, "(second)");
    return transport_pair(a, b, table, ground_power, false);
}

double wmd_truncated(const DocumentDistribution& d1, const DocumentDistribution& d2,
                     const EmbeddingTable& table, int k, int ground_power) {
    return wmd(truncate_document(d1, k), truncate_document(d2, k), table, ground_power);
}

double rwmd(const DocumentDistribution& d1, const DocumentDistribution& d2,
            const EmbeddingTable& table, int ground_power) {
    FilteredDoc a = filter_to_embedded(d1, table, "(first)");
    FilteredDoc b = filter_to_embedded(d2, table, "(second)");
    return transport_pair(a, b, table, ground_power, true);
}

double hott_distance(std::span<const double> p1, std::span<const double> p2,
                     const TopicCostMatrix& costs, bool truncate) {
    const int T = costs.num_topics;
    if (static_cast<int>(p1.size()) != T || static_cast<int>(p2.size()) != T) {
        throw std::invalid_argument("proportion length does not match the topic cost matrix");
    }
    std::vector<int> s1, s2;
    Histogram h1, h2;
    if (truncate) {
        SparseProportions a = truncate_proportions(p1);
        SparseProportions b = truncate_proportions(p2);
        s1 = std::move(a.topics);
        h1.mass = std::move(a.mass);
        s2 = std::move(b.topics);
        h2.mass = std::move(b.mass);
    } else {
        for (int k = 0; k < T; ++k) {
            if (p1[k] > 0.0) {
                s1.push_back(k);
                h1.mass.push_back(p1[k]);
            }
            if (p2[k] > 0.0) {
                s2.push_back(k);
                h2.mass.push_back(p2[k]);
            }
        }
    }
    CostMatrix sub;
    sub.rows = static_cast<int>(s1.size());
    sub.cols = static_cast<int>(s2.size());
    sub.ground_power = 1;
    sub.entries.resize(s1.size() * s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i)
        for (std::size_t j = 0; j < s2.size(); ++j)
            sub.entries[i * s2.size() + j] = costs.at(s1[i], s2[j]);
    return solve_exact(h1, h2, sub).cost;
}

TopicCostMatrix topic_cost_matrix(const TopicModel& model, const EmbeddingTable& table,
                                  int truncation_k, int ground_power) {
    if (truncation_k < 1) throw std::invalid_argument("truncation_k must be >= 1");
    if (ground_power != 1 && ground_power != 2) {
        throw std::invalid_argument("ground_power must be 1 or 2");
    }
    const int T = model.num_topics;
    std::vector<FilteredDoc> topics(T);
    for (int t = 0; t < T; ++t) {
        TruncatedTopic tr = truncate_topic(model.topic_row(t), truncation_k);
        DocumentDistribution d;
        d.support = std::move(tr.support);
        d.mass = std::move(tr.mass);
        // supports arrive mass-ordered; the filter does not care about order
        topics[t] = filter_to_embedded(d, table, "(topic " + std::to_string(t) + ")");
    }

    TopicCostMatrix out;
    out.num_topics = T;
    out.truncation_k = truncation_k;
    out.ground_power = ground_power;
    out.entries.assign(static_cast<std::size_t>(T) * T, 0.0);
    for (int i = 0; i < T; ++i) {
        for (int j = i + 1; j < T; ++j) {
            CostMatrix c = cost_matrix(topics[i].ids, topics[j].ids, table, 1);
            double w = wasserstein(topics[i].hist, topics[j].hist, c, ground_power);
            out.at(i, j) = w;
            out.at(j, i) = w;
        }
    }
    return out;
}

bool MetricDescriptor::is_transport() const {
    return name == "wmd" || name == "wmd-t20" || name == "rwmd";
}
bool MetricDescriptor::is_topic() const { return name == "hott" || name == "hofft"; }
bool MetricDescriptor::is_vector() const {
    return name == "nbow" || name == "tfidf" || name == "lsi" || name == "lda" ||
           name == "cosine";
}

void MetricDescriptor::validate() const {
    if (!is_transport() && !is_topic() && !is_vector()) {
        throw std::invalid_argument("unknown metric: " + name);
    }
    if (ground_power != 1 && ground_power != 2) {
        throw std::invalid_argument("ground_power must be 1 or 2");
    }
    if (name == "wmd-t20" && truncation_k < 1) {
        throw std::invalid_argument("document truncation k must be >= 1");
    }
    if (is_vector() && vector_distance != "euclidean" && vector_distance != "cosine") {
        throw std::invalid_argument("unknown vector distance: " + vector_distance);
    }
}

std::string MetricDescriptor::to_string() const {
    std::ostringstream out;
    out << name;
    if (is_transport() || is_topic()) out << " ground_power=" << ground_power;
    if (name == "wmd-t20") out << " k=" << truncation_k;
    if (name == "lsi") out << " dim=" << lsi_dim;
    if (is_vector()) out << " vector_distance=" << (name == "cosine" ? "cosine" : vector_distance);
    return out.str();
}

PairDistance::PairDistance(const MetricDescriptor& desc, const Corpus& corpus, Inputs inputs)
    : desc_(desc), n_(corpus.size()) {
    desc_.validate();
    if (desc_.is_transport()) {
        table_ = inputs.table;
        if (table_ == nullptr) {
            throw std::invalid_argument(desc_.name + " needs an embedding table");
        }
        docs_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            DocumentDistribution d = desc_.name == "wmd-t20"
                                         ? truncate_document(corpus.documents[i],
                                                             desc_.truncation_k)
                                         : corpus.documents[i];
            FilteredDoc f = filter_to_embedded(d, *table_, corpus.ids[i]);
            docs_.push_back(TransportDoc{std::move(f.ids), std::move(f.hist)});
        }
    } else if (desc_.is_topic()) {
        topic_costs_ = inputs.topic_costs;
        if (topic_costs_ == nullptr) {
            throw std::invalid_argument(desc_.name + " needs a topic cost matrix");
        }
        num_topics_ = topic_costs_->num_topics;
        proportions_ = std::move(inputs.proportions);
        if (proportions_.size() != n_ * static_cast<std::size_t>(num_topics_)) {
            throw std::invalid_argument("proportions matrix shape does not match corpus/topics");
        }
    } else {
        vectors_ = std::move(inputs.vectors);
        vector_dim_ = inputs.vector_dim;
        if (vector_dim_ < 1 || vectors_.size() != n_ * static_cast<std::size_t>(vector_dim_)) {
            throw std::invalid_argument("vector matrix shape does not match the corpus");
        }
    }
}

double PairDistance::operator()(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("document index out of range");
    if (desc_.is_transport()) {
        const TransportDoc& a = docs_[i];
        const TransportDoc& b = docs_[j];
        CostMatrix c = cost_matrix(a.ids, b.ids, *table_, 1);
        if (desc_.name == "rwmd") {
            if (desc_.ground_power == 2) {
                for (double& e : c.entries) e *= e;
                double v = relaxed_cost(a.hist, b.hist, c).value;
                return std::sqrt(std::max(0.0, v));
            }
            return relaxed_cost(a.hist, b.hist, c).value;
        }
        return wasserstein(a.hist, b.hist, c, desc_.ground_power);
    }
    if (desc_.is_topic()) {
        std::span<const double> p1{proportions_.data() + i * num_topics_,
                                   static_cast<std::size_t>(num_topics_)};
        std::span<const double> p2{proportions_.data() + j * num_topics_,
                                   static_cast<std::size_t>(num_topics_)};
        return hott_distance(p1, p2, *topic_costs_, desc_.name == "hott");
    }
    std::span<const double> u{vectors_.data() + i * vector_dim_,
                              static_cast<std::size_t>(vector_dim_)};
    std::span<const double> v{vectors_.data() + j * vector_dim_,
                              static_cast<std::size_t>(vector_dim_)};
    return vector_distance(u, v, desc_.name == "cosine" ? "cosine" : desc_.vector_distance);
}

DistanceMatrix pairwise_matrix(const PairDistance& metric, const std::vector<std::string>& ids,
                               const std::vector<std::string>& labels, int workers,
                               PairwiseStats* stats) {
    const std::size_t n = metric.size();
    if (ids.size() != n || labels.size() != n) {
        throw std::invalid_argument("ids/labels do not match the metric's corpus size");
    }
    DistanceMatrix dm;
    dm.n = static_cast<int>(n);
    dm.metric = metric.descriptor().to_string();
    dm.ids = ids;
    dm.labels = labels;
    dm.values.assign(n * n, 0.0);

    const std::size_t pair_count = n * (n - 1) / 2;
    int w = std::max(1, workers);
    if (pair_count > 0) w = static_cast<int>(std::min<std::size_t>(w, pair_count));

    std::mutex err_mutex;
    std::string first_error;

    auto t0 = std::chrono::steady_clock::now();
    // static partition by pair index: worker wi owns every w-th pair, writes
    // only its own entries, so the result is identical for any worker count
    auto body = [&](int wi) {
        std::size_t p = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                if (static_cast<int>(p % static_cast<std::size_t>(w)) != wi) continue;
                try {
                    double v = metric(i, j);
                    dm.values[i * n + j] = v;
                    dm.values[j * n + i] = v;
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (first_error.empty()) {
                        first_error = "distance between documents " + ids[i] + " and " + ids[j] +
                                      ": " + e.what();
                    }
                    return;
                }
            }
        }
    };
    if (w == 1) {
        body(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(w));
        for (int wi = 0; wi < w; ++wi) threads.emplace_back(body, wi);
        for (auto& t : threads) t.join();
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);

    auto t1 = std::chrono::steady_clock::now();
    if (stats != nullptr) {
        stats->wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        stats->pair_count = pair_count;
        stats->pairs_per_second =
            stats->wall_seconds > 0.0 ? static_cast<double>(pair_count) / stats->wall_seconds
                                      : 0.0;
    }
    return dm;
}

void save_topic_costs(std::ostream& out, const TopicCostMatrix& costs, const std::string& config) {
    out << "hott topic-costs 1\n";
    write_header_line(out, "config", config);
    write_header_line(out, "num_topics", std::to_string(costs.num_topics));
    write_header_line(out, "truncation_k", std::to_string(costs.truncation_k));
    write_header_line(out, "ground_power", std::to_string(costs.ground_power));
    out << "matrix\n";
    write_doubles_le(out, costs.entries);
    if (!out) throw std::runtime_error("failed writing topic cost matrix");
}

TopicCostMatrix load_topic_costs(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "hott topic-costs 1") {
        throw std::runtime_error("not a topic cost file (bad magic line)");
    }
    read_header_line(in, "config");
    TopicCostMatrix costs;
    costs.num_topics = std::stoi(read_header_line(in, "num_topics"));
    costs.truncation_k = std::stoi(read_header_line(in, "truncation_k"));
    costs.ground_power = std::stoi(read_header_line(in, "ground_power"));
    if (!std::getline(in, line) || line != "matrix") {
        throw std::runtime_error("topic cost file: missing matrix marker");
    }
    if (costs.num_topics < 1) throw std::runtime_error("topic cost file has invalid dimensions");
    costs.entries.resize(static_cast<std::size_t>(costs.num_topics) * costs.num_topics);
    read_doubles_le(in, costs.entries);
    return costs;
}

void save_topic_costs_file(const std::string& path, const TopicCostMatrix& costs,
                           const std::string& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_topic_costs(out, costs, config);
}

TopicCostMatrix load_topic_costs_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open topic cost file: " + path);
    return load_topic_costs(in);
}

void save_distance_matrix(std::ostream& out, const DistanceMatrix& dm, const std::string& config) {
    out << "hott distance-matrix 1\n";
    write_header_line(out, "config", config);
    write_header_line(out, "metric", dm.metric);
    write_header_line(out, "n", std::to_string(dm.n));
    for (int i = 0; i < dm.n; ++i) out << dm.ids[i] << '\t' << dm.labels[i] << '\n';
    out << "matrix\n";
    write_doubles_le(out, dm.values);
    if (!out) throw std::runtime_error("failed writing distance matrix");
}

DistanceMatrix load_distance_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "hott distance-matrix 1") {
        throw std::runtime_error("not a distance matrix file (bad magic line)");
    }
    read_header_line(in, "config");
    DistanceMatrix dm;
    dm.metric = read_header_line(in, "metric");
    dm.n = std::stoi(read_header_line(in, "n"));
    if (dm.n < 1) throw std::runtime_error("distance matrix has invalid size");
    for (int i = 0; i < dm.n; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated document list");
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("distance matrix document line " + std::to_string(i) +
                                     " malformed");
        }
        dm.ids.push_back(line.substr(0, tab));
        dm.labels.push_back(line.substr(tab + 1));
    }
    if (!std::getline(in, line) || line != "matrix") {
        throw std::runtime_error("distance matrix: missing matrix marker");
    }
    dm.values.resize(static_cast<std::size_t>(dm.n) * dm.n);
    read_doubles_le(in, dm.values);
    return dm;
}

void save_distance_matrix_file(const std::string& path, const DistanceMatrix& dm,
                               const std::string& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_distance_matrix(out, dm, config);
}

DistanceMatrix load_distance_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open distance matrix file: " + path);
    return load_distance_matrix(in);
}

void export_distance_csv(std::ostream& out, const DistanceMatrix& dm) {
    out << "id,label";
    for (const auto& id : dm.ids) out << ',' << id;
    out << '\n';
    for (int i = 0; i < dm.n; ++i) {
        out << dm.ids[i] << ',' << dm.labels[i];
        for (int j = 0; j < dm.n; ++j) out << ',' << format_double(dm.at(i, j));
        out << '\n';
    }
}

}  // namespace hott
