#include "hott/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hott/container_io.hpp"
#include "hott/rng.hpp"

namespace hott {

namespace {

// Token stream of a document: each supported word id repeated by its integer
// count (mass * total_words rounds back to the original count).
std::vector<int> expand_tokens(const DocumentDistribution& doc) {
    std::vector<int> tokens;
    tokens.reserve(static_cast<std::size_t>(doc.total_words));
    for (std::size_t j = 0; j < doc.support.size(); ++j) {
        auto count = static_cast<std::int64_t>(
            std::llround(doc.mass[j] * static_cast<double>(doc.total_words)));
        for (std::int64_t c = 0; c < count; ++c) tokens.push_back(doc.support[j]);
    }
    return tokens;
}

int sample_topic(std::mt19937_64& rng, const std::vector<double>& weight, double total) {
    double u = uniform01(rng) * total;
    double acc = 0.0;
    int last = static_cast<int>(weight.size()) - 1;
    for (int k = 0; k < last; ++k) {
        acc += weight[k];
        if (u < acc) return k;
    }
    return last;
}

}  // namespace

TopicModel fit_lda(const Corpus& corpus, int num_topics, double alpha, double beta,
                   int iterations, std::uint64_t seed) {
    if (num_topics < 2) throw std::invalid_argument("num_topics must be >= 2");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (alpha <= 0.0 || beta <= 0.0) throw std::invalid_argument("priors must be positive");
    if (corpus.size() == 0) throw std::invalid_argument("cannot fit a model on an empty corpus");

    const int T = num_topics;
    const int V = corpus.vocabulary.size();
    const int D = static_cast<int>(corpus.size());

    std::vector<std::vector<int>> tokens(D);
    std::vector<std::vector<int>> assign(D);
    std::vector<std::int64_t> n_dk(static_cast<std::size_t>(D) * T, 0);
    std::vector<std::int64_t> n_kv(static_cast<std::size_t>(T) * V, 0);
    std::vector<std::int64_t> n_k(T, 0);

    std::mt19937_64 rng(seed);
    for (int d = 0; d < D; ++d) {
        tokens[d] = expand_tokens(corpus.documents[d]);
        assign[d].resize(tokens[d].size());
        for (std::size_t t = 0; t < tokens[d].size(); ++t) {
            int k = uniform_below(rng, T);
            assign[d][t] = k;
            ++n_dk[static_cast<std::size_t>(d) * T + k];
            ++n_kv[static_cast<std::size_t>(k) * V + tokens[d][t]];
            ++n_k[k];
        }
    }

    std::vector<double> weight(T);
    const double vbeta = V * beta;
    for (int it = 0; it < iterations; ++it) {
        for (int d = 0; d < D; ++d) {
            std::int64_t* dk = n_dk.data() + static_cast<std::size_t>(d) * T;
            for (std::size_t t = 0; t < tokens[d].size(); ++t) {
                const int v = tokens[d][t];
                const int old = assign[d][t];
                --dk[old];
                --n_kv[static_cast<std::size_t>(old) * V + v];
                --n_k[old];
                double total = 0.0;
                for (int k = 0; k < T; ++k) {
                    double w = (dk[k] + alpha) *
                               (n_kv[static_cast<std::size_t>(k) * V + v] + beta) /
                               (n_k[k] + vbeta);
                    weight[k] = w;
                    total += w;
                }
                int fresh = sample_topic(rng, weight, total);
                assign[d][t] = fresh;
                ++dk[fresh];
                ++n_kv[static_cast<std::size_t>(fresh) * V + v];
                ++n_k[fresh];
            }
        }
    }

    TopicModel model;
    model.num_topics = T;
    model.vocab_size = V;
    model.num_docs = D;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;
    model.topic_word.resize(static_cast<std::size_t>(T) * V);
    model.doc_topic.resize(static_cast<std::size_t>(D) * T);
    for (int k = 0; k < T; ++k) {
        const double denom = n_k[k] + vbeta;
        for (int v = 0; v < V; ++v) {
            model.topic_word[static_cast<std::size_t>(k) * V + v] =
                (n_kv[static_cast<std::size_t>(k) * V + v] + beta) / denom;
        }
    }
    for (int d = 0; d < D; ++d) {
        const double denom = static_cast<double>(tokens[d].size()) + T * alpha;
        for (int k = 0; k < T; ++k) {
            model.doc_topic[static_cast<std::size_t>(d) * T + k] =
                (n_dk[static_cast<std::size_t>(d) * T + k] + alpha) / denom;
        }
    }
    return model;
}

std::vector<double> infer_proportions(const DocumentDistribution& doc, const TopicModel& model,
                                      int iterations, std::uint64_t seed) {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    std::vector<int> tokens = expand_tokens(doc);
    if (tokens.empty()) throw std::invalid_argument("cannot infer proportions of an empty document");
    for (int v : tokens) {
        if (v < 0 || v >= model.vocab_size) {
            throw std::invalid_argument("document word id outside the model vocabulary");
        }
    }

    const int T = model.num_topics;
    std::vector<std::int64_t> n_k(T, 0);
    std::vector<int> assign(tokens.size());
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        int k = uniform_below(rng, T);
        assign[t] = k;
        ++n_k[k];
    }

    std::vector<double> weight(T);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            const int v = tokens[t];
            const int old = assign[t];
            --n_k[old];
            double total = 0.0;
            for (int k = 0; k < T; ++k) {
                double w = (n_k[k] + model.alpha) *
                           model.topic_word[static_cast<std::size_t>(k) * model.vocab_size + v];
                weight[k] = w;
                total += w;
            }
            int fresh = sample_topic(rng, weight, total);
            assign[t] = fresh;
            ++n_k[fresh];
        }
    }

    std::vector<double> out(T);
    const double denom = static_cast<double>(tokens.size()) + T * model.alpha;
    for (int k = 0; k < T; ++k) out[k] = (n_k[k] + model.alpha) / denom;
    return out;
}

TruncatedTopic truncate_topic(std::span<const double> topic, int k) {
    if (k < 1) throw std::invalid_argument("truncation k must be >= 1");
    const int V = static_cast<int>(topic.size());
    std::vector<int> order(V);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (topic[a] != topic[b]) return topic[a] > topic[b];
        return a < b;
    });
    const int keep = std::min(k, V);

    TruncatedTopic out;
    double sum = 0.0;
    for (int i = 0; i < keep; ++i) {
        if (topic[order[i]] <= 0.0) break;  // only reachable on unsmoothed input
        out.support.push_back(order[i]);
        out.mass.push_back(topic[order[i]]);
        sum += topic[order[i]];
    }
    if (out.support.empty()) throw std::invalid_argument("topic has no positive mass");
    for (double& m : out.mass) m /= sum;
    return out;
}

SparseProportions truncate_proportions(std::span<const double> dbar) {
    const int T = static_cast<int>(dbar.size());
    if (T < 1) throw std::invalid_argument("empty proportion vector");
    const double threshold = 1.0 / (T + 1);

    SparseProportions out;
    double sum = 0.0;
    for (int k = 0; k < T; ++k) {
        if (dbar[k] >= threshold) {
            out.topics.push_back(k);
            out.mass.push_back(dbar[k]);
            sum += dbar[k];
        }
    }
    if (out.topics.empty()) {
        // unreachable for a genuine distribution (its max is >= 1/T > 1/(T+1));
        // kept as a guard for denormalized input
        int arg = static_cast<int>(std::max_element(dbar.begin(), dbar.end()) - dbar.begin());
        out.topics.push_back(arg);
        out.mass.push_back(1.0);
        sum = 1.0;
    }
    for (double& m : out.mass) m /= sum;
    out.kappa = static_cast<int>(out.topics.size());
    return out;
}

std::vector<double> corpus_proportions(const Corpus& corpus, const TopicModel& model,
                                       int iterations, std::uint64_t seed,
                                       ProportionSource source) {
    const int T = model.num_topics;
    const bool size_match = static_cast<int>(corpus.size()) == model.num_docs;
    if (source == ProportionSource::Fitted && !size_match) {
        throw std::invalid_argument(
            "fitted proportions need the training corpus (document count mismatch)");
    }
    std::vector<double> out(corpus.size() * static_cast<std::size_t>(T));
    if (source == ProportionSource::Fitted ||
        (source == ProportionSource::Auto && size_match)) {
        std::copy(model.doc_topic.begin(), model.doc_topic.end(), out.begin());
        return out;
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::vector<double> p =
            infer_proportions(corpus.documents[i], model, iterations, mix_seed(seed, i));
        std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(i * T));
    }
    return out;
}

void save_topic_model(std::ostream& out, const TopicModel& model, const std::string& config) {
    out << "hott topic-model 1\n";
    write_header_line(out, "config", config);
    write_header_line(out, "num_topics", std::to_string(model.num_topics));
    write_header_line(out, "vocab_size", std::to_string(model.vocab_size));
    write_header_line(out, "num_docs", std::to_string(model.num_docs));
    write_header_line(out, "alpha", format_double(model.alpha));
    write_header_line(out, "beta", format_double(model.beta));
    write_header_line(out, "seed", std::to_string(model.seed));
    out << "matrices topic_word doc_topic\n";
    write_doubles_le(out, model.topic_word);
    write_doubles_le(out, model.doc_topic);
    if (!out) throw std::runtime_error("failed writing topic model");
}

TopicModel load_topic_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "hott topic-model 1") {
        throw std::runtime_error("not a topic model file (bad magic line)");
    }
    read_header_line(in, "config");
    TopicModel model;
    model.num_topics = std::stoi(read_header_line(in, "num_topics"));
    model.vocab_size = std::stoi(read_header_line(in, "vocab_size"));
    model.num_docs = std::stoi(read_header_line(in, "num_docs"));
    model.alpha = parse_double(read_header_line(in, "alpha"));
    model.beta = parse_double(read_header_line(in, "beta"));
    model.seed = std::stoull(read_header_line(in, "seed"));
    if (!std::getline(in, line) || line != "matrices topic_word doc_topic") {
        throw std::runtime_error("topic model: missing matrices marker");
    }
    if (model.num_topics < 2 || model.vocab_size < 1 || model.num_docs < 1) {
        throw std::runtime_error("topic model header has invalid dimensions");
    }
    model.topic_word.resize(static_cast<std::size_t>(model.num_topics) * model.vocab_size);
    model.doc_topic.resize(static_cast<std::size_t>(model.num_docs) * model.num_topics);
    read_doubles_le(in, model.topic_word);
    read_doubles_le(in, model.doc_topic);
    return model;
}

void save_topic_model_file(const std::string& path, const TopicModel& model,
                           const std::string& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_topic_model(out, model, config);
}

TopicModel load_topic_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open topic model file: " + path);
    return load_topic_model(in);
}

}  // namespace hott
