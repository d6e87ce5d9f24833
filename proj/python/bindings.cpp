// Python bindings for the document-distance core. Thin wrappers: heavy
// objects (corpora, models, cost matrices) stay opaque C++ types; matrices
// cross into numpy as copies.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hott/baselines.hpp"
#include "hott/corpus.hpp"
#include "hott/distances.hpp"
#include "hott/embeddings.hpp"
#include "hott/eval.hpp"
#include "hott/topics.hpp"
#include "hott/transport.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> matrix_array(const std::vector<double>& data, std::size_t rows,
                                 std::size_t cols) {
    py::array_t<double> out({rows, cols});
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

std::vector<double> vector_from(const py::array_t<double, py::array::c_style |
                                                              py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    return {arr.data(), arr.data() + arr.size()};
}

hott::Corpus corpus_from_pairs(const std::vector<std::pair<std::string, std::string>>& docs,
                               int min_df, int max_vocab, bool lowercase) {
    std::vector<hott::RawDocument> raw;
    raw.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        hott::RawDocument d;
        d.label = docs[i].first;
        d.tokens = hott::tokenize(docs[i].second, lowercase);
        d.id = std::to_string(i);
        raw.push_back(std::move(d));
    }
    auto built = hott::build_corpus(raw, min_df, max_vocab);
    return std::move(built.corpus);
}

hott::SplitMode parse_split_mode(const std::string& mode) {
    if (mode == "in-order") return hott::SplitMode::InOrder;
    if (mode == "shuffle") return hott::SplitMode::SeededShuffle;
    throw std::invalid_argument("split mode must be in-order or shuffle: " + mode);
}

hott::ProportionSource parse_source(const std::string& source) {
    if (source == "auto") return hott::ProportionSource::Auto;
    if (source == "fitted") return hott::ProportionSource::Fitted;
    if (source == "fold-in") return hott::ProportionSource::FoldIn;
    throw std::invalid_argument("proportion source must be auto, fitted, or fold-in: " + source);
}

hott::MetricDescriptor make_descriptor(const std::string& metric, int power, int truncation,
                                       int lsi_dim, const hott::TopicModel* model) {
    hott::MetricDescriptor d;
    d.name = metric;
    d.ground_power = power;
    d.truncation_k = truncation;
    if (d.name == "lsi" && lsi_dim <= 0 && model == nullptr)
        throw std::invalid_argument("metric lsi needs lsi_dim or a model");
    if (d.name == "lsi") d.lsi_dim = lsi_dim > 0 ? lsi_dim : model->num_topics;
    if (d.name == "cosine") d.vector_distance = "cosine";
    d.validate();
    return d;
}

hott::PairDistance make_pair_distance(const hott::MetricDescriptor& desc,
                                      const hott::Corpus& corpus,
                                      const hott::EmbeddingTable* table,
                                      const hott::TopicModel* model,
                                      const hott::TopicCostMatrix* costs, int infer_iterations,
                                      std::uint64_t infer_seed) {
    hott::PairDistance::Inputs in;
    if (desc.is_transport()) {
        if (table == nullptr)
            throw std::invalid_argument("metric " + desc.name + " needs an embedding table");
        in.table = table;
    } else if (desc.is_topic()) {
        if (model == nullptr || costs == nullptr)
            throw std::invalid_argument("metric " + desc.name +
                                        " needs a topic model and a topic cost matrix");
        in.topic_costs = costs;
        in.proportions = hott::corpus_proportions(corpus, *model, infer_iterations, infer_seed);
    } else if (desc.name == "lda") {
        if (model == nullptr) throw std::invalid_argument("metric lda needs a topic model");
        in.vectors = hott::corpus_proportions(corpus, *model, infer_iterations, infer_seed);
        in.vector_dim = model->num_topics;
    } else {
        hott::VectorParams params;
        params.lsi_dim = desc.lsi_dim;
        auto rep = hott::build_vectors(corpus, desc.name == "cosine" ? "nbow" : desc.name,
                                       params, model);
        in.vectors = std::move(rep.rows);
        in.vector_dim = rep.dim;
    }
    return hott::PairDistance(desc, corpus, std::move(in));
}

const hott::DocumentDistribution& doc_at(const hott::Corpus& corpus, std::size_t i) {
    if (i >= corpus.size()) throw std::out_of_range("document index out of range");
    return corpus.documents[i];
}

}  // namespace

PYBIND11_MODULE(_hott, m) {
    m.doc() = "hierarchical optimal topic transport over document corpora";

    py::class_<hott::Corpus>(m, "Corpus")
        .def_property_readonly("ids", [](const hott::Corpus& c) { return c.ids; })
        .def_property_readonly("labels", [](const hott::Corpus& c) { return c.labels; })
        .def_property_readonly("class_set", [](const hott::Corpus& c) { return c.class_set; })
        .def_property_readonly("vocabulary",
                               [](const hott::Corpus& c) { return c.vocabulary.words; })
        .def("__len__", [](const hott::Corpus& c) { return c.size(); })
        .def(
            "document",
            [](const hott::Corpus& c, std::size_t i) {
                const auto& d = doc_at(c, i);
                std::vector<std::pair<std::string, double>> out;
                for (std::size_t s = 0; s < d.support.size(); ++s)
                    out.emplace_back(c.vocabulary.words[static_cast<std::size_t>(d.support[s])],
                                     d.mass[s]);
                return out;
            },
            py::arg("i"), "normalized (word, mass) pairs of one document");

    py::class_<hott::EmbeddingTable>(m, "EmbeddingTable")
        .def_property_readonly("dimension", &hott::EmbeddingTable::dimension)
        .def_property_readonly("coverage", &hott::EmbeddingTable::coverage)
        .def_property_readonly("vocab_size", &hott::EmbeddingTable::vocab_size);

    py::class_<hott::TopicModel>(m, "TopicModel")
        .def_readonly("num_topics", &hott::TopicModel::num_topics)
        .def_readonly("vocab_size", &hott::TopicModel::vocab_size)
        .def_readonly("num_docs", &hott::TopicModel::num_docs)
        .def_readonly("alpha", &hott::TopicModel::alpha)
        .def_readonly("beta", &hott::TopicModel::beta)
        .def_readonly("seed", &hott::TopicModel::seed)
        .def_property_readonly("topic_word",
                               [](const hott::TopicModel& t) {
                                   return matrix_array(
                                       t.topic_word, static_cast<std::size_t>(t.num_topics),
                                       static_cast<std::size_t>(t.vocab_size));
                               })
        .def_property_readonly("doc_topic", [](const hott::TopicModel& t) {
            return matrix_array(t.doc_topic, static_cast<std::size_t>(t.num_docs),
                                static_cast<std::size_t>(t.num_topics));
        });

    py::class_<hott::TopicCostMatrix>(m, "TopicCostMatrix")
        .def_readonly("num_topics", &hott::TopicCostMatrix::num_topics)
        .def_readonly("truncation_k", &hott::TopicCostMatrix::truncation_k)
        .def_readonly("ground_power", &hott::TopicCostMatrix::ground_power)
        .def_property_readonly("values", [](const hott::TopicCostMatrix& c) {
            return matrix_array(c.entries, static_cast<std::size_t>(c.num_topics),
                                static_cast<std::size_t>(c.num_topics));
        });

    py::class_<hott::DistanceMatrix>(m, "DistanceMatrix")
        .def_readonly("metric", &hott::DistanceMatrix::metric)
        .def_readonly("ids", &hott::DistanceMatrix::ids)
        .def_readonly("labels", &hott::DistanceMatrix::labels)
        .def("__len__", [](const hott::DistanceMatrix& d) { return d.n; })
        .def_property_readonly("values",
                               [](const hott::DistanceMatrix& d) {
                                   return matrix_array(d.values, static_cast<std::size_t>(d.n),
                                                       static_cast<std::size_t>(d.n));
                               })
        .def_static(
            "from_array",
            [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
               const std::string& metric) {
                if (values.ndim() != 2 || values.shape(0) != values.shape(1))
                    throw std::invalid_argument("expected a square 2-d array");
                hott::DistanceMatrix dm;
                dm.n = static_cast<int>(values.shape(0));
                dm.metric = metric;
                dm.values.assign(values.data(), values.data() + values.size());
                for (int i = 0; i < dm.n; ++i) {
                    dm.ids.push_back(std::to_string(i));
                    dm.labels.emplace_back();
                }
                return dm;
            },
            py::arg("values"), py::arg("metric") = "");

    m.def("build_corpus", &corpus_from_pairs, py::arg("documents"), py::arg("min_df") = 1,
          py::arg("max_vocab") = 1 << 30, py::arg("lowercase") = true,
          "build a corpus from (label, text) pairs");
    m.def("load_corpus", &hott::load_corpus_file, py::arg("path"));
    m.def(
        "save_corpus",
        [](const hott::Corpus& corpus, const std::string& path, const std::string& config) {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open corpus file: " + path);
            hott::save_corpus(out, corpus, config);
        },
        py::arg("corpus"), py::arg("path"), py::arg("config") = "");
    m.def(
        "split_corpus",
        [](const hott::Corpus& corpus, double train_fraction, const std::string& mode,
           std::uint64_t seed) {
            return hott::split_corpus(corpus, train_fraction, parse_split_mode(mode), seed);
        },
        py::arg("corpus"), py::arg("train_fraction"), py::arg("mode") = "in-order",
        py::arg("seed") = 0);

    m.def(
        "load_embeddings",
        [](const std::string& path, const hott::Corpus& corpus) {
            return hott::load_embeddings_file(path, corpus.vocabulary);
        },
        py::arg("path"), py::arg("corpus"));

    m.def(
        "fit_lda",
        [](const hott::Corpus& corpus, int num_topics, std::optional<double> alpha, double beta,
           int iterations, std::uint64_t seed) {
            double a = alpha.value_or(hott::default_alpha(num_topics));
            py::gil_scoped_release release;
            return hott::fit_lda(corpus, num_topics, a, beta, iterations, seed);
        },
        py::arg("corpus"), py::arg("num_topics"), py::arg("alpha") = std::optional<double>(),
        py::arg("beta") = hott::kDefaultBeta, py::arg("iterations") = 100, py::arg("seed") = 0);
    m.def("load_topic_model", &hott::load_topic_model_file, py::arg("path"));
    m.def("save_topic_model", &hott::save_topic_model_file, py::arg("path"), py::arg("model"),
          py::arg("config") = "");

    m.def(
        "corpus_proportions",
        [](const hott::Corpus& corpus, const hott::TopicModel& model, int iterations,
           std::uint64_t seed, const std::string& source) {
            auto src = parse_source(source);
            std::vector<double> rows;
            {
                py::gil_scoped_release release;
                rows = hott::corpus_proportions(corpus, model, iterations, seed, src);
            }
            return matrix_array(rows, corpus.size(),
                                static_cast<std::size_t>(model.num_topics));
        },
        py::arg("corpus"), py::arg("model"), py::arg("iterations") = 50, py::arg("seed") = 0,
        py::arg("source") = "auto",
        "topic proportions for every document, row-major (n, num_topics)");

    m.def(
        "topic_costs",
        [](const hott::TopicModel& model, const hott::EmbeddingTable& table, int truncation,
           int power) {
            py::gil_scoped_release release;
            return hott::topic_cost_matrix(model, table, truncation, power);
        },
        py::arg("model"), py::arg("table"), py::arg("truncation") = 20, py::arg("power") = 1);
    m.def("load_topic_costs", &hott::load_topic_costs_file, py::arg("path"));
    m.def("save_topic_costs", &hott::save_topic_costs_file, py::arg("path"), py::arg("costs"),
          py::arg("config") = "");

    m.def(
        "wmd",
        [](const hott::Corpus& corpus, std::size_t i, std::size_t j,
           const hott::EmbeddingTable& table, int power) {
            return hott::wmd(doc_at(corpus, i), doc_at(corpus, j), table, power);
        },
        py::arg("corpus"), py::arg("i"), py::arg("j"), py::arg("table"), py::arg("power") = 1);
    m.def(
        "rwmd",
        [](const hott::Corpus& corpus, std::size_t i, std::size_t j,
           const hott::EmbeddingTable& table, int power) {
            return hott::rwmd(doc_at(corpus, i), doc_at(corpus, j), table, power);
        },
        py::arg("corpus"), py::arg("i"), py::arg("j"), py::arg("table"), py::arg("power") = 1);
    m.def(
        "hott_distance",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p1,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& p2,
           const hott::TopicCostMatrix& costs, bool truncate) {
            auto v1 = vector_from(p1);
            auto v2 = vector_from(p2);
            return hott::hott_distance(v1, v2, costs, truncate);
        },
        py::arg("p1"), py::arg("p2"), py::arg("costs"), py::arg("truncate") = true,
        "topic-level transport between two proportion vectors");

    m.def(
        "pairwise",
        [](const hott::Corpus& corpus, const std::string& metric,
           const hott::EmbeddingTable* table, const hott::TopicModel* model,
           const hott::TopicCostMatrix* costs, int power, int truncation, int lsi_dim,
           int infer_iterations, std::uint64_t infer_seed, int workers) {
            auto desc = make_descriptor(metric, power, truncation, lsi_dim, model);
            py::gil_scoped_release release;
            auto pd = make_pair_distance(desc, corpus, table, model, costs, infer_iterations,
                                         infer_seed);
            return hott::pairwise_matrix(pd, corpus.ids, corpus.labels, workers);
        },
        py::arg("corpus"), py::arg("metric") = "hott", py::arg("table") = nullptr,
        py::arg("model") = nullptr, py::arg("costs") = nullptr, py::arg("power") = 1,
        py::arg("truncation") = 20, py::arg("lsi_dim") = 0, py::arg("infer_iterations") = 50,
        py::arg("infer_seed") = 0, py::arg("workers") = 1,
        "all-pairs distance matrix of one corpus under one metric");
    m.def("load_distance_matrix", &hott::load_distance_matrix_file, py::arg("path"));
    m.def("save_distance_matrix", &hott::save_distance_matrix_file, py::arg("path"),
          py::arg("matrix"), py::arg("config") = "");

    m.def(
        "knn_errors",
        [](const hott::Corpus& train, const hott::Corpus& test, const std::string& metric,
           const hott::EmbeddingTable* table, const hott::TopicModel* model,
           const hott::TopicCostMatrix* costs, const std::vector<int>& ks, int power,
           int truncation, int lsi_dim, int infer_iterations, std::uint64_t infer_seed) {
            auto desc = make_descriptor(metric, power, truncation, lsi_dim, model);
            hott::CrossMetric::Config config;
            config.table = table;
            config.model = model;
            config.topic_costs = costs;
            config.infer_iterations = infer_iterations;
            config.infer_seed = infer_seed;
            hott::KnnReport report;
            {
                py::gil_scoped_release release;
                hott::CrossMetric cm(desc, train, test, config);
                report = hott::knn_evaluate(
                    [&cm](std::size_t t, std::size_t r) { return cm(t, r); }, train.labels,
                    test.labels, ks, desc.to_string());
            }
            py::dict out;
            out["metric"] = report.metric;
            out["ks"] = report.ks;
            out["errors"] = report.errors;
            return out;
        },
        py::arg("train"), py::arg("test"), py::arg("metric") = "hott",
        py::arg("table") = nullptr, py::arg("model") = nullptr, py::arg("costs") = nullptr,
        py::arg("ks") = std::vector<int>{1}, py::arg("power") = 1, py::arg("truncation") = 20,
        py::arg("lsi_dim") = 0, py::arg("infer_iterations") = 50, py::arg("infer_seed") = 0,
        "k-nearest-neighbor test error for each requested k");

    m.def(
        "mantel",
        [](const hott::DistanceMatrix& a, const hott::DistanceMatrix& b, int permutations,
           std::uint64_t seed) {
            hott::MantelResult r;
            {
                py::gil_scoped_release release;
                r = hott::mantel(a, b, permutations, seed);
            }
            return std::make_pair(r.r, r.p);
        },
        py::arg("a"), py::arg("b"), py::arg("permutations") = 999, py::arg("seed") = 0,
        "(r, p) of the Mantel permutation test between two distance matrices");
    m.def("frobenius_diff", &hott::frobenius_diff, py::arg("a"), py::arg("b"));

    m.def(
        "check_bounds",
        [](const hott::Corpus& corpus, const hott::TopicModel& model,
           const hott::EmbeddingTable& table, std::size_t i, std::size_t j,
           int infer_iterations, std::uint64_t infer_seed) {
            const auto& d1 = doc_at(corpus, i);
            const auto& d2 = doc_at(corpus, j);
            hott::BoundReport rep;
            {
                py::gil_scoped_release release;
                auto props =
                    hott::corpus_proportions(corpus, model, infer_iterations, infer_seed);
                auto T = static_cast<std::size_t>(model.num_topics);
                std::span<const double> p1{props.data() + i * T, T};
                std::span<const double> p2{props.data() + j * T, T};
                rep = hott::check_bounds(d1, d2, p1, p2, model, table);
            }
            py::dict out;
            out["rwmd"] = rep.rwmd_value;
            out["wmd"] = rep.wmd_value;
            out["hofft"] = rep.hofft_value;
            out["mix_w1"] = rep.mix_w1;
            out["kl1"] = rep.kl1;
            out["kl2"] = rep.kl2;
            out["diameter"] = rep.diameter;
            out["hausdorff"] = rep.hausdorff_value;
            out["residual_rwmd_wmd"] = rep.residual_rwmd_wmd;
            out["residual_rwmd_hausdorff"] = rep.residual_rwmd_hausdorff;
            out["residual_mix_hofft"] = rep.residual_mix_hofft;
            out["residual_combined"] = rep.residual_combined;
            return out;
        },
        py::arg("corpus"), py::arg("model"), py::arg("table"), py::arg("i"), py::arg("j"),
        py::arg("infer_iterations") = 50, py::arg("infer_seed") = 0,
        "lower/upper bound chain diagnostics for one document pair");
}
