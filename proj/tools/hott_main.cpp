// Command-line front end: ingest, fit-lda, topic-costs, dist, knn, mantel,
// bounds, bench. Every artifact embeds a canonical config line (workers are
// deliberately excluded so reruns are byte-identical regardless of
// parallelism).
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hott/baselines.hpp"
#include "hott/container_io.hpp"
#include "hott/distances.hpp"
#include "hott/eval.hpp"
#include "hott/rng.hpp"

namespace {

std::string kv(const std::string& key, const std::string& value) { return key + "=" + value; }
std::string kv(const std::string& key, double value) {
    return key + "=" + hott::format_double(value);
}
std::string kv(const std::string& key, std::int64_t value) {
    return key + "=" + std::to_string(value);
}

std::string join(const std::string& subcommand, const std::vector<std::string>& parts) {
    std::string line = subcommand;
    for (const auto& p : parts) line += " " + p;
    return line;
}

// "5" | "1,3,9" | "1..19" | "1..19 odd" (colon also accepted before the
// qualifier). Values ascend and duplicates collapse.
std::vector<int> parse_k_range(std::string text) {
    for (char& c : text)
        if (c == ':') c = ' ';
    std::istringstream in(text);
    std::string head, qualifier;
    in >> head >> qualifier;
    if (head.empty()) throw std::invalid_argument("empty k range");

    std::vector<int> ks;
    auto dots = head.find("..");
    if (dots != std::string::npos) {
        int lo = std::stoi(head.substr(0, dots));
        int hi = std::stoi(head.substr(dots + 2));
        if (lo < 1 || hi < lo) throw std::invalid_argument("bad k range: " + text);
        bool odd_only = qualifier == "odd";
        bool even_only = qualifier == "even";
        if (!qualifier.empty() && !odd_only && !even_only) {
            throw std::invalid_argument("unknown k-range qualifier: " + qualifier);
        }
        for (int k = lo; k <= hi; ++k) {
            if (odd_only && k % 2 == 0) continue;
            if (even_only && k % 2 == 1) continue;
            ks.push_back(k);
        }
    } else {
        std::istringstream list(head);
        std::string item;
        while (std::getline(list, item, ',')) ks.push_back(std::stoi(item));
    }
    if (ks.empty()) throw std::invalid_argument("k range selects no values: " + text);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

void write_report(const std::vector<std::string>& lines, const std::string& path) {
    for (const auto& l : lines) std::cout << l << "\n";
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    for (const auto& l : lines) out << l << "\n";
}

// Shared metric plumbing for dist / knn / bench.
struct MetricOptions {
    std::string metric = "hott";
    std::string embeddings_path;
    std::string model_path;
    std::string topic_costs_path;
    int power = 1;
    int truncation = 20;
    int lsi_dim = 0;
    int topics = 70;  // fallback lsi dimension when no model is supplied
    int infer_iterations = 50;
    std::uint64_t infer_seed = 0;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--metric", metric,
                        "wmd | wmd-t20 | rwmd | hott | hofft | nbow | tfidf | lsi | lda | cosine");
        cmd->add_option("--embeddings", embeddings_path, "word vector file (transport metrics)");
        cmd->add_option("--model", model_path, "fitted topic model file");
        cmd->add_option("--topic-costs", topic_costs_path, "topic cost matrix file");
        cmd->add_option("--power", power, "ground metric power, 1 or 2");
        cmd->add_option("--truncation", truncation, "document truncation for wmd-t20");
        cmd->add_option("--lsi-dim", lsi_dim, "lsi dimension (default: topic count)");
        cmd->add_option("--infer-iterations", infer_iterations,
                        "fold-in sweeps for held-out proportions");
        cmd->add_option("--infer-seed", infer_seed, "seed for fold-in inference");
    }

    hott::MetricDescriptor descriptor(const hott::TopicModel* model) const {
        hott::MetricDescriptor d;
        d.name = metric;
        d.ground_power = power;
        d.truncation_k = truncation;
        if (d.name == "lsi") {
            d.lsi_dim = lsi_dim > 0 ? lsi_dim : (model != nullptr ? model->num_topics : topics);
        }
        if (d.name == "cosine") d.vector_distance = "cosine";
        d.validate();
        return d;
    }

    std::vector<std::string> config_parts(const hott::MetricDescriptor& d) const {
        std::vector<std::string> parts = {kv("metric", d.name)};
        if (d.is_transport() || d.is_topic()) {
            parts.push_back(kv("power", std::int64_t{d.ground_power}));
        }
        if (d.name == "wmd-t20") parts.push_back(kv("truncation", std::int64_t{d.truncation_k}));
        if (d.name == "lsi") parts.push_back(kv("lsi_dim", std::int64_t{d.lsi_dim}));
        if (!embeddings_path.empty()) parts.push_back(kv("embeddings", embeddings_path));
        if (!model_path.empty()) parts.push_back(kv("model", model_path));
        if (!topic_costs_path.empty()) parts.push_back(kv("topic_costs", topic_costs_path));
        if (d.is_topic() || d.name == "lda") {
            parts.push_back(kv("infer_iterations", std::int64_t{infer_iterations}));
            parts.push_back(kv("infer_seed", static_cast<std::int64_t>(infer_seed)));
        }
        return parts;
    }
};

struct LoadedInputs {
    std::optional<hott::EmbeddingTable> table;
    std::optional<hott::TopicModel> model;
    std::optional<hott::TopicCostMatrix> costs;
};

LoadedInputs load_metric_inputs(const MetricOptions& opts, const hott::Vocabulary& vocab,
                                const std::string& subcommand) {
    LoadedInputs li;
    hott::MetricDescriptor probe;
    probe.name = opts.metric;
    probe.validate();

    if (!opts.model_path.empty()) li.model = hott::load_topic_model_file(opts.model_path);

    if (probe.is_transport()) {
        if (opts.embeddings_path.empty()) {
            throw std::runtime_error(subcommand + " --metric " + opts.metric +
                                     " needs --embeddings <file> for the ground metric");
        }
        li.table = hott::load_embeddings_file(opts.embeddings_path, vocab);
    }
    if (probe.is_topic()) {
        if (opts.topic_costs_path.empty()) {
            throw std::runtime_error(subcommand + " --metric " + opts.metric +
                                     " needs --topic-costs <file>; build one with the "
                                     "topic-costs subcommand");
        }
        if (!li.model) {
            throw std::runtime_error(subcommand + " --metric " + opts.metric +
                                     " needs --model <file> for topic proportions; fit one "
                                     "with the fit-lda subcommand");
        }
        li.costs = hott::load_topic_costs_file(opts.topic_costs_path);
        if (li.costs->num_topics != li.model->num_topics) {
            throw std::runtime_error("topic cost matrix has " +
                                     std::to_string(li.costs->num_topics) +
                                     " topics but the model has " +
                                     std::to_string(li.model->num_topics));
        }
    }
    if (probe.name == "lda" && !li.model) {
        throw std::runtime_error(subcommand + " --metric lda needs --model <file>; fit one with "
                                              "the fit-lda subcommand");
    }
    return li;
}

// PairDistance inputs for a single corpus (dist / bench).
hott::PairDistance make_pair_distance(const hott::MetricDescriptor& desc,
                                      const hott::Corpus& corpus, const LoadedInputs& li,
                                      const MetricOptions& opts) {
    hott::PairDistance::Inputs in;
    if (desc.is_transport()) {
        in.table = &*li.table;
    } else if (desc.is_topic()) {
        in.topic_costs = &*li.costs;
        in.proportions = hott::corpus_proportions(corpus, *li.model, opts.infer_iterations,
                                                  opts.infer_seed);
    } else if (desc.name == "lda") {
        in.vectors = hott::corpus_proportions(corpus, *li.model, opts.infer_iterations,
                                              opts.infer_seed);
        in.vector_dim = li.model->num_topics;
    } else {
        hott::VectorParams params;
        params.lsi_dim = desc.lsi_dim;
        hott::VectorRepresentation rep = hott::build_vectors(
            corpus, desc.name == "cosine" ? "nbow" : desc.name, params,
            li.model ? &*li.model : nullptr);
        in.vectors = std::move(rep.rows);
        in.vector_dim = rep.dim;
    }
    return hott::PairDistance(desc, corpus, std::move(in));
}

// ---------------------------------------------------------------- ingest --

int run_ingest(const std::string& input, const std::string& output, int min_df, int max_vocab,
               bool keep_case, double train_fraction, const std::string& split_mode,
               std::uint64_t split_seed, const std::string& train_output,
               const std::string& test_output, const std::string& vocab_output) {
    if (output.empty() && (train_output.empty() || test_output.empty())) {
        throw std::runtime_error(
            "ingest needs --output, or both --train-output and --test-output");
    }
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open input file: " + input);
    std::vector<hott::RawDocument> raw = hott::read_labeled_lines(in, !keep_case);
    hott::CorpusBuildResult built = hott::build_corpus(raw, min_df, max_vocab);

    std::vector<std::string> parts = {
        kv("input", input),
        kv("min_df", std::int64_t{min_df}),
        kv("max_vocab", std::int64_t{max_vocab}),
        kv("lowercase", keep_case ? std::string("no") : std::string("yes")),
    };
    if (train_fraction > 0.0) {
        parts.push_back(kv("train_fraction", train_fraction));
        parts.push_back(kv("split_mode", split_mode));
        parts.push_back(kv("split_seed", static_cast<std::int64_t>(split_seed)));
    }
    const std::string config = join("ingest", parts);

    auto save = [&](const std::string& path, const hott::Corpus& corpus) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        hott::save_corpus(out, corpus, config);
    };

    if (!output.empty()) save(output, built.corpus);
    if (train_fraction > 0.0) {
        if (train_output.empty() || test_output.empty()) {
            throw std::runtime_error(
                "--train-fraction needs both --train-output and --test-output");
        }
        hott::SplitMode mode;
        if (split_mode == "in-order") {
            mode = hott::SplitMode::InOrder;
        } else if (split_mode == "shuffle") {
            mode = hott::SplitMode::SeededShuffle;
        } else {
            throw std::runtime_error("unknown --split-mode: " + split_mode +
                                     " (expected in-order or shuffle)");
        }
        auto [train, test] = hott::split_corpus(built.corpus, train_fraction, mode, split_seed);
        save(train_output, train);
        save(test_output, test);
    }
    if (!vocab_output.empty()) {
        std::ofstream out(vocab_output);
        if (!out) throw std::runtime_error("cannot open vocabulary file: " + vocab_output);
        hott::export_vocabulary(out, built.corpus.vocabulary);
    }
    std::cout << kv("documents", static_cast<std::int64_t>(built.corpus.size())) << "\n"
              << kv("vocabulary", std::int64_t{built.corpus.vocabulary.size()}) << "\n"
              << kv("classes", static_cast<std::int64_t>(built.corpus.class_set.size())) << "\n"
              << kv("dropped", static_cast<std::int64_t>(built.dropped_documents)) << "\n";
    return 0;
}

// --------------------------------------------------------------- fit-lda --

int run_fit_lda(const std::string& corpus_path, const std::string& output, int topics,
                double alpha, double beta, int iterations, std::uint64_t seed) {
    hott::Corpus corpus = hott::load_corpus_file(corpus_path);
    if (alpha <= 0.0) alpha = hott::default_alpha(topics);
    const std::string config = join("fit-lda", {
                                                   kv("corpus", corpus_path),
                                                   kv("topics", std::int64_t{topics}),
                                                   kv("alpha", alpha),
                                                   kv("beta", beta),
                                                   kv("iterations", std::int64_t{iterations}),
                                                   kv("seed", static_cast<std::int64_t>(seed)),
                                               });
    hott::TopicModel model = hott::fit_lda(corpus, topics, alpha, beta, iterations, seed);
    hott::save_topic_model_file(output, model, config);
    std::cout << kv("topics", std::int64_t{model.num_topics}) << "\n"
              << kv("vocabulary", std::int64_t{model.vocab_size}) << "\n"
              << kv("documents", std::int64_t{model.num_docs}) << "\n";
    return 0;
}

// ----------------------------------------------------------- topic-costs --

int run_topic_costs(const std::string& corpus_path, const std::string& model_path,
                    const std::string& embeddings_path, const std::string& output,
                    int truncation, int power) {
    hott::Corpus corpus = hott::load_corpus_file(corpus_path);
    hott::TopicModel model = hott::load_topic_model_file(model_path);
    if (model.vocab_size != corpus.vocabulary.size()) {
        throw std::runtime_error("model vocabulary size does not match the corpus");
    }
    hott::EmbeddingTable table = hott::load_embeddings_file(embeddings_path, corpus.vocabulary);
    const std::string config = join("topic-costs", {
                                                       kv("corpus", corpus_path),
                                                       kv("model", model_path),
                                                       kv("embeddings", embeddings_path),
                                                       kv("truncation", std::int64_t{truncation}),
                                                       kv("power", std::int64_t{power}),
                                                   });
    hott::TopicCostMatrix costs = hott::topic_cost_matrix(model, table, truncation, power);
    hott::save_topic_costs_file(output, costs, config);
    std::cout << kv("topics", std::int64_t{costs.num_topics}) << "\n"
              << kv("truncation", std::int64_t{costs.truncation_k}) << "\n";
    return 0;
}

// ------------------------------------------------------------------ dist --

int run_dist(const std::string& corpus_path, const std::string& output, const std::string& csv,
             int workers, const MetricOptions& opts) {
    hott::Corpus corpus = hott::load_corpus_file(corpus_path);
    LoadedInputs li = load_metric_inputs(opts, corpus.vocabulary, "dist");
    hott::MetricDescriptor desc = opts.descriptor(li.model ? &*li.model : nullptr);

    std::vector<std::string> parts = {kv("corpus", corpus_path)};
    for (auto& p : opts.config_parts(desc)) parts.push_back(p);
    const std::string config = join("dist", parts);

    hott::PairDistance pd = make_pair_distance(desc, corpus, li, opts);
    hott::PairwiseStats stats;
    hott::DistanceMatrix dm = hott::pairwise_matrix(pd, corpus.ids, corpus.labels, workers,
                                                    &stats);
    hott::save_distance_matrix_file(output, dm, config);
    if (!csv.empty()) {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot open csv file: " + csv);
        hott::export_distance_csv(out, dm);
    }
    std::cout << kv("documents", std::int64_t{dm.n}) << "\n"
              << kv("pairs", static_cast<std::int64_t>(stats.pair_count)) << "\n"
              << kv("seconds", stats.wall_seconds) << "\n"
              << kv("pairs_per_second", stats.pairs_per_second) << "\n";
    return 0;
}

// ------------------------------------------------------------------- knn --

int run_knn(const std::string& train_path, const std::string& test_path,
            const std::string& k_range, const std::string& output, const std::string& csv,
            const MetricOptions& opts) {
    hott::Corpus train = hott::load_corpus_file(train_path);
    hott::Corpus test = hott::load_corpus_file(test_path);
    std::vector<int> ks = parse_k_range(k_range);
    LoadedInputs li = load_metric_inputs(opts, train.vocabulary, "knn");
    hott::MetricDescriptor desc = opts.descriptor(li.model ? &*li.model : nullptr);

    hott::CrossMetric::Config config;
    config.table = li.table ? &*li.table : nullptr;
    config.model = li.model ? &*li.model : nullptr;
    config.topic_costs = li.costs ? &*li.costs : nullptr;
    config.infer_iterations = opts.infer_iterations;
    config.infer_seed = opts.infer_seed;
    hott::CrossMetric cm(desc, train, test, config);
    auto metric = [&cm](std::size_t t, std::size_t r) { return cm(t, r); };
    hott::KnnReport report = hott::knn_evaluate(metric, train.labels, test.labels, ks,
                                                desc.to_string());

    std::vector<std::string> parts = {kv("train", train_path), kv("test", test_path),
                                      kv("k", k_range)};
    for (auto& p : opts.config_parts(desc)) parts.push_back(p);

    std::vector<std::string> lines = {kv("config", join("knn", parts)),
                                      kv("metric", report.metric),
                                      kv("train_size", static_cast<std::int64_t>(train.size())),
                                      kv("test_size", static_cast<std::int64_t>(test.size()))};
    double best_err = report.errors[0];
    int best_k = report.ks[0];
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
        lines.push_back(kv("error_k" + std::to_string(report.ks[i]), report.errors[i]));
        if (report.errors[i] < best_err) {
            best_err = report.errors[i];
            best_k = report.ks[i];
        }
    }
    lines.push_back(kv("best_k", std::int64_t{best_k}));
    lines.push_back(kv("best_error", best_err));
    write_report(lines, output);
    if (!csv.empty()) {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot open csv file: " + csv);
        out << "k,error\n";
        for (std::size_t i = 0; i < report.ks.size(); ++i) {
            out << report.ks[i] << "," << hott::format_double(report.errors[i]) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------- mantel --

int run_mantel(const std::string& a_path, const std::string& b_path, int permutations,
               std::uint64_t seed, const std::string& output) {
    hott::DistanceMatrix a = hott::load_distance_matrix_file(a_path);
    hott::DistanceMatrix b = hott::load_distance_matrix_file(b_path);
    hott::MantelResult res = hott::mantel(a, b, permutations, seed);
    double frob = hott::frobenius_diff(a, b);
    const std::string config = join("mantel", {
                                                  kv("matrix_a", a_path),
                                                  kv("matrix_b", b_path),
                                                  kv("permutations", std::int64_t{permutations}),
                                                  kv("seed", static_cast<std::int64_t>(seed)),
                                              });
    write_report({kv("config", config), kv("n", std::int64_t{a.n}),
                  kv("metric_a", a.metric), kv("metric_b", b.metric), kv("r", res.r),
                  kv("p", res.p), kv("frobenius", frob)},
                 output);
    return 0;
}

// ---------------------------------------------------------------- bounds --

int run_bounds(const std::string& corpus_path, const std::string& model_path,
               const std::string& embeddings_path, int pairs, std::uint64_t seed,
               int infer_iterations, std::uint64_t infer_seed, double tolerance,
               const std::string& output, const std::string& csv) {
    hott::Corpus corpus = hott::load_corpus_file(corpus_path);
    hott::TopicModel model = hott::load_topic_model_file(model_path);
    if (model.vocab_size != corpus.vocabulary.size()) {
        throw std::runtime_error("model vocabulary size does not match the corpus");
    }
    hott::EmbeddingTable table = hott::load_embeddings_file(embeddings_path, corpus.vocabulary);
    if (corpus.size() < 2) throw std::runtime_error("bounds needs at least two documents");

    std::vector<double> props =
        hott::corpus_proportions(corpus, model, infer_iterations, infer_seed);
    hott::BoundChecker checker(model, table);

    // sample distinct unordered pairs (or take all of them when few)
    const std::size_t n = corpus.size();
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    const std::size_t all = n * (n - 1) / 2;
    if (static_cast<std::size_t>(pairs) >= all) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) chosen.emplace_back(i, j);
    } else {
        std::mt19937_64 rng(seed);
        while (chosen.size() < static_cast<std::size_t>(pairs)) {
            std::size_t i = static_cast<std::size_t>(hott::uniform_below(rng, static_cast<int>(n)));
            std::size_t j =
                static_cast<std::size_t>(hott::uniform_below(rng, static_cast<int>(n) - 1));
            if (j >= i) ++j;
            if (i > j) std::swap(i, j);
            chosen.emplace_back(i, j);
        }
    }

    const int T = model.num_topics;
    double max_a = -1e300, max_b = -1e300, max_c = -1e300, max_d = -1e300;
    std::int64_t violations = 0;
    std::ofstream csv_out;
    if (!csv.empty()) {
        csv_out.open(csv);
        if (!csv_out) throw std::runtime_error("cannot open csv file: " + csv);
        csv_out << "i,j,rwmd,wmd,hofft,mix_w1,kl1,kl2,residual_rwmd_wmd,"
                   "residual_rwmd_hausdorff,residual_mix_hofft,residual_combined\n";
    }
    for (auto [i, j] : chosen) {
        std::span<const double> pi{props.data() + i * T, static_cast<std::size_t>(T)};
        std::span<const double> pj{props.data() + j * T, static_cast<std::size_t>(T)};
        hott::BoundReport rep = checker.check(corpus.documents[i], corpus.documents[j], pi, pj);
        max_a = std::max(max_a, rep.residual_rwmd_wmd);
        max_b = std::max(max_b, rep.residual_rwmd_hausdorff);
        max_c = std::max(max_c, rep.residual_mix_hofft);
        max_d = std::max(max_d, rep.residual_combined);
        if (rep.residual_rwmd_wmd > tolerance || rep.residual_rwmd_hausdorff > tolerance ||
            rep.residual_mix_hofft > tolerance || rep.residual_combined > tolerance) {
            ++violations;
        }
        if (csv_out.is_open()) {
            csv_out << i << "," << j;
            for (double v : {rep.rwmd_value, rep.wmd_value, rep.hofft_value, rep.mix_w1, rep.kl1,
                             rep.kl2, rep.residual_rwmd_wmd, rep.residual_rwmd_hausdorff,
                             rep.residual_mix_hofft, rep.residual_combined}) {
                csv_out << "," << hott::format_double(v);
            }
            csv_out << "\n";
        }
    }

    const std::string config =
        join("bounds", {kv("corpus", corpus_path), kv("model", model_path),
                        kv("embeddings", embeddings_path), kv("pairs", std::int64_t{pairs}),
                        kv("seed", static_cast<std::int64_t>(seed)),
                        kv("infer_iterations", std::int64_t{infer_iterations}),
                        kv("infer_seed", static_cast<std::int64_t>(infer_seed)),
                        kv("tolerance", tolerance)});
    write_report(
        {kv("config", config), kv("pairs", static_cast<std::int64_t>(chosen.size())),
         kv("max_residual_rwmd_wmd", max_a), kv("max_residual_rwmd_hausdorff", max_b),
         kv("max_residual_mix_hofft", max_c), kv("max_residual_combined", max_d),
         kv("tolerance", tolerance), kv("violations", violations)},
        output);
    return violations == 0 ? 0 : 1;
}

// ----------------------------------------------------------------- bench --

int run_bench(const std::string& corpus_path, std::int64_t pairs, std::int64_t warmup,
              std::uint64_t seed, const std::string& output, const MetricOptions& opts) {
    hott::Corpus corpus = hott::load_corpus_file(corpus_path);
    LoadedInputs li = load_metric_inputs(opts, corpus.vocabulary, "bench");
    hott::MetricDescriptor desc = opts.descriptor(li.model ? &*li.model : nullptr);
    hott::PairDistance pd = make_pair_distance(desc, corpus, li, opts);
    hott::ThroughputReport rep = hott::benchmark_throughput(
        pd, static_cast<std::size_t>(pairs), static_cast<std::size_t>(warmup), seed);

    std::vector<std::string> parts = {kv("corpus", corpus_path), kv("pairs", pairs),
                                      kv("warmup", warmup),
                                      kv("seed", static_cast<std::int64_t>(seed))};
    for (auto& p : opts.config_parts(desc)) parts.push_back(p);
    write_report({kv("config", join("bench", parts)), kv("metric", rep.metric),
                  kv("pairs", static_cast<std::int64_t>(rep.pairs)), kv("seconds", rep.seconds),
                  kv("pairs_per_second", rep.pairs_per_second)},
                 output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"document distance toolkit: topic transport and friends"};
    app.require_subcommand(1);

    // ingest
    std::string in_input, in_output, in_train_out, in_test_out, in_vocab_out;
    std::string in_split_mode = "in-order";
    int in_min_df = 1, in_max_vocab = 1000000;
    bool in_keep_case = false;
    double in_train_fraction = 0.0;
    std::uint64_t in_split_seed = 0;
    auto* ingest = app.add_subcommand("ingest", "labeled lines -> corpus file(s)");
    ingest->add_option("--input", in_input, "label<TAB>text lines")->required();
    ingest->add_option("--output", in_output, "corpus file for the whole input");
    ingest->add_option("--min-df", in_min_df, "minimum document frequency");
    ingest->add_option("--max-vocab", in_max_vocab, "vocabulary size cap");
    ingest->add_flag("--keep-case", in_keep_case, "skip lowercasing");
    ingest->add_option("--train-fraction", in_train_fraction, "enable a train/test split");
    ingest->add_option("--split-mode", in_split_mode, "in-order | shuffle");
    ingest->add_option("--split-seed", in_split_seed, "seed for shuffle splits");
    ingest->add_option("--train-output", in_train_out, "train corpus file");
    ingest->add_option("--test-output", in_test_out, "test corpus file");
    ingest->add_option("--vocab-output", in_vocab_out, "plain-text vocabulary dump");

    // fit-lda
    std::string fl_corpus, fl_output;
    int fl_topics = 70, fl_iterations = 1000;
    double fl_alpha = 0.0, fl_beta = hott::kDefaultBeta;
    std::uint64_t fl_seed = 0;
    auto* fit = app.add_subcommand("fit-lda", "corpus -> topic model");
    fit->add_option("--corpus", fl_corpus)->required();
    fit->add_option("--output", fl_output)->required();
    fit->add_option("--topics", fl_topics, "number of topics");
    fit->add_option("--alpha", fl_alpha, "document-topic prior (default 50/topics)");
    fit->add_option("--beta", fl_beta, "topic-word prior");
    fit->add_option("--iterations", fl_iterations, "Gibbs sweeps");
    fit->add_option("--seed", fl_seed);

    // topic-costs
    std::string tc_corpus, tc_model, tc_embeddings, tc_output;
    int tc_truncation = 20, tc_power = 1;
    auto* tc = app.add_subcommand("topic-costs", "model + embeddings -> topic cost matrix");
    tc->add_option("--corpus", tc_corpus)->required();
    tc->add_option("--model", tc_model)->required();
    tc->add_option("--embeddings", tc_embeddings)->required();
    tc->add_option("--output", tc_output)->required();
    tc->add_option("--truncation", tc_truncation, "words kept per topic");
    tc->add_option("--power", tc_power, "ground metric power");

    // dist
    std::string d_corpus, d_output, d_csv;
    int d_workers = 1;
    MetricOptions d_opts;
    auto* dist = app.add_subcommand("dist", "corpus -> pairwise distance matrix");
    dist->add_option("--corpus", d_corpus)->required();
    dist->add_option("--output", d_output)->required();
    dist->add_option("--csv", d_csv, "also export a CSV copy");
    dist->add_option("--workers", d_workers, "parallel workers (result-invariant)");
    d_opts.add_flags(dist);
    dist->add_option("--topics", d_opts.topics, "lsi fallback dimension");

    // knn
    std::string k_train, k_test, k_range = "1..19 odd", k_output, k_csv;
    MetricOptions k_opts;
    auto* knn = app.add_subcommand("knn", "train/test corpora -> k-NN error report");
    knn->add_option("--train", k_train)->required();
    knn->add_option("--test", k_test)->required();
    knn->add_option("--k", k_range, "e.g. 5 | 1,3,9 | 1..19 odd");
    knn->add_option("--output", k_output, "report file (key=value lines)");
    knn->add_option("--csv", k_csv, "k,error table");
    k_opts.add_flags(knn);
    knn->add_option("--topics", k_opts.topics, "lsi fallback dimension");

    // mantel
    std::string m_a, m_b, m_output;
    int m_perms = 999;
    std::uint64_t m_seed = 0;
    auto* mantel = app.add_subcommand("mantel", "two distance matrices -> correlation report");
    mantel->add_option("--matrix-a", m_a)->required();
    mantel->add_option("--matrix-b", m_b)->required();
    mantel->add_option("--permutations", m_perms);
    mantel->add_option("--seed", m_seed);
    mantel->add_option("--output", m_output, "report file");

    // bounds
    std::string b_corpus, b_model, b_embeddings, b_output, b_csv;
    int b_pairs = 200, b_infer_iterations = 50;
    std::uint64_t b_seed = 0, b_infer_seed = 0;
    double b_tolerance = 1e-6;
    auto* bounds = app.add_subcommand("bounds", "verify the distance bound chain on sampled pairs");
    bounds->add_option("--corpus", b_corpus)->required();
    bounds->add_option("--model", b_model)->required();
    bounds->add_option("--embeddings", b_embeddings)->required();
    bounds->add_option("--pairs", b_pairs, "sampled document pairs");
    bounds->add_option("--seed", b_seed, "pair sampling seed");
    bounds->add_option("--infer-iterations", b_infer_iterations);
    bounds->add_option("--infer-seed", b_infer_seed);
    bounds->add_option("--tolerance", b_tolerance, "residual tolerance");
    bounds->add_option("--output", b_output, "report file");
    bounds->add_option("--csv", b_csv, "per-pair residual table");

    // bench
    std::string bn_corpus, bn_output;
    std::int64_t bn_pairs = 200, bn_warmup = 10;
    std::uint64_t bn_seed = 0;
    MetricOptions bn_opts;
    auto* bench = app.add_subcommand("bench", "single-worker throughput of one metric");
    bench->add_option("--corpus", bn_corpus)->required();
    bench->add_option("--pairs", bn_pairs, "timed pair evaluations");
    bench->add_option("--warmup", bn_warmup, "untimed warmup evaluations");
    bench->add_option("--seed", bn_seed, "pair sampling seed");
    bench->add_option("--output", bn_output, "report file");
    bn_opts.add_flags(bench);
    bench->add_option("--topics", bn_opts.topics, "lsi fallback dimension");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            return run_ingest(in_input, in_output, in_min_df, in_max_vocab, in_keep_case,
                              in_train_fraction, in_split_mode, in_split_seed, in_train_out,
                              in_test_out, in_vocab_out);
        }
        if (fit->parsed()) {
            return run_fit_lda(fl_corpus, fl_output, fl_topics, fl_alpha, fl_beta, fl_iterations,
                               fl_seed);
        }
        if (tc->parsed()) {
            return run_topic_costs(tc_corpus, tc_model, tc_embeddings, tc_output, tc_truncation,
                                   tc_power);
        }
        if (dist->parsed()) return run_dist(d_corpus, d_output, d_csv, d_workers, d_opts);
        if (knn->parsed()) return run_knn(k_train, k_test, k_range, k_output, k_csv, k_opts);
        if (mantel->parsed()) return run_mantel(m_a, m_b, m_perms, m_seed, m_output);
        if (bounds->parsed()) {
            return run_bounds(b_corpus, b_model, b_embeddings, b_pairs, b_seed,
                              b_infer_iterations, b_infer_seed, b_tolerance, b_output, b_csv);
        }
        if (bench->parsed()) {
            return run_bench(bn_corpus, bn_pairs, bn_warmup, bn_seed, bn_output, bn_opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
