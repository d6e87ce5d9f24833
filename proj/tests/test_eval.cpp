#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "hott/baselines.hpp"
#include "hott/eval.hpp"
#include "hott/rng.hpp"

namespace {

hott::Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::vector<hott::RawDocument> docs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        hott::RawDocument d;
        d.label = rows[i].first;
        d.tokens = hott::tokenize(rows[i].second);
        d.id = std::to_string(i);
        docs.push_back(std::move(d));
    }
    return hott::build_corpus(docs, 1, 1 << 20).corpus;
}

hott::EmbeddingTable random_table(int vocab_size, int dim, std::mt19937_64& rng) {
    hott::EmbeddingTable t(vocab_size, dim);
    std::vector<double> row(dim);
    for (int v = 0; v < vocab_size; ++v) {
        for (int d = 0; d < dim; ++d) row[d] = hott::uniform01(rng) * 4.0 - 2.0;
        t.set(v, row);
    }
    t.finalize_coverage();
    return t;
}

// distances between scalar positions, as a full matrix
hott::DistanceMatrix from_points(const std::vector<double>& pts) {
    hott::DistanceMatrix dm;
    dm.n = static_cast<int>(pts.size());
    dm.values.assign(pts.size() * pts.size(), 0.0);
    for (int i = 0; i < dm.n; ++i) {
        dm.ids.push_back("p" + std::to_string(i));
        dm.labels.push_back("-");
        for (int j = 0; j < dm.n; ++j) dm.at(i, j) = std::abs(pts[i] - pts[j]);
    }
    return dm;
}

// 1-d positions stand in for documents: the metric is |x_t - x_r|
std::function<double(std::size_t, std::size_t)> line_metric(const std::vector<double>& test,
                                                            const std::vector<double>& train) {
    return [&test, &train](std::size_t t, std::size_t r) { return std::abs(test[t] - train[r]); };
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("knn classifies separable clusters perfectly") {
    std::vector<double> train_x = {0.0, 1.0, 2.0, 10.0, 11.0, 12.0};
    std::vector<std::string> train_y = {"A", "A", "A", "B", "B", "B"};
    std::vector<double> test_x = {0.5, 11.5, 1.2};
    std::vector<std::string> test_y = {"A", "B", "A"};

    hott::KnnReport rep = hott::knn_evaluate(line_metric(test_x, train_x), train_y, test_y,
                                             {1, 3, 5}, "toy");
    CHECK(rep.metric == "toy");
    CHECK(rep.ks == std::vector<int>{1, 3, 5});
    for (double e : rep.errors) CHECK(e == 0.0);
}

TEST_CASE("knn majority overrides the single nearest neighbor") {
    std::vector<double> train_x = {0.0, 1.0, 1.1};
    std::vector<std::string> train_y = {"A", "B", "B"};
    std::vector<double> test_x = {0.1};
    std::vector<std::string> test_y = {"A"};

    hott::KnnReport rep =
        hott::knn_evaluate(line_metric(test_x, train_x), train_y, test_y, {1, 3});
    CHECK(rep.errors[0] == 0.0);  // nearest is A
    CHECK(rep.errors[1] == 1.0);  // two B votes beat it
}

TEST_CASE("knn vote ties go to the nearest tied label") {
    std::vector<double> train_x = {1.0, 0.5};
    std::vector<std::string> train_y = {"A", "B"};
    std::vector<double> test_x = {0.0};
    std::vector<std::string> test_y = {"B"};
    hott::KnnReport rep = hott::knn_evaluate(line_metric(test_x, train_x), train_y, test_y, {2});
    CHECK(rep.errors[0] == 0.0);  // B sits closer, so the 1-1 tie breaks to B
}

TEST_CASE("knn distance ties prefer the lower train index") {
    std::vector<double> train_x = {1.0, 1.0};
    std::vector<std::string> train_y = {"A", "B"};
    std::vector<double> test_x = {0.0};
    std::vector<std::string> test_y = {"A"};
    hott::KnnReport rep = hott::knn_evaluate(line_metric(test_x, train_x), train_y, test_y, {1});
    CHECK(rep.errors[0] == 0.0);
}

TEST_CASE("knn validates its arguments") {
    std::vector<double> train_x = {0.0, 1.0};
    std::vector<std::string> train_y = {"A", "B"};
    std::vector<double> test_x = {0.5};
    std::vector<std::string> test_y = {"A"};
    auto metric = line_metric(test_x, train_x);
    CHECK_THROWS_AS(hott::knn_evaluate(metric, train_y, test_y, {}), std::invalid_argument);
    CHECK_THROWS_AS(hott::knn_evaluate(metric, train_y, test_y, {0}), std::invalid_argument);
    CHECK_THROWS_AS(hott::knn_evaluate(metric, train_y, test_y, {3}), std::invalid_argument);
    CHECK_THROWS_AS(hott::knn_evaluate(metric, {}, test_y, {1}), std::invalid_argument);
}

TEST_CASE("normalized aggregate averages per-corpus ratios") {
    std::map<std::string, std::vector<double>> best = {
        {"hott", {0.1, 0.2}},
        {"nbow", {0.2, 0.2}},
    };
    std::map<std::string, double> agg = hott::normalized_aggregate(best, "nbow");
    CHECK(agg["nbow"] == 1.0);
    CHECK(agg["hott"] == doctest::Approx(0.75).epsilon(1e-15));

    std::map<std::string, std::vector<double>> zeros = {{"a", {0.0}}, {"ref", {0.0}}};
    CHECK(hott::normalized_aggregate(zeros, "ref")["a"] == 1.0);

    CHECK_THROWS_AS(hott::normalized_aggregate(best, "lsi"), std::invalid_argument);
    std::map<std::string, std::vector<double>> ragged = {{"a", {0.1}}, {"ref", {0.1, 0.2}}};
    CHECK_THROWS_AS(hott::normalized_aggregate(ragged, "ref"), std::invalid_argument);
}

TEST_CASE("mantel returns exactly 1.0 for a matrix against itself") {
    std::mt19937_64 rng(5);
    std::vector<double> pts(10);
    for (double& x : pts) x = hott::uniform01(rng) * 10.0;
    hott::DistanceMatrix d = from_points(pts);

    hott::MantelResult self = hott::mantel(d, d, 99, 0);
    CHECK(self.r == 1.0);
    CHECK(self.p <= 0.05);

    // positive rescaling preserves the correlation bit-for-bit
    hott::DistanceMatrix doubled = d;
    for (double& v : doubled.values) v *= 2.0;
    hott::MantelResult scaled = hott::mantel(d, doubled, 99, 0);
    CHECK(scaled.r == 1.0);

    // a monotone distortion stays strongly correlated
    hott::DistanceMatrix warped = d;
    for (double& v : warped.values) v = std::sqrt(v);
    hott::MantelResult mono = hott::mantel(d, warped, 199, 1);
    CHECK(mono.r > 0.8);
    CHECK(mono.p <= 0.05);
}

TEST_CASE("mantel does not see structure between unrelated matrices") {
    std::mt19937_64 rng(6);
    std::vector<double> a(12), b(12);
    for (double& x : a) x = hott::uniform01(rng) * 10.0;
    for (double& x : b) x = hott::uniform01(rng) * 10.0;
    hott::MantelResult res = hott::mantel(from_points(a), from_points(b), 199, 2);
    CHECK(std::abs(res.r) < 0.6);
    CHECK(res.p > 0.05);
}

TEST_CASE("mantel rejects degenerate input") {
    hott::DistanceMatrix d3 = from_points({0.0, 1.0, 2.0});
    hott::DistanceMatrix d4 = from_points({0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(hott::mantel(d3, d4, 99, 0), std::invalid_argument);
    hott::DistanceMatrix d2 = from_points({0.0, 1.0});
    CHECK_THROWS_AS(hott::mantel(d2, d2, 99, 0), std::invalid_argument);
    CHECK_THROWS_AS(hott::mantel(d3, d3, 0, 0), std::invalid_argument);

    // an equilateral configuration has a constant upper triangle
    hott::DistanceMatrix flat;
    flat.n = 3;
    flat.ids = {"a", "b", "c"};
    flat.labels = {"-", "-", "-"};
    flat.values = {0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(hott::mantel(flat, flat, 99, 0), std::runtime_error);
}

TEST_CASE("frobenius difference is the entrywise L2 gap") {
    hott::DistanceMatrix d = from_points({0.0, 1.0, 3.0});
    CHECK(hott::frobenius_diff(d, d) == 0.0);

    hott::DistanceMatrix a, b;
    a.n = b.n = 2;
    a.ids = b.ids = {"x", "y"};
    a.labels = b.labels = {"-", "-"};
    a.values = {0.0, 1.0, 1.0, 0.0};
    b.values = {0.0, 3.0, 3.0, 0.0};
    CHECK(hott::frobenius_diff(a, b) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

    std::mt19937_64 rng(9);
    hott::DistanceMatrix r1 = from_points({1.0, 4.0, 6.0, 7.0});
    hott::DistanceMatrix r2 = from_points({2.0, 3.5, 8.0, 9.5});
    double acc = 0.0;
    for (std::size_t t = 0; t < r1.values.size(); ++t) {
        acc += (r1.values[t] - r2.values[t]) * (r1.values[t] - r2.values[t]);
    }
    CHECK(hott::frobenius_diff(r1, r2) == doctest::Approx(std::sqrt(acc)).epsilon(1e-15));

    hott::DistanceMatrix d4 = from_points({0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(hott::frobenius_diff(d, d4), std::invalid_argument);
}

TEST_CASE("bound chain holds on a fitted model") {
    hott::Corpus c = make_corpus({{"x", "a a b c d"},
                                  {"x", "b c c e"},
                                  {"y", "d e f g g"},
                                  {"y", "f g h a"},
                                  {"x", "a c e g"},
                                  {"y", "b d f h h"}});
    std::mt19937_64 rng(77);
    hott::EmbeddingTable t = random_table(c.vocabulary.size(), 3, rng);
    hott::TopicModel m = hott::fit_lda(c, 4, 1.0, 0.01, 80, 3);
    std::vector<double> props = hott::corpus_proportions(c, m, 50, 4);

    hott::BoundChecker checker(m, t);
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            std::span<const double> pi{props.data() + i * 4, 4};
            std::span<const double> pj{props.data() + j * 4, 4};
            hott::BoundReport rep = checker.check(c.documents[i], c.documents[j], pi, pj);
            CHECK(rep.residual_rwmd_wmd <= 1e-6);
            CHECK(rep.residual_rwmd_hausdorff <= 1e-6);
            CHECK(rep.residual_mix_hofft <= 1e-6);
            CHECK(rep.residual_combined <= 1e-6);
            CHECK(rep.kl1 >= 0.0);
            CHECK(rep.kl2 >= 0.0);
            CHECK(rep.diameter > 0.0);
            CHECK(rep.wmd_value >= 0.0);
            CHECK(rep.hofft_value >= 0.0);
        }
    }

    // identical inputs collapse the transport quantities
    std::span<const double> p0{props.data(), 4};
    hott::BoundReport same = checker.check(c.documents[0], c.documents[0], p0, p0);
    CHECK(same.wmd_value == 0.0);
    CHECK(same.rwmd_value == 0.0);
    CHECK(same.hofft_value == 0.0);
    CHECK(same.mix_w1 == 0.0);

    std::vector<double> short_p = {1.0};
    CHECK_THROWS_AS(checker.check(c.documents[0], c.documents[1], short_p, p0),
                    std::invalid_argument);
}

TEST_CASE("bound chain survives partial embedding coverage") {
    hott::Corpus c = make_corpus({{"x", "a a b c d"},
                                  {"x", "b c c e"},
                                  {"y", "d e f g g"},
                                  {"y", "f g h a"}});
    // leave two words without vectors
    std::mt19937_64 rng(78);
    hott::EmbeddingTable t(c.vocabulary.size(), 3);
    std::vector<double> row(3);
    for (int v = 0; v < c.vocabulary.size(); ++v) {
        if (v == 2 || v == 5) continue;
        for (double& x : row) x = hott::uniform01(rng) * 4.0 - 2.0;
        t.set(v, row);
    }
    t.finalize_coverage();

    hott::TopicModel m = hott::fit_lda(c, 3, 1.0, 0.01, 60, 5);
    std::vector<double> props = hott::corpus_proportions(c, m, 40, 6);
    hott::BoundReport rep =
        hott::check_bounds(c.documents[0], c.documents[2], {props.data(), 3},
                           {props.data() + 6, 3}, m, t);
    CHECK(rep.residual_rwmd_wmd <= 1e-6);
    CHECK(rep.residual_rwmd_hausdorff <= 1e-6);
    CHECK(rep.residual_mix_hofft <= 1e-6);
    CHECK(rep.residual_combined <= 1e-6);
}

TEST_CASE("rwmd can vanish while wmd stays large") {
    hott::Corpus c = make_corpus(
        {{"x", "a a a a a a a a a b"}, {"y", "a b b b b b b b b b"}});
    hott::EmbeddingTable t(2, 1);
    t.set(0, std::vector<double>{0.0});
    t.set(1, std::vector<double>{5.0});
    t.finalize_coverage();
    hott::TopicModel m = hott::fit_lda(c, 2, 1.0, 0.01, 40, 1);
    std::vector<double> props = hott::corpus_proportions(c, m, 30, 2);

    hott::BoundReport rep = hott::check_bounds(c.documents[0], c.documents[1],
                                               {props.data(), 2}, {props.data() + 2, 2}, m, t);
    CHECK(rep.rwmd_value == 0.0);
    CHECK(rep.wmd_value > 0.1 * rep.diameter);
    CHECK(rep.residual_rwmd_wmd <= 0.0);
}

TEST_CASE("cross-metric distances agree with the standalone functions") {
    std::vector<std::pair<std::string, std::string>> rows;
    const std::vector<std::string> fruit = {"apple", "banana", "cherry", "date"};
    const std::vector<std::string> beast = {"goat", "horse", "ibex", "jackal"};
    for (int i = 0; i < 8; ++i) {
        std::string a, b;
        for (int t = 0; t < 8; ++t) {
            a += fruit[(i + t) % 4] + " ";
            b += beast[(i + 3 * t) % 4] + " ";
        }
        rows.emplace_back("fruit", a);
        rows.emplace_back("beast", b);
    }
    hott::Corpus all = make_corpus(rows);
    auto [train, test] = hott::split_corpus(all, 0.75, hott::SplitMode::InOrder);

    std::mt19937_64 rng(31);
    hott::EmbeddingTable t = random_table(all.vocabulary.size(), 3, rng);
    hott::TopicModel m = hott::fit_lda(train, 2, 1.0, 0.01, 120, 9);
    hott::TopicCostMatrix costs = hott::topic_cost_matrix(m, t, 3);

    hott::CrossMetric::Config config;
    config.table = &t;
    config.model = &m;
    config.topic_costs = &costs;
    config.infer_iterations = 30;
    config.infer_seed = 11;

    hott::MetricDescriptor wd;
    wd.name = "wmd";
    hott::CrossMetric wcm(wd, train, test, config);
    CHECK(wcm.train_size() == train.size());
    CHECK(wcm.test_size() == test.size());
    for (std::size_t ti = 0; ti < test.size(); ++ti) {
        for (std::size_t ri = 0; ri < train.size(); ++ri) {
            CHECK(wcm(ti, ri) ==
                  doctest::Approx(hott::wmd(test.documents[ti], train.documents[ri], t))
                      .epsilon(1e-12));
        }
    }

    // topic family: train rows are the fitted ones, test rows fold in with
    // seeds derived from the position in the concatenated sequence
    hott::MetricDescriptor hd;
    hd.name = "hott";
    hott::CrossMetric hcm(hd, train, test, config);
    std::vector<double> p0 =
        hott::infer_proportions(test.documents[0], m, 30, hott::mix_seed(11, train.size()));
    double expected = hott::hott_distance(p0, m.doc_row(2), costs, true);
    CHECK(hcm(0, 2) == doctest::Approx(expected).epsilon(1e-12));

    // a clean two-theme problem is separable end to end
    for (const std::string name : {"wmd", "hott", "nbow", "tfidf", "cosine"}) {
        hott::MetricDescriptor d;
        d.name = name;
        hott::CrossMetric cm(d, train, test, config);
        auto dist = [&cm](std::size_t a, std::size_t b) { return cm(a, b); };
        hott::KnnReport rep = hott::knn_evaluate(dist, train.labels, test.labels, {1}, name);
        CHECK(rep.errors[0] == 0.0);
    }
}

TEST_CASE("cross-metric rejects mismatched vocabularies and missing inputs") {
    hott::Corpus a = make_corpus({{"x", "a b"}, {"y", "c d"}});
    hott::Corpus b = make_corpus({{"x", "e f"}, {"y", "g h"}});
    hott::CrossMetric::Config config;
    hott::MetricDescriptor d;
    d.name = "nbow";
    CHECK_THROWS_AS(hott::CrossMetric(d, a, b, config), std::invalid_argument);

    auto [train, test] = hott::split_corpus(a, 0.5, hott::SplitMode::InOrder);
    d.name = "hott";
    CHECK_THROWS_AS(hott::CrossMetric(d, train, test, config), std::invalid_argument);
    d.name = "lsi";  // no dimension and no model to default from
    CHECK_THROWS_AS(hott::CrossMetric(d, train, test, config), std::invalid_argument);
}

TEST_CASE("throughput benchmark counts what it ran") {
    hott::Corpus c = make_corpus({{"x", "a a b"}, {"y", "b c"}, {"z", "c d d"}, {"w", "a d"}});
    hott::MetricDescriptor d;
    d.name = "nbow";
    hott::PairDistance::Inputs in;
    auto rep = hott::build_vectors(c, "nbow");
    in.vectors = rep.rows;
    in.vector_dim = rep.dim;
    hott::PairDistance pd(d, c, std::move(in));

    hott::ThroughputReport r = hott::benchmark_throughput(pd, 50, 5, 0);
    CHECK(r.pairs == 50u);
    CHECK(r.seconds >= 0.0);
    CHECK(r.pairs_per_second > 0.0);
    CHECK(r.metric == "nbow vector_distance=euclidean");

    CHECK_THROWS_AS(hott::benchmark_throughput(pd, 0, 0, 0), std::invalid_argument);
}

}  // TEST_SUITE
