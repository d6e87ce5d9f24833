#include "hott/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace hott {

namespace {

// Integer in-vocabulary counts of one document (mass * total rounds back to
// the original count).
void add_counts(const DocumentDistribution& d, std::span<double> row) {
    for (std::size_t j = 0; j < d.support.size(); ++j) {
        row[static_cast<std::size_t>(d.support[j])] = std::llround(
            d.mass[j] * static_cast<double>(d.total_words));
    }
}

VectorRepresentation tfidf_vectors(const Corpus& corpus) {
    const int V = corpus.vocabulary.size();
    const auto n = corpus.size();
    VectorRepresentation rep;
    rep.method = "tfidf";
    rep.dim = V;
    rep.rows.assign(n * static_cast<std::size_t>(V), 0.0);

    std::vector<double> df(V, 0.0);
    for (const auto& d : corpus.documents)
        for (int v : d.support) df[static_cast<std::size_t>(v)] += 1.0;
    std::vector<double> idf(V);
    for (int v = 0; v < V; ++v) idf[v] = 1.0 + std::log((1.0 + n) / (1.0 + df[v]));

    for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row{rep.rows.data() + i * V, static_cast<std::size_t>(V)};
        add_counts(corpus.documents[i], row);
        double norm2 = 0.0;
        for (int v = 0; v < V; ++v) {
            row[v] *= idf[v];
            norm2 += row[v] * row[v];
        }
        double norm = std::sqrt(norm2);
        if (norm > 0.0)
            for (int v = 0; v < V; ++v) row[v] /= norm;
    }
    return rep;
}

}  // namespace

VectorRepresentation build_vectors(const Corpus& corpus, const std::string& method,
                                   const VectorParams& params, const TopicModel* model) {
    if (corpus.size() == 0) throw std::invalid_argument("empty corpus");
    const int V = corpus.vocabulary.size();
    const auto n = corpus.size();

    if (method == "nbow") {
        VectorRepresentation rep;
        rep.method = method;
        rep.dim = V;
        rep.rows.assign(n * static_cast<std::size_t>(V), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& d = corpus.documents[i];
            for (std::size_t j = 0; j < d.support.size(); ++j)
                rep.rows[i * V + static_cast<std::size_t>(d.support[j])] = d.mass[j];
        }
        return rep;
    }
    if (method == "tfidf") return tfidf_vectors(corpus);
    if (method == "lsi") {
        const int k = params.lsi_dim;
        if (k < 1 || k > static_cast<int>(std::min<std::size_t>(n, V))) {
            throw std::invalid_argument("lsi dimension must be in [1, min(|D|,|V|)]");
        }
        VectorRepresentation tfidf = tfidf_vectors(corpus);
        Eigen::MatrixXd A(n, V);
        for (std::size_t i = 0; i < n; ++i)
            for (int v = 0; v < V; ++v) A(static_cast<Eigen::Index>(i), v) = tfidf.rows[i * V + v];

        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::MatrixXd U = svd.matrixU();
        Eigen::MatrixXd Vm = svd.matrixV();
        Eigen::VectorXd S = svd.singularValues();

        // fixed sign convention: the largest-magnitude component of each
        // right singular vector is made positive (first index wins ties)
        for (int c = 0; c < k; ++c) {
            int arg = 0;
            for (int r = 1; r < Vm.rows(); ++r)
                if (std::abs(Vm(r, c)) > std::abs(Vm(arg, c))) arg = r;
            if (Vm(arg, c) < 0.0) {
                Vm.col(c) = -Vm.col(c);
                U.col(c) = -U.col(c);
            }
        }

        VectorRepresentation rep;
        rep.method = method;
        rep.dim = k;
        rep.rows.resize(n * static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < k; ++c)
                rep.rows[i * k + static_cast<std::size_t>(c)] =
                    U(static_cast<Eigen::Index>(i), c) * S(c);
        return rep;
    }
    if (method == "lda") {
        if (model == nullptr) throw std::invalid_argument("lda vectors need a fitted model");
        if (static_cast<int>(n) != model->num_docs) {
            throw std::invalid_argument(
                "lda vectors use the fitted doc-topic rows; corpus size does not match the "
                "model (infer proportions for held-out documents instead)");
        }
        VectorRepresentation rep;
        rep.method = method;
        rep.dim = model->num_topics;
        rep.rows = model->doc_topic;
        return rep;
    }
    throw std::invalid_argument("unknown vector method: " + method);
}

double vector_distance(std::span<const double> u, std::span<const double> v,
                       const std::string& kind) {
    if (u.size() != v.size()) throw std::invalid_argument("vector dimension mismatch");
    if (kind == "euclidean") {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) acc += (u[i] - v[i]) * (u[i] - v[i]);
        return std::sqrt(acc);
    }
    if (kind == "cosine") {
        double dot = 0.0, nu = 0.0, nv = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            dot += u[i] * v[i];
            nu += u[i] * u[i];
            nv += v[i] * v[i];
        }
        if (nu == 0.0 && nv == 0.0) return 0.0;
        if (nu == 0.0 || nv == 0.0) return 1.0;
        return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
    }
    throw std::invalid_argument("unknown vector distance: " + kind);
}

}  // namespace hott
