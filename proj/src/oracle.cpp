#include "hott/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hott {

namespace {

bool is_uniform(const std::vector<double>& mass) {
    const double expect = 1.0 / static_cast<double>(mass.size());
    for (double v : mass) {
        if (std::abs(v - expect) > 1e-12) return false;
    }
    return true;
}

double assignment_minimum(const CostMatrix& cost, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += cost.at(i, perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(n);
}

// Solves the flows of one candidate basis (a spanning tree over row and
// column nodes) by leaf elimination; returns false if the tree is
// disconnected or a flow goes negative.
bool tree_flows(const std::vector<std::pair<int, int>>& cells, std::vector<double> a,
                std::vector<double> b, double& total_cost, const CostMatrix& cost) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int nodes = n + m;
    std::vector<int> degree(nodes, 0);
    for (auto [i, j] : cells) {
        ++degree[i];
        ++degree[n + j];
    }
    std::vector<bool> used(cells.size(), false);
    total_cost = 0.0;
    for (std::size_t step = 0; step < cells.size(); ++step) {
        int leaf = -1;
        for (int v = 0; v < nodes; ++v) {
            if (degree[v] == 1) {
                leaf = v;
                break;
            }
        }
        if (leaf < 0) return false;  // cycle or disconnected remainder
        std::size_t edge = cells.size();
        for (std::size_t e = 0; e < cells.size(); ++e) {
            if (used[e]) continue;
            auto [i, j] = cells[e];
            if (i == leaf || n + j == leaf) {
                edge = e;
                break;
            }
        }
        if (edge == cells.size()) return false;
        auto [i, j] = cells[edge];
        double flow = (leaf < n) ? a[i] : b[j];
        if (flow < -1e-12) return false;
        if (leaf < n) {
            b[j] -= flow;
        } else {
            a[i] -= flow;
        }
        total_cost += std::max(0.0, flow) * cost.at(i, j);
        used[edge] = true;
        --degree[i];
        --degree[n + j];
    }
    return true;
}

double vertex_enumeration_minimum(const CostMatrix& cost, const std::vector<double>& a,
                                  const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int cells = n * m;
    const int basis_size = n + m - 1;

    std::vector<int> pick(basis_size);
    std::iota(pick.begin(), pick.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    bool any = false;

    while (true) {
        std::vector<std::pair<int, int>> chosen;
        chosen.reserve(basis_size);
        for (int c : pick) chosen.emplace_back(c / m, c % m);
        double total = 0.0;
        if (tree_flows(chosen, a, b, total, cost)) {
            best = std::min(best, total);
            any = true;
        }
        // next combination of basis_size cells out of `cells`
        int k = basis_size - 1;
        while (k >= 0 && pick[k] == cells - basis_size + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int t = k + 1; t < basis_size; ++t) pick[t] = pick[t - 1] + 1;
    }
    if (!any) throw std::runtime_error("oracle found no feasible basis");
    return best;
}

}  // namespace

double brute_force_reference(const Histogram& p, const Histogram& q, const CostMatrix& cost) {
    const int n = static_cast<int>(p.size());
    const int m = static_cast<int>(q.size());
    if (cost.rows != n || cost.cols != m) {
        throw std::invalid_argument("cost matrix dimensions do not match the histograms");
    }
    double sp = 0.0, sq = 0.0;
    for (double v : p.mass) sp += v;
    for (double v : q.mass) sq += v;
    if (sp <= 0.0 || sq <= 0.0 || std::abs(sp - sq) > 1e-6) {
        throw std::runtime_error("infeasible normalization: |sum p - sum q| > 1e-6");
    }
    std::vector<double> a(p.mass), b(q.mass);
    for (double& v : a) v /= sp;
    for (double& v : b) v /= sq;

    if (n == m && n <= 6 && is_uniform(a) && is_uniform(b)) {
        return assignment_minimum(cost, n);
    }
    if (n * m <= 12) {
        return vertex_enumeration_minimum(cost, a, b);
    }
    throw std::runtime_error("oracle scale exceeded");
}

}  // namespace hott
