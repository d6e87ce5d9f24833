#include "hott/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hott {

Histogram Histogram::uniform(std::size_t n) {
    Histogram h;
    h.mass.assign(n, 1.0 / static_cast<double>(n));
    return h;
}

Histogram Histogram::dirac(std::size_t n, std::size_t at) {
    Histogram h;
    h.mass.assign(n, 0.0);
    h.mass[at] = 1.0;
    return h;
}

namespace {

constexpr double kBalanceTol = 1e-6;
constexpr double kMarginalTol = 1e-8;

double checked_sum(const Histogram& h, const char* name) {
    double s = 0.0;
    for (double v : h.mass) {
        if (v < 0.0 && v > -1e-12) continue;  // tolerate sign noise, treated as zero
        if (v < 0.0) throw std::invalid_argument(std::string(name) + " has negative mass");
        s += v;
    }
    if (s <= 0.0) throw std::invalid_argument(std::string(name) + " has zero total mass");
    return s;
}

// Transportation simplex over the dense bipartite instance. Basis is a
// spanning tree over n row nodes and m column nodes.
class TransportSimplex {
  public:
    TransportSimplex(std::span<const double> supply, std::span<const double> demand,
                     const double* cost, int n, int m)
        : n_(n), m_(m), cost_(cost), a_(supply.begin(), supply.end()),
          b_(demand.begin(), demand.end()), flow_(static_cast<std::size_t>(n) * m, 0.0),
          basic_(static_cast<std::size_t>(n) * m, false), row_adj_(n), col_adj_(m),
          u_(n), v_(m), seen_row_(n), seen_col_(m) {
        double cmax = 1.0;
        for (std::size_t k = 0; k < static_cast<std::size_t>(n) * m; ++k) {
            cmax = std::max(cmax, std::abs(cost[k]));
        }
        eps_ = 1e-13 * cmax;
    }

    void run() {
        northwest_corner();
        const long soft_cap = 20L * (n_ + m_) * std::max(n_, m_) + 2000;
        const long hard_cap = soft_cap * 10;
        long iter = 0;
        while (true) {
            compute_potentials();
            auto [ei, ej] = (iter < soft_cap) ? entering_most_negative() : entering_bland();
            if (ei < 0) break;
            pivot(ei, ej);
            if (++iter > hard_cap) {
                throw std::runtime_error("transport simplex failed to converge");
            }
        }
    }

    double flow_at(int i, int j) const { return flow_[idx(i, j)]; }

    double objective() const {
        double total = 0.0;
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < m_; ++j) {
                double x = flow_[idx(i, j)];
                if (x > 0.0) total += x * cost_[idx(i, j)];
            }
        }
        return total;
    }

  private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * m_ + j; }

    void add_basic(int i, int j) {
        basic_[idx(i, j)] = true;
        row_adj_[i].push_back(j);
        col_adj_[j].push_back(i);
    }

    void remove_basic(int i, int j) {
        basic_[idx(i, j)] = false;
        auto& r = row_adj_[i];
        r.erase(std::find(r.begin(), r.end(), j));
        auto& c = col_adj_[j];
        c.erase(std::find(c.begin(), c.end(), i));
    }

    // Initial basis with exactly n+m-1 cells (degenerate zero allocations
    // included when a supply and demand exhaust together).
    void northwest_corner() {
        std::vector<double> a(a_), b(b_);
        int i = 0, j = 0;
        while (true) {
            double t = std::min(a[i], b[j]);
            flow_[idx(i, j)] = t;
            add_basic(i, j);
            a[i] -= t;
            b[j] -= t;
            if (i == n_ - 1 && j == m_ - 1) break;
            if (a[i] <= b[j] && i < n_ - 1) {
                a[i] = 0.0;
                ++i;
            } else if (j < m_ - 1) {
                ++j;
            } else {
                ++i;
            }
        }
    }

    // u_i + v_j = C(i,j) on basic cells, anchored at u_0 = 0; one BFS over
    // the basis tree.
    void compute_potentials() {
        std::fill(seen_row_.begin(), seen_row_.end(), false);
        std::fill(seen_col_.begin(), seen_col_.end(), false);
        stack_.clear();
        u_[0] = 0.0;
        seen_row_[0] = true;
        stack_.push_back(0);  // encoded: row i -> i, col j -> n_ + j
        while (!stack_.empty()) {
            int node = stack_.back();
            stack_.pop_back();
            if (node < n_) {
                int i = node;
                for (int j : row_adj_[i]) {
                    if (!seen_col_[j]) {
                        v_[j] = cost_[idx(i, j)] - u_[i];
                        seen_col_[j] = true;
                        stack_.push_back(n_ + j);
                    }
                }
            } else {
                int j = node - n_;
                for (int i : col_adj_[j]) {
                    if (!seen_row_[i]) {
                        u_[i] = cost_[idx(i, j)] - v_[j];
                        seen_row_[i] = true;
                        stack_.push_back(i);
                    }
                }
            }
        }
    }

    std::pair<int, int> entering_most_negative() const {
        double best = -eps_;
        int bi = -1, bj = -1;
        for (int i = 0; i < n_; ++i) {
            const double ui = u_[i];
            for (int j = 0; j < m_; ++j) {
                if (basic_[idx(i, j)]) continue;
                double r = cost_[idx(i, j)] - ui - v_[j];
                if (r < best) {
                    best = r;
                    bi = i;
                    bj = j;
                }
            }
        }
        return {bi, bj};
    }

    std::pair<int, int> entering_bland() const {
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < m_; ++j) {
                if (basic_[idx(i, j)]) continue;
                if (cost_[idx(i, j)] - u_[i] - v_[j] < -eps_) return {i, j};
            }
        }
        return {-1, -1};
    }

    // Unique tree path from row ei to column ej; with the entering arc it
    // closes the pivot cycle. Signs alternate starting at + on the entering
    // arc; theta = min flow over - arcs, leaving arc ties break on lowest
    // flat index.
    void pivot(int ei, int ej) {
        parent_.assign(static_cast<std::size_t>(n_) + m_, -1);
        std::fill(seen_row_.begin(), seen_row_.end(), false);
        std::fill(seen_col_.begin(), seen_col_.end(), false);
        stack_.clear();
        stack_.push_back(ei);
        seen_row_[ei] = true;
        while (!stack_.empty()) {
            int node = stack_.back();
            stack_.pop_back();
            if (node == n_ + ej) break;
            if (node < n_) {
                for (int j : row_adj_[node]) {
                    if (!seen_col_[j]) {
                        seen_col_[j] = true;
                        parent_[n_ + j] = node;
                        stack_.push_back(n_ + j);
                    }
                }
            } else {
                for (int i : col_adj_[node - n_]) {
                    if (!seen_row_[i]) {
                        seen_row_[i] = true;
                        parent_[i] = node;
                        stack_.push_back(i);
                    }
                }
            }
        }

        // Walk from ej back to ei collecting basic cells; the first one
        // (incident to ej) is a minus arc, signs alternate from there.
        plus_.clear();
        minus_.clear();
        int node = n_ + ej;
        bool minus_arc = true;
        while (node != ei) {
            int par = parent_[node];
            int ci, cj;
            if (node < n_) {
                ci = node;
                cj = par - n_;
            } else {
                ci = par;
                cj = node - n_;
            }
            (minus_arc ? minus_ : plus_).push_back({ci, cj});
            minus_arc = !minus_arc;
            node = par;
        }

        double theta = std::numeric_limits<double>::infinity();
        int leave_i = -1, leave_j = -1;
        for (auto [i, j] : minus_) {
            double x = flow_[idx(i, j)];
            if (x < theta ||
                (x == theta && idx(i, j) < idx(leave_i, leave_j))) {
                theta = x;
                leave_i = i;
                leave_j = j;
            }
        }

        if (theta > 0.0) {
            flow_[idx(ei, ej)] = theta;
            for (auto [i, j] : plus_) flow_[idx(i, j)] += theta;
            for (auto [i, j] : minus_) flow_[idx(i, j)] -= theta;
        }
        flow_[idx(leave_i, leave_j)] = 0.0;
        remove_basic(leave_i, leave_j);
        add_basic(ei, ej);
    }

    int n_, m_;
    const double* cost_;
    double eps_;
    std::vector<double> a_, b_, flow_;
    std::vector<char> basic_;
    std::vector<std::vector<int>> row_adj_, col_adj_;
    std::vector<double> u_, v_;
    std::vector<char> seen_row_, seen_col_;
    std::vector<int> stack_, parent_;
    std::vector<std::pair<int, int>> plus_, minus_;
};

}  // namespace

TransportResult solve_exact(const Histogram& p, const Histogram& q, const CostMatrix& cost) {
    const int n_all = static_cast<int>(p.size());
    const int m_all = static_cast<int>(q.size());
    if (cost.rows != n_all || cost.cols != m_all) {
        throw std::invalid_argument("cost matrix dimensions do not match the histograms");
    }
    const double sp = checked_sum(p, "p");
    const double sq = checked_sum(q, "q");
    if (std::abs(sp - sq) > kBalanceTol) {
        throw std::runtime_error("infeasible normalization: |sum p - sum q| > 1e-6");
    }

    // Strip zero-mass sites, renormalizing to exact sum 1.
    std::vector<int> rows, cols;
    std::vector<double> a, b;
    for (int i = 0; i < n_all; ++i) {
        if (p.mass[i] > 0.0) {
            rows.push_back(i);
            a.push_back(p.mass[i] / sp);
        }
    }
    for (int j = 0; j < m_all; ++j) {
        if (q.mass[j] > 0.0) {
            cols.push_back(j);
            b.push_back(q.mass[j] / sq);
        }
    }
    const int n = static_cast<int>(rows.size());
    const int m = static_cast<int>(cols.size());

    TransportResult result;
    result.rows = n_all;
    result.cols = m_all;
    result.plan.assign(static_cast<std::size_t>(n_all) * m_all, 0.0);

    auto cell = [&](int i, int j) { return cost.at(rows[i], cols[j]); };

    if (n == 1 || m == 1) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                double x = (n == 1) ? b[j] : a[i];
                result.plan[static_cast<std::size_t>(rows[i]) * m_all + cols[j]] = x;
                total += x * cell(i, j);
            }
        }
        result.cost = total;
        return result;
    }

    std::vector<double> dense(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) dense[static_cast<std::size_t>(i) * m + j] = cell(i, j);
    }

    TransportSimplex simplex(a, b, dense.data(), n, m);
    simplex.run();

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            double x = simplex.flow_at(i, j);
            if (x != 0.0) {
                result.plan[static_cast<std::size_t>(rows[i]) * m_all + cols[j]] = x;
            }
        }
    }
    result.cost = simplex.objective();

    // Feasibility is an invariant of the returned plan, not a best effort.
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += simplex.flow_at(i, j);
        if (std::abs(s - a[i]) > kMarginalTol) {
            throw std::runtime_error("transport plan violates a row marginal");
        }
    }
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += simplex.flow_at(i, j);
        if (std::abs(s - b[j]) > kMarginalTol) {
            throw std::runtime_error("transport plan violates a column marginal");
        }
    }
    return result;
}

double wasserstein(const Histogram& p, const Histogram& q, const CostMatrix& base_distance,
                   int power) {
    if (power != 1 && power != 2) throw std::invalid_argument("power must be 1 or 2");
    if (base_distance.ground_power != 1) {
        throw std::invalid_argument("wasserstein expects a base matrix of plain distances");
    }
    if (power == 1) return solve_exact(p, q, base_distance).cost;
    CostMatrix squared = base_distance;
    squared.ground_power = 2;
    for (double& e : squared.entries) e *= e;
    double c = solve_exact(p, q, squared).cost;
    return std::sqrt(std::max(0.0, c));
}

RelaxedResult relaxed_cost(const Histogram& p, const Histogram& q, const CostMatrix& cost) {
    const int n = static_cast<int>(p.size());
    const int m = static_cast<int>(q.size());
    if (cost.rows != n || cost.cols != m) {
        throw std::invalid_argument("cost matrix dimensions do not match the histograms");
    }
    RelaxedResult r;
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) best = std::min(best, cost.at(i, j));
        r.cost_keep_p += p.mass[i] * best;
    }
    for (int j = 0; j < m; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) best = std::min(best, cost.at(i, j));
        r.cost_keep_q += q.mass[j] * best;
    }
    r.value = std::max(r.cost_keep_p, r.cost_keep_q);
    return r;
}

double hausdorff(const CostMatrix& pairwise) {
    if (pairwise.rows == 0 || pairwise.cols == 0) {
        throw std::invalid_argument("hausdorff distance needs nonempty site sets");
    }
    double h = 0.0;
    for (int i = 0; i < pairwise.rows; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int j = 0; j < pairwise.cols; ++j) nearest = std::min(nearest, pairwise.at(i, j));
        h = std::max(h, nearest);
    }
    for (int j = 0; j < pairwise.cols; ++j) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < pairwise.rows; ++i) nearest = std::min(nearest, pairwise.at(i, j));
        h = std::max(h, nearest);
    }
    return h;
}

}  // namespace hott
