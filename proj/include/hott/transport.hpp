#pragma once

#include <span>
#include <vector>

#include "hott/embeddings.hpp"

namespace hott {

struct Histogram {
    std::vector<double> mass;

    std::size_t size() const { return mass.size(); }
    static Histogram uniform(std::size_t n);
    static Histogram dirac(std::size_t n, std::size_t at);
};

struct TransportResult {
    double cost = 0.0;
    int rows = 0;
    int cols = 0;
    std::vector<double> plan;  // row-major rows x cols

    double plan_at(int i, int j) const { return plan[static_cast<std::size_t>(i) * cols + j]; }
};

struct RelaxedResult {
    double cost_keep_p = 0.0;
    double cost_keep_q = 0.0;
    double value = 0.0;  // max of the two
};

/// Exact solution of the discrete transport linear program
///   min sum_ij C(i,j) G(i,j)  s.t.  row sums = p, column sums = q, G >= 0
/// via the transportation network simplex. Inputs are renormalized to sum
/// exactly 1 (rejecting |sum p - sum q| > 1e-6); zero-mass sites are stripped
/// before solving and reinserted as zero rows/columns of the plan.
/// Deterministic: entering arcs take the most negative reduced cost and all
/// ties (entering and leaving) break on the lowest flat index.
TransportResult solve_exact(const Histogram& p, const Histogram& q, const CostMatrix& cost);

/// power=1: optimal cost with entries d. power=2: sqrt of the optimal cost
/// with entries d^2. base_distance must hold plain distances (ground_power 1).
double wasserstein(const Histogram& p, const Histogram& q, const CostMatrix& base_distance,
                   int power = 1);

/// Closed forms of the one-marginal relaxations:
///   keep p: sum_i p_i min_j C(i,j);  keep q: sum_j q_j min_i C(i,j).
RelaxedResult relaxed_cost(const Histogram& p, const Histogram& q, const CostMatrix& cost);

/// max( max_i min_j d(i,j), max_j min_i d(i,j) ) over the given pairwise
/// distances; rows index X sites, columns Y sites.
double hausdorff(const CostMatrix& pairwise);

}  // namespace hott
