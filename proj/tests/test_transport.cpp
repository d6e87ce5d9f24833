#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hott/oracle.hpp"
#include "hott/transport.hpp"

using namespace hott;

namespace {

CostMatrix line_costs(const std::vector<double>& xs, const std::vector<double>& ys) {
    CostMatrix c;
    c.rows = static_cast<int>(xs.size());
    c.cols = static_cast<int>(ys.size());
    c.ground_power = 1;
    c.entries.resize(xs.size() * ys.size());
    for (int i = 0; i < c.rows; ++i)
        for (int j = 0; j < c.cols; ++j) c.at(i, j) = std::abs(xs[i] - ys[j]);
    return c;
}

CostMatrix random_costs(int n, int m, std::mt19937_64& rng) {
    CostMatrix c;
    c.rows = n;
    c.cols = m;
    c.ground_power = 1;
    c.entries.resize(static_cast<std::size_t>(n) * m);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (double& e : c.entries) e = u(rng);
    return c;
}

// Euclidean distances between random planar points: a genuine metric, which
// the triangle-inequality checks below rely on.
CostMatrix random_metric(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    CostMatrix c;
    c.rows = n;
    c.cols = n;
    c.ground_power = 1;
    c.entries.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.at(i, j) = std::hypot(x[i] - x[j], y[i] - y[j]);
    return c;
}

Histogram random_histogram(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Histogram h;
    h.mass.resize(n);
    double s = 0.0;
    for (double& v : h.mass) s += (v = u(rng));
    for (double& v : h.mass) v /= s;
    return h;
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("identical histograms on identical sites cost exactly zero") {
    std::mt19937_64 rng(11);
    Histogram p = random_histogram(5, rng);
    CostMatrix c = random_metric(5, rng);
    TransportResult r = solve_exact(p, p, c);
    CHECK(r.cost == 0.0);
    // the optimal plan is the diagonal of p
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(r.plan_at(i, j) == (i == j ? p.mass[i] : 0.0));
}

TEST_CASE("singleton instance moves all mass along the single arc") {
    Histogram p = Histogram::dirac(1, 0);
    Histogram q = Histogram::dirac(1, 0);
    CostMatrix c = line_costs({2.0}, {7.0});
    TransportResult r = solve_exact(p, q, c);
    CHECK(r.cost == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.plan_at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform pair onto a midpoint dirac") {
    Histogram p = Histogram::uniform(2);
    Histogram q = Histogram::dirac(1, 0);
    CostMatrix c = line_costs({0.0, 1.0}, {0.5});
    TransportResult r = solve_exact(p, q, c);
    CHECK(r.cost == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.cost == doctest::Approx(brute_force_reference(p, q, c)).epsilon(1e-12));
}

TEST_CASE("two-point line instance, frozen oracle value") {
    // p uniform on {0,1}, q uniform on {0,3}: couplings are the identity
    // assignment (0+2)/2 = 1.0 and the swap (3+1)/2 = 2.0.
    Histogram p = Histogram::uniform(2);
    Histogram q = Histogram::uniform(2);
    CostMatrix c = line_costs({0.0, 1.0}, {0.0, 3.0});
    CHECK(brute_force_reference(p, q, c) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(wasserstein(p, q, c, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wasserstein(p, q, c, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("wasserstein of a distribution with itself is zero for both powers") {
    std::mt19937_64 rng(23);
    Histogram p = random_histogram(6, rng);
    CostMatrix c = random_metric(6, rng);
    CHECK(wasserstein(p, p, c, 1) == 0.0);
    CHECK(wasserstein(p, p, c, 2) == 0.0);
}

TEST_CASE("singletons at distance 5 give W1 = W2 = 5") {
    Histogram p = Histogram::uniform(1);
    Histogram q = Histogram::uniform(1);
    CostMatrix c = line_costs({0.0}, {5.0});
    CHECK(wasserstein(p, q, c, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(wasserstein(p, q, c, 2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("solver matches the assignment oracle on 200 random uniform 4x4 instances") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        CostMatrix c = random_costs(4, 4, rng);
        Histogram p = Histogram::uniform(4);
        Histogram q = Histogram::uniform(4);
        double exact = solve_exact(p, q, c).cost;
        double ref = brute_force_reference(p, q, c);
        CHECK(exact == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("solver matches the vertex-enumeration oracle on random non-uniform instances") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 2 + static_cast<int>(rng() % 2);  // 2 or 3
        int m = 12 / n;                           // keeps n*m == 12
        CostMatrix c = random_costs(n, m, rng);
        Histogram p = random_histogram(n, rng);
        Histogram q = random_histogram(m, rng);
        double exact = solve_exact(p, q, c).cost;
        double ref = brute_force_reference(p, q, c);
        CHECK(exact == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("oracle on a hand-checked uniform 3x3 instance") {
    Histogram p = Histogram::uniform(3);
    Histogram q = Histogram::uniform(3);
    CostMatrix c;
    c.rows = c.cols = 3;
    c.ground_power = 1;
    c.entries = {5, 1, 9, 1, 5, 9, 9, 9, 0};
    // six permutations cost 10, 2, 23, 23, 19, 19; the swap of the first two
    // rows wins with (1 + 1 + 0) / 3
    CHECK(brute_force_reference(p, q, c) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(solve_exact(p, q, c).cost == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("oracle refuses instances beyond its scale") {
    Histogram p = Histogram::uniform(10);
    Histogram q = Histogram::uniform(10);
    std::mt19937_64 rng(3);
    CostMatrix c = random_costs(10, 10, rng);
    CHECK_THROWS_WITH(brute_force_reference(p, q, c), "oracle scale exceeded");
}

TEST_CASE("returned plans satisfy both marginals within 1e-8") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);
        int m = 2 + static_cast<int>(rng() % 7);
        Histogram p = random_histogram(n, rng);
        Histogram q = random_histogram(m, rng);
        CostMatrix c = random_costs(n, m, rng);
        TransportResult r = solve_exact(p, q, c);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < m; ++j) row += r.plan_at(i, j);
            CHECK(row == doctest::Approx(p.mass[i]).epsilon(1e-8));
        }
        for (int j = 0; j < m; ++j) {
            double col = 0.0;
            for (int i = 0; i < n; ++i) col += r.plan_at(i, j);
            CHECK(col == doctest::Approx(q.mass[j]).epsilon(1e-8));
        }
        // reported cost is consistent with the plan
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) dot += c.at(i, j) * r.plan_at(i, j);
        CHECK(r.cost == doctest::Approx(dot).epsilon(1e-8));
    }
}

TEST_CASE("zero-mass sites are stripped and come back as zero plan rows") {
    Histogram p;
    p.mass = {0.5, 0.0, 0.5};
    Histogram q = Histogram::uniform(2);
    CostMatrix c = line_costs({0.0, 100.0, 1.0}, {0.0, 1.0});
    TransportResult r = solve_exact(p, q, c);
    CHECK(r.cost == doctest::Approx(0.0).epsilon(1e-12));
    for (int j = 0; j < 2; ++j) CHECK(r.plan_at(1, j) == 0.0);
}

TEST_CASE("cost scaling: W1 is positively homogeneous in the ground metric") {
    std::mt19937_64 rng(5);
    Histogram p = random_histogram(4, rng);
    Histogram q = random_histogram(5, rng);
    CostMatrix c = random_costs(4, 5, rng);
    double base = solve_exact(p, q, c).cost;
    CostMatrix doubled = c;
    for (double& e : doubled.entries) e *= 2.0;
    CHECK(solve_exact(p, q, doubled).cost == 2.0 * base);  // power-of-two scale is exact
    CostMatrix tripled = c;
    for (double& e : tripled.entries) e *= 3.0;
    CHECK(solve_exact(p, q, tripled).cost == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("wasserstein is symmetric under transposition") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        int m = 2 + static_cast<int>(rng() % 5);
        Histogram p = random_histogram(n, rng);
        Histogram q = random_histogram(m, rng);
        CostMatrix c = random_costs(n, m, rng);
        CostMatrix ct;
        ct.rows = m;
        ct.cols = n;
        ct.ground_power = 1;
        ct.entries.resize(c.entries.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) ct.at(j, i) = c.at(i, j);
        CHECK(wasserstein(p, q, c) == doctest::Approx(wasserstein(q, p, ct)).epsilon(1e-9));
    }
}

TEST_CASE("W1 over a fixed site set behaves like a metric on sampled triples") {
    std::mt19937_64 rng(31);
    CostMatrix c = random_metric(6, rng);
    for (int trial = 0; trial < 25; ++trial) {
        Histogram a = random_histogram(6, rng);
        Histogram b = random_histogram(6, rng);
        Histogram d = random_histogram(6, rng);
        double ab = wasserstein(a, b, c);
        double ba = wasserstein(b, a, c);
        double ad = wasserstein(a, d, c);
        double db = wasserstein(d, b, c);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
        CHECK(ab <= ad + db + 1e-8);
    }
}

TEST_CASE("relaxed cost closed forms") {
    SUBCASE("identical supports give value zero for any masses") {
        std::mt19937_64 rng(2);
        Histogram p = random_histogram(5, rng);
        Histogram q = random_histogram(5, rng);
        CostMatrix c = random_metric(5, rng);  // zero diagonal
        RelaxedResult r = relaxed_cost(p, q, c);
        CHECK(r.value == 0.0);
    }
    SUBCASE("singletons recover the exact cost") {
        Histogram p = Histogram::uniform(1);
        Histogram q = Histogram::uniform(1);
        CostMatrix c = line_costs({1.0}, {4.0});
        RelaxedResult r = relaxed_cost(p, q, c);
        CHECK(r.cost_keep_p == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(r.cost_keep_q == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("value is max of the two relaxations and lower-bounds the exact cost") {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 80; ++trial) {
            Histogram p = random_histogram(6, rng);
            Histogram q = random_histogram(4, rng);
            CostMatrix c = random_costs(6, 4, rng);
            RelaxedResult r = relaxed_cost(p, q, c);
            CHECK(r.value == std::max(r.cost_keep_p, r.cost_keep_q));
            CHECK(r.value <= solve_exact(p, q, c).cost + 1e-9);
        }
    }
}

TEST_CASE("relaxed value never exceeds the support Hausdorff distance") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        int m = 2 + static_cast<int>(rng() % 5);
        Histogram p = random_histogram(n, rng);
        Histogram q = random_histogram(m, rng);
        CostMatrix c = random_costs(n, m, rng);
        CHECK(relaxed_cost(p, q, c).value <= hausdorff(c) + 1e-9);
    }
}

TEST_CASE("hausdorff distance") {
    SUBCASE("identical site sets give zero") {
        std::mt19937_64 rng(4);
        CHECK(hausdorff(random_metric(5, rng)) == 0.0);
    }
    SUBCASE("point against a pair on the line") {
        CHECK(hausdorff(line_costs({0.0}, {0.0, 10.0})) == doctest::Approx(10.0).epsilon(1e-15));
    }
    SUBCASE("random sets match an independent double loop") {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 30; ++trial) {
            int n = 1 + static_cast<int>(rng() % 6);
            int m = 1 + static_cast<int>(rng() % 6);
            CostMatrix c = random_costs(n, m, rng);
            double fwd = 0.0;
            for (int i = 0; i < n; ++i) {
                double best = c.at(i, 0);
                for (int j = 1; j < m; ++j) best = std::min(best, c.at(i, j));
                fwd = std::max(fwd, best);
            }
            double bwd = 0.0;
            for (int j = 0; j < m; ++j) {
                double best = c.at(0, j);
                for (int i = 1; i < n; ++i) best = std::min(best, c.at(i, j));
                bwd = std::max(bwd, best);
            }
            CHECK(hausdorff(c) == doctest::Approx(std::max(fwd, bwd)).epsilon(1e-12));
        }
    }
}

TEST_CASE("degenerate ties: uniform masses with integer costs still match the oracle") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        CostMatrix c;
        c.rows = c.cols = 4;
        c.ground_power = 1;
        c.entries.resize(16);
        for (double& e : c.entries) e = static_cast<double>(rng() % 4);  // heavy ties
        Histogram p = Histogram::uniform(4);
        Histogram q = Histogram::uniform(4);
        CHECK(solve_exact(p, q, c).cost ==
              doctest::Approx(brute_force_reference(p, q, c)).epsilon(1e-9));
    }
}

TEST_CASE("solver is deterministic for fixed input") {
    std::mt19937_64 rng(55);
    Histogram p = random_histogram(6, rng);
    Histogram q = random_histogram(5, rng);
    CostMatrix c = random_costs(6, 5, rng);
    TransportResult a = solve_exact(p, q, c);
    TransportResult b = solve_exact(p, q, c);
    CHECK(a.cost == b.cost);
    CHECK(a.plan == b.plan);
}

TEST_CASE("input validation") {
    Histogram p = Histogram::uniform(2);
    Histogram q = Histogram::uniform(3);
    CostMatrix wrong = line_costs({0.0, 1.0}, {0.0, 1.0});  // 2x2 against a 2x3 instance
    CHECK_THROWS_AS(solve_exact(p, q, wrong), std::invalid_argument);

    Histogram heavy;
    heavy.mass = {0.7, 0.7};  // sums to 1.4 against q's 1.0
    CostMatrix c = line_costs({0.0, 1.0}, {0.0, 1.0, 2.0});
    CHECK_THROWS_WITH(solve_exact(heavy, q, c), "infeasible normalization: |sum p - sum q| > 1e-6");

    Histogram negative;
    negative.mass = {1.2, -0.2};
    CHECK_THROWS_AS(solve_exact(negative, q, c), std::invalid_argument);

    CostMatrix square = line_costs({0.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(wasserstein(p, p, square, 3), std::invalid_argument);
}

TEST_CASE("balanced but unnormalized inputs are renormalized rather than rejected") {
    Histogram p;
    p.mass = {2.0, 2.0};
    Histogram q;
    q.mass = {4.0};
    CostMatrix c = line_costs({0.0, 1.0}, {0.5});
    CHECK(solve_exact(p, q, c).cost == doctest::Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE
