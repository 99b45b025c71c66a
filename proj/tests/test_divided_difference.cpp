#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "slicevol/divided_difference.hpp"
#include "slicevol/kernel.hpp"
#include "slicevol/node_multiset.hpp"
#include "support/reference.hpp"

using namespace slicevol;
using Catch::Approx;

namespace {

NodeMultiset nodes_of(std::vector<double> v, double tol = kDefaultClusterTol) {
    return cluster_nodes(v, tol);
}

} // namespace

TEST_CASE("cluster_nodes keeps distinct values apart") {
    const auto ms = nodes_of({0.8, 0.0, 0.6});
    REQUIRE(ms.breakpoints == std::vector<double>{0.0, 0.6, 0.8});
    REQUIRE(ms.multiplicities == std::vector<int>{1, 1, 1});
    REQUIRE(ms.total() == 3);
}

TEST_CASE("cluster_nodes merges exact duplicates") {
    const auto ms = nodes_of({0.0, 1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0});
    REQUIRE(ms.breakpoints.size() == 3);
    REQUIRE(ms.breakpoints[2] == Approx(2.0 / 3.0));
    REQUIRE(ms.multiplicities == std::vector<int>{1, 1, 2});
}

TEST_CASE("cluster_nodes merges gaps within tolerance") {
    const auto ms = nodes_of({0.0, 1e-12, 1.0});
    REQUIRE(ms.breakpoints.size() == 2);
    REQUIRE(ms.breakpoints[0] == Approx(5e-13).margin(1e-12));
    REQUIRE(ms.breakpoints[1] == 1.0);
    REQUIRE(ms.multiplicities == std::vector<int>{2, 1});
}

TEST_CASE("cluster_nodes merges exact duplicates even at zero tolerance") {
    const auto ms = nodes_of({2.0, 2.0, 1.0}, 0.0);
    REQUIRE(ms.breakpoints == std::vector<double>{1.0, 2.0});
    REQUIRE(ms.multiplicities == std::vector<int>{1, 2});
}

TEST_CASE("truncated power kernel derivatives") {
    const auto k = Kernel::trunc_power(0.5, 3);
    REQUIRE(k.value(0.2) == Approx(0.027));
    REQUIRE(k.value(0.7) == 0.0);
    // m-th derivative is (-1)^m p!/(p-m)! (t-x)_+^{p-m}
    REQUIRE(k.derivative(0.2, 1) == Approx(-3.0 * 0.09));
    REQUIRE(k.derivative(0.2, 2) == Approx(6.0 * 0.3));
    REQUIRE(k.derivative(0.2, 3) == Approx(-6.0));
    REQUIRE(k.derivative(0.5, 2) == 0.0);  // continuous at the threshold
    REQUIRE(k.derivative(0.5, 3) == 0.0);  // one-sided convention
    REQUIRE(k.derivative(0.7, 5) == 0.0);  // above threshold everything vanishes
    REQUIRE_THROWS_AS(k.derivative(0.5, 4), DerivativeUnavailable);
}

TEST_CASE("neg-exp kernel derivatives") {
    const auto k = Kernel::neg_exp();
    REQUIRE(k.value(1.0) == Approx(std::exp(-1.0)));
    REQUIRE(k.derivative(0.5, 1) == Approx(-std::exp(-0.5)));
    REQUIRE(k.derivative(0.5, 4) == Approx(std::exp(-0.5)));
}

TEST_CASE("two-point divided difference of exp(-x)") {
    // Direct two-point formula: (e^{-1} - e^{0}) / (1 - 0) = expm1(-1).
    const double expected = std::expm1(-1.0);
    REQUIRE(confluent_dd(nodes_of({0.0, 1.0}), Kernel::neg_exp()) ==
            Approx(expected).epsilon(1e-15));
}

TEST_CASE("confluent pair equals the first derivative") {
    REQUIRE(confluent_dd(nodes_of({0.0, 0.0}), Kernel::neg_exp()) == Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("second divided difference of x^2 is its leading coefficient") {
    REQUIRE(confluent_dd(nodes_of({0.0, 1.0, 2.0}), Kernel::monomial(2)) ==
            Approx(1.0).epsilon(1e-15));
}

TEST_CASE("distinct-node equivalence with the explicit sum") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        const int count = 2 + static_cast<int>(rng() % 6);
        std::vector<double> vals;
        while (static_cast<int>(vals.size()) < count) {
            const double v = testref::random_vector(rng, 1, -1.0, 1.0)[0];
            bool far = true;
            for (double w : vals)
                if (std::fabs(v - w) < 1e-3) far = false;
            if (far) vals.push_back(v);
        }
        const auto ms = nodes_of(vals);
        REQUIRE(ms.max_multiplicity() == 1);

        struct Case {
            Kernel kernel;
            std::function<long double(long double)> h;
        };
        const double thr = 0.3;
        const Case cases[] = {
            {Kernel::neg_exp(), [](long double x) { return std::exp(-x); }},
            {Kernel::trunc_power(thr, count + 1),
             [&](long double x) { return testref::trunc_pow(thr - x, count + 1); }},
            {Kernel::monomial(3),
             [](long double x) { return x * x * x; }},
        };
        for (const auto& c : cases) {
            const long double expected = testref::explicit_distinct_dd(ms.breakpoints, c.h);
            const double got = confluent_dd(ms, c.kernel);
            REQUIRE(got == Approx(static_cast<double>(expected)).epsilon(1e-12).margin(1e-14));
        }
    }
}

TEST_CASE("perturbation limit: difference shrinks linearly in epsilon") {
    // dd over {0, 0, 1} of exp(-x) versus distinct nodes {0, eps, 1}.
    const double confluent =
        confluent_dd(nodes_of({0.0, 0.0, 1.0}), Kernel::neg_exp());
    const auto h = [](long double x) { return std::exp(-x); };
    double prev_err = 0.0;
    for (int k = 4; k <= 7; ++k) {
        const double eps = std::pow(10.0, -k);
        const std::vector<double> nodes{0.0, eps, 1.0};
        const double perturbed = static_cast<double>(testref::explicit_distinct_dd(nodes, h));
        const double err = std::fabs(perturbed - confluent);
        if (k > 4) {
            // one decade of epsilon buys roughly one decade of error
            REQUIRE(err < prev_err * 0.3);
            REQUIRE(err > prev_err * 0.01);
        }
        prev_err = err;
    }
    REQUIRE(prev_err < 1e-7);
}

TEST_CASE("polynomial exactness of the confluent table") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 5); // m+1 total nodes
        std::vector<double> vals = testref::random_vector(rng, m + 1, -1.0, 1.0);
        if (trial % 3 == 0 && m >= 1) vals[1] = vals[0]; // exercise a repeat
        const auto ms = nodes_of(vals);
        for (int q = 0; q <= m; ++q) {
            const double dd = confluent_dd(ms, Kernel::monomial(q));
            if (q < m)
                REQUIRE(dd == Approx(0.0).margin(1e-11));
            else
                REQUIRE(dd == Approx(1.0).epsilon(1e-11));
        }
    }
}

TEST_CASE("divided difference is invariant under input permutation") {
    std::mt19937_64 rng(99);
    std::vector<double> vals = {0.4, -0.3, 0.9, 0.1, 0.4};
    const auto base = cluster_nodes(vals);
    const double reference = confluent_dd(base, Kernel::neg_exp());
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(vals.begin(), vals.end(), rng);
        const auto ms = cluster_nodes(vals);
        REQUIRE(ms == base);
        // same multiset -> bit-identical table
        REQUIRE(confluent_dd(ms, Kernel::neg_exp()) == reference);
    }
}

TEST_CASE("cancellation index of a benign difference is 1") {
    REQUIRE(cancellation_index(nodes_of({0.0, 1.0}), Kernel::monomial(1)) == 1.0);
}

TEST_CASE("cancellation index explodes for near-confluent nodes") {
    const double kappa = cancellation_index(nodes_of({0.0, 1e-6}), Kernel::neg_exp());
    REQUIRE(kappa > 1e5);
}

TEST_CASE("cancellation index matches the explicit term sum for distinct nodes") {
    const std::vector<double> vals{0.0, 2.0 / 7.0, 3.0 / 7.0, 6.0 / 7.0};
    const auto ms = nodes_of(vals);
    const auto kernel = Kernel::trunc_power(0.5, 3);
    const auto h = [](long double x) { return testref::trunc_pow(0.5L - x, 3); };

    const long double dd = testref::explicit_distinct_dd(vals, h);
    const long double abs_sum = testref::explicit_distinct_dd_abs(vals, h);
    const double expected = static_cast<double>(abs_sum / std::fabs(dd));

    const double kappa = cancellation_index(ms, kernel);
    REQUIRE(std::isfinite(kappa));
    REQUIRE(kappa > 1.0);
    REQUIRE(kappa == Approx(expected).epsilon(1e-12));
}

TEST_CASE("cancellation index is +inf for an exact zero with nonzero terms") {
    // dd of a constant over two nodes: terms 1/(z0-z1) and 1/(z1-z0) cancel exactly.
    const double kappa = cancellation_index(nodes_of({0.0, 1.0}), Kernel::monomial(0));
    REQUIRE(std::isinf(kappa));
}

TEST_CASE("strict policy rejects the jump-order derivative at the threshold") {
    const auto ms = nodes_of({0.0, 0.5, 0.5});
    REQUIRE_THROWS_AS(confluent_dd(ms, Kernel::trunc_power(0.5, 1)), DerivativeUnavailable);
    // one-sided policy substitutes the limit from above instead
    REQUIRE_NOTHROW(confluent_dd(ms, Kernel::trunc_power(0.5, 1), Confluence::OneSidedAtThreshold));
    // away from the threshold the same multiset is fine
    REQUIRE_NOTHROW(confluent_dd(ms, Kernel::trunc_power(0.4, 1)));
    // orders strictly above the jump are unavailable under any policy
    const auto triple = nodes_of({0.0, 0.5, 0.5, 0.5});
    REQUIRE_THROWS_AS(confluent_dd(triple, Kernel::trunc_power(0.5, 1), Confluence::OneSidedAtThreshold),
                      DerivativeUnavailable);
}

TEST_CASE("cluster_nodes input validation") {
    REQUIRE_THROWS_AS(cluster_nodes(std::vector<double>{}), InvalidArgument);
    REQUIRE_THROWS_AS(cluster_nodes(std::vector<double>{1.0}, -1.0), InvalidArgument);
    REQUIRE_THROWS_AS(cluster_nodes(std::vector<double>{std::nan("")}), InvalidArgument);
}
