#include "doctest.h"

#include "support.hpp"

using namespace cutofflab;

namespace {

// On a path, W1 is the l1 distance between cumulative distribution functions.
double path_w1(const Vec& mu, const Vec& nu) {
    double cum = 0.0, total = 0.0;
    for (int i = 0; i + 1 < mu.size(); ++i) {
        cum += mu[i] - nu[i];
        total += std::abs(cum);
    }
    return total;
}

Chain path_chain(int n) {
    std::vector<Triplet> t;
    for (int x = 0; x < n; ++x) {
        if (x > 0) t.emplace_back(x, x - 1, 0.5);
        if (x + 1 < n) t.emplace_back(x, x + 1, 0.5);
        if (x == 0 || x == n - 1) t.emplace_back(x, x, 0.5);
    }
    return build_chain(make_transition(n, t));
}

}  // namespace

TEST_CASE("W1 on a path equals the CDF formula") {
    std::mt19937_64 rng(1);
    const MetricData m = hop_metric(path_chain(12));
    for (int k = 0; k < 50; ++k) {
        const Vec mu = support::random_law(rng, 12), nu = support::random_law(rng, 12);
        CHECK(wasserstein_1(mu, nu, m).cost == doctest::Approx(path_w1(mu, nu)).epsilon(1e-12));
    }
}

TEST_CASE("plans are couplings and duals certify optimality") {
    std::mt19937_64 rng(2);
    const MetricData m = hop_metric(hypercube_model(4).chain);
    for (int k = 0; k < 50; ++k) {
        const Vec mu = support::random_law(rng, 16), nu = support::random_law(rng, 16);
        const TransportPlan p = wasserstein_1(mu, nu, m);
        Vec a = Vec::Zero(16), b = Vec::Zero(16);
        double cost = 0.0;
        for (auto [x, y, w] : p.pairs) {
            CHECK(w >= 0.0);
            a[x] += w;
            b[y] += w;
            cost += w * m.dist(x, y);
        }
        CHECK((a - mu).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((b - nu).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(cost == doctest::Approx(p.cost).epsilon(1e-12));
        CHECK(lipschitz_pairwise(m, p.dual_potentials) <= 1.0 + 1e-12);
        CHECK(std::abs(p.cost - p.dual_value) <= 1e-9);
        CHECK(std::abs(p.dual_value - (mu - nu).dot(p.dual_potentials)) <= 1e-12);
    }
}

TEST_CASE("trivial metric gives half the l1 distance") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        const Vec mu = support::random_law(rng, 10), nu = support::random_law(rng, 10);
        CHECK(std::abs(tv_via_transport(mu, nu) - 0.5 * (mu - nu).cwiseAbs().sum()) <= 1e-12);
    }
}

TEST_CASE("Dirac masses are transported at their distance") {
    const MetricData m = hop_metric(cycle_model(10).chain);
    for (int x = 0; x < 10; ++x)
        for (int y = 0; y < 10; ++y) {
            const Vec a = Vec::Unit(10, x), b = Vec::Unit(10, y);
            CHECK(wasserstein_1(a, b, m).cost == static_cast<double>(m.dist(x, y)));
            CHECK(wasserstein_inf(a, b, m) == static_cast<double>(m.dist(x, y)));
        }
}

TEST_CASE("W_inf threshold search") {
    const MetricData m = hop_metric(path_chain(5));
    Vec mu = Vec::Zero(5), nu = Vec::Zero(5);
    mu << 0.5, 0.5, 0, 0, 0;
    nu << 0, 0.5, 0.5, 0, 0;
    CHECK(wasserstein_inf(mu, nu, m) == 1.0);
    CHECK(wasserstein_1(mu, nu, m).cost == doctest::Approx(1.0));
    nu << 0, 0, 0, 0.5, 0.5;
    CHECK(wasserstein_inf(mu, nu, m) == 3.0);
}

TEST_CASE("unnormalised laws are rejected") {
    const MetricData m = hop_metric(cycle_model(4).chain);
    Vec mu = Vec::Constant(4, 0.25), nu = Vec::Constant(4, 0.3);
    CHECK_THROWS_AS(wasserstein_1(mu, nu, m), Error);
}
