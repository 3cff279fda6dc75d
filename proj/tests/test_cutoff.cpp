#include "doctest.h"

#include "support.hpp"

using namespace cutofflab;

TEST_CASE("constant density has vanishing statistics") {
    const Chain c = cycle_model(8).chain;
    const VarentropyCurve v = varentropy_curve(c, Vec::Ones(8), {0.0, 1.0, 2.0});
    for (std::size_t k = 0; k < v.times.size(); ++k) {
        CHECK(v.entropy[k] == 0.0);
        CHECK(v.varentropy[k] == 0.0);
        CHECK(v.tv[k] <= 1e-15);
        CHECK(v.entropy_slope[k] == 0.0);
    }
}

TEST_CASE("cube varentropy from a vertex matches the product formula") {
    const Chain c = hypercube_model(8).chain;
    const std::vector<double> grid{0.25, 0.5, 1, 2, 4, 8, 16};
    const VarentropyCurve v = varentropy_curve(c, dirac_density(c, 255), grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(std::abs(v.varentropy[k] - cube_varentropy_closed_form(8, grid[k])) <= 1e-8);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(v.entropy[k] <= v.entropy[k - 1] + 1e-12);
        CHECK(v.tv[k] <= v.tv[k - 1] + 1e-12);
        CHECK(v.entropy_slope[k] >= -1e-10);
    }
}

TEST_CASE("entropy slope matches a centred finite difference") {
    std::mt19937_64 rng(40);
    const Chain c = support::random_chain(rng, 7);
    const Vec f0 = support::random_density(rng, c.pi);
    const double h = 1e-5;
    for (double t : {0.5, 1.5}) {
        const auto v = varentropy_curve(c, f0, {t - h, t, t + h});
        CHECK(std::abs(v.entropy_slope[1] - (v.entropy[0] - v.entropy[2]) / (2 * h)) <= 1e-6);
    }
}

TEST_CASE("reverse Pinsker gap") {
    const Chain c = rank_one_model((Vec(4) << 0.1, 0.2, 0.3, 0.4).finished()).chain;
    CHECK(reverse_pinsker_gap(stats(c, Vec::Ones(4))) == doctest::Approx(1.0));
    for (int x = 0; x < 4; ++x) {
        const double p = c.pi[x];
        CHECK(reverse_pinsker_gap(stats(c, dirac_density(c, x))) == doctest::Approx(1 / p - std::log(1 / p)).epsilon(1e-12));
    }
    std::mt19937_64 rng(41);
    for (const Model& m : {hypercube_model(4), cycle_model(9), glauber_hardcore_model(4, path_graph(4), 0.4, RateRule::gibbs)})
        for (int k = 0; k < 200 / 3; ++k) CHECK(reverse_pinsker_gap(stats(m.chain, support::random_density(rng, m.chain.pi))) >= -1e-12);
    EntropyStats one;
    one.tv_to_equilibrium = 1.0;
    CHECK_THROWS_AS(reverse_pinsker_gap(one), Error);
}

TEST_CASE("fast mixing from low-entropy starts") {
    const Chain cube = hypercube_model(6).chain;
    const double gamma = 2.0 / 6;
    CHECK(fast_mixing_bound(cube, Vec::Ones(64), 0.25, gamma) == doctest::Approx(1 / (gamma * 0.25)));
    CHECK(mixing_time_from(cube, Vec::Ones(64), 0.25) == 0.0);
    const double bound = fast_mixing_bound(cube, dirac_density(cube, 0), 0.25);
    CHECK(bound == doctest::Approx((1 + 6 * std::log(2.0)) / (gamma * 0.25)).epsilon(1e-9));
    CHECK(mixing_time_from(cube, dirac_density(cube, 0), 0.25) <= bound);
    const Chain r1 = rank_one_model((Vec(5) << 0.1, 0.2, 0.2, 0.25, 0.25).finished()).chain;
    CHECK(fast_mixing_bound(r1, dirac_density(r1, 0), 0.25) >= std::log(0.9 / 0.25));
    CHECK_THROWS_AS(fast_mixing_bound(r1, Vec::Ones(5), 1.5, 1.0), Error);
}

TEST_CASE("varentropy correction") {
    // Cube from a vertex: the correction is the product-form varentropy at t_mix(1 - eps), and it
    // increases to n u^2 -> e^{-4s} where the limit profile equals 1 - eps.
    auto bisect = [](const std::function<double(double)>& g, double lo, double hi, double level) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > level ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double s_star = bisect(cube_profile_F, -5.0, 5.0, 0.75);
    double prev = 0.0;
    for (int n : {6, 8, 10}) {
        const Chain c = hypercube_model(n).chain;
        const double v = varentropy_correction(c, 0.25, std::vector<int>{0});
        const double t = mixing_time(c, 0.75, {0});
        CHECK(v == doctest::Approx(cube_varentropy_closed_form(n, t)).epsilon(1e-6));
        CHECK(v > prev);
        CHECK(v < std::exp(-4 * s_star));
        prev = v;
    }
    // Rank-one: f_t = e^{-t} f^x + (1 - e^{-t}) at e^{-t} (1 - pi(x)) = 1 - eps for the worst x.
    const Vec pi = (Vec(4) << 0.1, 0.2, 0.3, 0.4).finished();
    const Chain r1 = rank_one_model(pi).chain;
    const double eps = 0.25;
    const double t = std::log(0.9 / (1 - eps));
    double expect = 0.0;
    for (int x = 0; x < 4; ++x) {
        const Vec f = std::exp(-t) * dirac_density(r1, x) + Vec::Constant(4, 1 - std::exp(-t));
        expect = std::max(expect, stats(r1, f).varentropy);
    }
    CHECK(varentropy_correction(r1, eps) == doctest::Approx(expect).epsilon(1e-6));
    CHECK(varentropy_correction(r1, eps, Vec(Vec::Ones(4))) == 0.0);
    CHECK_THROWS_AS(varentropy_correction(r1, 0.6), Error);
}

TEST_CASE("width theorem bound on zoo models") {
    const std::vector<Model> models{cycle_model(10), hypercube_model(6), rank_one_model(Vec::Constant(8, 0.125)),
                                    random_cayley_model({15}, 2, 3), exclusion_model(6, 3, cycle_graph(6)),
                                    ising_graph_model(4, path_graph(4), 0.4, RateRule::metropolis)};
    for (const Model& m : models) {
        const SpectralSummary s = spectral_summary(m);
        WidthInputs in;
        in.gamma = s.gamma;
        in.lambda = s.lambda;
        for (double eps : {0.1, 0.25, 0.4}) {
            const CutoffDiagnostics d = width_bounds(m.chain, eps, in);
            CHECK(d.width <= d.width_bound_thm_main + 1e-9);
            CHECK(d.width >= 0.0);
            CHECK_FALSE(d.width_bound_idi_gamma);
        }
    }
}

TEST_CASE("IDI width bounds under a curvature certificate") {
    const Model m = hypercube_model(8);
    const MetricData md = hop_metric(m.chain);
    WidthInputs in;
    in.gamma = in.lambda = 0.25;
    in.alpha_lower = 0.5;
    in.rho_nonneg = true;
    in.d_sparsity = md.d_sparsity;
    in.diameter = md.diameter;
    in.starts = {0};
    const CutoffDiagnostics d = width_bounds(m.chain, 0.25, in);
    REQUIRE(d.width_bound_idi_gamma);
    REQUIRE(d.width_bound_idi_alpha);
    CHECK(d.width <= *d.width_bound_idi_gamma + 1e-9);
    CHECK(d.width <= *d.width_bound_idi_alpha + 1e-9);
    CHECK(d.m_eps >= idi_psi(d.tmix_eps, md.d_sparsity, md.diameter));
}

TEST_CASE("roughness bound") {
    const Chain cube = hypercube_model(8).chain;
    const MetricData mc = hop_metric(cube);
    const Vec one = Vec::Ones(256);
    const CheckReport flat = roughness_check(cube, mc, one, {0.5, 1.0});
    CHECK(flat.holds);
    CHECK(flat.lhs[0] == 0.0);
    const Vec dirac = dirac_density(cube, 0);
    CHECK(roughness_check(cube, mc, dirac, {0.5, 1, 2, 4, 8}).holds);
    CHECK(roughness_check(cube, mc, dirac, {0.5, 1, 2, 4, 8}, Direction::adjoint).holds);
    const Chain cyc = cycle_model(12).chain;
    const MetricData my = hop_metric(cyc);
    const CheckReport r = roughness_check(cyc, my, dirac_density(cyc, 0), {0.1});
    CHECK(r.holds);
    CHECK(r.rhs[0] > 3 * std::log(2.0));
}

TEST_CASE("information-theoretic differential inequality") {
    const Chain cube = hypercube_model(8).chain;
    std::vector<double> grid{0.5, 1, 2, 4, 8, 16};
    CHECK(idi_check(cube, hop_metric(cube), dirac_density(cube, 0), grid).holds);
    const Chain cyc = cycle_model(10).chain;
    CHECK(idi_check(cyc, hop_metric(cyc), dirac_density(cyc, 0), grid).holds);
    const CheckReport flat = idi_check(cyc, hop_metric(cyc), Vec::Ones(10), grid);
    CHECK(flat.holds);
    CHECK(flat.lhs[0] == 0.0);
}

TEST_CASE("cube sweep sharpens") {
    const auto rows = cutoff_sweep(hypercube_model, {6, 8, 10, 12}, 0.25);
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].error.empty());
        CHECK(rows[k].ratio > rows[k - 1].ratio);
        CHECK(rows[k].criterion_ratio > rows[k - 1].criterion_ratio);
    }
}

TEST_CASE("cycle sweep ratio tends to the limit-profile ratio") {
    auto inverse = [](double level) {
        double lo = 1e-4, hi = 10.0;
        for (int i = 0; i < 100; ++i) {
            const double mid = std::sqrt(lo * hi);
            (cycle_profile_F(mid) > level ? lo : hi) = mid;
        }
        return std::sqrt(lo * hi);
    };
    const double limit = inverse(0.75) / inverse(0.25);
    const auto rows = cutoff_sweep(cycle_model, {8, 16, 32}, 0.25);
    for (const auto& r : rows) CHECK(r.ratio < 0.5);
    CHECK(std::abs(rows[2].ratio - limit) < std::abs(rows[0].ratio - limit));
    CHECK(std::abs(rows[2].ratio - limit) < 0.01);
}

TEST_CASE("rank-one sweep ratio follows the closed form") {
    auto make = [](int n) { return rank_one_model(Vec::Constant(n, 1.0 / n)); };
    for (const auto& r : cutoff_sweep(make, {8, 16, 32}, 0.25)) {
        const double p = 1.0 / r.n;
        CHECK(r.ratio == doctest::Approx(std::log((1 - p) / 0.75) / std::log((1 - p) / 0.25)).epsilon(1e-6));
        CHECK(r.product_condition == doctest::Approx(std::log((1 - p) / 0.25)).epsilon(1e-6));
    }
}

TEST_CASE("varentropy correction grows no faster than (log d)^2 t_mix on the cube") {
    const double eps = 0.25;
    std::vector<double> ratios;
    for (int n : {6, 8, 10, 12}) {
        const Chain c = hypercube_model(n).chain;
        const double v = varentropy_correction(c, eps, std::vector<int>{0});
        const double t = mixing_time(c, eps, {0});
        const double logd = std::log(static_cast<double>(n));
        ratios.push_back(v / (logd * logd * t));
    }
    for (double r : ratios) CHECK(r <= 4 * ratios[0]);
}

TEST_CASE("varentropy tensorizes over product densities") {
    std::mt19937_64 rng(42);
    const Vec p = support::random_law(rng, 3), q = support::random_law(rng, 4);
    Vec pq(12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) pq[i * 4 + j] = p[i] * q[j];
    for (int k = 0; k < 20; ++k) {
        const Vec f = support::random_density(rng, p), g = support::random_density(rng, q);
        Vec fg(12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) fg[i * 4 + j] = f[i] * g[j];
        CHECK(density_stats(pq, fg).varentropy ==
              doctest::Approx(density_stats(p, f).varentropy + density_stats(q, g).varentropy).epsilon(1e-9));
    }
}
