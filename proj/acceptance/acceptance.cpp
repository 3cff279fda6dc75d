// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cutofflab/cutofflab.hpp"

#include "../tools/cli.hpp"

using namespace cutofflab;

namespace {

// Prints a sub-check line and folds it into the criterion verdict.
struct Verdict {
    bool ok = true;

    void check(bool cond, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
        va_list args;
        va_start(args, fmt);
        std::printf("    %s ", cond ? "ok  " : "FAIL");
        std::vprintf(fmt, args);
        std::printf("\n");
        va_end(args);
        ok = ok && cond;
    }
};

bool criterion_cycle_gap(Verdict& v) {
    const double gap = spectral_gap(cycle_model(64).chain).gap;
    const double expect = 1 - std::cos(2 * M_PI / 64);
    v.check(std::abs(gap - expect) <= 1e-9, "lambda=%.15g expected %.15g", gap, expect);
    return v.ok;
}

bool criterion_cube_constants(Verdict& v) {
    const Chain c = hypercube_model(8).chain;
    const MetricData m = hop_metric(c);
    const double gamma = poincare_constant(c);
    const double k1 = ollivier_kappa1(c, m).value;
    const double rho = bakry_emery_rho(c).value;
    const ConstantBracket a = sobolev_upper_estimate(c, SobolevKind::mlsi);
    const ConstantBracket b = sobolev_upper_estimate(c, SobolevKind::lsi);
    v.check(std::abs(gamma - 0.25) <= 1e-9, "gamma=%.15g", gamma);
    v.check(std::abs(k1 - 0.25) <= 1e-9, "kappa1=%.15g", k1);
    v.check(std::abs(rho - 0.25) <= 1e-6, "rho=%.15g", rho);
    v.check(std::abs(a.upper - 0.5) <= 1e-3, "alpha_upper=%.15g", a.upper);
    v.check(std::abs(b.upper - 0.125) <= 1e-3, "beta_upper=%.15g", b.upper);
    return v.ok;
}

bool criterion_rank_one(Verdict& v) {
    Vec pi(6);
    pi << 0.1, 0.18, 0.18, 0.18, 0.18, 0.18;
    const Chain c = rank_one_model(pi).chain;
    const MetricData m = hop_metric(c);
    const CurvatureReport r = curvature_report(c, m);
    const double lambda = spectral_gap(c).gap, gamma = poincare_constant(c);
    const ConstantBracket a = sobolev_upper_estimate(c, SobolevKind::mlsi);
    const CertifiedBounds cert = certified_lower_bounds(c, r, m);
    v.check(std::abs(r.kappa1 - 1.0) <= 1e-12, "kappa1=%.17g", r.kappa1);
    v.check(std::abs(lambda - 1.0) <= 1e-9, "lambda=%.15g", lambda);
    v.check(std::abs(gamma - 1.0) <= 1e-9, "gamma=%.15g", gamma);
    const double rho_expect = 0.5 + 0.1 / 1.1;
    v.check(std::abs(r.rho - rho_expect) <= 1e-6, "rho=%.12g expected %.12g (self-consistent value 1/2 + pi_min = %.12g)",
            r.rho, rho_expect, 0.5 + 0.1);
    v.check(a.upper <= 2 + 1e-3, "alpha_upper=%.12g", a.upper);
    v.check(cert.alpha_lower && std::abs(*cert.alpha_lower - 1.0) <= 1e-12, "alpha_lower=%.12g",
            cert.alpha_lower.value_or(NAN));
    return v.ok;
}

bool criterion_cube_profile(Verdict& v) {
    const long n = 10000;
    for (double s : {-1.0, 0.0, 1.0}) {
        const double t = n * std::log(static_cast<double>(n)) / 4 + s * n;
        const double tv = cube_exact_tv(n, t), f = cube_profile_F(s);
        v.check(std::abs(tv - f) <= 0.01, "s=%g d_tv=%.6f F=%.6f", s, tv, f);
    }
    return v.ok;
}

bool criterion_cycle_profile(Verdict& v) {
    const int n = 200;
    const Chain c = cycle_model(n).chain;
    for (double t : {0.02, 0.05, 0.1, 0.2}) {
        const double tv = worst_case_tv(c, t * n * n, {0}), f = cycle_profile_F(t);
        v.check(std::abs(tv - f) <= 0.02, "t=%g d_tv=%.6f F=%.6f", t, tv, f);
    }
    return v.ok;
}

bool criterion_rank_one_perturbation(Verdict& v) {
    const double theta = 0.25;
    const Chain c = cycle_model(12).chain;
    const Chain p = rank_one_perturb(c, theta);
    double worst = 0.0;
    for (int k = 1; k <= 16; ++k) {
        const double t = 0.5 * k;
        worst = std::max(worst, std::abs(worst_case_tv(p, t, {0}) - std::exp(-theta * t) * worst_case_tv(c, (1 - theta) * t, {0})));
    }
    v.check(worst <= 1e-10, "max |d~(t) - e^{-theta t} d((1-theta)t)| = %.3g", worst);
    const double lambda = spectral_gap(c).gap, perturbed = spectral_gap(p).gap;
    const double literal = 1 - theta + theta * lambda, consistent = theta + (1 - theta) * lambda;
    v.check(std::abs(perturbed - literal) <= 1e-9, "lambda~=%.12g vs 1-theta+theta*lambda=%.12g", perturbed, literal);
    std::printf("    note lambda~ vs theta+(1-theta)*lambda=%.12g, error %.3g\n", consistent, std::abs(perturbed - consistent));
    return v.ok;
}

bool criterion_varentropy(Verdict& v) {
    std::mt19937_64 rng(7);
    std::exponential_distribution<double> e(1.0);
    auto law = [&](int n) {
        Vec p(n);
        for (int i = 0; i < n; ++i) p[i] = e(rng);
        return Vec(p / p.sum());
    };
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int a = 2 + k % 4, b = 2 + (k / 4) % 5;
        const Vec p = law(a), q = law(b);
        const Vec f = law(a).cwiseQuotient(p), g = law(b).cwiseQuotient(q);
        Vec pq(a * b), fg(a * b);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) {
                pq[i * b + j] = p[i] * q[j];
                fg[i * b + j] = f[i] * g[j];
            }
        const double lhs = density_stats(pq, fg).varentropy;
        const double rhs = density_stats(p, f).varentropy + density_stats(q, g).varentropy;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    v.check(worst <= 1e-9, "tensorization max error %.3g over 100 products", worst);
    const Chain cube = hypercube_model(8).chain;
    const std::vector<double> grid{0.25, 0.5, 1, 2, 3, 4, 6, 8, 12, 16};
    const VarentropyCurve curve = varentropy_curve(cube, dirac_density(cube, 0), grid);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        err = std::max(err, std::abs(curve.varentropy[k] - cube_varentropy_closed_form(8, grid[k])));
    v.check(err <= 1e-8, "cube(8) closed form max error %.3g", err);
    return v.ok;
}

std::vector<Model> width_zoo() {
    std::vector<Model> zoo;
    zoo.push_back(cycle_model(10));
    zoo.push_back(cycle_model(64));
    zoo.push_back(hypercube_model(6));
    zoo.push_back(hypercube_model(10));
    zoo.push_back(abelian_cayley_model({4, 3}, {{1, 0}, {0, 1}}));
    zoo.push_back(random_cayley_model({50}, 3, 1));
    zoo.push_back(random_cayley_model({8, 8}, 3, 3));
    zoo.push_back(rank_one_model((Vec(6) << 0.1, 0.18, 0.18, 0.18, 0.18, 0.18).finished()));
    for (RateRule rule : {RateRule::gibbs, RateRule::metropolis, RateRule::sqrt}) {
        zoo.push_back(ising_graph_model(4, path_graph(4), 0.05, rule));
        zoo.push_back(glauber_hardcore_model(4, path_graph(4), 0.4, rule));
    }
    zoo.push_back(ising_graph_model(8, cycle_graph(8), 0.6, RateRule::gibbs));
    zoo.push_back(curie_weiss_model(6, 1.2, RateRule::metropolis));
    zoo.push_back(glauber_hardcore_model(10, cycle_graph(10), 1.0, RateRule::gibbs));
    zoo.push_back(zero_range_mf_model(3, 4, {1.0, 2.0, 3.0, 4.0}));
    zoo.push_back(zero_range_mf_model(4, 5, {1.0, 1.0, 1.0, 1.0, 1.0}));
    zoo.push_back(exclusion_model(8, 4, cycle_graph(8)));
    zoo.push_back(exclusion_model(6, 2, path_graph(6)));
    return zoo;
}

bool criterion_width(Verdict& v) {
    for (const Model& m : width_zoo()) {
        const SpectralSummary s = spectral_summary(m);
        WidthInputs in;
        in.gamma = s.gamma;
        in.lambda = s.lambda;
        in.starts = worst_case_starts(m).states;
        double worst = INFINITY;
        for (double eps : {0.1, 0.25, 0.4}) {
            const CutoffDiagnostics d = width_bounds(m.chain, eps, in);
            worst = std::min(worst, d.width_bound_thm_main + 1e-9 - d.width);
        }
        v.check(worst >= 0.0, "%s (n=%d) min slack %.4g", m.name.c_str(), m.chain.size(), worst);
    }
    return v.ok;
}

bool criterion_idi(Verdict& v) {
    const std::vector<Model> models{hypercube_model(8), cycle_model(10), abelian_cayley_model({5, 5}, {{1, 0}, {0, 1}, {1, 1}})};
    const std::vector<double> grid{0.125, 0.25, 0.5, 1, 2, 4, 8, 16, 32};
    for (const Model& m : models) {
        const auto cert = group_walk_certificates(m);
        v.check(cert.at("rho_nonneg") == 1.0, "%s rho >= 0 certified", m.name.c_str());
        const MetricData md = hop_metric(m.chain);
        const Vec f0 = dirac_density(m.chain, 0);
        const CheckReport idi = idi_check(m.chain, md, f0, grid);
        v.check(idi.holds, "%s IDI min slack %.4g", m.name.c_str(), idi.min_slack);
        const CheckReport lip = roughness_check(m.chain, md, f0, grid);
        v.check(lip.holds, "%s roughness min slack %.4g", m.name.c_str(), lip.min_slack);
    }
    return v.ok;
}

bool criterion_battery(Verdict& v) {
    const std::vector<std::string> configs{
        R"({"model":{"kind":"hypercube","params":{"n":6}}})",
        R"({"model":{"kind":"cycle","params":{"n":8}}})",
        R"({"model":{"kind":"cycle","params":{"n":9}}})",
        R"({"model":{"kind":"rank_one","params":{"pi":[0.1,0.18,0.18,0.18,0.18,0.18]}}})",
        R"({"model":{"kind":"abelian_cayley","params":{"moduli":[4,3],"generators":[[1,0],[0,1]]}}})",
        R"({"model":{"kind":"random_cayley","params":{"moduli":[20],"k":2},"seed":3}})",
        R"({"model":{"kind":"glauber_ising","params":{"n":4,"beta":0.05,"graph":"path","rate_rule":"sqrt"}}})",
        R"({"model":{"kind":"glauber_ising","params":{"n":5,"beta":0.8,"graph":"curie_weiss","rate_rule":"metropolis"}}})",
        R"({"model":{"kind":"glauber_hardcore","params":{"n":4,"zeta":0.4,"graph":"path","rate_rule":"gibbs"}}})",
        R"({"model":{"kind":"zero_range_mf","params":{"n":3,"particles":3,"rates":[1,2,3]}}})",
        R"({"model":{"kind":"exclusion","params":{"n":5,"m":2,"graph":"cycle"}}})",
    };
    const auto dir = std::filesystem::temp_directory_path() / "cutofflab_acceptance";
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto path = dir / ("battery" + std::to_string(k) + ".json");
        std::ofstream(path) << configs[k];
        std::ostringstream lines;
        const int code = cli::cmd_verify(path.string(), lines);
        int passed = 0, skipped = 0;
        std::string failed;
        std::istringstream in(lines.str());
        for (std::string line; std::getline(in, line);) {
            if (line.find(" PASS") != std::string::npos) ++passed;
            else if (line.find(" SKIPPED") != std::string::npos) ++skipped;
            else failed += " [" + line + "]";
        }
        const auto kind = nlohmann::json::parse(configs[k])["model"]["kind"].get<std::string>();
        v.check(code == 0, "%s: exit %d, %d pass, %d skipped%s", kind.c_str(), code, passed, skipped, failed.c_str());
    }
    return v.ok;
}

bool criterion_transport(Verdict& v) {
    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(1.0);
    const std::vector<Model> spaces{cycle_model(9), hypercube_model(5), exclusion_model(6, 3, path_graph(6)),
                                    random_cayley_model({30}, 2, 1)};
    double gap = 0.0, lip = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Model& m = spaces[k % spaces.size()];
        const MetricData md = hop_metric(m.chain);
        const int n = m.chain.size();
        auto law = [&] {
            Vec p(n);
            for (int i = 0; i < n; ++i) p[i] = (k % 3 == 0 && i % 2) ? 0.0 : e(rng);
            return Vec(p / p.sum());
        };
        const Vec mu = law(), nu = law();
        const TransportPlan plan = wasserstein_1(mu, nu, md);
        gap = std::max(gap, std::abs(plan.cost - plan.dual_value));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                lip = std::max(lip, std::abs(plan.dual_potentials[x] - plan.dual_potentials[y]) - md.dist(x, y));
    }
    v.check(gap <= 1e-9, "primal/dual gap %.3g over 200 pairs", gap);
    v.check(lip <= 1e-9, "dual potentials 1-Lipschitz (excess %.3g)", lip);
    double tv_err = 0.0;
    for (int k = 0; k < 50; ++k) {
        const int n = 3 + k % 10;
        Vec p(n), q(n);
        for (int i = 0; i < n; ++i) p[i] = e(rng), q[i] = e(rng);
        p /= p.sum();
        q /= q.sum();
        tv_err = std::max(tv_err, std::abs(tv_via_transport(p, q) - 0.5 * (p - q).cwiseAbs().sum()));
    }
    v.check(tv_err <= 1e-12, "trivial metric vs half l1, max error %.3g", tv_err);
    const Chain cube = hypercube_model(5).chain;
    const MetricData md = hop_metric(cube);
    bool exact = true;
    for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y)
            exact = exact && wasserstein_1(Vec::Unit(32, x), Vec::Unit(32, y), md).cost == md.dist(x, y);
    v.check(exact, "W1 between Dirac masses equals the hop distance on cube(5)");
    return v.ok;
}

bool criterion_glauber(Verdict& v) {
    for (RateRule rule : {RateRule::gibbs, RateRule::metropolis, RateRule::sqrt}) {
        for (const Model& m : {ising_graph_model(4, path_graph(4), 0.05, rule),
                               glauber_hardcore_model(4, path_graph(4), 0.4, rule)}) {
            const DeltaBound b = glauber_delta_bound(m);
            const double k1 = ollivier_kappa1(m.chain, hop_metric(m.chain)).value;
            v.check(b.kappa1_lower <= k1 + 1e-12, "%s: delta bound %.6g <= kappa1 %.6g", m.name.c_str(),
                    b.kappa1_lower, k1);
            const Mat T = to_dense(m.chain.T);
            const Vec& pi = m.glauber->target;
            double defect = 0.0;
            for (int x = 0; x < T.rows(); ++x)
                for (int y = 0; y < T.cols(); ++y) defect = std::max(defect, std::abs(pi[x] * T(x, y) - pi[y] * T(y, x)));
            v.check(defect <= 1e-12, "%s: detailed balance defect %.3g", m.name.c_str(), defect);
        }
    }
    return v.ok;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(Verdict&)> run;
    };
    const std::vector<Criterion> criteria{
        {"cycle spectral gap", criterion_cycle_gap},
        {"cube constants", criterion_cube_constants},
        {"rank-one constants", criterion_rank_one},
        {"cube cutoff profile", criterion_cube_profile},
        {"cycle profile", criterion_cycle_profile},
        {"rank-one perturbation", criterion_rank_one_perturbation},
        {"varentropy", criterion_varentropy},
        {"width bound on the zoo", criterion_width},
        {"IDI and roughness", criterion_idi},
        {"inequality battery", criterion_battery},
        {"transport", criterion_transport},
        {"Glauber certificates", criterion_glauber},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        bool ok = false;
        try {
            ok = criteria[k].run(v);
        } catch (const std::exception& e) {
            std::printf("    FAIL exception: %s\n", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%zu] %s %s (%.1fs)\n", k + 1, criteria[k].name, ok ? "PASS" : "FAIL", secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
