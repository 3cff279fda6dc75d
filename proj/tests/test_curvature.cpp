#include "doctest.h"

#include "support.hpp"

using namespace cutofflab;

namespace {

// min_x of the largest rho with Gamma_2 f(x) >= rho Gamma f(x) for all f. Built from dense
// Gamma/Gamma_2 on the 2-ball of x, split into range and kernel of A_x, and solved as a
// generalized eigenproblem on the Schur complement (kernel directions have B > 0).
double dense_rho(const Chain& c) {
    const int n = c.size();
    const Mat T = to_dense(c.T);
    const Mat L = T - Mat::Identity(n, n);
    auto gamma = [&](const Vec& f, const Vec& g) {
        Vec out(n);
        for (int x = 0; x < n; ++x) {
            double s = 0.0;
            for (int y = 0; y < n; ++y) s += T(x, y) * (f[x] - f[y]) * (g[x] - g[y]);
            out[x] = 0.5 * s;
        }
        return out;
    };
    double best = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
        std::vector<int> ball{x};
        for (int y = 0; y < n; ++y)
            if (y != x && T(x, y) > 0) ball.push_back(y);
        const std::size_t first = ball.size();
        for (std::size_t k = 1; k < first; ++k)
            for (int z = 0; z < n; ++z)
                if (T(ball[k], z) > 0 && std::find(ball.begin(), ball.end(), z) == ball.end()) ball.push_back(z);
        const int m = static_cast<int>(ball.size());
        Mat A(m, m), B(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const Vec ei = Vec::Unit(n, ball[i]), ej = Vec::Unit(n, ball[j]);
                A(i, j) = gamma(ei, ej)[x];
                B(i, j) = 0.5 * (L * gamma(ei, ej))[x] - 0.5 * (gamma(ei, L * ej)[x] + gamma(ej, L * ei)[x]);
            }
        Mat Q = Mat::Identity(m, m);
        Q.col(0).setOnes();
        Eigen::HouseholderQR<Mat> qr(Q);
        const Mat basis = Mat(qr.householderQ()).rightCols(m - 1);
        const Mat a = basis.transpose() * A * basis, b = basis.transpose() * B * basis;
        Eigen::SelfAdjointEigenSolver<Mat> ea(a);
        std::vector<int> range, kernel;
        for (int k = 0; k < a.rows(); ++k) (ea.eigenvalues()[k] > 1e-10 ? range : kernel).push_back(k);
        auto cols = [&](const std::vector<int>& idx) {
            Mat V(a.rows(), idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) V.col(k) = ea.eigenvectors().col(idx[k]);
            return V;
        };
        const Mat R = cols(range), K = cols(kernel);
        Mat schur = R.transpose() * b * R;
        if (!kernel.empty()) {
            const Mat bkk = K.transpose() * b * K, bkr = K.transpose() * b * R;
            schur -= bkr.transpose() * bkk.ldlt().solve(bkr);
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Mat> g(schur, R.transpose() * a * R);
        best = std::min(best, g.eigenvalues().minCoeff());
    }
    return best;
}

double path_w1(const std::vector<double>& mu, const std::vector<double>& nu) {
    double cum = 0.0, total = 0.0;
    for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
        cum += mu[i] - nu[i];
        total += std::abs(cum);
    }
    return total;
}

}  // namespace

TEST_CASE("Ollivier curvature of the 4-cube is 2/n") {
    const Chain c = hypercube_model(4).chain;
    CHECK(ollivier_kappa1(c, hop_metric(c)).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Ollivier curvature of a rank-one chain is 1") {
    const Chain c = rank_one_model((Vec(4) << 0.1, 0.2, 0.3, 0.4).finished()).chain;
    CHECK(ollivier_kappa1(c, hop_metric(c)).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Ollivier curvature of cycle(6) vanishes") {
    // Adjacent lazy rows live on the arc x-1, x, x+1, x+2, where the cycle metric is the line metric.
    const double w = path_w1({0.25, 0.5, 0.25, 0.0}, {0.0, 0.25, 0.5, 0.25});
    const Chain c = cycle_model(6).chain;
    const Kappa1Result k = ollivier_kappa1(c, hop_metric(c));
    CHECK(k.value == doctest::Approx(2.0 * (1.0 - w)).epsilon(1e-12));
    CHECK(std::abs(k.value) < 1e-12);
}

TEST_CASE("sectional certificate") {
    const Chain cube = hypercube_model(5).chain;
    CHECK(sectional_nonneg_certificate(cube.T, hop_metric(cube)));
    const Chain ab = abelian_cayley_model({5, 3}, {{1, 0}, {0, 1}}).chain;
    CHECK(sectional_nonneg_certificate(ab.T, hop_metric(ab)));
    // On the path 0-1-2, the row at 1 sends everything to 2 while the row at 0 stays home:
    // the lazy rows at 0 and 1 cannot be coupled within one hop.
    std::vector<Triplet> t{{0, 0, 0.9}, {0, 1, 0.1}, {1, 0, 0.05}, {1, 2, 0.95}, {2, 1, 0.5}, {2, 2, 0.5}};
    const Chain bad = build_chain(make_transition(3, t));
    CHECK_FALSE(sectional_nonneg_certificate(bad.T, hop_metric(bad)));
}

TEST_CASE("curvature needs a symmetric support") {
    std::vector<Triplet> t{{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 0.5}, {2, 2, 0.5}};
    const Chain c = build_chain(make_transition(3, t));
    MetricData fake;
    try {
        ollivier_kappa1(c, fake);
        FAIL("expected NotWeaklyReversible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotWeaklyReversible);
    }
}

TEST_CASE("Bakry-Emery curvature of the 4-cube is 2/n") {
    CHECK(bakry_emery_rho(hypercube_model(4).chain).value == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("Bakry-Emery curvature matches a dense generalized eigenvalue oracle") {
    std::mt19937_64 rng(30);
    const std::vector<Chain> chains{rank_one_model((Vec(6) << 0.1, 0.15, 0.15, 0.2, 0.2, 0.2).finished()).chain,
                                    cycle_model(7).chain, support::random_reversible_chain(rng, 8),
                                    support::random_chain(rng, 5)};
    for (const Chain& c : chains) {
        const RhoResult r = bakry_emery_rho(c);
        CHECK(r.value == doctest::Approx(dense_rho(c)).epsilon(1e-7));
    }
}

TEST_CASE("rank-one Bakry-Emery curvature equals 1/2 + pi_min") {
    const Chain c = rank_one_model((Vec(6) << 0.1, 0.15, 0.15, 0.2, 0.2, 0.2).finished()).chain;
    CHECK(bakry_emery_rho(c).value == doctest::Approx(0.6).epsilon(1e-7));
}

TEST_CASE("rho is feasible and maximal up to 1e-6") {
    for (const Chain& c : {cycle_model(8).chain, hypercube_model(3).chain}) {
        const RhoResult r = bakry_emery_rho(c);
        double at = std::numeric_limits<double>::infinity(), above = at;
        for (int x = 0; x < c.size(); ++x) {
            const LocalForms lf = local_forms(c, x);
            Eigen::SelfAdjointEigenSolver<Mat> a(lf.B - r.value * lf.A), b(lf.B - (r.value + 1e-6) * lf.A);
            at = std::min(at, a.eigenvalues()[0]);
            above = std::min(above, b.eigenvalues()[0]);
        }
        CHECK(at >= -1e-9);
        CHECK(above < -1e-9);
    }
}

TEST_CASE("cycle(6) Bakry-Emery curvature lies between 0 and the gap") {
    const double rho = bakry_emery_rho(cycle_model(6).chain).value;
    CHECK(rho >= -1e-9);
    CHECK(rho <= 0.5 + 1e-9);
}

TEST_CASE("Lichnerowicz pair and diameter bound across models") {
    const std::vector<Model> models{cycle_model(9), hypercube_model(4), abelian_cayley_model({4, 3}, {{1, 0}, {0, 1}}),
                                    ising_graph_model(4, path_graph(4), 0.3, RateRule::gibbs),
                                    exclusion_model(5, 2, cycle_graph(5)), zero_range_mf_model(3, 3, {1, 2, 3})};
    for (const Model& m : models) {
        const MetricData md = hop_metric(m.chain);
        const double k = ollivier_kappa1(m.chain, md).value;
        const double rho = bakry_emery_rho(m.chain).value;
        const SpectralSummary s = spectral_summary(m.chain);
        CHECK(s.lambda >= k - 1e-9);
        CHECK(s.gamma >= rho - 1e-9);
        CHECK(k * md.diameter <= 2.0 + 1e-9);
    }
}

TEST_CASE("Lipschitz and Wasserstein contraction at rate kappa1") {
    std::mt19937_64 rng(31);
    for (const Model& m : {hypercube_model(4), zero_range_mf_model(3, 3, {1, 2, 3})}) {
        const Chain& c = m.chain;
        const MetricData md = hop_metric(c);
        const double k = ollivier_kappa1(c, md).value;
        for (int rep = 0; rep < 5; ++rep) {
            const Vec f = support::random_vector(rng, c.size());
            const Vec mu = support::random_law(rng, c.size()), nu = support::random_law(rng, c.size());
            const double w0 = wasserstein_1(mu, nu, md).cost;
            for (double t : {0.3, 1.0, 2.5}) {
                CHECK(lipschitz_seminorm(md, semigroup_apply(c, f, t)) <= std::exp(-k * t) * lipschitz_seminorm(md, f) + 1e-12);
                // mu P_t has density P*_t (mu / pi).
                Vec mt = semigroup_apply(c, Vec(mu.cwiseQuotient(c.pi)), t, Direction::adjoint).cwiseProduct(c.pi);
                Vec nt = semigroup_apply(c, Vec(nu.cwiseQuotient(c.pi)), t, Direction::adjoint).cwiseProduct(c.pi);
                mt /= mt.sum();
                nt /= nt.sum();
                CHECK(wasserstein_1(mt, nt, md).cost <= std::exp(-k * t) * w0 + 1e-10);
            }
        }
    }
}

TEST_CASE("sub-commutation and local Poincare at rate rho") {
    std::mt19937_64 rng(32);
    for (const Chain& c : {hypercube_model(4).chain, cycle_model(8).chain}) {
        const double rho = bakry_emery_rho(c).value;
        for (int rep = 0; rep < 5; ++rep) {
            const Vec f = support::random_vector(rng, c.size());
            const Vec g = carre_du_champ(c, f);
            for (double t : {0.2, 1.0, 3.0}) {
                const Vec pf = semigroup_apply(c, f, t);
                const Vec pg = semigroup_apply(c, g, t);
                CHECK((std::exp(-2 * rho * t) * pg - carre_du_champ(c, pf)).minCoeff() >= -1e-10);
                const double ct = rho == 0.0 ? 2 * t : (1 - std::exp(-2 * rho * t)) / rho;
                const Vec var = semigroup_apply(c, Vec(f.cwiseProduct(f)), t) - pf.cwiseProduct(pf);
                CHECK((ct * pg - var).minCoeff() >= -1e-10);
            }
        }
    }
}

TEST_CASE("Gamma versus Lipschitz comparison") {
    std::mt19937_64 rng(33);
    const Chain c = ising_graph_model(4, path_graph(4), 0.2, RateRule::metropolis).chain;
    const MetricData md = hop_metric(c);
    for (int k = 0; k < 20; ++k) {
        const Vec f = support::random_vector(rng, c.size());
        const double g = carre_du_champ(c, f).maxCoeff(), lip = lipschitz_seminorm(md, f);
        CHECK(2 * g <= lip * lip + 1e-12);
        CHECK(lip * lip <= 2 * md.d_sparsity * g + 1e-12);
    }
}

TEST_CASE("delta bound for independent spins matches the cube") {
    const Model m = ising_graph_model(5, {}, 0.0, RateRule::gibbs);
    const DeltaBound d = glauber_delta_bound(m);
    CHECK(d.all_nonneg);
    CHECK(d.kappa1_lower == doctest::Approx(2.0 / 5));
}

TEST_CASE("delta bounds for Ising and hardcore on a path are valid") {
    const double beta = 0.05;
    CHECK(2 * (1 - std::exp(-2 * beta)) * std::exp(4 * beta) <= 1.0);
    for (RateRule rule : {RateRule::gibbs, RateRule::metropolis, RateRule::sqrt}) {
        for (const Model& m : {ising_graph_model(4, path_graph(4), beta, rule), glauber_hardcore_model(4, path_graph(4), 0.4, rule)}) {
            const DeltaBound d = glauber_delta_bound(m);
            const double k = ollivier_kappa1(m.chain, hop_metric(m.chain)).value;
            CHECK(d.all_nonneg);
            CHECK(d.kappa1_lower >= 0.0);
            CHECK(d.kappa1_lower <= k + 1e-12);
            CHECK(sectional_nonneg_certificate(m.chain.T, hop_metric(m.chain)));
            if (d.rho_lower) CHECK(*d.rho_lower <= bakry_emery_rho(m.chain).value + 1e-7);
        }
    }
}

TEST_CASE("group certificates") {
    const auto cube = group_walk_certificates(hypercube_model(6));
    CHECK(cube.at("kappa_inf_nonneg") == 1.0);
    CHECK(cube.at("rho_nonneg") == 1.0);
    CHECK(cube.at("rho_lower") == doctest::Approx(2.0 / 6));
    CHECK(cube.at("kappa1_lower") == doctest::Approx(2.0 / 6));
    const auto cyc = group_walk_certificates(cycle_model(7));
    CHECK(cyc.at("rho_nonneg") == 1.0);
    CHECK(cyc.count("rho_lower") == 0);
    const auto ab = group_walk_certificates(abelian_cayley_model({4, 3}, {{1, 1}}));
    CHECK(ab.at("rho_nonneg") == 1.0);
    CHECK_THROWS_AS(group_walk_certificates(rank_one_model(Vec::Constant(3, 1.0 / 3))), Error);
}

TEST_CASE("zero-range certificate is below the numeric curvature") {
    const Model m = zero_range_mf_model(3, 4, {1, 2, 3, 4});
    const auto cert = zero_range_certificates(m);
    CHECK(cert.at("kappa_inf_nonneg") == 1.0);
    const MetricData md = hop_metric(m.chain);
    CHECK(cert.at("kappa1_lower") <= ollivier_kappa1(m.chain, md).value + 1e-12);
    CHECK(cert.at("kappa1_lower") > 0.0);
    CHECK(sectional_nonneg_certificate(m.chain.T, md));
}

TEST_CASE("curvature report collects analytic bounds") {
    const Model m = hypercube_model(4);
    const CurvatureReport r = curvature_report(m, hop_metric(m.chain));
    CHECK(r.kappa1 == doctest::Approx(0.5));
    CHECK(r.rho == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.sectional_nonneg);
    CHECK(r.sectional_nonneg_adjoint);
    CHECK(r.analytic_lower_bounds.at("rho_lower") == doctest::Approx(0.5));
    const CertifiedBounds b = certified_lower_bounds(m.chain, r, hop_metric(m.chain));
    REQUIRE(b.alpha_lower);
    CHECK(*b.alpha_lower == doctest::Approx(0.5));
}
