#include "cutofflab/functionals.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cutofflab {

namespace {

constexpr double kTimeTol = 1e-7;

void check_epsilon(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0,1)");
}

void check_dense(const Chain& chain, int dense_cap) {
    if (chain.size() > dense_cap)
        throw Error(ErrorKind::TooLargeForDense, std::to_string(chain.size()) + " states exceed the dense cap");
}

// D^{1/2} A D^{-1/2} for a pi-reversible A, symmetrised against round-off.
Mat symmetrized(const Mat& A, const Vec& pi) {
    const Vec s = pi.array().sqrt();
    Mat S = s.asDiagonal() * A * s.cwiseInverse().asDiagonal();
    return 0.5 * (S + S.transpose());
}

Mat additive_symmetrization(const Chain& chain) {
    return 0.5 * (to_dense(chain.T) + to_dense(chain.adjoint));
}

}  // namespace

Vec dirac_density(const Chain& chain, int x) {
    Vec f = Vec::Zero(chain.size());
    f(x) = 1.0 / chain.pi(x);
    return f;
}

DensityEvolution::DensityEvolution(const Chain& chain, Mat initial) : chain_(&chain), F_(std::move(initial)) {}

DensityEvolution DensityEvolution::from_diracs(const Chain& chain, const std::vector<int>& starts) {
    const int n = chain.size();
    if (starts.empty()) {
        Mat F = chain.pi.cwiseInverse().asDiagonal();
        return DensityEvolution(chain, std::move(F));
    }
    Mat F = Mat::Zero(n, static_cast<Eigen::Index>(starts.size()));
    for (std::size_t j = 0; j < starts.size(); ++j) F(starts[j], j) = 1.0 / chain.pi(starts[j]);
    return DensityEvolution(chain, std::move(F));
}

void DensityEvolution::advance(double dt) {
    if (dt <= 0.0) return;
    F_ = semigroup_apply(*chain_, F_, dt, Direction::adjoint);
    t_ += dt;
}

double DensityEvolution::worst_tv() const {
    Eigen::RowVectorXd tv = chain_->pi.transpose() * (F_.array() - 1.0).abs().matrix();
    return 0.5 * tv.maxCoeff();
}

double DensityEvolution::worst_l2() const {
    Eigen::RowVectorXd l2 = chain_->pi.transpose() * (F_.array() - 1.0).square().matrix();
    return 0.5 * std::sqrt(l2.maxCoeff());
}

double DensityEvolution::max_varentropy() const {
    double best = 0.0;
    for (int j = 0; j < F_.cols(); ++j) best = std::max(best, column_stats(j).varentropy);
    return best;
}

double worst_case_tv(const Chain& chain, double t, const std::vector<int>& starts) {
    auto ev = DensityEvolution::from_diracs(chain, starts);
    ev.advance(t);
    return ev.worst_tv();
}

std::vector<double> worst_case_tv_curve(const Chain& chain, const std::vector<double>& times,
                                        const std::vector<int>& starts) {
    auto ev = DensityEvolution::from_diracs(chain, starts);
    std::vector<double> out;
    for (double t : times) {
        ev.advance(t - ev.time());
        out.push_back(ev.worst_tv());
    }
    return out;
}

std::vector<double> worst_case_l2_curve(const Chain& chain, const std::vector<double>& times) {
    auto ev = DensityEvolution::from_diracs(chain);
    std::vector<double> out;
    for (double t : times) {
        ev.advance(t - ev.time());
        out.push_back(ev.worst_l2());
    }
    return out;
}

double first_passage_time(DensityEvolution& ev, double eps) {
    check_epsilon(eps);
    if (ev.worst_tv() <= eps) return ev.time();
    DensityEvolution lo = ev;
    DensityEvolution hi = ev;
    double step = 1.0;
    hi.advance(step);
    int doublings = 0;
    while (hi.worst_tv() > eps) {
        if (++doublings > 60) throw Error(ErrorKind::TooLarge, "mixing time bracket exceeded 2^60");
        lo = hi;
        hi.advance(step);
        step *= 2.0;
    }
    while (hi.time() - lo.time() > kTimeTol * std::max(1.0, hi.time())) {
        DensityEvolution mid = lo;
        mid.advance(0.5 * (hi.time() - lo.time()));
        if (mid.worst_tv() <= eps) hi = std::move(mid);
        else lo = std::move(mid);
    }
    ev = hi;
    return hi.time();
}

double mixing_time(const Chain& chain, double epsilon, const std::vector<int>& starts) {
    check_epsilon(epsilon);
    auto ev = DensityEvolution::from_diracs(chain, starts);
    return first_passage_time(ev, epsilon);
}

double mixing_time_from(const Chain& chain, const Vec& density, double epsilon) {
    check_epsilon(epsilon);
    DensityEvolution ev(chain, Mat(density));
    return first_passage_time(ev, epsilon);
}

double mixing_window(const Chain& chain, double epsilon, const std::vector<int>& starts) {
    return mixing_time(chain, epsilon, starts) - mixing_time(chain, 1.0 - epsilon, starts);
}

namespace {

// 1 minus the largest real part among eigenvalues other than the one closest to 1.
double gap_from(const std::vector<std::complex<double>>& ev) {
    if (ev.size() <= 1) return 1.0;
    std::size_t one = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i] - 1.0) < std::abs(ev[one] - 1.0)) one = i;
    if (std::abs(ev[one] - 1.0) > 1e-8) throw Error(ErrorKind::NotIrreducible, "no eigenvalue at 1");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i != one) best = std::max(best, ev[i].real());
    return 1.0 - best;
}

}  // namespace

SpectralData spectral_gap(const Chain& chain, int dense_cap) {
    check_dense(chain, dense_cap);
    SpectralData out;
    const Mat T = to_dense(chain.T);
    if (chain.reversible) {
        Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(T, chain.pi), Eigen::EigenvaluesOnly);
        for (int i = static_cast<int>(es.eigenvalues().size()) - 1; i >= 0; --i)
            out.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
    } else {
        Eigen::EigenSolver<Mat> es(T, false);
        for (int i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
        std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                  [](auto a, auto b) { return a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag()); });
    }
    out.gap = gap_from(out.eigenvalues);
    return out;
}

double poincare_constant(const Chain& chain, int dense_cap) {
    if (chain.reversible) return spectral_gap(chain, dense_cap).gap;
    check_dense(chain, dense_cap);
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(additive_symmetrization(chain), chain.pi),
                                          Eigen::EigenvaluesOnly);
    std::vector<std::complex<double>> ev;
    for (int i = 0; i < es.eigenvalues().size(); ++i) ev.emplace_back(es.eigenvalues()(i), 0.0);
    return gap_from(ev);
}

Vec poincare_eigenfunction(const Chain& chain, int dense_cap) {
    check_dense(chain, dense_cap);
    const int n = chain.size();
    if (n < 2) return Vec::Zero(n);
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(additive_symmetrization(chain), chain.pi));
    // Ascending order: the top eigenvector is the constant direction.
    Vec psi = es.eigenvectors().col(n - 2);
    Vec phi = psi.cwiseQuotient(chain.pi.cwiseSqrt());
    phi.array() -= chain.pi.dot(phi);
    const double norm = std::sqrt(chain.pi.dot(phi.cwiseProduct(phi)));
    return norm > 0.0 ? Vec(phi / norm) : phi;
}

CertifiedBounds certified_lower_bounds(double kappa1, bool adjoint_sectional_nonneg, double rho, double d_sparsity,
                                       bool reversible) {
    CertifiedBounds out;
    if (adjoint_sectional_nonneg) out.alpha_lower = kappa1;
    if (reversible && d_sparsity > 1.0) {
        const double logd = std::log(d_sparsity);
        std::optional<double> beta;
        if (rho > 0.0) beta = rho / (33.0 * logd);
        if (out.alpha_lower && *out.alpha_lower > 0.0) {
            const double via_alpha = *out.alpha_lower / (15.0 * logd);
            beta = beta ? std::max(*beta, via_alpha) : via_alpha;
        }
        out.beta_lower = beta;
    }
    return out;
}

InequalityReport herbst_check(const Chain& chain, const MetricData& metric, const Vec& f, double alpha_used,
                              const std::vector<double>& thetas, const std::vector<double>& radii) {
    if (!chain.reversible) throw Error(ErrorKind::InvalidParameters, "Herbst bound needs a reversible chain");
    if (lipschitz_seminorm(metric, f) > 1.0 + 1e-12) throw Error(ErrorKind::NotLipschitz, "observable is not 1-Lipschitz");
    InequalityReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    const double mean = chain.pi.dot(f);
    const Vec centred = f.array() - mean;
    for (double theta : thetas) {
        const double top = (theta * centred).maxCoeff();
        const double lhs = top + std::log(chain.pi.dot((theta * centred.array() - top).exp().matrix()));
        const double rhs = theta * theta / (2.0 * alpha_used);
        rep.min_slack = std::min(rep.min_slack, rhs - lhs);
    }
    for (double r : radii) {
        double tail = 0.0;
        for (int x = 0; x < chain.size(); ++x)
            if (centred(x) >= r - 1e-12) tail += chain.pi(x);
        rep.min_slack = std::min(rep.min_slack, std::exp(-alpha_used * r * r / 2.0) - tail);
    }
    rep.holds = rep.min_slack >= -1e-12;
    return rep;
}

}  // namespace cutofflab
