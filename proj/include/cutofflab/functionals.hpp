#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "cutofflab/chain.hpp"
#include "cutofflab/geometry.hpp"

namespace cutofflab {

struct EntropyStats {
    double entropy = 0.0;
    double variance = 0.0;
    double varentropy = 0.0;
    double tv_to_equilibrium = 0.0;
};

// Statistics of a density f (unit pi-mean) under the law pi; 0 log 0 = 0.
template <class DerivedPi, class DerivedF>
EntropyStats density_stats(const Eigen::MatrixBase<DerivedPi>& pi, const Eigen::MatrixBase<DerivedF>& f) {
    const Eigen::Index n = f.size();
    double m = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) m += pi(x) * f(x);
    EntropyStats s;
    double ent = 0.0, mean_log = 0.0, var = 0.0, tv = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
        const double fx = f(x);
        var += pi(x) * (fx - m) * (fx - m);
        tv += pi(x) * std::abs(fx - 1.0);
        if (fx > 0.0) {
            const double u = fx / m;
            ent += pi(x) * (fx * std::log(u) - fx + m);
            mean_log += pi(x) * fx * std::log(fx);
        } else {
            ent += pi(x) * m;
        }
    }
    mean_log /= m;
    double varent = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
        const double fx = f(x);
        if (fx > 0.0) {
            const double d = std::log(fx) - mean_log;
            varent += pi(x) * fx * d * d;
        }
    }
    s.entropy = std::max(ent, 0.0);
    s.variance = var;
    s.varentropy = varent / m;
    s.tv_to_equilibrium = 0.5 * tv;
    return s;
}

inline EntropyStats stats(const Chain& chain, const Vec& f) { return density_stats(chain.pi, f); }

// Dirac density f^x = 1_x / pi(x).
Vec dirac_density(const Chain& chain, int x);

// A set of densities (one per column) evolved by the adjoint semigroup.
class DensityEvolution {
public:
    DensityEvolution(const Chain& chain, Mat initial);

    // All Dirac starts, or the listed subset.
    static DensityEvolution from_diracs(const Chain& chain, const std::vector<int>& starts = {});

    void advance(double dt);
    double time() const { return t_; }
    const Mat& densities() const { return F_; }
    const Chain& chain() const { return *chain_; }

    double worst_tv() const;
    double worst_l2() const;  // 1/2 max ||f - 1||_{L2(pi)}
    EntropyStats column_stats(int j) const { return density_stats(chain_->pi, F_.col(j)); }
    double max_varentropy() const;

private:
    const Chain* chain_;
    Mat F_;
    double t_ = 0.0;
};

// max_x TV(P_t(x,.), pi), over all starts or the listed subset.
double worst_case_tv(const Chain& chain, double t, const std::vector<int>& starts = {});

// d_tv on an increasing grid, advancing one evolution through the grid.
std::vector<double> worst_case_tv_curve(const Chain& chain, const std::vector<double>& times,
                                        const std::vector<int>& starts = {});

// 1/2 max_x ||P_t(x,.)/pi - 1||_2 on an increasing grid.
std::vector<double> worst_case_l2_curve(const Chain& chain, const std::vector<double>& times);

double mixing_time(const Chain& chain, double epsilon, const std::vector<int>& starts = {});
double mixing_time_from(const Chain& chain, const Vec& density, double epsilon);
double mixing_window(const Chain& chain, double epsilon, const std::vector<int>& starts = {});

// First time the evolution's worst TV drops to epsilon; the evolution is left at that time.
double first_passage_time(DensityEvolution& evolution, double epsilon);

struct SpectralData {
    std::vector<std::complex<double>> eigenvalues;
    double gap = 0.0;
};

SpectralData spectral_gap(const Chain& chain, int dense_cap = kDenseCap);

// Gap of the additive symmetrisation (T + T*)/2.
double poincare_constant(const Chain& chain, int dense_cap = kDenseCap);

// Eigenfunction of (T + T*)/2 for its second largest eigenvalue, normalised in L2(pi).
Vec poincare_eigenfunction(const Chain& chain, int dense_cap = kDenseCap);

enum class SobolevKind { mlsi, lsi };

struct SobolevOptions {
    int starts = 64;
    int max_iter = 3000;
    std::uint64_t seed = 1;
    int dense_cap = kDenseCap;
};

struct ConstantBracket {
    std::optional<double> exact;
    std::optional<double> lower;
    double upper = 0.0;
    Vec witness;
    double residual = 0.0;
    bool budget_exhausted = false;
};

// E(f, log f) / Ent(f)
double mlsi_ratio(const Chain& chain, const Vec& f);
// E(sqrt f, sqrt f) / Ent(f)
double lsi_ratio(const Chain& chain, const Vec& f);

ConstantBracket sobolev_upper_estimate(const Chain& chain, SobolevKind kind, const SobolevOptions& options = {});

struct CertifiedBounds {
    std::optional<double> alpha_lower;
    std::optional<double> beta_lower;
};

// alpha >= kappa1 + kappa_inf* (only when the adjoint sectional certificate holds);
// beta >= rho / (33 log d) and beta >= alpha_lower / (15 log d) for reversible chains.
CertifiedBounds certified_lower_bounds(double kappa1, bool adjoint_sectional_nonneg, double rho, double d_sparsity,
                                       bool reversible);

struct InequalityReport {
    bool holds = true;
    double min_slack = 0.0;  // smallest (rhs - lhs) seen
};

// Sub-Gaussian MGF and tail bounds for a 1-Lipschitz observable.
InequalityReport herbst_check(const Chain& chain, const MetricData& metric, const Vec& f, double alpha_used,
                              const std::vector<double>& thetas, const std::vector<double>& radii = {});

}  // namespace cutofflab
