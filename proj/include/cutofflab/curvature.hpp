#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutofflab/functionals.hpp"
#include "cutofflab/geometry.hpp"
#include "cutofflab/models.hpp"

namespace cutofflab {

struct Kappa1Result {
    double value = 0.0;
    std::pair<int, int> edge{-1, -1};  // edge attaining the largest lazy W1
};

// kappa1 = 2 (1 - max over support edges of W1 between the lazy rows at x and y).
Kappa1Result ollivier_kappa1(const Chain& chain, const MetricData& metric);

// True iff every support edge admits a lazy coupling moving no mass further than one hop.
bool sectional_nonneg_certificate(const SparseMat& T, const MetricData& metric);

// Quadratic forms f -> Gamma f(x) and f -> Gamma_2 f(x) on the 2-ball of x.
struct LocalForms {
    std::vector<int> coords;  // sorted, contains x
    Mat A;
    Mat B;
};

LocalForms local_forms(const Chain& chain, int x);

struct RhoResult {
    double value = 0.0;
    int state = -1;  // state whose constraint binds
};

// Largest rho with B_x - rho A_x >= 0 (up to 1e-9) at every state.
RhoResult bakry_emery_rho(const Chain& chain, double lo = -8.0, double hi = 8.0, double width = 1e-8);

struct DeltaBound {
    bool all_nonneg = false;
    double min_delta = 0.0;                // min delta_i(x), before normalisation
    double kappa1_lower = 0.0;             // min (delta_i(x) + delta_i(x^i)) / C
    std::optional<double> rho_lower;       // sqrt rule only
};

// Coupling bound for single-site dynamics; rescaled by the rate normalisation.
DeltaBound glauber_delta_bound(const Model& model);

// Keys: kappa_inf_nonneg, rho_nonneg (1 or 0); rho_lower and kappa1_lower when the
// step law lives on self-inverse elements.
std::map<std::string, double> group_walk_certificates(const Model& model);

// Monotone mean-field zero-range: kappa1_lower = delta / (n C) and kappa_inf_nonneg.
std::map<std::string, double> zero_range_certificates(const Model& model);

struct CurvatureReport {
    double kappa1 = 0.0;
    std::pair<int, int> kappa1_argmin_edge{-1, -1};
    bool sectional_nonneg = false;
    bool sectional_nonneg_adjoint = false;
    double rho = 0.0;
    int rho_argmin_state = -1;
    std::map<std::string, double> analytic_lower_bounds;
};

CurvatureReport curvature_report(const Model& model, const MetricData& metric);
CurvatureReport curvature_report(const Chain& chain, const MetricData& metric);

CertifiedBounds certified_lower_bounds(const Chain& chain, const CurvatureReport& report, const MetricData& metric);

}  // namespace cutofflab
