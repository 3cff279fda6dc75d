#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cutofflab/functionals.hpp"
#include "cutofflab/geometry.hpp"
#include "cutofflab/models.hpp"

namespace cutofflab {

struct VarentropyCurve {
    std::vector<double> times;
    std::vector<double> entropy;
    std::vector<double> varentropy;
    std::vector<double> tv;
    std::vector<double> entropy_slope;  // -d/dt Ent(f_t) = <-L* f_t, log f_t>_pi
    std::vector<double> roughness;      // Lip log f_t, NaN without a metric
};

VarentropyCurve varentropy_curve(const Chain& chain, const Vec& f0, const std::vector<double>& times,
                                 const MetricData* metric = nullptr);

// <-L* f, log f>_pi; +inf when f vanishes where L* f does not.
double entropy_slope(const Chain& chain, const Vec& f);

// (1 + sqrt Varent) / (1 - TV) - Ent
double reverse_pinsker_gap(const EntropyStats& s);

// (1 + Ent(f)) / (gamma epsilon)
double fast_mixing_bound(const Chain& chain, const Vec& f, double epsilon, double gamma);
double fast_mixing_bound(const Chain& chain, const Vec& f, double epsilon);

// Max Varent(P_t* f^x) over the starts at t = t_mix(1 - epsilon).
double varentropy_correction(const Chain& chain, double epsilon, const std::vector<int>& starts = {});
// Same, for a single initial density.
double varentropy_correction(const Chain& chain, double epsilon, const Vec& density);

// psi(t) = 16 t log d + 4 t log+(diam / t)
double idi_psi(double t, double d_sparsity, int diameter);

struct SpectralSummary {
    double gamma = 0.0;   // Poincare constant
    double lambda = 0.0;  // spectral gap
};

// Characters for Abelian group walks, dense eigensolvers otherwise.
SpectralSummary spectral_summary(const Model& model, int dense_cap = kDenseCap);
SpectralSummary spectral_summary(const Chain& chain, int dense_cap = kDenseCap);

// Starts that realise the worst case: one state for transitive (group) walks, all
// states up to the cap, otherwise an evenly spaced subset flagged as sampled.
struct StartSet {
    std::vector<int> states;  // empty means all
    bool sampled = false;
};

StartSet worst_case_starts(const Model& model, int cap = kDenseCap);

struct WidthInputs {
    double gamma = 0.0;
    double lambda = 0.0;
    std::optional<double> alpha_lower;
    bool rho_nonneg = false;
    double d_sparsity = 1.0;
    int diameter = 0;
    std::vector<int> starts;
};

struct CutoffDiagnostics {
    double epsilon = 0.0;
    double tmix_eps = 0.0;         // t_mix(epsilon)
    double tmix_complement = 0.0;  // t_mix(1 - epsilon)
    double width = 0.0;
    double varentropy_correction = 0.0;
    double m_eps = 0.0;
    double width_bound_thm_main = 0.0;
    std::optional<double> width_bound_idi_gamma;
    std::optional<double> width_bound_idi_alpha;
    double criterion_ratio = 0.0;
    double product_condition = 0.0;
};

CutoffDiagnostics width_bounds(const Chain& chain, double epsilon, const WidthInputs& in);

struct CheckReport {
    bool holds = true;
    double min_slack = 0.0;
    std::vector<double> lhs;
    std::vector<double> rhs;
};

// Lip log P_t f <= 3 log d + 2 log+(diam/t) (forward); 6 log d + 2 log+(diam/t) (adjoint).
CheckReport roughness_check(const Chain& chain, const MetricData& metric, const Vec& f0,
                            const std::vector<double>& times, Direction dir = Direction::forward);

// Varent(f_t) <= psi(t) (-d/dt Ent(f_t)) for the adjoint evolution of f0.
CheckReport idi_check(const Chain& chain, const MetricData& metric, const Vec& f0, const std::vector<double>& times);

struct SweepRow {
    int n = 0;
    double tmix_lo = 0.0;  // t_mix(1 - epsilon)
    double tmix_hi = 0.0;  // t_mix(epsilon)
    double ratio = 0.0;
    double product_condition = 0.0;
    double criterion_ratio = 0.0;
    std::string error;
};

std::vector<SweepRow> cutoff_sweep(const std::function<Model(int)>& family, const std::vector<int>& sizes,
                                   double epsilon);

}  // namespace cutofflab
