#include "cutofflab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cutofflab {

namespace {

void check_unit(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0, 1)");
}

void check_half(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0, 1/2)");
}

void check_grid(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) throw Error(ErrorKind::NegativeTime, "time grid must be nonnegative");
        if (i > 0 && times[i] < times[i - 1]) throw Error(ErrorKind::InvalidParameters, "time grid must be increasing");
    }
}

double log_lipschitz(const MetricData& metric, const Vec& g) {
    if ((g.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
    return lipschitz_seminorm(metric, g.array().log().matrix());
}

constexpr double kCheckTol = 1e-9;

void record(CheckReport& rep, double lhs, double rhs) {
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    const double slack = rhs - lhs;
    if (std::isnan(slack) || slack < -kCheckTol * std::max(1.0, std::abs(rhs))) rep.holds = false;
    rep.min_slack = rep.lhs.size() == 1 ? slack : std::min(rep.min_slack, slack);
}

}  // namespace

double entropy_slope(const Chain& chain, const Vec& f) {
    const Vec g = f - chain.adjoint * f;
    double s = 0.0;
    for (int x = 0; x < chain.size(); ++x) {
        if (f[x] > 0.0) s += chain.pi[x] * g[x] * std::log(f[x]);
        else if (g[x] < 0.0) return std::numeric_limits<double>::infinity();
    }
    return s;
}

VarentropyCurve varentropy_curve(const Chain& chain, const Vec& f0, const std::vector<double>& times,
                                 const MetricData* metric) {
    check_grid(times);
    VarentropyCurve c;
    DensityEvolution ev(chain, Mat(f0));
    for (double t : times) {
        ev.advance(t - ev.time());
        const Vec f = ev.densities().col(0);
        const EntropyStats s = density_stats(chain.pi, f);
        c.times.push_back(t);
        c.entropy.push_back(s.entropy);
        c.varentropy.push_back(s.varentropy);
        c.tv.push_back(s.tv_to_equilibrium);
        c.entropy_slope.push_back(entropy_slope(chain, f));
        c.roughness.push_back(metric ? log_lipschitz(*metric, f) : std::numeric_limits<double>::quiet_NaN());
    }
    return c;
}

double reverse_pinsker_gap(const EntropyStats& s) {
    if (!(s.tv_to_equilibrium < 1.0)) throw Error(ErrorKind::TVEqualsOne, "total variation equals 1");
    return (1.0 + std::sqrt(s.varentropy)) / (1.0 - s.tv_to_equilibrium) - s.entropy;
}

double fast_mixing_bound(const Chain& chain, const Vec& f, double epsilon, double gamma) {
    check_unit(epsilon);
    return (1.0 + stats(chain, f).entropy) / (gamma * epsilon);
}

double fast_mixing_bound(const Chain& chain, const Vec& f, double epsilon) {
    check_unit(epsilon);
    return fast_mixing_bound(chain, f, epsilon, poincare_constant(chain));
}

double varentropy_correction(const Chain& chain, double epsilon, const std::vector<int>& starts) {
    check_half(epsilon);
    auto ev = DensityEvolution::from_diracs(chain, starts);
    first_passage_time(ev, 1.0 - epsilon);
    return ev.max_varentropy();
}

double varentropy_correction(const Chain& chain, double epsilon, const Vec& density) {
    check_half(epsilon);
    DensityEvolution ev(chain, Mat(density));
    first_passage_time(ev, 1.0 - epsilon);
    return ev.max_varentropy();
}

double idi_psi(double t, double d_sparsity, int diameter) {
    if (t <= 0.0) return 0.0;
    return 16.0 * t * std::log(d_sparsity) + 4.0 * t * log_plus(diameter / t);
}

SpectralSummary spectral_summary(const Chain& chain, int dense_cap) {
    SpectralSummary s;
    s.lambda = spectral_gap(chain, dense_cap).gap;
    s.gamma = chain.reversible ? s.lambda : poincare_constant(chain, dense_cap);
    return s;
}

SpectralSummary spectral_summary(const Model& model, int dense_cap) {
    if (!model.group) return spectral_summary(model.chain, dense_cap);
    const auto ev = group_walk_eigenvalues(*model.group);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < ev.size(); ++k) top = std::max(top, ev[k].real());
    SpectralSummary s;
    s.lambda = s.gamma = ev.size() > 1 ? 1.0 - top : 1.0;
    return s;
}

StartSet worst_case_starts(const Model& model, int cap) {
    StartSet s;
    const int n = model.chain.size();
    if (model.group) {
        s.states = {0};
    } else if (n > cap) {
        s.sampled = true;
        for (int k = 0; k < cap; ++k)
            s.states.push_back(static_cast<int>(static_cast<long long>(k) * n / cap));
    }
    return s;
}

CutoffDiagnostics width_bounds(const Chain& chain, double epsilon, const WidthInputs& in) {
    check_half(epsilon);
    if (!(in.gamma > 0.0)) throw Error(ErrorKind::InvalidParameters, "width bounds need gamma > 0");
    CutoffDiagnostics d;
    d.epsilon = epsilon;
    auto ev = DensityEvolution::from_diracs(chain, in.starts);
    d.tmix_complement = first_passage_time(ev, 1.0 - epsilon);
    d.varentropy_correction = ev.max_varentropy();
    d.tmix_eps = first_passage_time(ev, epsilon);
    d.width = d.tmix_eps - d.tmix_complement;

    const double e2 = epsilon * epsilon, e3 = e2 * epsilon, e4 = e3 * epsilon;
    d.width_bound_thm_main = 2.0 / (in.gamma * e2) * (1.0 + std::sqrt(d.varentropy_correction));
    d.criterion_ratio = in.gamma * d.tmix_eps / (1.0 + std::sqrt(d.varentropy_correction));
    d.product_condition = in.lambda * d.tmix_eps;

    // psi is evaluated at both window ends and at the stationary point diam/e of t log(diam/t).
    d.m_eps = std::max(idi_psi(d.tmix_complement, in.d_sparsity, in.diameter),
                       idi_psi(d.tmix_eps, in.d_sparsity, in.diameter));
    const double interior = in.diameter / std::exp(1.0);
    if (interior > d.tmix_complement && interior < d.tmix_eps)
        d.m_eps = std::max(d.m_eps, idi_psi(interior, in.d_sparsity, in.diameter));
    if (in.rho_nonneg) {
        d.width_bound_idi_gamma = 1.0 / (in.gamma * e3) + std::sqrt(4.0 * d.m_eps / (in.gamma * e3));
        if (in.alpha_lower && *in.alpha_lower > 0.0 && *in.alpha_lower * (1.0 + d.m_eps) >= 2.0 * e4) {
            const double a = *in.alpha_lower;
            d.width_bound_idi_alpha = std::log(std::exp(1.0) * a * (1.0 + d.m_eps) / (2.0 * e4)) / a;
        }
    }
    return d;
}

CheckReport roughness_check(const Chain& chain, const MetricData& metric, const Vec& f0,
                            const std::vector<double>& times, Direction dir) {
    check_grid(times);
    if ((f0.array() < 0.0).any() || !(f0.maxCoeff() > 0.0))
        throw Error(ErrorKind::InvalidParameters, "roughness check needs a nonzero nonnegative function");
    const double logd = std::log(metric.d_sparsity);
    const double base = dir == Direction::forward ? 3.0 * logd : 6.0 * logd;
    CheckReport rep;
    Vec g = f0;
    double now = 0.0;
    for (double t : times) {
        g = semigroup_apply(chain, g, t - now, dir);
        now = t;
        const double bound = t > 0.0 ? base + 2.0 * log_plus(metric.diameter / t)
                                      : std::numeric_limits<double>::infinity();
        record(rep, log_lipschitz(metric, g), bound);
    }
    return rep;
}

CheckReport idi_check(const Chain& chain, const MetricData& metric, const Vec& f0, const std::vector<double>& times) {
    check_grid(times);
    CheckReport rep;
    DensityEvolution ev(chain, Mat(f0));
    for (double t : times) {
        ev.advance(t - ev.time());
        const Vec f = ev.densities().col(0);
        const double psi = idi_psi(t, metric.d_sparsity, metric.diameter);
        const double varent = density_stats(chain.pi, f).varentropy;
        record(rep, varent, psi > 0.0 ? psi * entropy_slope(chain, f) : 0.0);
    }
    return rep;
}

std::vector<SweepRow> cutoff_sweep(const std::function<Model(int)>& family, const std::vector<int>& sizes,
                                   double epsilon) {
    check_half(epsilon);
    std::vector<SweepRow> rows;
    for (int n : sizes) {
        SweepRow row;
        row.n = n;
        try {
            const Model model = family(n);
            const SpectralSummary spec = spectral_summary(model);
            auto ev = DensityEvolution::from_diracs(model.chain, worst_case_starts(model).states);
            row.tmix_lo = first_passage_time(ev, 1.0 - epsilon);
            const double v = ev.max_varentropy();
            row.tmix_hi = first_passage_time(ev, epsilon);
            row.ratio = row.tmix_lo / row.tmix_hi;
            row.product_condition = spec.lambda * row.tmix_hi;
            row.criterion_ratio = spec.gamma * row.tmix_hi / (1.0 + std::sqrt(v));
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cutofflab
