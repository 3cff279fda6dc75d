#include "cutofflab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutofflab/parallel.hpp"
#include "cutofflab/transport.hpp"

namespace cutofflab {

namespace {

// (T(x,.) + delta_x) / 2, renormalised against rounding.
SparseDist lazy_row(const SparseMat& T, int x) {
    SparseDist row;
    bool has_self = false;
    double total = 0.0;
    for (SparseMat::InnerIterator it(T, x); it; ++it) {
        if (it.value() <= kSupportTol) continue;
        const int y = static_cast<int>(it.col());
        double w = 0.5 * it.value();
        if (y == x) {
            w += 0.5;
            has_self = true;
        }
        row.emplace_back(y, w);
        total += w;
    }
    if (!has_self) {
        row.emplace_back(x, 0.5);
        total += 0.5;
    }
    for (auto& e : row) e.second /= total;
    return row;
}

void require_weakly_reversible(const SparseMat& T) {
    if (!is_weakly_reversible(T)) throw Error(ErrorKind::NotWeaklyReversible, "support of T is not symmetric");
}

std::vector<int> out_neighbours(const SparseMat& T, int x) {
    std::vector<int> out;
    for (SparseMat::InnerIterator it(T, x); it; ++it)
        if (it.value() > kSupportTol && it.col() != x) out.push_back(static_cast<int>(it.col()));
    return out;
}

double min_eigenvalue(const Mat& M) {
    Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

// Tighter than the 1e-9 acceptance slack so the returned rho never overshoots.
constexpr double kEigTol = 1e-12;

}  // namespace

Kappa1Result ollivier_kappa1(const Chain& chain, const MetricData& metric) {
    require_weakly_reversible(chain.T);
    const auto& edges = metric.edges;
    std::vector<double> w(edges.size(), 0.0);
    const GroundCost cost = [&metric](int a, int b) { return metric.dist(a, b); };
    parallel_for(static_cast<int>(edges.size()), [&](int e) {
        w[e] = w1_sparse(lazy_row(chain.T, edges[e].first), lazy_row(chain.T, edges[e].second), cost);
    });
    Kappa1Result r;
    double worst = -1.0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (w[e] > worst) {
            worst = w[e];
            r.edge = edges[e];
        }
    r.value = 2.0 * (1.0 - worst);
    return r;
}

bool sectional_nonneg_certificate(const SparseMat& T, const MetricData& metric) {
    require_weakly_reversible(T);
    const auto& edges = metric.edges;
    std::vector<char> ok(edges.size(), 0);
    const GroundCost cost = [&metric](int a, int b) { return metric.dist(a, b); };
    parallel_for(static_cast<int>(edges.size()), [&](int e) {
        ok[e] = winf_sparse(lazy_row(T, edges[e].first), lazy_row(T, edges[e].second), cost) <= 1.0;
    });
    return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

LocalForms local_forms(const Chain& chain, int x) {
    const SparseMat& T = chain.T;
    LocalForms lf;
    const std::vector<int> first = out_neighbours(T, x);
    lf.coords.push_back(x);
    for (int y : first) {
        lf.coords.push_back(y);
        for (int z : out_neighbours(T, y)) lf.coords.push_back(z);
    }
    std::sort(lf.coords.begin(), lf.coords.end());
    lf.coords.erase(std::unique(lf.coords.begin(), lf.coords.end()), lf.coords.end());
    const int m = static_cast<int>(lf.coords.size());
    auto local = [&lf](int s) {
        return static_cast<int>(std::lower_bound(lf.coords.begin(), lf.coords.end(), s) - lf.coords.begin());
    };
    // f -> Gamma f(u) on the local coordinates.
    auto gamma_form = [&](int u) {
        Mat G = Mat::Zero(m, m);
        const int a = local(u);
        for (SparseMat::InnerIterator it(T, u); it; ++it) {
            if (it.col() == u || it.value() <= kSupportTol) continue;
            const int b = local(static_cast<int>(it.col()));
            const double h = 0.5 * it.value();
            G(a, a) += h;
            G(b, b) += h;
            G(a, b) -= h;
            G(b, a) -= h;
        }
        return G;
    };
    // Coefficient vector of f -> Lf(u).
    auto drift = [&](int u) {
        Vec l = Vec::Zero(m);
        const int a = local(u);
        for (SparseMat::InnerIterator it(T, u); it; ++it) {
            if (it.col() == u || it.value() <= kSupportTol) continue;
            l[local(static_cast<int>(it.col()))] += it.value();
            l[a] -= it.value();
        }
        return l;
    };

    lf.A = gamma_form(x);
    const Vec lx = drift(x);
    const int ix = local(x);
    Mat LGamma = Mat::Zero(m, m);
    Mat M = Mat::Zero(m, m);
    for (SparseMat::InnerIterator it(T, x); it; ++it) {
        const int y = static_cast<int>(it.col());
        if (y == x || it.value() <= kSupportTol) continue;
        const double w = it.value();
        LGamma += w * (gamma_form(y) - lf.A);
        Vec e = Vec::Zero(m);
        e[ix] = 1.0;
        e[local(y)] -= 1.0;
        const Vec dl = lx - drift(y);
        M += 0.25 * w * (e * dl.transpose() + dl * e.transpose());
    }
    lf.B = 0.5 * LGamma - M;
    lf.B = 0.5 * (lf.B + lf.B.transpose());
    return lf;
}

RhoResult bakry_emery_rho(const Chain& chain, double lo, double hi, double width) {
    const int n = chain.size();
    std::vector<double> per_state(n);
    parallel_for(n, [&](int x) {
        const LocalForms lf = local_forms(chain, x);
        auto feasible = [&lf](double r) { return min_eigenvalue(lf.B - r * lf.A) >= -kEigTol; };
        double a = lo, b = hi;
        int guard = 0;
        while (!feasible(a)) {
            b = a;
            a *= 2.0;
            if (++guard > 40) throw Error(ErrorKind::BracketExhausted, "no feasible lower end for rho");
        }
        guard = 0;
        while (feasible(b)) {
            a = b;
            b = b > 0.0 ? 2.0 * b : 1.0;
            if (++guard > 60) throw Error(ErrorKind::BracketExhausted, "no infeasible upper end for rho");
        }
        while (b - a > width) {
            const double mid = 0.5 * (a + b);
            (feasible(mid) ? a : b) = mid;
        }
        per_state[x] = a;
    });
    RhoResult r;
    r.value = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x)
        if (per_state[x] < r.value) {
            r.value = per_state[x];
            r.state = x;
        }
    return r;
}

DeltaBound glauber_delta_bound(const Model& model) {
    if (!model.glauber) throw Error(ErrorKind::InvalidParameters, "model has no single-site flip structure");
    const GlauberStructure& g = *model.glauber;
    const int N = static_cast<int>(g.config.size());
    Mat delta = Mat::Constant(N, g.sites, std::numeric_limits<double>::quiet_NaN());
    for (int x = 0; x < N; ++x)
        for (int i = 0; i < g.sites; ++i) {
            const int y = g.index[g.config[x] ^ (1u << i)];
            if (y < 0) continue;
            double d = g.rates(x, i);
            for (int j = 0; j < g.sites; ++j)
                if (j != i) d -= std::max(0.0, g.rates(y, j) - g.rates(x, j));
            delta(x, i) = d;
        }
    double min_delta = std::numeric_limits<double>::infinity();
    double min_pair = std::numeric_limits<double>::infinity();
    for (int x = 0; x < N; ++x)
        for (int i = 0; i < g.sites; ++i) {
            const int y = g.index[g.config[x] ^ (1u << i)];
            if (y < 0) continue;
            min_delta = std::min(min_delta, delta(x, i));
            min_pair = std::min(min_pair, delta(x, i) + delta(y, i));
        }
    DeltaBound out;
    out.all_nonneg = min_delta >= 0.0;
    out.min_delta = min_delta;
    out.kappa1_lower = min_pair / g.normalization;
    if (g.rule == RateRule::sqrt && out.all_nonneg) out.rho_lower = (min_delta + 0.5 * min_pair) / g.normalization;
    return out;
}

std::map<std::string, double> group_walk_certificates(const Model& model) {
    if (!model.group) throw Error(ErrorKind::NotAGroupWalk, "model carries no group structure");
    const GroupStructure& g = *model.group;
    const int N = g.order();
    bool support_closed = true, invariant = true;
    std::vector<char> row_closed(N, 1), row_invariant(N, 1);
    parallel_for(N, [&](int a) {
        for (int b = 0; b < N; ++b) {
            const double u = g.nu[g.mul(a, b)], v = g.nu[g.mul(b, a)];
            if ((u > 0.0) != (v > 0.0)) row_closed[a] = 0;
            if (u != v) row_invariant[a] = 0;
        }
    });
    for (int a = 0; a < N; ++a) {
        support_closed = support_closed && row_closed[a];
        invariant = invariant && row_invariant[a];
    }
    std::map<std::string, double> out{{"kappa_inf_nonneg", support_closed ? 1.0 : 0.0},
                                      {"rho_nonneg", invariant ? 1.0 : 0.0}};
    bool self_inverse = true;
    double nu_min = std::numeric_limits<double>::infinity();
    for (int z = 0; z < N; ++z)
        if (g.nu[z] > 0.0) {
            nu_min = std::min(nu_min, g.nu[z]);
            if (z != 0 && g.inv(z) != z) self_inverse = false;
        }
    if (self_inverse && invariant) {
        out["rho_lower"] = 2.0 * nu_min;
        out["kappa1_lower"] = 2.0 * nu_min;
    }
    return out;
}

std::map<std::string, double> zero_range_certificates(const Model& model) {
    if (!model.zero_range) throw Error(ErrorKind::InvalidParameters, "model is not a zero-range process");
    const ZeroRangeStructure& z = *model.zero_range;
    double delta = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= z.particles; ++k) delta = std::min(delta, z.rate[k] - z.rate[k - 1]);
    std::map<std::string, double> out{{"kappa_inf_nonneg", delta >= 0.0 ? 1.0 : 0.0}};
    if (delta >= 0.0) out["kappa1_lower"] = delta / (z.sites * z.normalization);
    return out;
}

CurvatureReport curvature_report(const Chain& chain, const MetricData& metric) {
    CurvatureReport r;
    const Kappa1Result k = ollivier_kappa1(chain, metric);
    r.kappa1 = k.value;
    r.kappa1_argmin_edge = k.edge;
    r.sectional_nonneg = sectional_nonneg_certificate(chain.T, metric);
    r.sectional_nonneg_adjoint = chain.reversible ? r.sectional_nonneg : sectional_nonneg_certificate(chain.adjoint, metric);
    const RhoResult rho = bakry_emery_rho(chain);
    r.rho = rho.value;
    r.rho_argmin_state = rho.state;
    return r;
}

CurvatureReport curvature_report(const Model& model, const MetricData& metric) {
    CurvatureReport r = curvature_report(model.chain, metric);
    if (model.group) r.analytic_lower_bounds = group_walk_certificates(model);
    if (model.zero_range) r.analytic_lower_bounds = zero_range_certificates(model);
    if (model.glauber) {
        const DeltaBound d = glauber_delta_bound(model);
        r.analytic_lower_bounds["delta_nonneg"] = d.all_nonneg ? 1.0 : 0.0;
        if (d.all_nonneg) {
            r.analytic_lower_bounds["kappa_inf_nonneg"] = 1.0;
            r.analytic_lower_bounds["kappa1_lower"] = d.kappa1_lower;
        }
        if (d.rho_lower) r.analytic_lower_bounds["rho_lower"] = *d.rho_lower;
    }
    return r;
}

CertifiedBounds certified_lower_bounds(const Chain& chain, const CurvatureReport& report, const MetricData& metric) {
    return certified_lower_bounds(report.kappa1, report.sectional_nonneg_adjoint, report.rho, metric.d_sparsity,
                                  chain.reversible);
}

}  // namespace cutofflab
