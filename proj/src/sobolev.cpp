#include <algorithm>
#include <cmath>
#include <random>

#include "cutofflab/functionals.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double entropy_of(const Chain& chain, const Vec& f) { return density_stats(chain.pi, f).entropy; }

// E(f, log f) with the symmetric half-sum when T is reversible.
double mlsi_numerator(const Chain& chain, const Vec& f, const Vec& logf) {
    if (chain.reversible) return dirichlet_form_symmetric(chain, f, logf);
    return dirichlet_form(chain, f, logf);
}

struct Evaluation {
    double value = 0.0;
    Vec grad;  // L2(pi) gradient of the ratio with respect to f
};

Evaluation evaluate(const Chain& chain, SobolevKind kind, const Vec& f, const Vec& logf, bool with_grad) {
    Evaluation e;
    const double m = chain.pi.dot(f);
    const double D = entropy_of(chain, f);
    double N;
    Vec gradN;
    if (kind == SobolevKind::mlsi) {
        N = mlsi_numerator(chain, f, logf);
        if (with_grad) {
            Vec Llog = generator_apply(chain, logf);
            Vec Lstar_f = generator_apply(chain, f, Direction::adjoint);
            gradN = -Llog - Lstar_f.cwiseQuotient(f);
        }
    } else {
        const Vec s = f.cwiseSqrt();
        N = dirichlet_form_symmetric(chain, s, s);
        if (with_grad) {
            Vec sym = generator_apply(chain, s) + generator_apply(chain, s, Direction::adjoint);
            gradN = -sym.cwiseQuotient(2.0 * s);
        }
    }
    e.value = N / D;
    if (with_grad) {
        Vec gradD = (logf.array() - std::log(m)).matrix();
        e.grad = (gradN - e.value * gradD) / D;
    }
    return e;
}

struct StartResult {
    double value = std::numeric_limits<double>::infinity();
    Vec f;
    bool exhausted = false;
};

StartResult optimise(const Chain& chain, SobolevKind kind, Vec g, int max_iter) {
    StartResult r;
    auto make_f = [](Vec& gg) {
        gg.array() -= gg.maxCoeff();
        return Vec(gg.array().exp());
    };
    Vec f = make_f(g);
    Evaluation cur = evaluate(chain, kind, f, g, true);
    double step = 1.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        const Vec d = f.cwiseProduct(cur.grad);
        const double slope = chain.pi.dot(f.cwiseProduct(cur.grad).cwiseProduct(d));
        if (!(slope > 0.0)) break;
        step *= 2.0;
        bool accepted = false;
        Vec g_new, f_new;
        double v_new = 0.0;
        while (step > 1e-20) {
            g_new = g - step * d;
            f_new = make_f(g_new);
            v_new = evaluate(chain, kind, f_new, g_new, false).value;
            if (std::isfinite(v_new) && v_new <= cur.value - 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double old = cur.value;
        g = g_new;
        f = f_new;
        cur = evaluate(chain, kind, f, g, true);
        if (std::abs(old - cur.value) < 1e-10 * std::abs(cur.value)) break;
        // Near the constant density the ratio approaches its linearisation; stop before
        // round-off dominates the entropy.
        const double m = chain.pi.dot(f);
        if ((f.array() / m - 1.0).abs().maxCoeff() < 1e-6) break;
    }
    r.exhausted = it >= max_iter;
    r.value = cur.value;
    r.f = f / chain.pi.dot(f);
    return r;
}

}  // namespace

double mlsi_ratio(const Chain& chain, const Vec& f) {
    Vec logf = f.array().max(1e-300).log();
    return mlsi_numerator(chain, f, logf) / entropy_of(chain, f);
}

double lsi_ratio(const Chain& chain, const Vec& f) {
    const Vec s = f.cwiseSqrt();
    return dirichlet_form_symmetric(chain, s, s) / entropy_of(chain, f);
}

ConstantBracket sobolev_upper_estimate(const Chain& chain, SobolevKind kind, const SobolevOptions& options) {
    if (kind == SobolevKind::lsi && !chain.reversible)
        throw Error(ErrorKind::NonReversibleForLSI, "LSI extremizer search assumes reversibility");
    const int n = chain.size();
    std::vector<Vec> starts;

    // Small perturbations of the constant along the Poincare eigenfunction.
    if (n >= 2 && n <= options.dense_cap) {
        Vec phi = poincare_eigenfunction(chain, options.dense_cap);
        const double scale = 1e-3 / phi.cwiseAbs().maxCoeff();
        for (double sign : {1.0, -1.0}) starts.push_back((sign * scale * phi).array().log1p().matrix());
    }
    const int remaining = std::max(0, options.starts - static_cast<int>(starts.size()));
    const int diracs = std::min(n, remaining / 2);
    for (int k = 0; k < diracs; ++k) {
        const int x = static_cast<int>((static_cast<long long>(k) * n) / diracs);
        Vec f = dirac_density(chain, x);
        f = 0.5 * (f + chain.adjoint * f);
        f = (1.0 - 1e-6) * f.array() + 1e-6;
        starts.push_back(f.array().log().matrix());
    }
    for (int k = static_cast<int>(starts.size()); k < options.starts; ++k) {
        std::mt19937_64 rng(splitmix64(options.seed * 0x100000001B3ULL + static_cast<std::uint64_t>(k)));
        std::gamma_distribution<double> gamma(1.0, 1.0);
        Vec f(n);
        for (int x = 0; x < n; ++x) f(x) = std::max(gamma(rng), 1e-12) / chain.pi(x);
        starts.push_back(f.array().log().matrix());
    }

    std::vector<StartResult> results(starts.size());
    parallel_for(static_cast<int>(starts.size()),
                 [&](int i) { results[i] = optimise(chain, kind, starts[i], options.max_iter); });

    ConstantBracket out;
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value < results[best].value) best = i;
    out.upper = results[best].value;
    out.witness = results[best].f;
    out.budget_exhausted = results[best].exhausted;

    const Vec& f = out.witness;
    if (kind == SobolevKind::lsi) {
        const Vec s = f.cwiseSqrt();
        Vec logf = f.array().max(1e-300).log();
        Vec res = generator_apply(chain, s) + out.upper * s.cwiseProduct(logf);
        out.residual = std::sqrt(chain.pi.dot(res.cwiseProduct(res)));
    } else {
        Vec logf = f.array().max(1e-300).log();
        Evaluation e = evaluate(chain, kind, f, logf, true);
        out.residual = std::sqrt(chain.pi.dot(e.grad.cwiseProduct(e.grad)));
    }
    return out;
}

}  // namespace cutofflab
