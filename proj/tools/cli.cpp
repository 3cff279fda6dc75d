#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

namespace cutofflab::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (seed, purpose).
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) { return std::mt19937_64(splitmix(seed ^ splitmix(purpose))); }

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

template <class T>
ojson optional_number(const std::optional<T>& v) {
    return v ? number(*v) : ojson(nullptr);
}

struct Collector {
    std::vector<CheckResult> out;

    void skip(const std::string& name) { out.push_back({name, Status::skipped, kNaN}); }

    // Passes when slack >= -tol.
    void add(const std::string& name, double slack, double tol = 0.0) {
        out.push_back({name, (slack >= -tol) ? Status::pass : Status::fail, slack});
    }
};

double phi_lsi(double r) {
    if (r < 1e-4) return 4.0 + r * r / 12.0;
    const double e = std::exp(r / 2.0);
    return r * (e + 1.0) / (e - 1.0);
}

double phi_chain(double r) {
    if (std::abs(r) < 1e-4) return 1.0 + r / 3.0 + r * r / 36.0;
    return r * r / (2.0 * (r + std::exp(-r) - 1.0));
}

Vec random_positive(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = std::exp(g(rng));
    return f;
}

Vec random_gaussian(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = g(rng);
    return f;
}

// min_j (dist(x, y_j) + c_j) is 1-Lipschitz for the hop metric.
Vec random_lipschitz(std::mt19937_64& rng, const MetricData& m) {
    const int n = m.size();
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_real_distribution<double> shift(0.0, 2.0);
    Vec f = Vec::Constant(n, kInf);
    for (int k = 0; k < 3; ++k) {
        const int y = pick(rng);
        const double c = shift(rng);
        for (int x = 0; x < n; ++x) f[x] = std::min(f[x], m.dist(x, y) + c);
    }
    return f;
}

double scale(const Vec& v) { return std::max(1.0, v.cwiseAbs().maxCoeff()); }

std::optional<double> max_opt(std::optional<double> a, std::optional<double> b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}

std::map<std::string, double> known_values(const Model& m) {
    try {
        return reference_values(m).values;
    } catch (const Error&) {
        return {};
    }
}

std::optional<double> lookup(const std::map<std::string, double>& m, const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

std::optional<double> certified_alpha(const Analysis& a) {
    const auto ref = known_values(a.model);
    std::optional<double> out = max_opt(lookup(ref, "alpha"), lookup(ref, "alpha_lower"));
    if (a.curvature && a.metric)
        out = max_opt(out, certified_lower_bounds(a.model.chain, *a.curvature, *a.metric).alpha_lower);
    return out;
}

std::optional<double> certified_beta(const Analysis& a) {
    const auto ref = known_values(a.model);
    std::optional<double> out = lookup(ref, "beta");
    if (a.curvature && a.metric)
        out = max_opt(out, certified_lower_bounds(a.model.chain, *a.curvature, *a.metric).beta_lower);
    return out;
}

bool rho_nonneg(const Analysis& a) {
    if (!a.curvature) return false;
    if (a.curvature->rho >= -1e-9) return true;
    auto it = a.curvature->analytic_lower_bounds.find("rho_nonneg");
    return it != a.curvature->analytic_lower_bounds.end() && it->second > 0.0;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
    out << text;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: Parse: " << e.what() << "\n";
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 3;
    }
}

}  // namespace

std::vector<double> default_epsilons() { return {0.4, 0.25, 0.1, 1.0 / (2.0 * std::exp(1.0))}; }

const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "PASS";
        case Status::fail: return "FAIL";
        case Status::skipped: return "SKIPPED";
    }
    return "?";
}

int exit_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::TooLarge:
        case ErrorKind::TooLargeForDense:
        case ErrorKind::BracketExhausted: return 3;
        default: return 2;
    }
}

Config parse_config(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("model")) throw Error(ErrorKind::Parse, "config needs a 'model' object");
    Config c;
    c.model_echo = j["model"];
    c.model = parse_model_spec(j["model"]);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw Error(ErrorKind::Parse, "'seed' must be an integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    c.epsilons = default_epsilons();
    if (j.contains("epsilons")) {
        c.epsilons = j["epsilons"].get<std::vector<double>>();
        for (double e : c.epsilons)
            if (!(e > 0.0 && e < 0.5)) throw Error(ErrorKind::EpsilonOutOfRange, "report epsilons must lie in (0, 1/2)");
    }
    if (j.contains("start_state") && !j["start_state"].is_null()) c.start_state = j["start_state"].get<int>();
    if (j.contains("dense_cap")) c.dense_cap = j["dense_cap"].get<int>();
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot read " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

Analysis analyze(const Config& config) {
    Analysis a;
    a.config = config;
    a.model = build_model(config.model);
    const Chain& chain = a.model.chain;
    if (config.start_state && (*config.start_state < 0 || *config.start_state >= chain.size()))
        throw Error(ErrorKind::InvalidParameters, "start_state out of range");
    a.weakly_reversible = is_weakly_reversible(chain.T);
    a.spectral = spectral_summary(a.model, config.dense_cap);
    if (a.weakly_reversible) {
        a.metric = hop_metric(chain);
        a.curvature = curvature_report(a.model, *a.metric);
    }
    SobolevOptions opt;
    opt.seed = splitmix(config.seed);
    opt.dense_cap = config.dense_cap;
    a.alpha = sobolev_upper_estimate(chain, SobolevKind::mlsi, opt);
    a.alpha.lower = certified_alpha(a);
    if (chain.reversible) {
        opt.seed = splitmix(config.seed + 1);
        a.beta = sobolev_upper_estimate(chain, SobolevKind::lsi, opt);
        a.beta->lower = certified_beta(a);
    }
    a.starts = worst_case_starts(a.model, config.dense_cap);

    WidthInputs in;
    in.gamma = a.spectral.gamma;
    in.lambda = a.spectral.lambda;
    in.alpha_lower = a.alpha.lower;
    in.rho_nonneg = rho_nonneg(a);
    in.starts = a.starts.states;
    if (a.metric) {
        in.d_sparsity = a.metric->d_sparsity;
        in.diameter = a.metric->diameter;
    }
    for (double eps : config.epsilons) a.mixing.push_back(width_bounds(chain, eps, in));
    return a;
}

std::vector<CheckResult> run_checks(const Analysis& a) {
    const Chain& chain = a.model.chain;
    const int n = chain.size();
    const double lambda = a.spectral.lambda, gamma = a.spectral.gamma;
    Collector c;

    // Distance to equilibrium on a uniform grid reaching twice t_mix(1/4).
    {
        const double h = std::max(mixing_time(chain, 0.25, a.starts.states) / 4.0, 1e-3);
        std::vector<double> grid;
        for (int k = 0; k <= 8; ++k) grid.push_back(k * h);
        const auto d = worst_case_tv_curve(chain, grid, a.starts.states);
        if (a.starts.sampled) {
            c.skip("submultiplicativity");
            c.skip("spectral_lower_bound");
        } else {
            double s1 = kInf, s2 = kInf;
            for (int i = 0; i <= 8; ++i) {
                for (int j = 0; i + j <= 8; ++j) s1 = std::min(s1, 4.0 * d[i] * d[j] - 2.0 * d[i + j]);
                s2 = std::min(s2, d[i] - 0.5 * std::exp(-lambda * grid[i]));
            }
            c.add("submultiplicativity", s1, 1e-12);
            c.add("spectral_lower_bound", s2, 1e-12);
        }
    }

    for (const auto& m : a.mixing) {
        char name[64];
        std::snprintf(name, sizeof name, "width_theorem[eps=%.6g]", m.epsilon);
        c.add(name, m.width_bound_thm_main - m.width, 1e-9);
        std::snprintf(name, sizeof name, "width_idi_gamma[eps=%.6g]", m.epsilon);
        if (m.width_bound_idi_gamma) c.add(name, *m.width_bound_idi_gamma - m.width, 1e-9);
        else c.skip(name);
        std::snprintf(name, sizeof name, "width_idi_alpha[eps=%.6g]", m.epsilon);
        if (m.width_bound_idi_alpha) c.add(name, *m.width_bound_idi_alpha - m.width, 1e-9);
        else c.skip(name);
    }

    const double alpha_up = a.alpha.upper, beta_up = a.beta ? a.beta->upper : kNaN;
    if (chain.reversible) c.add("lsi_below_mlsi", alpha_up + 2e-3 - 4.0 * beta_up);
    else c.skip("lsi_below_mlsi");

    if (!a.curvature) {
        for (const char* name : {"lichnerowicz_kappa1", "lichnerowicz_rho", "diameter_bound", "peres_tetali", "belsi",
                                 "sub_commutation", "local_poincare", "lipschitz_vs_gamma", "herbst", "lsi_mlsi_sandwich",
                                 "chain_rule_sandwich", "roughness_forward", "roughness_adjoint", "idi"})
            c.skip(name);
        return c.out;
    }
    const CurvatureReport& cr = *a.curvature;
    const MetricData& metric = *a.metric;
    const double kappa1 = cr.kappa1, rho = cr.rho;
    const double logd = std::log(metric.d_sparsity);

    c.add("lichnerowicz_kappa1", lambda - kappa1, 1e-9);
    c.add("lichnerowicz_rho", gamma - rho, 1e-9);
    c.add("diameter_bound", 2.0 - kappa1 * metric.diameter, 1e-9);
    if (cr.sectional_nonneg_adjoint) c.add("peres_tetali", alpha_up + 2e-3 - kappa1);
    else c.skip("peres_tetali");
    if (chain.reversible) c.add("belsi", 33.0 * beta_up * logd + 1e-6 - rho);
    else c.skip("belsi");

    const std::vector<double> times{0.1, 0.5, 1.0, 2.0};
    {
        auto rng = stream(a.config.seed, 1);
        double sc = kInf, lp = kInf;
        bool sc_ok = true, lp_ok = true;
        for (int k = 0; k < 20; ++k) {
            const Vec f = random_gaussian(rng, n);
            const Vec gf = carre_du_champ(chain, f);
            const Vec f2 = f.cwiseProduct(f);
            for (double t : times) {
                const Vec pf = semigroup_apply(chain, f, t);
                const Vec pgf = semigroup_apply(chain, gf, t);
                if (chain.reversible) {
                    const Vec lhs = carre_du_champ(chain, pf);
                    const Vec rhs = std::exp(-2.0 * rho * t) * pgf;
                    const double s = (rhs - lhs).minCoeff();
                    sc = std::min(sc, s);
                    if (s < -1e-9 * scale(rhs)) sc_ok = false;
                }
                const double ct = std::abs(rho) < 1e-12 ? 2.0 * t : (1.0 - std::exp(-2.0 * rho * t)) / rho;
                const Vec var = semigroup_apply(chain, f2, t) - pf.cwiseProduct(pf);
                const Vec rhs = ct * pgf;
                const double s = (rhs - var).minCoeff();
                lp = std::min(lp, s);
                if (s < -1e-9 * scale(rhs)) lp_ok = false;
            }
        }
        if (chain.reversible) c.out.push_back({"sub_commutation", sc_ok ? Status::pass : Status::fail, sc});
        else c.skip("sub_commutation");
        c.out.push_back({"local_poincare", lp_ok ? Status::pass : Status::fail, lp});
    }

    {
        auto rng = stream(a.config.seed, 2);
        double s = kInf;
        for (int k = 0; k < 20; ++k) {
            const Vec f = random_gaussian(rng, n);
            const double g = carre_du_champ(chain, f).maxCoeff();
            const double lip = lipschitz_seminorm(metric, f);
            s = std::min({s, lip * lip - 2.0 * g, 2.0 * metric.d_sparsity * g - lip * lip});
        }
        c.add("lipschitz_vs_gamma", s, 1e-9);
    }

    const std::optional<double> alpha_low = a.alpha.lower;
    if (chain.reversible && alpha_low && *alpha_low > 0.0) {
        auto rng = stream(a.config.seed, 3);
        double s = kInf;
        bool ok = true;
        for (int k = 0; k < 5; ++k) {
            const auto rep = herbst_check(chain, metric, random_lipschitz(rng, metric), *alpha_low,
                                          {0.1, 0.5, 1.0, 2.0}, {0.5, 1.0, 2.0});
            ok = ok && rep.holds;
            s = std::min(s, rep.min_slack);
        }
        c.out.push_back({"herbst", ok ? Status::pass : Status::fail, s});
    } else {
        c.skip("herbst");
    }

    {
        auto rng = stream(a.config.seed, 4);
        double s_ls = kInf, s_ch = kInf;
        bool ok_ls = true, ok_ch = true;
        for (int k = 0; k < 100; ++k) {
            const Vec f = random_positive(rng, n);
            const Vec lf = f.array().log();
            const Vec sf = f.array().sqrt();
            const double r = lipschitz_seminorm(metric, lf);
            if (chain.reversible) {
                const double ent_rate = dirichlet_form(chain, f, lf);
                const double es = dirichlet_form(chain, sf, sf);
                const double tol = 1e-9 * std::max(1.0, ent_rate);
                const double lo = ent_rate - 4.0 * es, hi = phi_lsi(r) * es - ent_rate;
                s_ls = std::min({s_ls, lo, hi});
                if (lo < -tol || hi < -tol) ok_ls = false;
            }
            const Vec D = (generator_apply(chain, f).array() / f.array()).matrix() - generator_apply(chain, lf);
            const Vec G = carre_du_champ(chain, lf);
            const Vec lo = G - phi_chain(-r) * D;
            const Vec hi = phi_chain(r) * D - G;
            const double tol = 1e-9 * scale(G);
            s_ch = std::min({s_ch, lo.minCoeff(), hi.minCoeff()});
            if (lo.minCoeff() < -tol || hi.minCoeff() < -tol) ok_ch = false;
            if (chain.reversible) {
                const double lhs = (chain.pi.array() * f.array() * G.array()).sum();
                const double rhs = (1.0 + r) * dirichlet_form(chain, f, lf);
                s_ch = std::min(s_ch, rhs - lhs);
                if (rhs - lhs < -1e-9 * std::max(1.0, rhs)) ok_ch = false;
            }
        }
        if (chain.reversible) c.out.push_back({"lsi_mlsi_sandwich", ok_ls ? Status::pass : Status::fail, s_ls});
        else c.skip("lsi_mlsi_sandwich");
        c.out.push_back({"chain_rule_sandwich", ok_ch ? Status::pass : Status::fail, s_ch});
    }

    {
        const int x0 = a.config.start_state.value_or(0);
        const Vec f0 = dirac_density(chain, x0);
        std::vector<double> grid;
        const double top = std::max(a.mixing.empty() ? 1.0 : a.mixing.back().tmix_eps, 1.0);
        for (double t = top / 64.0; t <= 2.0 * top; t *= 2.0) grid.push_back(t);
        Vec indicator = Vec::Zero(n);
        indicator[x0] = 1.0;
        const auto fw = roughness_check(chain, metric, indicator, grid, Direction::forward);
        const auto bw = roughness_check(chain, metric, indicator, grid, Direction::adjoint);
        c.out.push_back({"roughness_forward", fw.holds ? Status::pass : Status::fail, fw.min_slack});
        c.out.push_back({"roughness_adjoint", bw.holds ? Status::pass : Status::fail, bw.min_slack});
        if (rho_nonneg(a)) {
            const auto idi = idi_check(chain, metric, f0, grid);
            c.out.push_back({"idi", idi.holds ? Status::pass : Status::fail, idi.min_slack});
        } else {
            c.skip("idi");
        }
    }
    return c.out;
}

nlohmann::ordered_json report_json(const Analysis& a, const std::vector<CheckResult>& checks) {
    const Chain& chain = a.model.chain;
    ojson r;
    ojson echo;
    echo["kind"] = a.config.model.kind;
    echo["params"] = a.config.model.params;
    echo["seed"] = a.config.model.seed;
    r["model"] = echo;
    r["name"] = a.model.name;
    r["seed"] = a.config.seed;
    r["n"] = chain.size();
    r["pi_min"] = chain.pi_min;
    r["reversible"] = chain.reversible;
    r["weakly_reversible"] = a.weakly_reversible;
    r["diameter"] = a.metric ? ojson(a.metric->diameter) : ojson(nullptr);
    r["d_sparsity"] = a.metric ? number(a.metric->d_sparsity) : ojson(nullptr);
    r["lambda"] = a.spectral.lambda;
    r["gamma"] = a.spectral.gamma;
    auto bracket = [](const ConstantBracket& b) {
        ojson o;
        o["lower"] = optional_number(b.lower);
        o["upper"] = number(b.upper);
        o["exact"] = optional_number(b.exact);
        o["residual"] = number(b.residual);
        o["budget_exhausted"] = b.budget_exhausted;
        return o;
    };
    r["alpha_bracket"] = bracket(a.alpha);
    r["beta_bracket"] = a.beta ? bracket(*a.beta) : ojson(nullptr);
    if (a.curvature) {
        const CurvatureReport& c = *a.curvature;
        r["kappa1"] = c.kappa1;
        r["kappa1_argmin_edge"] = {c.kappa1_argmin_edge.first, c.kappa1_argmin_edge.second};
        r["sectional_nonneg"] = {{"T", c.sectional_nonneg}, {"T_adjoint", c.sectional_nonneg_adjoint}};
        r["rho"] = c.rho;
        r["rho_argmin_state"] = c.rho_argmin_state;
        ojson lb = ojson::object();
        for (const auto& [k, v] : c.analytic_lower_bounds) lb[k] = number(v);
        r["analytic_lower_bounds"] = lb;
    } else {
        r["kappa1"] = nullptr;
        r["kappa1_argmin_edge"] = nullptr;
        r["sectional_nonneg"] = nullptr;
        r["rho"] = nullptr;
        r["rho_argmin_state"] = nullptr;
        r["analytic_lower_bounds"] = ojson::object();
    }
    r["sampled_starts"] = a.starts.sampled;
    ojson mix = ojson::array();
    for (const auto& m : a.mixing) {
        ojson o;
        o["epsilon"] = m.epsilon;
        o["t_mix"] = m.tmix_eps;
        o["t_mix_complement"] = m.tmix_complement;
        o["w_mix"] = m.width;
        o["V_eps"] = number(m.varentropy_correction);
        o["criterion_ratio"] = number(m.criterion_ratio);
        o["product_condition"] = number(m.product_condition);
        o["width_bound_thm_main"] = number(m.width_bound_thm_main);
        o["width_bound_idi_gamma"] = optional_number(m.width_bound_idi_gamma);
        o["width_bound_idi_alpha"] = optional_number(m.width_bound_idi_alpha);
        mix.push_back(o);
    }
    r["mixing"] = mix;
    // Headline values at the default precision 1/(2e) when it is in the list, else the last epsilon.
    if (!a.mixing.empty()) {
        const CutoffDiagnostics* pick = &a.mixing.back();
        for (const auto& m : a.mixing)
            if (std::abs(m.epsilon - 1.0 / (2.0 * std::exp(1.0))) < 1e-12) pick = &m;
        r["criterion_ratio"] = number(pick->criterion_ratio);
        r["product_condition"] = number(pick->product_condition);
    }
    ojson checks_json = ojson::object();
    for (const auto& c : checks) {
        ojson o;
        o["status"] = to_string(c.status);
        o["holds"] = c.status != Status::fail;
        o["slack"] = number(c.slack);
        checks_json[c.name] = o;
    }
    r["inequality_checks"] = checks_json;
    return r;
}

int cmd_analyze(const std::string& config_path, const std::string& out_path) {
    return guarded([&] {
        const Analysis a = analyze(load_config(config_path));
        write_text(out_path, report_json(a, run_checks(a)).dump(2) + "\n");
        return 0;
    });
}

int cmd_profile(const std::string& config_path, double t0, double t1, int steps, const std::string& out_csv) {
    return guarded([&] {
        if (!(t0 >= 0.0 && t1 > t0) || steps < 2)
            throw Error(ErrorKind::InvalidParameters, "profile needs 0 <= t0 < t1 and steps >= 2");
        const Config cfg = load_config(config_path);
        const Model model = build_model(cfg.model);
        const Chain& chain = model.chain;
        std::optional<MetricData> metric;
        if (is_weakly_reversible(chain.T)) metric = hop_metric(chain);
        std::vector<int> starts;
        if (cfg.start_state) {
            if (*cfg.start_state < 0 || *cfg.start_state >= chain.size())
                throw Error(ErrorKind::InvalidParameters, "start_state out of range");
            starts = {*cfg.start_state};
        } else {
            starts = worst_case_starts(model, cfg.dense_cap).states;
        }
        auto ev = DensityEvolution::from_diracs(chain, starts);
        std::ostringstream out;
        out << "t,dtv,entropy,varentropy,entropy_slope,roughness\n";
        for (int i = 0; i < steps; ++i) {
            const double t = t0 + (t1 - t0) * i / (steps - 1);
            ev.advance(t - ev.time());
            // Statistics of the start attaining the worst total variation.
            int worst = 0;
            double tv = -1.0;
            for (int j = 0; j < ev.densities().cols(); ++j) {
                const double v = ev.column_stats(j).tv_to_equilibrium;
                if (v > tv) {
                    tv = v;
                    worst = j;
                }
            }
            const Vec f = ev.densities().col(worst);
            const EntropyStats s = density_stats(chain.pi, f);
            double rough = kNaN;
            if (metric) rough = (f.array() > 0.0).all() ? lipschitz_seminorm(*metric, f.array().log().matrix()) : kInf;
            out << fmt(t) << ',' << fmt(s.tv_to_equilibrium) << ',' << fmt(s.entropy) << ',' << fmt(s.varentropy) << ','
                << fmt(entropy_slope(chain, f)) << ',' << fmt(rough) << '\n';
        }
        write_text(out_csv, out.str());
        return 0;
    });
}

int cmd_sweep(const std::string& family, const std::string& sizes, double epsilon, const std::string& out_csv) {
    return guarded([&] {
        std::function<Model(int)> make;
        if (family == "cube" || family == "hypercube") make = hypercube_model;
        else if (family == "cycle") make = cycle_model;
        else if (family == "rank_one") make = [](int n) { return rank_one_model(Vec::Constant(n, 1.0 / n)); };
        else if (family == "random_cayley") make = [](int n) {
            return random_cayley_model({n}, std::max(1, static_cast<int>(std::ceil(std::log2(n)))), 1);
        };
        else if (family == "exclusion") make = [](int n) { return exclusion_model(n, n / 2, cycle_graph(n)); };
        else throw Error(ErrorKind::InvalidParameters, "unknown family '" + family + "'");
        std::vector<int> ns;
        std::stringstream ss(sizes);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                ns.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::logic_error&) {
                throw Error(ErrorKind::Parse, "bad size '" + item + "'");
            }
        }
        if (ns.empty()) throw Error(ErrorKind::Parse, "empty size list");
        const auto rows = cutoff_sweep(make, ns, epsilon);
        std::ostringstream out;
        out << "n,tmix_lo,tmix_hi,ratio,product_condition,criterion_ratio\n";
        for (const auto& r : rows) {
            if (!r.error.empty()) {
                std::cerr << "n=" << r.n << ": " << r.error << "\n";
                out << r.n << ",nan,nan,nan,nan,nan\n";
                continue;
            }
            out << r.n << ',' << fmt(r.tmix_lo) << ',' << fmt(r.tmix_hi) << ',' << fmt(r.ratio) << ','
                << fmt(r.product_condition) << ',' << fmt(r.criterion_ratio) << '\n';
        }
        write_text(out_csv, out.str());
        return 0;
    });
}

int cmd_verify(const std::string& config_path, std::ostream& out) {
    return guarded([&] {
        const Analysis a = analyze(load_config(config_path));
        bool ok = true;
        for (const auto& c : run_checks(a)) {
            out << c.name << ' ' << to_string(c.status);
            if (c.status != Status::skipped) {
                char buf[48];
                std::snprintf(buf, sizeof buf, " slack=%.6g", c.slack);
                out << buf;
            }
            out << '\n';
            if (c.status == Status::fail) ok = false;
        }
        return ok ? 0 : 1;
    });
}

}  // namespace cutofflab::cli
