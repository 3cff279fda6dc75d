#include "cutofflab/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace cutofflab {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidParameters, what); }

void check_states(double count) {
    if (count > static_cast<double>(kStateCap))
        throw Error(ErrorKind::TooLarge, "configuration space has " + std::to_string(count) + " states");
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

Model group_model(std::string kind, std::string name, GroupStructure group) {
    const int N = group.order();
    std::vector<Triplet> trip;
    std::vector<int> support;
    for (int z = 0; z < N; ++z)
        if (group.nu[z] > 0.0) support.push_back(z);
    trip.reserve(static_cast<std::size_t>(N) * support.size());
    for (int x = 0; x < N; ++x)
        for (int z : support) trip.emplace_back(x, group.mul(x, z), group.nu[z]);
    Model m;
    m.kind = std::move(kind);
    m.name = std::move(name);
    m.chain = build_chain_with_pi(make_transition(N, trip), Vec::Constant(N, 1.0 / N));
    m.group = std::move(group);
    return m;
}

GroupStructure make_group(const std::vector<int>& moduli) {
    if (moduli.empty()) invalid("group needs at least one factor");
    double order = 1.0;
    for (int q : moduli) {
        if (q < 1) invalid("group moduli must be >= 1");
        order *= q;
    }
    check_states(order);
    GroupStructure g;
    g.moduli = moduli;
    g.nu = Vec::Zero(static_cast<Eigen::Index>(order));
    return g;
}

// Uniform law on S u S^{-1} without the identity.
void set_symmetric_law(GroupStructure& g, const std::vector<int>& generators) {
    std::set<int> s;
    for (int a : generators) {
        if (a == 0) continue;
        s.insert(a);
        s.insert(g.inv(a));
    }
    if (s.empty()) invalid("generating set is empty after removing the identity");
    for (int a : s) g.nu[a] = 1.0 / static_cast<double>(s.size());
}

double flip_rate(RateRule rule, double log_ratio) {
    switch (rule) {
        case RateRule::gibbs: return 1.0 / (1.0 + std::exp(-log_ratio));
        case RateRule::metropolis: return std::min(1.0, std::exp(log_ratio));
        case RateRule::sqrt: return std::exp(0.5 * log_ratio);
    }
    return 0.0;
}

// Shared Glauber assembly. log_weight is log pi up to a constant; a state is
// admissible when log_weight is finite.
template <class LogWeight>
Model glauber_model(std::string kind, std::string name, int n, RateRule rule, LogWeight log_weight) {
    if (n < 1 || n > 22) invalid("Glauber dynamics supports 1 to 22 sites");
    GlauberStructure g;
    g.sites = n;
    g.rule = rule;
    const std::uint32_t full = 1u << n;
    g.index.assign(full, -1);
    std::vector<double> lw;
    for (std::uint32_t s = 0; s < full; ++s) {
        const double w = log_weight(s);
        if (std::isfinite(w)) {
            g.index[s] = static_cast<int>(g.config.size());
            g.config.push_back(s);
            lw.push_back(w);
        }
    }
    const int N = static_cast<int>(g.config.size());
    g.rates = Mat::Zero(N, n);
    for (int x = 0; x < N; ++x)
        for (int i = 0; i < n; ++i) {
            const int y = g.index[g.config[x] ^ (1u << i)];
            if (y >= 0) g.rates(x, i) = flip_rate(rule, lw[y] - lw[x]);
        }
    g.normalization = g.rates.rowwise().sum().maxCoeff();
    if (!(g.normalization > 0.0)) invalid("all flip rates vanish");
    const double top = *std::max_element(lw.begin(), lw.end());
    g.target.resize(N);
    for (int x = 0; x < N; ++x) g.target[x] = std::exp(lw[x] - top);
    g.target /= g.target.sum();

    std::vector<Triplet> trip;
    for (int x = 0; x < N; ++x) {
        double out = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = g.rates(x, i) / g.normalization;
            if (r > 0.0) {
                trip.emplace_back(x, g.index[g.config[x] ^ (1u << i)], r);
                out += r;
            }
        }
        if (1.0 - out > 0.0) trip.emplace_back(x, x, 1.0 - out);
    }
    Model m;
    m.kind = std::move(kind);
    m.name = std::move(name);
    m.chain = build_chain(make_transition(N, trip));
    m.glauber = std::move(g);
    return m;
}

double binomial(int n, int k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Occupation vectors in lexicographic order, indexed through a map.
struct Configurations {
    std::vector<std::vector<int>> states;
    std::map<std::vector<int>, int> index;

    void add(const std::vector<int>& x) {
        index.emplace(x, static_cast<int>(states.size()));
        states.push_back(x);
    }
};

void compositions(int sites, int left, std::vector<int>& cur, Configurations& out) {
    const int pos = static_cast<int>(cur.size());
    if (pos == sites - 1) {
        cur.push_back(left);
        out.add(cur);
        cur.pop_back();
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur.push_back(k);
        compositions(sites, left - k, cur, out);
        cur.pop_back();
    }
}

void subsets(int sites, int left, std::vector<int>& cur, Configurations& out) {
    const int pos = static_cast<int>(cur.size());
    if (pos == sites) {
        if (left == 0) out.add(cur);
        return;
    }
    if (sites - pos > left) {
        cur.push_back(0);
        subsets(sites, left, cur, out);
        cur.pop_back();
    }
    if (left > 0) {
        cur.push_back(1);
        subsets(sites, left - 1, cur, out);
        cur.pop_back();
    }
}

void check_graph(int n, const Graph& edges) {
    for (auto [i, j] : edges)
        if (i < 0 || j < 0 || i >= n || j >= n || i == j) invalid("graph edge out of range or a loop");
}

}  // namespace

int GroupStructure::mul(int a, int b) const {
    int out = 0, stride = 1;
    for (int q : moduli) {
        const int da = a % q, db = b % q;
        a /= q;
        b /= q;
        out += ((da + db) % q) * stride;
        stride *= q;
    }
    return out;
}

int GroupStructure::inv(int a) const {
    int out = 0, stride = 1;
    for (int q : moduli) {
        const int da = a % q;
        a /= q;
        out += ((q - da) % q) * stride;
        stride *= q;
    }
    return out;
}

std::vector<int> GroupStructure::coords(int a) const {
    std::vector<int> c;
    for (int q : moduli) {
        c.push_back(a % q);
        a /= q;
    }
    return c;
}

int GroupStructure::index(const std::vector<int>& c) const {
    int out = 0, stride = 1;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
        const int q = moduli[k];
        out += (((c[k] % q) + q) % q) * stride;
        stride *= q;
    }
    return out;
}

std::vector<std::complex<double>> group_walk_eigenvalues(const GroupStructure& group) {
    const int N = group.order();
    std::vector<std::pair<std::vector<int>, double>> support;
    for (int z = 0; z < N; ++z)
        if (group.nu[z] > 0.0) support.emplace_back(group.coords(z), group.nu[z]);
    std::vector<std::complex<double>> out(N);
    for (int k = 0; k < N; ++k) {
        const std::vector<int> kc = group.coords(k);
        std::complex<double> v = 0.0;
        for (const auto& [zc, w] : support) {
            double phase = 0.0;
            for (std::size_t j = 0; j < kc.size(); ++j)
                phase += static_cast<double>(kc[j]) * zc[j] / group.moduli[j];
            v += w * std::polar(1.0, 2.0 * M_PI * phase);
        }
        out[k] = v;
    }
    return out;
}

RateRule parse_rate_rule(const std::string& name) {
    if (name == "gibbs") return RateRule::gibbs;
    if (name == "metropolis") return RateRule::metropolis;
    if (name == "sqrt") return RateRule::sqrt;
    invalid("unknown rate rule '" + name + "'");
}

const char* to_string(RateRule rule) {
    switch (rule) {
        case RateRule::gibbs: return "gibbs";
        case RateRule::metropolis: return "metropolis";
        case RateRule::sqrt: return "sqrt";
    }
    return "?";
}

Graph path_graph(int n) {
    Graph g;
    for (int i = 0; i + 1 < n; ++i) g.emplace_back(i, i + 1);
    return g;
}

Graph cycle_graph(int n) {
    Graph g = path_graph(n);
    if (n >= 3) g.emplace_back(n - 1, 0);
    return g;
}

Graph complete_graph(int n) {
    Graph g;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.emplace_back(i, j);
    return g;
}

Model cycle_model(int n) {
    if (n < 2) invalid("cycle needs n >= 2");
    GroupStructure g = make_group({n});
    g.nu[1 % n] += 0.5;
    g.nu[(n - 1) % n] += 0.5;
    return group_model("cycle", "cycle(" + std::to_string(n) + ")", std::move(g));
}

Model hypercube_model(int n) {
    if (n < 1) invalid("hypercube needs n >= 1");
    if (n > 22) throw Error(ErrorKind::TooLarge, "hypercube dimension above 22");
    GroupStructure g = make_group(std::vector<int>(n, 2));
    for (int i = 0; i < n; ++i) g.nu[1 << i] = 1.0 / n;
    return group_model("hypercube", "hypercube(" + std::to_string(n) + ")", std::move(g));
}

Model abelian_cayley_model(const std::vector<int>& moduli, const std::vector<std::vector<int>>& generators) {
    GroupStructure g = make_group(moduli);
    std::vector<int> gens;
    for (const auto& c : generators) {
        if (c.size() != moduli.size()) invalid("generator length does not match the number of factors");
        gens.push_back(g.index(c));
    }
    set_symmetric_law(g, gens);
    return group_model("abelian_cayley", "abelian_cayley(" + join(moduli) + ")", std::move(g));
}

Model random_cayley_model(const std::vector<int>& moduli, int k, std::uint64_t seed) {
    GroupStructure g = make_group(moduli);
    const int N = g.order();
    if (k < 1 || k > N - 1) invalid("random_cayley needs 1 <= k <= |G| - 1");
    // Partial Fisher-Yates over the non-identity elements.
    std::vector<int> pool(N - 1);
    std::iota(pool.begin(), pool.end(), 1);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < k; ++i) {
        const auto span = static_cast<std::uint64_t>(pool.size() - i);
        std::swap(pool[i], pool[i + rng() % span]);
    }
    pool.resize(k);
    set_symmetric_law(g, pool);
    return group_model("random_cayley",
                       "random_cayley(" + join(moduli) + ";k=" + std::to_string(k) + ";seed=" + std::to_string(seed) + ")",
                       std::move(g));
}

Model rank_one_model(const Vec& pi) {
    const int n = static_cast<int>(pi.size());
    if (n < 2) invalid("rank_one needs at least two states");
    if ((pi.array() <= 0.0).any()) invalid("rank_one law must be positive");
    if (std::abs(pi.sum() - 1.0) > 1e-12) invalid("rank_one law must sum to 1");
    std::vector<Triplet> trip;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) trip.emplace_back(x, y, pi[y]);
    Model m;
    m.kind = "rank_one";
    m.name = "rank_one(" + std::to_string(n) + ")";
    m.chain = build_chain_with_pi(make_transition(n, trip), pi);
    return m;
}

Model glauber_ising_model(const Mat& J, RateRule rule) {
    const int n = static_cast<int>(J.rows());
    if (J.cols() != n) invalid("coupling matrix must be square");
    const Mat S = J + J.transpose();
    auto log_weight = [&](std::uint32_t s) {
        double h = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double si = (s >> i) & 1u ? 1.0 : -1.0;
                const double sj = (s >> j) & 1u ? 1.0 : -1.0;
                h += S(i, j) * si * sj;
            }
        return h;
    };
    return glauber_model("glauber_ising", std::string("glauber_ising(") + std::to_string(n) + "," + to_string(rule) + ")",
                         n, rule, log_weight);
}

Model ising_graph_model(int n, const Graph& edges, double beta, RateRule rule) {
    if (!(beta >= 0.0)) invalid("Ising needs beta >= 0");
    check_graph(n, edges);
    Mat J = Mat::Zero(n, n);
    for (auto [i, j] : edges) {
        J(i, j) += beta / 2.0;
        J(j, i) += beta / 2.0;
    }
    return glauber_ising_model(J, rule);
}

Model curie_weiss_model(int n, double beta, RateRule rule) {
    if (!(beta >= 0.0)) invalid("Ising needs beta >= 0");
    Mat J = Mat::Constant(n, n, beta / (2.0 * n));
    J.diagonal().setZero();
    return glauber_ising_model(J, rule);
}

Model glauber_hardcore_model(int n, const Graph& edges, double zeta, RateRule rule) {
    if (!(zeta > 0.0)) invalid("hardcore needs zeta > 0");
    check_graph(n, edges);
    const double lz = std::log(zeta);
    auto log_weight = [&](std::uint32_t s) {
        for (auto [i, j] : edges)
            if (((s >> i) & 1u) && ((s >> j) & 1u)) return -std::numeric_limits<double>::infinity();
        return lz * std::popcount(s);
    };
    return glauber_model("glauber_hardcore",
                         std::string("glauber_hardcore(") + std::to_string(n) + "," + to_string(rule) + ")", n, rule,
                         log_weight);
}

Model zero_range_mf_model(int sites, int particles, const std::vector<double>& rate) {
    if (sites < 2 || particles < 1) invalid("zero_range_mf needs n >= 2 and m >= 1");
    if (static_cast<int>(rate.size()) < particles) invalid("zero_range_mf needs rates r(1..m)");
    ZeroRangeStructure z;
    z.sites = sites;
    z.particles = particles;
    z.rate.assign(1, 0.0);
    for (int k = 0; k < particles; ++k) {
        if (!(rate[k] > 0.0)) invalid("zero-range rates must be positive");
        z.rate.push_back(rate[k]);
    }
    check_states(binomial(particles + sites - 1, sites - 1));
    Configurations conf;
    std::vector<int> cur;
    compositions(sites, particles, cur, conf);
    const int N = static_cast<int>(conf.states.size());
    const double g = 1.0 / sites;
    double top = 0.0;
    for (const auto& x : conf.states) {
        double out = 0.0;
        for (int i = 0; i < sites; ++i) out += z.rate[x[i]] * g * (sites - 1) / sites;
        top = std::max(top, out);
    }
    z.normalization = std::max(1.0, top);
    std::vector<Triplet> trip;
    for (int a = 0; a < N; ++a) {
        const auto& x = conf.states[a];
        double out = 0.0;
        for (int i = 0; i < sites; ++i) {
            if (x[i] == 0) continue;
            const double r = z.rate[x[i]] * g / sites / z.normalization;
            for (int j = 0; j < sites; ++j) {
                if (j == i) continue;
                std::vector<int> y = x;
                --y[i];
                ++y[j];
                trip.emplace_back(a, conf.index.at(y), r);
                out += r;
            }
        }
        if (1.0 - out > 0.0) trip.emplace_back(a, a, 1.0 - out);
    }
    Model m;
    m.kind = "zero_range_mf";
    m.name = "zero_range_mf(" + std::to_string(sites) + "," + std::to_string(particles) + ")";
    m.chain = build_chain(make_transition(N, trip));
    m.zero_range = std::move(z);
    return m;
}

Model exclusion_model(int n, int particles, const Graph& edges) {
    if (!(particles > 0 && particles < n)) invalid("exclusion needs 0 < m < n");
    check_graph(n, edges);
    check_states(binomial(n, particles));
    // Symmetric stochastic G: simple random walk when the graph is regular,
    // otherwise the walk slowed down by the maximum degree.
    Mat A = Mat::Zero(n, n);
    for (auto [i, j] : edges) A(i, j) = A(j, i) = 1.0;
    const double dmax = A.rowwise().sum().maxCoeff();
    if (!(dmax > 0.0)) invalid("exclusion graph has no edges");
    Mat G = A / dmax;
    for (int i = 0; i < n; ++i) G(i, i) = 1.0 - G.row(i).sum();
    Configurations conf;
    std::vector<int> cur;
    subsets(n, particles, cur, conf);
    const int N = static_cast<int>(conf.states.size());
    std::vector<Triplet> trip;
    for (int a = 0; a < N; ++a) {
        const auto& x = conf.states[a];
        double out = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (x[j] || G(i, j) <= 0.0) continue;
                std::vector<int> y = x;
                y[i] = 0;
                y[j] = 1;
                const double r = G(i, j) / n;
                trip.emplace_back(a, conf.index.at(y), r);
                out += r;
            }
        }
        if (1.0 - out > 0.0) trip.emplace_back(a, a, 1.0 - out);
    }
    Model m;
    m.kind = "exclusion";
    m.name = "exclusion(" + std::to_string(n) + "," + std::to_string(particles) + ")";
    m.chain = build_chain(make_transition(N, trip));
    return m;
}

Model matrix_file_model(const std::string& path) {
    Model m;
    m.kind = "matrix_file";
    m.name = "matrix_file(" + path + ")";
    m.chain = load_matrix_file(path);
    return m;
}

ModelSpec parse_model_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw Error(ErrorKind::Parse, "model spec needs a string 'kind'");
    ModelSpec spec;
    spec.kind = j["kind"].get<std::string>();
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw Error(ErrorKind::Parse, "'params' must be an object");
        spec.params = j["params"];
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw Error(ErrorKind::Parse, "'seed' must be an integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    return spec;
}

namespace {

template <class T>
T param(const ModelSpec& spec, const char* key) {
    if (!spec.params.contains(key)) invalid(spec.kind + " needs parameter '" + key + "'");
    try {
        return spec.params.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        invalid(std::string("parameter '") + key + "' has the wrong type");
    }
}

template <class T>
T param_or(const ModelSpec& spec, const char* key, T fallback) {
    return spec.params.contains(key) ? param<T>(spec, key) : fallback;
}

int particle_count(const ModelSpec& spec) {
    if (spec.params.contains("m")) return param<int>(spec, "m");
    return param<int>(spec, "particles");
}

Graph graph_param(const ModelSpec& spec, int n, const std::string& fallback) {
    if (spec.params.contains("edges")) {
        Graph g;
        for (const auto& e : param<std::vector<std::vector<int>>>(spec, "edges")) {
            if (e.size() != 2) invalid("edges must be pairs");
            g.emplace_back(e[0], e[1]);
        }
        return g;
    }
    const std::string name = param_or<std::string>(spec, "graph", fallback);
    if (name == "path") return path_graph(n);
    if (name == "cycle") return cycle_graph(n);
    if (name == "complete") return complete_graph(n);
    invalid("unknown graph '" + name + "'");
}

}  // namespace

Model build_model(const ModelSpec& spec) {
    const std::string& k = spec.kind;
    if (k == "cycle") return cycle_model(param<int>(spec, "n"));
    if (k == "hypercube") return hypercube_model(param<int>(spec, "n"));
    if (k == "abelian_cayley")
        return abelian_cayley_model(param<std::vector<int>>(spec, "moduli"),
                                    param<std::vector<std::vector<int>>>(spec, "generators"));
    if (k == "random_cayley")
        return random_cayley_model(param<std::vector<int>>(spec, "moduli"), param<int>(spec, "k"),
                                   param_or<std::uint64_t>(spec, "seed", spec.seed));
    if (k == "rank_one") {
        const auto p = param<std::vector<double>>(spec, "pi");
        return rank_one_model(Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size())));
    }
    if (k == "glauber_ising") {
        const int n = param<int>(spec, "n");
        const double beta = param<double>(spec, "beta");
        const RateRule rule = parse_rate_rule(param_or<std::string>(spec, "rate_rule", "gibbs"));
        if (param_or<std::string>(spec, "graph", "") == "curie_weiss") return curie_weiss_model(n, beta, rule);
        return ising_graph_model(n, graph_param(spec, n, "path"), beta, rule);
    }
    if (k == "glauber_hardcore") {
        const int n = param<int>(spec, "n");
        return glauber_hardcore_model(n, graph_param(spec, n, "path"), param<double>(spec, "zeta"),
                                      parse_rate_rule(param_or<std::string>(spec, "rate_rule", "gibbs")));
    }
    if (k == "zero_range_mf")
        return zero_range_mf_model(param<int>(spec, "n"), particle_count(spec), param<std::vector<double>>(spec, "rates"));
    if (k == "exclusion") {
        const int n = param<int>(spec, "n");
        return exclusion_model(n, particle_count(spec), graph_param(spec, n, "cycle"));
    }
    if (k == "matrix_file") return matrix_file_model(param<std::string>(spec, "path"));
    invalid("unknown model kind '" + k + "'");
}

ReferenceValues reference_values(const Model& model) {
    ReferenceValues r;
    auto& v = r.values;
    const int N = model.chain.size();
    if (model.kind == "hypercube") {
        const double n = std::log2(static_cast<double>(N));
        v = {{"lambda", 2.0 / n}, {"gamma", 2.0 / n}, {"alpha", 4.0 / n}, {"beta", 1.0 / n},
             {"kappa1", 2.0 / n}, {"rho", 2.0 / n},   {"diameter", n},    {"d", n}};
    } else if (model.kind == "cycle") {
        const double gamma = 1.0 - std::cos(2.0 * M_PI / N);
        v = {{"lambda", gamma}, {"gamma", gamma}, {"diameter", static_cast<double>(N / 2)}, {"d", N == 2 ? 1.0 : 2.0}};
        if (N % 2 == 0 && N >= 4) {
            v["alpha"] = 2.0 * gamma;
            v["beta"] = gamma / 2.0;
        }
    } else if (model.kind == "rank_one") {
        const double p = model.chain.pi_min;
        v = {{"lambda", 1.0},    {"gamma", 1.0},   {"kappa1", 1.0},   {"kappa_inf", 0.0},
             {"alpha_lower", 1.0}, {"alpha_upper", 2.0}, {"rho", 0.5 + p / (1.0 + p)},
             {"diameter", 1.0},  {"d", 1.0 / p}};
    } else {
        throw Error(ErrorKind::NoKnownValues, "no closed-form values for kind '" + model.kind + "'");
    }
    return r;
}

double cube_exact_tv(long n, double t) {
    if (n < 1) invalid("cube_exact_tv needs n >= 1");
    if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "cube_exact_tv needs t >= 0");
    const double dn = static_cast<double>(n);
    const double u = std::exp(-2.0 * t / dn);
    const double lp = std::log1p(u);
    const double lm = u < 1.0 ? std::log1p(-u) : -std::numeric_limits<double>::infinity();
    const double lg = std::lgamma(dn + 1.0) - dn * std::log(2.0);
    double total = 0.0;
    for (long k = 0; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double ratio_log = (dn - dk) * lp + (k == 0 ? 0.0 : dk * lm);
        if (ratio_log >= 0.0) continue;
        const double w = std::exp(lg - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0));
        total += w * -std::expm1(ratio_log);
    }
    return total;
}

double cube_profile_F(double s) { return std::erf(std::exp(-2.0 * s) / (2.0 * std::sqrt(2.0))); }

namespace {

double theta_density(double z, double t) {
    if (t > 1.0) {
        // Fourier form of the same periodic Gaussian, accurate when t is large.
        double f = 1.0;
        for (int m = 1;; ++m) {
            const double a = std::exp(-2.0 * M_PI * M_PI * m * m * t);
            if (a < 1e-17) break;
            f += 2.0 * a * std::cos(2.0 * M_PI * m * z);
        }
        return f;
    }
    const double c = 1.0 / std::sqrt(2.0 * M_PI * t);
    double f = c * std::exp(-z * z / (2.0 * t));
    for (int k = 1;; ++k) {
        const double a = c * std::exp(-(z - k) * (z - k) / (2.0 * t));
        const double b = c * std::exp(-(z + k) * (z + k) / (2.0 * t));
        f += a + b;
        if (a < 1e-16 && b < 1e-16) break;
    }
    return f;
}

template <class F>
double simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double cycle_profile_F(double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::NonpositiveTime, "cycle profile needs t > 0");
    // f_t is symmetric and decreasing on [0, 1/2]; (1 - f_t)_+ lives on [z*, 1 - z*].
    auto g = [t](double z) { return 1.0 - theta_density(z, t); };
    if (g(0.5) <= 0.0) return 0.0;
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    const double a = hi, b = 0.5;
    const double fa = std::max(0.0, g(a)), fb = g(b), fm = g(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    auto gp = [&g](double z) { return std::max(0.0, g(z)); };
    return 2.0 * simpson(gp, a, b, fa, fm, fb, whole, 0.5e-9, 50);
}

double cube_varentropy_closed_form(long n, double t) {
    if (n < 1) invalid("cube varentropy needs n >= 1");
    if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "cube varentropy needs t >= 0");
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    const double dn = static_cast<double>(n);
    const double u = std::exp(-2.0 * t / dn);
    const double one_minus_u = -std::expm1(-2.0 * t / dn);
    const double l = std::log1p(u) - std::log(one_minus_u);
    return dn / 4.0 * -std::expm1(-4.0 * t / dn) * l * l;
}

}  // namespace cutofflab
