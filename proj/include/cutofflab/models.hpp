#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cutofflab/chain.hpp"

namespace cutofflab {

// Walk on a finite Abelian group Z_{m_1} x ... x Z_{m_k}; element index is mixed radix
// with the first coordinate varying fastest. T(x, y) = nu(y - x).
struct GroupStructure {
    std::vector<int> moduli;
    Vec nu;  // step law indexed by element

    int order() const { return static_cast<int>(nu.size()); }
    int mul(int a, int b) const;
    int inv(int a) const;
    std::vector<int> coords(int a) const;
    int index(const std::vector<int>& c) const;
};

// Eigenvalues of the group walk, one per character: sum_z nu(z) chi_k(z).
std::vector<std::complex<double>> group_walk_eigenvalues(const GroupStructure& group);

enum class RateRule { gibbs, metropolis, sqrt };

RateRule parse_rate_rule(const std::string& name);
const char* to_string(RateRule rule);

// Single-site flip dynamics on a subset of {0,1}^sites (bit i set = spin +1 / site occupied).
struct GlauberStructure {
    int sites = 0;
    std::vector<std::uint32_t> config;  // state -> bitmask
    std::vector<int> index;             // bitmask -> state, -1 outside the state space
    Mat rates;                          // c_i(x) before normalisation, states x sites
    double normalization = 1.0;         // rates are divided by this to build T
    RateRule rule = RateRule::gibbs;
    Vec target;                         // declared stationary law
};

struct ZeroRangeStructure {
    int sites = 0;
    int particles = 0;
    std::vector<double> rate;  // r(0) = 0, r(1), ..., r(particles)
    double normalization = 1.0;
};

struct Model {
    std::string kind;
    std::string name;
    Chain chain;
    std::optional<GroupStructure> group;
    std::optional<GlauberStructure> glauber;
    std::optional<ZeroRangeStructure> zero_range;
};

using Graph = std::vector<std::pair<int, int>>;

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);

inline constexpr long kStateCap = 1 << 22;

Model cycle_model(int n);
Model hypercube_model(int n);
Model abelian_cayley_model(const std::vector<int>& moduli, const std::vector<std::vector<int>>& generators);
Model random_cayley_model(const std::vector<int>& moduli, int k, std::uint64_t seed);
Model rank_one_model(const Vec& pi);
// pi(x) proportional to exp(sum over ordered pairs of J_ij x_i x_j) on {-1,1}^n.
Model glauber_ising_model(const Mat& J, RateRule rule);
Model ising_graph_model(int n, const Graph& edges, double beta, RateRule rule);
Model curie_weiss_model(int n, double beta, RateRule rule);
Model glauber_hardcore_model(int n, const Graph& edges, double zeta, RateRule rule);
Model zero_range_mf_model(int sites, int particles, const std::vector<double>& rate);
Model exclusion_model(int n, int particles, const Graph& edges);
Model matrix_file_model(const std::string& path);

struct ModelSpec {
    std::string kind;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
};

ModelSpec parse_model_spec(const nlohmann::json& j);
Model build_model(const ModelSpec& spec);

struct ReferenceValues {
    std::map<std::string, double> values;
};

ReferenceValues reference_values(const Model& model);

// Exact worst-case TV of the n-cube walk via the binomial sum (no state enumeration).
double cube_exact_tv(long n, double t);

// erf(e^{-2s} / (2 sqrt 2))
double cube_profile_F(double s);

// Integral over [0,1] of (1 - f_t(z))_+ with f_t the wrapped Gaussian density of variance t.
double cycle_profile_F(double t);

// Varentropy of the cube density started from a vertex.
double cube_varentropy_closed_form(long n, double t);

}  // namespace cutofflab
