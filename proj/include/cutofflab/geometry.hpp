#pragma once

#include <utility>
#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

// Hop-count structure of the (symmetric) support graph.
struct MetricData {
    Eigen::MatrixXi dist;
    int diameter = 0;
    double d_sparsity = 0.0;                // max 1/T(x,y) over support edges
    std::vector<std::vector<int>> adj;      // neighbours y != x
    std::vector<std::pair<int, int>> edges; // x < y

    int size() const { return static_cast<int>(adj.size()); }
};

// Entries below this are treated as absent when reading the support.
inline constexpr double kSupportTol = 1e-15;

bool is_weakly_reversible(const SparseMat& T);

MetricData hop_metric(const Chain& chain);

// Edge form of the Lipschitz constant: max over support edges of |f(x) - f(y)|.
double lipschitz_seminorm(const MetricData& metric, const Vec& f);

// Pairwise form max_{x != y} |f(x) - f(y)| / dist(x,y); used as a cross-check.
double lipschitz_pairwise(const MetricData& metric, const Vec& f);

inline double log_plus(double u) { return u > 1.0 ? std::log(u) : 0.0; }

}  // namespace cutofflab
