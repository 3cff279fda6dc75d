#pragma once

#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "cutofflab/geometry.hpp"

namespace cutofflab {

// Coupling of two laws together with the Kantorovich certificate.
struct TransportPlan {
    std::vector<std::tuple<int, int, double>> pairs;  // (x, y, mass)
    double cost = 0.0;
    Vec dual_potentials;   // 1-Lipschitz phi with mu(phi) - nu(phi) = cost
    double dual_value = 0.0;
};

// Sparse law: (state, mass) with strictly positive masses.
using SparseDist = std::vector<std::pair<int, double>>;

// Integer ground cost between two states.
using GroundCost = std::function<int(int, int)>;

SparseDist to_sparse(const Vec& p);

TransportPlan wasserstein_1(const Vec& mu, const Vec& nu, const MetricData& metric);

double wasserstein_inf(const Vec& mu, const Vec& nu, const MetricData& metric);

// W_1 under the trivial metric 1{x != y}; equals half the l1 distance.
double tv_via_transport(const Vec& mu, const Vec& nu);

// Lower-level entry points used by the curvature loops (no normalisation check).
double w1_sparse(const SparseDist& mu, const SparseDist& nu, const GroundCost& cost);
double winf_sparse(const SparseDist& mu, const SparseDist& nu, const GroundCost& cost);

// Full solve on arbitrary integer ground cost over n states.
TransportPlan solve_transport(const Vec& mu, const Vec& nu, const GroundCost& cost);

}  // namespace cutofflab
