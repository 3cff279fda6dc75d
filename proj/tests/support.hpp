#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "cutofflab/cutofflab.hpp"

namespace support {

using cutofflab::Chain;
using cutofflab::Mat;
using cutofflab::Vec;

// exp(t (T - Id)) by Eigen's dense matrix exponential.
inline Mat dense_heat_kernel(const Chain& chain, double t) {
    const Mat T = cutofflab::to_dense(chain.T);
    return (t * (T - Mat::Identity(T.rows(), T.cols()))).exp();
}

inline Vec random_density(std::mt19937_64& rng, const Vec& pi) {
    std::exponential_distribution<double> e(1.0);
    Vec p(pi.size());
    for (int i = 0; i < p.size(); ++i) p[i] = e(rng);
    p /= p.sum();
    return p.cwiseQuotient(pi);
}

inline Vec random_law(std::mt19937_64& rng, int n) {
    std::exponential_distribution<double> e(1.0);
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = e(rng);
    return p / p.sum();
}

inline Vec random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    return v;
}

// Dense random irreducible chain, not reversible in general.
inline Chain random_chain(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<cutofflab::Triplet> trip;
    for (int x = 0; x < n; ++x) {
        std::vector<double> row(n);
        double s = 0.0;
        for (int y = 0; y < n; ++y) s += row[y] = u(rng);
        for (int y = 0; y < n; ++y) trip.emplace_back(x, y, row[y] / s);
    }
    return cutofflab::build_chain(cutofflab::make_transition(n, trip));
}

// Reversible weighted random walk on a ring with chords.
inline Chain random_reversible_chain(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Mat W = Mat::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const int y = (x + 1) % n;
        W(x, y) = W(y, x) = u(rng);
    }
    W(0, n / 2) = W(n / 2, 0) = u(rng);
    const double top = W.rowwise().sum().maxCoeff();
    std::vector<cutofflab::Triplet> trip;
    for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int y = 0; y < n; ++y)
            if (W(x, y) > 0.0) {
                trip.emplace_back(x, y, W(x, y) / top);
                s += W(x, y) / top;
            }
        trip.emplace_back(x, x, 1.0 - s);
    }
    return cutofflab::build_chain(cutofflab::make_transition(n, trip));
}

}  // namespace support
