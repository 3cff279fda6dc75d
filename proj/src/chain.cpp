#include "cutofflab/chain.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

namespace cutofflab {

namespace {

constexpr double kRowSumTol = 1e-9;
constexpr double kReversibleTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

void check_stochastic(const SparseMat& T) {
    if (T.rows() != T.cols() || T.rows() == 0)
        throw Error(ErrorKind::RowSum, "transition matrix must be square and non-empty");
    for (int x = 0; x < T.outerSize(); ++x) {
        double s = 0.0;
        for (SparseMat::InnerIterator it(T, x); it; ++it) {
            if (!(it.value() >= 0.0) || !std::isfinite(it.value()))
                throw Error(ErrorKind::RowSum, "negative or non-finite entry in row " + std::to_string(x));
            s += it.value();
        }
        if (std::abs(s - 1.0) > kRowSumTol)
            throw Error(ErrorKind::RowSum, "row " + std::to_string(x) + " sums to " + std::to_string(s));
    }
}

// Number of states reachable from 0 along the support (or its transpose).
int reach_count(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
            if (!seen[y]) {
                seen[y] = 1;
                ++count;
                stack.push_back(y);
            }
    }
    return count;
}

Vec solve_stationary_lu(const SparseMat& T) {
    const int n = static_cast<int>(T.rows());
    std::vector<Triplet> trip;
    trip.reserve(T.nonZeros() + 2 * n);
    // Rows of (T^T - I), with the last equation replaced by sum(pi) = 1.
    for (int x = 0; x < n; ++x)
        for (SparseMat::InnerIterator it(T, x); it; ++it)
            if (it.col() != n - 1) trip.emplace_back(static_cast<int>(it.col()), x, it.value());
    for (int x = 0; x < n - 1; ++x) trip.emplace_back(x, x, -1.0);
    for (int x = 0; x < n; ++x) trip.emplace_back(n - 1, x, 1.0);
    Eigen::SparseMatrix<double> M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::NotIrreducible, "singular stationary system");
    Vec rhs = Vec::Zero(n);
    rhs(n - 1) = 1.0;
    Vec pi = lu.solve(rhs);
    // One refinement step against the residual.
    Vec r = rhs - M * pi;
    pi += lu.solve(r);
    return pi;
}

Vec solve_stationary_power(const SparseMat& T) {
    const int n = static_cast<int>(T.rows());
    SparseMat Tt = SparseMat(T.transpose());
    Vec pi = Vec::Constant(n, 1.0 / n);
    for (long it = 0; it < 100000000L; ++it) {
        Vec next = 0.5 * (Tt * pi + pi);
        next /= next.sum();
        double diff = (next - pi).lpNorm<1>();
        pi.swap(next);
        if (diff < 1e-13) break;
    }
    return pi;
}

Chain finalize(const SparseMat& T, const Vec& pi_in) {
    const int n = static_cast<int>(T.rows());
    Chain c;
    c.T = T;
    c.T.makeCompressed();
    c.pi = pi_in / pi_in.sum();
    if ((c.pi.array() <= 0.0).any()) throw Error(ErrorKind::NotIrreducible, "stationary law has non-positive mass");
    Vec piT = SparseMat(c.T.transpose()) * c.pi;
    if ((piT - c.pi).cwiseAbs().maxCoeff() > kStationaryTol)
        throw Error(ErrorKind::RowSum, "supplied law is not stationary");
    c.pi_min = c.pi.minCoeff();

    bool reversible = true;
    for (int x = 0; x < n && reversible; ++x)
        for (SparseMat::InnerIterator it(c.T, x); it; ++it) {
            const int y = static_cast<int>(it.col());
            if (std::abs(c.pi(x) * it.value() - c.pi(y) * c.T.coeff(y, x)) > kReversibleTol) {
                reversible = false;
                break;
            }
        }
    c.reversible = reversible;
    if (reversible) {
        c.adjoint = c.T;
    } else {
        std::vector<Triplet> trip;
        trip.reserve(c.T.nonZeros());
        for (int y = 0; y < n; ++y)
            for (SparseMat::InnerIterator it(c.T, y); it; ++it) {
                const int x = static_cast<int>(it.col());
                trip.emplace_back(x, y, c.pi(y) * it.value() / c.pi(x));
            }
        c.adjoint = SparseMat(n, n);
        c.adjoint.setFromTriplets(trip.begin(), trip.end());
        c.adjoint.makeCompressed();
    }
    return c;
}

}  // namespace

SparseMat make_transition(int n, const std::vector<Triplet>& entries) {
    SparseMat T(n, n);
    T.setFromTriplets(entries.begin(), entries.end());
    T.prune(0.0);
    T.makeCompressed();
    return T;
}

bool is_irreducible(const SparseMat& T) {
    const int n = static_cast<int>(T.rows());
    std::vector<std::vector<int>> fwd(n), bwd(n);
    for (int x = 0; x < n; ++x)
        for (SparseMat::InnerIterator it(T, x); it; ++it)
            if (it.value() > 0.0) {
                fwd[x].push_back(static_cast<int>(it.col()));
                bwd[it.col()].push_back(x);
            }
    // A single strongly connected component iff state 0 reaches and is reached by all.
    return reach_count(fwd) == n && reach_count(bwd) == n;
}

Chain build_chain(const SparseMat& T, int dense_cap) {
    check_stochastic(T);
    if (!is_irreducible(T)) throw Error(ErrorKind::NotIrreducible, "support graph has several strongly connected components");
    Vec pi = T.rows() <= dense_cap ? solve_stationary_lu(T) : solve_stationary_power(T);
    return finalize(T, pi);
}

Chain build_chain_with_pi(const SparseMat& T, const Vec& pi) {
    check_stochastic(T);
    if (!is_irreducible(T)) throw Error(ErrorKind::NotIrreducible, "support graph has several strongly connected components");
    if (pi.size() != T.rows()) throw Error(ErrorKind::InvalidParameters, "pi has the wrong length");
    return finalize(T, pi);
}

Chain load_matrix_file(const std::string& path, int dense_cap) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
    std::vector<Triplet> trip;
    int n = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long r, c;
        double p;
        if (!(ls >> r)) continue;
        if (!(ls >> c >> p) || r < 0 || c < 0)
            throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected 'row col prob'");
        std::string rest;
        if (ls >> rest) throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": trailing tokens");
        trip.emplace_back(static_cast<int>(r), static_cast<int>(c), p);
        n = std::max<int>(n, static_cast<int>(std::max(r, c)) + 1);
    }
    if (n == 0) throw Error(ErrorKind::Parse, path + ": no entries");
    return build_chain(make_transition(n, trip), dense_cap);
}

Chain lazify(const Chain& chain) {
    const int n = chain.size();
    SparseMat I(n, n);
    I.setIdentity();
    SparseMat L = 0.5 * (chain.T + I);
    L.makeCompressed();
    return finalize(L, chain.pi);
}

Chain rank_one_perturb(const Chain& chain, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorKind::ThetaOutOfRange, "theta must lie in [0,1]");
    if (theta == 0.0) return chain;
    const int n = chain.size();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(n) * n + chain.T.nonZeros());
    for (int x = 0; x < n; ++x) {
        for (SparseMat::InnerIterator it(chain.T, x); it; ++it)
            trip.emplace_back(x, static_cast<int>(it.col()), (1.0 - theta) * it.value());
        for (int y = 0; y < n; ++y) trip.emplace_back(x, y, theta * chain.pi(y));
    }
    return finalize(make_transition(n, trip), chain.pi);
}

std::vector<double> poisson_weights(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::NegativeTime, "time must be finite and >= 0");
    if (t == 0.0) return {1.0};
    // Start at the mode and use ratio recurrences; lgamma at every k loses digits for large t.
    const long mode = static_cast<long>(std::floor(t));
    std::vector<double> w(static_cast<std::size_t>(mode) + 1);
    w[mode] = std::exp(-t + mode * std::log(t) - std::lgamma(static_cast<double>(mode) + 1.0));
    for (long k = mode; k > 0; --k) w[k - 1] = w[k] * static_cast<double>(k) / t;
    for (long k = mode;; ++k) {
        if (k + 2 > t) {
            // Tail beyond k is bounded by a geometric series with ratio t/(k+2).
            const double next = w[k] * t / static_cast<double>(k + 1);
            const double tail = next / (1.0 - t / static_cast<double>(k + 2));
            if (tail < 1e-14) break;
        }
        w.push_back(w[k] * t / static_cast<double>(k + 1));
    }
    // The mode weight carries the lgamma roundoff; the truncated tail is below 1e-14.
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

double dirichlet_form(const Chain& chain, const Vec& f, const Vec& g) {
    Vec Lg = generator_apply(chain, g);
    return -(chain.pi.array() * f.array() * Lg.array()).sum();
}

double dirichlet_form_symmetric(const Chain& chain, const Vec& f, const Vec& g) {
    double s = 0.0;
    for (int x = 0; x < chain.T.outerSize(); ++x) {
        double row = 0.0;
        for (SparseMat::InnerIterator it(chain.T, x); it; ++it) {
            const auto y = it.col();
            row += it.value() * (f(x) - f(y)) * (g(x) - g(y));
        }
        s += chain.pi(x) * row;
    }
    return 0.5 * s;
}

Vec carre_du_champ(const Chain& chain, const Vec& f, const Vec& g) {
    const int n = chain.size();
    Vec out(n);
    for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (SparseMat::InnerIterator it(chain.T, x); it; ++it) {
            const auto y = it.col();
            s += it.value() * (f(x) - f(y)) * (g(x) - g(y));
        }
        out(x) = 0.5 * s;
    }
    return out;
}

Vec carre_du_champ_2(const Chain& chain, const Vec& f) {
    Vec G = carre_du_champ(chain, f);
    Vec Lf = generator_apply(chain, f);
    return 0.5 * generator_apply(chain, G) - carre_du_champ(chain, f, Lf);
}

Mat to_dense(const SparseMat& A) { return Mat(A); }

}  // namespace cutofflab
