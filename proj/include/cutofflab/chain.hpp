#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "cutofflab/errors.hpp"

namespace cutofflab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

// Default ceiling for dense linear algebra (LU for pi, eigenvalue routines).
inline constexpr int kDenseCap = 4096;

// Validated irreducible stochastic matrix with its stationary law.
// Immutable after construction.
struct Chain {
    SparseMat T;
    SparseMat adjoint;  // T*(x,y) = pi(y) T(y,x) / pi(x)
    Vec pi;
    double pi_min = 0.0;
    bool reversible = false;

    int size() const { return static_cast<int>(pi.size()); }
};

SparseMat make_transition(int n, const std::vector<Triplet>& entries);

// Checks stochasticity and irreducibility, solves for pi, builds the adjoint.
Chain build_chain(const SparseMat& T, int dense_cap = kDenseCap);

// Same checks, but pi is supplied (and verified) instead of solved for.
Chain build_chain_with_pi(const SparseMat& T, const Vec& pi);

// Triplet file "row col prob" with '#' comments.
Chain load_matrix_file(const std::string& path, int dense_cap = kDenseCap);

bool is_irreducible(const SparseMat& T);

Chain lazify(const Chain& chain);

// (1-theta) T + theta Pi, where Pi has every row equal to pi.
Chain rank_one_perturb(const Chain& chain, double theta);

enum class Direction { forward, adjoint };

// Poisson(t) weights e^{-t} t^k / k!, truncated once the neglected tail is below 1e-14.
std::vector<double> poisson_weights(double t);

// P_t v (forward) or P_t* v (adjoint), columnwise, by uniformization.
template <class Derived>
typename Derived::PlainObject semigroup_apply(const Chain& chain, const Eigen::MatrixBase<Derived>& v,
                                              double t, Direction dir = Direction::forward) {
    if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "semigroup time must be >= 0");
    using Plain = typename Derived::PlainObject;
    const SparseMat& A = dir == Direction::forward ? chain.T : chain.adjoint;
    Plain term = v;
    if (t == 0.0) return term;
    const std::vector<double> w = poisson_weights(t);
    Plain acc = w[0] * term;
    Plain next(term.rows(), term.cols());
    for (std::size_t k = 1; k < w.size(); ++k) {
        next.noalias() = A * term;
        term.swap(next);
        if (w[k] != 0.0) acc.noalias() += w[k] * term;
    }
    return acc;
}

// L v = (T - Id) v, or the adjoint generator.
template <class Derived>
typename Derived::PlainObject generator_apply(const Chain& chain, const Eigen::MatrixBase<Derived>& v,
                                              Direction dir = Direction::forward) {
    const SparseMat& A = dir == Direction::forward ? chain.T : chain.adjoint;
    typename Derived::PlainObject out = A * v;
    out -= v;
    return out;
}

// <f, g>_pi
inline double inner_pi(const Chain& chain, const Vec& f, const Vec& g) {
    return (chain.pi.array() * f.array() * g.array()).sum();
}

// E(f, g) = <f, -L g>_pi
double dirichlet_form(const Chain& chain, const Vec& f, const Vec& g);

// Half-sum 1/2 sum pi(x) T(x,y) (f(x)-f(y)) (g(x)-g(y)).
double dirichlet_form_symmetric(const Chain& chain, const Vec& f, const Vec& g);

// Gamma(f,g)(x) = 1/2 sum_y T(x,y) (f(x)-f(y)) (g(x)-g(y))
Vec carre_du_champ(const Chain& chain, const Vec& f, const Vec& g);
inline Vec carre_du_champ(const Chain& chain, const Vec& f) { return carre_du_champ(chain, f, f); }

// Gamma_2 f = 1/2 (L Gamma f - 2 Gamma(f, L f))
Vec carre_du_champ_2(const Chain& chain, const Vec& f);

Mat to_dense(const SparseMat& A);

}  // namespace cutofflab
