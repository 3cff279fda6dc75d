#include "cutofflab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cutofflab/parallel.hpp"

namespace cutofflab {

bool is_weakly_reversible(const SparseMat& T) {
    for (int x = 0; x < T.outerSize(); ++x)
        for (SparseMat::InnerIterator it(T, x); it; ++it) {
            const int y = static_cast<int>(it.col());
            if (y == x || it.value() <= kSupportTol) continue;
            if (T.coeff(y, x) <= kSupportTol) return false;
        }
    return true;
}

MetricData hop_metric(const Chain& chain) {
    const SparseMat& T = chain.T;
    if (!is_weakly_reversible(T))
        throw Error(ErrorKind::NotWeaklyReversible, "support of T is not symmetric");
    const int n = chain.size();
    MetricData m;
    m.adj.assign(n, {});
    m.d_sparsity = 0.0;
    for (int x = 0; x < n; ++x)
        for (SparseMat::InnerIterator it(T, x); it; ++it) {
            const int y = static_cast<int>(it.col());
            if (y == x || it.value() <= kSupportTol) continue;
            m.adj[x].push_back(y);
            m.d_sparsity = std::max(m.d_sparsity, 1.0 / it.value());
            if (x < y) m.edges.emplace_back(x, y);
        }
    for (auto& a : m.adj) std::sort(a.begin(), a.end());
    std::sort(m.edges.begin(), m.edges.end());

    m.dist.resize(n, n);
    parallel_for(n, [&](int src) {
        std::vector<int> d(n, -1);
        std::deque<int> q{src};
        d[src] = 0;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : m.adj[x])
                if (d[y] < 0) {
                    d[y] = d[x] + 1;
                    q.push_back(y);
                }
        }
        for (int y = 0; y < n; ++y) m.dist(y, src) = d[y];
    });
    if ((m.dist.array() < 0).any()) throw Error(ErrorKind::NotIrreducible, "support graph is disconnected");
    m.diameter = m.dist.maxCoeff();
    return m;
}

double lipschitz_seminorm(const MetricData& metric, const Vec& f) {
    double best = 0.0;
    for (auto [x, y] : metric.edges) best = std::max(best, std::abs(f(x) - f(y)));
    return best;
}

double lipschitz_pairwise(const MetricData& metric, const Vec& f) {
    const int n = metric.size();
    double best = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            best = std::max(best, std::abs(f(x) - f(y)) / metric.dist(x, y));
    return best;
}

}  // namespace cutofflab
