#include "cutofflab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace cutofflab {

namespace {

constexpr double kMassTol = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_normalized(const Vec& p, const char* name) {
    if ((p.array() < -kMassTol).any() || std::abs(p.sum() - 1.0) > 1e-12)
        throw Error(ErrorKind::NotNormalized, std::string(name) + " is not a probability vector");
}

// Min-cost flow on the bipartite support graph by successive shortest paths.
// Sources carry mu, sinks carry nu, every source-sink arc has unbounded capacity.
struct BipartiteFlow {
    int a = 0, b = 0;
    std::vector<int> src, dst;  // state ids
    std::vector<double> supply, demand;
    Mat C, F;

    BipartiteFlow(const SparseDist& mu, const SparseDist& nu, const GroundCost& cost) {
        for (auto [x, m] : mu) if (m > kMassTol) { src.push_back(x); supply.push_back(m); }
        for (auto [y, m] : nu) if (m > kMassTol) { dst.push_back(y); demand.push_back(m); }
        a = static_cast<int>(src.size());
        b = static_cast<int>(dst.size());
        C.resize(a, b);
        F = Mat::Zero(a, b);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) C(i, j) = cost(src[i], dst[j]);
    }

    void solve() {
        const int S = a + b, V = a + b + 1;  // node S is the super source; sink handled via demand
        std::vector<double> h(V, 0.0), dist(V);
        std::vector<int> prev(V);
        std::vector<char> done(V);
        double remaining = 0.0;
        for (double s : supply) remaining += s;
        while (remaining > 1e-14) {
            std::fill(dist.begin(), dist.end(), kInf);
            std::fill(prev.begin(), prev.end(), -1);
            std::fill(done.begin(), done.end(), 0);
            dist[S] = 0.0;
            int best_sink = -1;
            double best_sink_dist = kInf;
            for (;;) {
                int u = -1;
                for (int v = 0; v < V; ++v)
                    if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
                if (u < 0) break;
                done[u] = 1;
                if (u == S) {
                    for (int i = 0; i < a; ++i)
                        if (supply[i] > 0.0) relax(u, i, 0.0, h, dist, prev);
                } else if (u < a) {
                    for (int j = 0; j < b; ++j) relax(u, a + j, C(u, j), h, dist, prev);
                } else {
                    const int j = u - a;
                    for (int i = 0; i < a; ++i)
                        if (F(i, j) > 0.0) relax(u, i, -C(i, j), h, dist, prev);
                }
            }
            // Pick the sink with remaining demand minimising the true path cost (ties: lowest index).
            for (int j = 0; j < b; ++j) {
                const int v = a + j;
                if (demand[j] <= 0.0 || dist[v] == kInf) continue;
                const double true_cost = dist[v] + h[v] - h[S];
                if (true_cost < best_sink_dist) {
                    best_sink_dist = true_cost;
                    best_sink = j;
                }
            }
            if (best_sink < 0) break;
            for (int v = 0; v < V; ++v)
                if (dist[v] < kInf) h[v] += dist[v];

            // Trace the path back and find the bottleneck.
            double delta = demand[best_sink];
            int v = a + best_sink;
            while (prev[v] != S) {
                const int u = prev[v];
                if (u >= a) delta = std::min(delta, F(v, u - a));  // backward arc sink u -> source v
                v = u;
            }
            delta = std::min(delta, supply[v]);
            const int first = v;

            v = a + best_sink;
            while (prev[v] != S) {
                const int u = prev[v];
                if (u < a) {
                    F(u, v - a) += delta;
                } else {
                    F(v, u - a) -= delta;
                    if (F(v, u - a) < 1e-17) F(v, u - a) = 0.0;
                }
                v = u;
            }
            supply[first] -= delta;
            if (supply[first] < 1e-17) supply[first] = 0.0;
            demand[best_sink] -= delta;
            if (demand[best_sink] < 1e-17) demand[best_sink] = 0.0;
            remaining -= delta;
        }
    }

    static void relax(int u, int v, double c, const std::vector<double>& h, std::vector<double>& dist,
                      std::vector<int>& prev) {
        const double nd = dist[u] + c + h[u] - h[v];
        if (nd < dist[v]) {
            dist[v] = nd;
            prev[v] = u;
        }
    }

    double cost() const { return (F.array() * C.array()).sum(); }

    // Node potentials p with p_j - p_i <= C(i,j) everywhere and equality on used arcs.
    std::vector<double> potentials() const {
        const int V = a + b;
        std::vector<double> p(V, 0.0);
        for (int iter = 0; iter <= V; ++iter) {
            bool changed = false;
            for (int i = 0; i < a; ++i)
                for (int j = 0; j < b; ++j) {
                    if (p[i] + C(i, j) < p[a + j] - 1e-15) {
                        p[a + j] = p[i] + C(i, j);
                        changed = true;
                    }
                    if (F(i, j) > 1e-14 && p[a + j] - C(i, j) < p[i] - 1e-15) {
                        p[i] = p[a + j] - C(i, j);
                        changed = true;
                    }
                }
            if (!changed) break;
        }
        return p;
    }
};

SparseDist trim(const Vec& p) {
    SparseDist out;
    for (int x = 0; x < p.size(); ++x)
        if (p(x) > kMassTol) out.emplace_back(x, p(x));
    return out;
}

// Edmonds-Karp max flow restricted to arcs with cost <= D.
double max_flow_within(const SparseDist& mu, const SparseDist& nu, const Eigen::MatrixXi& cost, int D) {
    const int a = static_cast<int>(mu.size()), b = static_cast<int>(nu.size());
    std::vector<double> supply(a), demand(b);
    for (int i = 0; i < a; ++i) supply[i] = mu[i].second;
    for (int j = 0; j < b; ++j) demand[j] = nu[j].second;
    Mat F = Mat::Zero(a, b);
    double total = 0.0;
    // Nodes: 0..a-1 sources, a..a+b-1 sinks, BFS from all sources with residual supply.
    for (;;) {
        std::vector<int> prev(a + b, -2);
        std::deque<int> q;
        for (int i = 0; i < a; ++i)
            if (supply[i] > 0.0) {
                prev[i] = -1;
                q.push_back(i);
            }
        int found = -1;
        while (!q.empty() && found < 0) {
            const int u = q.front();
            q.pop_front();
            if (u < a) {
                for (int j = 0; j < b; ++j)
                    if (prev[a + j] == -2 && cost(u, j) <= D) {
                        prev[a + j] = u;
                        if (demand[j] > 0.0) {
                            found = a + j;
                            break;
                        }
                        q.push_back(a + j);
                    }
            } else {
                const int j = u - a;
                for (int i = 0; i < a; ++i)
                    if (prev[i] == -2 && F(i, j) > 0.0) {
                        prev[i] = u;
                        q.push_back(i);
                    }
            }
        }
        if (found < 0) break;
        double delta = demand[found - a];
        int v = found;
        while (prev[v] != -1) {
            const int u = prev[v];
            if (u >= a) delta = std::min(delta, F(v, u - a));
            v = u;
        }
        delta = std::min(delta, supply[v]);
        const int first = v;
        v = found;
        while (prev[v] != -1) {
            const int u = prev[v];
            if (u < a) F(u, v - a) += delta;
            else {
                F(v, u - a) -= delta;
                if (F(v, u - a) < 1e-17) F(v, u - a) = 0.0;
            }
            v = u;
        }
        supply[first] -= delta;
        if (supply[first] < 1e-17) supply[first] = 0.0;
        demand[found - a] -= delta;
        if (demand[found - a] < 1e-17) demand[found - a] = 0.0;
        total += delta;
        if (delta <= 0.0) break;
    }
    return total;
}

}  // namespace

SparseDist to_sparse(const Vec& p) { return trim(p); }

double w1_sparse(const SparseDist& mu, const SparseDist& nu, const GroundCost& cost) {
    BipartiteFlow flow(mu, nu, cost);
    flow.solve();
    return flow.cost();
}

TransportPlan solve_transport(const Vec& mu, const Vec& nu, const GroundCost& cost) {
    check_normalized(mu, "mu");
    check_normalized(nu, "nu");
    BipartiteFlow flow(trim(mu), trim(nu), cost);
    flow.solve();
    TransportPlan plan;
    plan.cost = flow.cost();
    for (int i = 0; i < flow.a; ++i)
        for (int j = 0; j < flow.b; ++j)
            if (flow.F(i, j) > 0.0) plan.pairs.emplace_back(flow.src[i], flow.dst[j], flow.F(i, j));
    // Extend the sink potentials to a 1-Lipschitz function on every state.
    const std::vector<double> p = flow.potentials();
    const int n = static_cast<int>(mu.size());
    plan.dual_potentials.resize(n);
    for (int z = 0; z < n; ++z) {
        double best = kInf;
        for (int j = 0; j < flow.b; ++j) best = std::min(best, cost(z, flow.dst[j]) - p[flow.a + j]);
        plan.dual_potentials(z) = best;
    }
    plan.dual_value = mu.dot(plan.dual_potentials) - nu.dot(plan.dual_potentials);
    return plan;
}

TransportPlan wasserstein_1(const Vec& mu, const Vec& nu, const MetricData& metric) {
    return solve_transport(mu, nu, [&](int x, int y) { return metric.dist(x, y); });
}

double winf_sparse(const SparseDist& mu_in, const SparseDist& nu_in, const GroundCost& cost) {
    SparseDist mu, nu;
    for (auto e : mu_in) if (e.second > kMassTol) mu.push_back(e);
    for (auto e : nu_in) if (e.second > kMassTol) nu.push_back(e);
    double mass = 0.0;
    for (auto e : mu) mass += e.second;
    const int a = static_cast<int>(mu.size()), b = static_cast<int>(nu.size());
    Eigen::MatrixXi C(a, b);
    std::vector<int> levels;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            C(i, j) = cost(mu[i].first, nu[j].first);
            levels.push_back(C(i, j));
        }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    int lo = 0, hi = static_cast<int>(levels.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (max_flow_within(mu, nu, C, levels[mid]) >= mass - 1e-12) hi = mid;
        else lo = mid + 1;
    }
    return levels.empty() ? 0.0 : levels[lo];
}

double wasserstein_inf(const Vec& mu, const Vec& nu, const MetricData& metric) {
    check_normalized(mu, "mu");
    check_normalized(nu, "nu");
    return winf_sparse(trim(mu), trim(nu), [&](int x, int y) { return metric.dist(x, y); });
}

double tv_via_transport(const Vec& mu, const Vec& nu) {
    return solve_transport(mu, nu, [](int x, int y) { return x == y ? 0 : 1; }).cost;
}

}  // namespace cutofflab
