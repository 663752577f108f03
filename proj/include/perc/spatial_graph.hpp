#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "perc/geometry.hpp"
#include "perc/path_loss.hpp"
#include "perc/spatial_grid.hpp"
#include "perc/union_find.hpp"

namespace perc {

// Undirected graph on the points of a cloud. Edges are stored as (i, j) with
// i < j, sorted; finalize() derives the CSR adjacency and component labels
// (label = smallest point index in the component, so labels are independent of
// edge discovery order).
struct SpatialGraph {
    long long n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> adj_start; // size n+1
    std::vector<int> adj;
    std::vector<int> labels;

    void add_edge(int i, int j) {
        if (i == j) throw std::invalid_argument("spatial_graph: self-loops not allowed");
        if (i > j) std::swap(i, j);
        edges.emplace_back(i, j);
    }

    void finalize() {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        adj_start.assign(n + 1, 0);
        for (const auto& e : edges) {
            ++adj_start[e.first + 1];
            ++adj_start[e.second + 1];
        }
        for (long long i = 0; i < n; ++i) adj_start[i + 1] += adj_start[i];
        adj.assign(adj_start.back(), 0);
        std::vector<int> cursor(adj_start.begin(), adj_start.end() - 1);
        for (const auto& e : edges) {
            adj[cursor[e.first]++] = e.second;
            adj[cursor[e.second]++] = e.first;
        }
        DisjointSetForest dsf;
        dsf.reset(static_cast<int>(n));
        for (const auto& e : edges) dsf.unite(e.first, e.second);
        labels = dsf.canonical_labels();
    }

    int degree(int i) const { return adj_start[i + 1] - adj_start[i]; }
    bool same_component(int i, int j) const { return labels[i] == labels[j]; }
};

// Distance graph: edge iff |x_i - x_j| < r (strict).
inline SpatialGraph gilbert_graph(const PointCloud& pts, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("gilbert_graph: r must be >= 0");
    SpatialGraph g;
    g.n = pts.size();
    const int d = pts.dim();
    if (g.n > 0 && r > 0.0) {
        UniformGrid grid;
        grid.build(pts.coords, d, r);
        const double r2 = r * r;
        for (long long i = 0; i < g.n; ++i) {
            const double* xi = pts.pt(i);
            grid.for_candidates(xi, [&](int k) {
                if (k > i && dist2(xi, pts.pt(k), d) < r2) g.add_edge(static_cast<int>(i), k);
            });
        }
    }
    g.finalize();
    return g;
}

// How two marked points decide adjacency from their marks.
enum class BooleanRule {
    Overlap, // |x_i - x_j| < rho_i + rho_j  (touching balls of radii rho)
    Min,     // |x_i - x_j| < min(R_i, R_j)  (mutual reach)
};

inline SpatialGraph boolean_graph(const MarkedPointCloud& pts, BooleanRule rule) {
    SpatialGraph g;
    g.n = pts.base.size();
    const int d = pts.base.dim();
    double max_mark = 0.0;
    for (double m : pts.marks) {
        if (!(m >= 0.0)) throw std::invalid_argument("boolean_graph: marks must be >= 0");
        max_mark = std::max(max_mark, m);
    }
    const double reach = (rule == BooleanRule::Overlap) ? 2.0 * max_mark : max_mark;
    if (g.n > 0 && reach > 0.0) {
        UniformGrid grid;
        grid.build(pts.base.coords, d, reach);
        for (long long i = 0; i < g.n; ++i) {
            const double* xi = pts.base.pt(i);
            grid.for_candidates(xi, [&](int k) {
                if (k <= i) return;
                double cut = (rule == BooleanRule::Overlap) ? pts.marks[i] + pts.marks[k]
                                                            : std::min(pts.marks[i], pts.marks[k]);
                if (dist2(xi, pts.base.pt(k), d) < cut * cut) g.add_edge(static_cast<int>(i), k);
            });
        }
    }
    g.finalize();
    return g;
}

// Link acceptance parameters for interference-limited graphs.
struct SinrParams {
    double N0 = 1.0;           // ambient noise power
    double tau = 1.0;          // acceptance threshold on the signal quality ratio
    double gamma = 0.0;        // fraction of interference that survives cancellation
    double P = 1.0;            // common transmit power when random_power is false
    bool random_power = false; // true: per-point marks are the transmit powers

    void validate() const {
        if (!(N0 > 0.0)) throw std::invalid_argument("sinr.N0: must be > 0");
        if (!(tau > 0.0)) throw std::invalid_argument("sinr.tau: must be > 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("sinr.gamma: must be >= 0");
        if (!random_power && !(P > 0.0)) throw std::invalid_argument("sinr.P: must be > 0");
    }
};

// Largest distance at which power `power` still clears the noise-only
// threshold: sup{ r : power * ell(r) / N0 > tau }, 0 when even r = 0 fails.
inline double snr_radius(const PathLoss& ell, double power, double N0, double tau) {
    if (!(power > 0.0)) return 0.0;
    return ell.exceed_radius(tau * N0 / power);
}

// Signal quality of the directed link i -> j. Transmit powers follow the
// parameters: per-point marks when random_power is set, the common P
// otherwise. Interference at the receiver j sums over all points except the
// pair {i, j} itself.
inline double sinr_value(const MarkedPointCloud& pts, long long i, long long j,
                         const SinrParams& par, const PathLoss& ell) {
    const int d = pts.base.dim();
    auto power = [&](long long k) { return par.random_power ? pts.marks[k] : par.P; };
    double signal = power(i) * ell(dist(pts.base.pt(i), pts.base.pt(j), d));
    double interf = 0.0;
    for (long long k = 0; k < pts.base.size(); ++k) {
        if (k == i || k == j) continue;
        interf += power(k) * ell(dist(pts.base.pt(k), pts.base.pt(j), d));
    }
    return signal / (par.N0 + par.gamma * interf);
}

// Interference-limited graph: undirected edge iff the directed quality ratio
// exceeds tau in BOTH directions. With gamma = 0 this is exactly the
// noise-only graph: mutual-reach (random powers) or distance (common power),
// and no interference is evaluated at all.
inline SpatialGraph sinr_graph(const MarkedPointCloud& pts, const SinrParams& par,
                               const PathLoss& ell) {
    par.validate();
    // With a common transmit power the model is vacuous unless a zero-distance
    // link clears the noise floor; random powers may legitimately straddle it.
    if (!par.random_power && !(ell(0.0) > par.tau * par.N0 / par.P))
        throw std::invalid_argument(
            "sinr_graph: constant power cannot clear the noise floor (ell(0) <= tau*N0/P)");
    SpatialGraph g;
    g.n = pts.base.size();
    const int d = pts.base.dim();
    const long long n = g.n;
    if (n == 0) {
        g.finalize();
        return g;
    }

    // Per-point noise-only reach. The quality ratio never beats the
    // noise-only ratio, so dist < min(R_i, R_j) is a sound candidate filter.
    std::vector<double> power(n), radius(n);
    double max_radius = 0.0;
    for (long long k = 0; k < n; ++k) {
        power[k] = par.random_power ? pts.marks[k] : par.P;
        radius[k] = snr_radius(ell, power[k], par.N0, par.tau);
        max_radius = std::max(max_radius, radius[k]);
    }

    std::vector<std::pair<int, int>> candidates;
    if (max_radius > 0.0) {
        UniformGrid grid;
        grid.build(pts.base.coords, d, max_radius);
        for (long long i = 0; i < n; ++i) {
            const double* xi = pts.base.pt(i);
            const double ri = radius[i];
            if (ri <= 0.0) continue;
            grid.for_candidates(xi, [&](int k) {
                if (k <= i) return;
                double cut = std::min(ri, radius[k]);
                if (dist2(xi, pts.base.pt(k), d) < cut * cut)
                    candidates.emplace_back(static_cast<int>(i), k);
            });
        }
    }

    if (par.gamma == 0.0) {
        for (const auto& c : candidates) g.add_edge(c.first, c.second);
        g.finalize();
        return g;
    }

    // One pass of totals per receiver, then each candidate link subtracts its
    // own sender's contribution from the receiver's total.
    std::vector<double> total_at(n, 0.0);
    for (long long j = 0; j < n; ++j) {
        const double* xj = pts.base.pt(j);
        double s = 0.0;
        for (long long k = 0; k < n; ++k) {
            if (k == j) continue;
            s += power[k] * ell(dist(pts.base.pt(k), xj, d));
        }
        total_at[j] = s;
    }
    for (const auto& c : candidates) {
        const int i = c.first, j = c.second;
        const double lij = ell(dist(pts.base.pt(i), pts.base.pt(j), d));
        const double sig_ij = power[i] * lij;
        const double sig_ji = power[j] * lij;
        const double q_ij = sig_ij / (par.N0 + par.gamma * std::max(0.0, total_at[j] - sig_ij));
        if (!(q_ij > par.tau)) continue;
        const double q_ji = sig_ji / (par.N0 + par.gamma * std::max(0.0, total_at[i] - sig_ji));
        if (!(q_ji > par.tau)) continue;
        g.add_edge(i, j);
    }
    g.finalize();
    return g;
}

// Convenience overload for common transmit power: marks are ignored /
// unnecessary, every point sends with par.P.
inline SpatialGraph sinr_graph(const PointCloud& pts, const SinrParams& par, const PathLoss& ell) {
    SinrParams p = par;
    p.random_power = false;
    MarkedPointCloud marked;
    marked.base = pts;
    marked.marks.assign(static_cast<size_t>(pts.size()), p.P);
    return sinr_graph(marked, p, ell);
}

} // namespace perc
