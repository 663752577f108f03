// Shared test utilities: brute-force oracles written independently of the
// library's accelerated implementations (no spatial grids, no candidate
// pruning), plus small filesystem helpers for the CLI tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "perc/perc.hpp"

namespace testutil {

using Edge = std::pair<int, int>;

inline std::vector<Edge> sorted_edges(const perc::SpatialGraph& g) {
    std::vector<Edge> out;
    out.reserve(g.edges.size());
    for (auto [i, j] : g.edges) out.emplace_back(std::min(i, j), std::max(i, j));
    std::sort(out.begin(), out.end());
    return out;
}

inline bool subset_of(const std::vector<Edge>& small, const std::vector<Edge>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// ---- all-pairs graph oracles -------------------------------------------------

inline std::vector<Edge> oracle_gilbert(const perc::PointCloud& pts, double r) {
    std::vector<Edge> out;
    const long long n = pts.size();
    for (long long i = 0; i < n; ++i)
        for (long long j = i + 1; j < n; ++j)
            if (perc::dist(pts.pt(i), pts.pt(j), pts.dim()) < r)
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
}

inline std::vector<Edge> oracle_boolean(const perc::MarkedPointCloud& pts, perc::BooleanRule rule) {
    std::vector<Edge> out;
    const long long n = pts.size();
    for (long long i = 0; i < n; ++i)
        for (long long j = i + 1; j < n; ++j) {
            double mi = pts.marks[static_cast<size_t>(i)], mj = pts.marks[static_cast<size_t>(j)];
            double cut = rule == perc::BooleanRule::Overlap ? mi + mj : std::min(mi, mj);
            if (perc::dist(pts.base.pt(i), pts.base.pt(j), pts.base.dim()) < cut)
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    return out;
}

// Straight transcription of the SINR definition: for every ordered pair the
// interference is re-summed over all other points. O(n^3); use on small n.
inline std::vector<Edge> oracle_sinr_cubic(const perc::MarkedPointCloud& pts,
                                           const perc::SinrParams& par,
                                           const perc::PathLoss& ell) {
    const long long n = pts.size();
    const int d = pts.base.dim();
    auto power = [&](long long k) { return par.random_power ? pts.marks[static_cast<size_t>(k)] : par.P; };
    auto ratio = [&](long long i, long long j) {
        double interf = 0.0;
        for (long long k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            interf += power(k) * ell(perc::dist(pts.base.pt(k), pts.base.pt(j), d));
        }
        double signal = power(i) * ell(perc::dist(pts.base.pt(i), pts.base.pt(j), d));
        return signal / (par.N0 + par.gamma * interf);
    };
    std::vector<Edge> out;
    for (long long i = 0; i < n; ++i)
        for (long long j = i + 1; j < n; ++j)
            if (ratio(i, j) > par.tau && ratio(j, i) > par.tau)
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
}

// Quadratic variant for larger instances: one pass of full received-power
// totals per point, then the i,j exclusions are subtracted per pair.
inline std::vector<Edge> oracle_sinr_quadratic(const perc::MarkedPointCloud& pts,
                                               const perc::SinrParams& par,
                                               const perc::PathLoss& ell) {
    const long long n = pts.size();
    const int d = pts.base.dim();
    auto power = [&](long long k) { return par.random_power ? pts.marks[static_cast<size_t>(k)] : par.P; };
    std::vector<double> total(static_cast<size_t>(n), 0.0);
    for (long long j = 0; j < n; ++j) {
        double s = 0.0;
        for (long long k = 0; k < n; ++k)
            if (k != j) s += power(k) * ell(perc::dist(pts.base.pt(k), pts.base.pt(j), d));
        total[static_cast<size_t>(j)] = s;
    }
    std::vector<Edge> out;
    for (long long i = 0; i < n; ++i)
        for (long long j = i + 1; j < n; ++j) {
            double lij = ell(perc::dist(pts.base.pt(i), pts.base.pt(j), d));
            double iij = total[static_cast<size_t>(j)] - power(i) * lij;
            double iji = total[static_cast<size_t>(i)] - power(j) * lij;
            double qij = power(i) * lij / (par.N0 + par.gamma * std::max(0.0, iij));
            double qji = power(j) * lij / (par.N0 + par.gamma * std::max(0.0, iji));
            if (qij > par.tau && qji > par.tau)
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    return out;
}

// ---- component oracle --------------------------------------------------------

inline std::vector<int> bfs_labels(long long n, const std::vector<Edge>& edges) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (auto [i, j] : edges) {
        adj[static_cast<size_t>(i)].push_back(j);
        adj[static_cast<size_t>(j)].push_back(i);
    }
    std::vector<int> label(static_cast<size_t>(n), -1);
    int next = 0;
    for (long long s = 0; s < n; ++s) {
        if (label[static_cast<size_t>(s)] != -1) continue;
        std::deque<int> q{static_cast<int>(s)};
        label[static_cast<size_t>(s)] = next;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : adj[static_cast<size_t>(v)])
                if (label[static_cast<size_t>(w)] == -1) {
                    label[static_cast<size_t>(w)] = next;
                    q.push_back(w);
                }
        }
        ++next;
    }
    return label;
}

// Same partition, possibly under different label names.
inline bool equivalent_partitions(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (size_t i = 1; i < pairs.size(); ++i)
        if (pairs[i].first == pairs[i - 1].first || pairs[i].second == pairs[i - 1].second)
            return false; // one label on either side maps to two on the other
    return true;
}

// ---- cloud construction ------------------------------------------------------

inline perc::PointCloud uniform_cloud(const perc::Window& w, long long n, perc::RngStream& rng) {
    perc::PointCloud pts;
    pts.window = w;
    pts.coords.reserve(static_cast<size_t>(n) * w.d);
    for (long long i = 0; i < n; ++i)
        for (int k = 0; k < w.d; ++k) pts.coords.push_back(rng.uniform(w.lo(), w.hi()));
    return pts;
}

// ---- naive Voronoi oracle ----------------------------------------------------

struct Poly {
    std::vector<double> x, y;
    size_t size() const { return x.size(); }
};

inline Poly box_poly(double lx, double hx, double ly, double hy) {
    return {{lx, hx, hx, lx}, {ly, ly, hy, hy}};
}

// Keep the side of the perpendicular bisector closer to (ax, ay).
inline Poly clip_closer_to(const Poly& in, double ax, double ay, double bx, double by) {
    const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    const double nx = bx - ax, ny = by - ay; // outward normal (towards b)
    Poly out;
    const size_t n = in.size();
    for (size_t k = 0; k < n; ++k) {
        size_t k1 = (k + 1) % n;
        double s0 = (in.x[k] - mx) * nx + (in.y[k] - my) * ny;
        double s1 = (in.x[k1] - mx) * nx + (in.y[k1] - my) * ny;
        if (s0 <= 0.0) {
            out.x.push_back(in.x[k]);
            out.y.push_back(in.y[k]);
        }
        if ((s0 < 0.0 && s1 > 0.0) || (s0 > 0.0 && s1 < 0.0)) {
            double t = s0 / (s0 - s1);
            out.x.push_back(in.x[k] + t * (in.x[k1] - in.x[k]));
            out.y.push_back(in.y[k] + t * (in.y[k1] - in.y[k]));
        }
    }
    return out;
}

// Cell of nucleus i inside the given box, clipped against every other nucleus.
inline Poly naive_cell(const perc::PointCloud& nuclei, long long i, double lx, double hx, double ly,
                       double hy) {
    Poly poly = box_poly(lx, hx, ly, hy);
    const double ax = nuclei.pt(i)[0], ay = nuclei.pt(i)[1];
    for (long long j = 0; j < nuclei.size(); ++j) {
        if (j == i || poly.size() == 0) continue;
        const double bx = nuclei.pt(j)[0], by = nuclei.pt(j)[1];
        if (bx == ax && by == ay) continue;
        poly = clip_closer_to(poly, ax, ay, bx, by);
    }
    return poly;
}

// Total tessellation edge length inside [0, L]^2: every cell-boundary piece
// that is not part of the construction box is a bisector edge shared by
// exactly two cells, so the per-cell sum counts each edge twice.
inline double naive_pvt_length(const perc::PointCloud& nuclei, double L) {
    const double lx = nuclei.window.lo(), hx = nuclei.window.hi();
    double total = 0.0;
    const double tol = 1e-9 * std::max(1.0, hx - lx);
    for (long long i = 0; i < nuclei.size(); ++i) {
        Poly poly = naive_cell(nuclei, i, lx, hx, lx, hx);
        const size_t n = poly.size();
        for (size_t k = 0; k < n; ++k) {
            size_t k1 = (k + 1) % n;
            double x1 = poly.x[k], y1 = poly.y[k], x2 = poly.x[k1], y2 = poly.y[k1];
            bool on_box = (std::abs(x1 - lx) < tol && std::abs(x2 - lx) < tol) ||
                          (std::abs(x1 - hx) < tol && std::abs(x2 - hx) < tol) ||
                          (std::abs(y1 - lx) < tol && std::abs(y2 - lx) < tol) ||
                          (std::abs(y1 - hx) < tol && std::abs(y2 - hx) < tol);
            if (on_box) continue;
            perc::Segment s{x1, y1, x2, y2}, c{};
            if (perc::clip_segment_to_box(s, 0.0, L, 0.0, L, c)) total += c.length();
        }
    }
    return total / 2.0;
}

// Adjacent nucleus pairs = pairs sharing a cell edge of positive length,
// detected by midpoints of cell-boundary edges being equidistant to both.
inline std::vector<std::pair<long long, long long>> naive_adjacency(const perc::PointCloud& nuclei) {
    const double lx = nuclei.window.lo(), hx = nuclei.window.hi();
    std::vector<std::pair<long long, long long>> pairs;
    const long long n = nuclei.size();
    for (long long i = 0; i < n; ++i) {
        Poly poly = naive_cell(nuclei, i, lx, hx, lx, hx);
        const size_t m = poly.size();
        for (size_t k = 0; k < m; ++k) {
            size_t k1 = (k + 1) % m;
            double ex = poly.x[k1] - poly.x[k], ey = poly.y[k1] - poly.y[k];
            if (std::hypot(ex, ey) < 1e-9) continue;
            double cx = 0.5 * (poly.x[k] + poly.x[k1]), cy = 0.5 * (poly.y[k] + poly.y[k1]);
            double di = std::hypot(cx - nuclei.pt(i)[0], cy - nuclei.pt(i)[1]);
            for (long long j = 0; j < n; ++j) {
                if (j == i) continue;
                double dj = std::hypot(cx - nuclei.pt(j)[0], cy - nuclei.pt(j)[1]);
                if (std::abs(dj - di) < 1e-7 * std::max(1.0, di))
                    pairs.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

// ---- filesystem helpers ------------------------------------------------------

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int k = 0;; ++k) {
            auto p = base / ("perc_test_" + std::to_string(::getpid()) + "_" + std::to_string(k));
            std::error_code ec;
            if (std::filesystem::create_directory(p, ec)) {
                dir = p;
                return;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
    std::string path() const { return dir.string(); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testutil
