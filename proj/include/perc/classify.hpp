#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "perc/bounds.hpp"
#include "perc/geometry.hpp"
#include "perc/path_loss.hpp"
#include "perc/shot_noise.hpp"
#include "perc/spatial_graph.hpp"
#include "perc/union_find.hpp"

namespace perc {

// Supremum of a stabilization-radius field over an axis-aligned box, supplied
// by the environment (or absent: a plain homogeneous cloud has radius 0
// everywhere).
using BoxRadiusField =
    std::function<double(const std::vector<double>& lo, const std::vector<double>& hi)>;

// Per-site flags over a block of lattice sites z (site center at spacing * z).
// `boundary` marks sites whose largest evaluation window sticks out of the
// sampled (padded) region; their flags are computed from incomplete data and
// are excluded from crossing statistics.
struct SiteClassification {
    int d = 2;
    double spacing = 1.0;
    std::vector<long long> z_lo, z_hi; // inclusive index range per axis
    std::vector<char> flag;
    std::vector<char> boundary;

    long long axis_count(int k) const { return z_hi[k] - z_lo[k] + 1; }
    long long sites() const {
        long long s = 1;
        for (int k = 0; k < d; ++k) s *= axis_count(k);
        return s;
    }
    long long flat(const std::vector<long long>& z) const {
        long long f = 0;
        for (int k = d - 1; k >= 0; --k) f = f * axis_count(k) + (z[k] - z_lo[k]);
        return f;
    }
    void coords(long long f, std::vector<long long>& z) const {
        z.resize(d);
        for (int k = 0; k < d; ++k) {
            z[k] = z_lo[k] + f % axis_count(k);
            f /= axis_count(k);
        }
    }
    void site_center(const std::vector<long long>& z, std::vector<double>& c) const {
        c.resize(d);
        for (int k = 0; k < d; ++k) c[k] = spacing * static_cast<double>(z[k]);
    }
};

namespace detail {

// shared site-grid skeleton: sites whose spacing-cube intersects the analysis
// box, with a boundary flag driven by the largest evaluation window
inline SiteClassification site_grid(const Window& w, double spacing, double eval_window_side) {
    SiteClassification sc;
    sc.d = w.d;
    sc.spacing = spacing;
    sc.z_lo.assign(w.d, 0);
    sc.z_hi.assign(w.d, static_cast<long long>(std::floor(w.L / spacing + 0.5)));
    sc.flag.assign(static_cast<size_t>(sc.sites()), 0);
    sc.boundary.assign(static_cast<size_t>(sc.sites()), 0);
    std::vector<long long> z;
    std::vector<double> c;
    const double tol = 1e-9;
    for (long long f = 0; f < sc.sites(); ++f) {
        sc.coords(f, z);
        sc.site_center(z, c);
        for (int k = 0; k < w.d; ++k)
            if (c[k] - eval_window_side / 2.0 < w.lo() - tol ||
                c[k] + eval_window_side / 2.0 > w.hi() + tol) {
                sc.boundary[static_cast<size_t>(f)] = 1;
                break;
            }
    }
    return sc;
}

inline std::vector<long long> indices_in_cube(const PointCloud& pts, const std::vector<double>& c,
                                              double side) {
    std::vector<long long> out;
    for (long long i = 0; i < pts.size(); ++i)
        if (in_centered_cube(pts.pt(i), c.data(), side, pts.dim())) out.push_back(i);
    return out;
}

// all points of `inner` pairwise connected inside the distance graph over
// `outer` with radius r (strict); vacuous for fewer than two inner points
inline bool pairs_connected(const PointCloud& pts, const std::vector<long long>& inner,
                            const std::vector<long long>& outer, double radius) {
    if (inner.size() <= 1) return true;
    DisjointSetForest dsf;
    dsf.reset(static_cast<int>(outer.size()));
    const int d = pts.dim();
    const double r2 = radius * radius;
    for (size_t a = 0; a < outer.size(); ++a)
        for (size_t b = a + 1; b < outer.size(); ++b)
            if (dist2(pts.pt(outer[a]), pts.pt(outer[b]), d) < r2)
                dsf.unite(static_cast<int>(a), static_cast<int>(b));
    // inner indices are a subset of outer; map via linear scan (sets are small)
    auto pos_in_outer = [&](long long idx) {
        for (size_t a = 0; a < outer.size(); ++a)
            if (outer[a] == idx) return static_cast<int>(a);
        throw std::logic_error("pairs_connected: inner point missing from outer set");
    };
    int root0 = dsf.find(pos_in_outer(inner[0]));
    for (size_t t = 1; t < inner.size(); ++t)
        if (dsf.find(pos_in_outer(inner[t])) != root0) return false;
    return true;
}

} // namespace detail

// Occupied-and-locally-connected classification at scale n: site z is good
// when (1) the stabilization radius over the side-n cube at nz stays below
// n/2, (2) the cube contains a point, and (3) every pair of points in the
// side-3n cube is joined inside the radius-r distance graph restricted to the
// side-6n cube.
inline SiteClassification classify_n_good(const PointCloud& pts, const BoxRadiusField& field,
                                          long long n, double r) {
    if (n < 1) throw std::invalid_argument("classify_n_good: n must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("classify_n_good: r must be > 0");
    const double nn = static_cast<double>(n);
    SiteClassification sc = detail::site_grid(pts.window, nn, 6.0 * nn);
    std::vector<long long> z;
    std::vector<double> c, blo, bhi;
    for (long long f = 0; f < sc.sites(); ++f) {
        sc.coords(f, z);
        sc.site_center(z, c);
        if (field) {
            blo.resize(static_cast<size_t>(sc.d));
            bhi.resize(static_cast<size_t>(sc.d));
            for (int k = 0; k < sc.d; ++k) {
                blo[static_cast<size_t>(k)] = c[static_cast<size_t>(k)] - nn / 2.0;
                bhi[static_cast<size_t>(k)] = c[static_cast<size_t>(k)] + nn / 2.0;
            }
            if (!(field(blo, bhi) < nn / 2.0)) continue;
        }
        std::vector<long long> in_small = detail::indices_in_cube(pts, c, nn);
        if (in_small.empty()) continue;
        std::vector<long long> in_mid = detail::indices_in_cube(pts, c, 3.0 * nn);
        std::vector<long long> in_big = detail::indices_in_cube(pts, c, 6.0 * nn);
        if (!detail::pairs_connected(pts, in_mid, in_big, r)) continue;
        sc.flag[static_cast<size_t>(f)] = 1;
    }
    return sc;
}

// Random-power classification on the unit site grid: site z is good when (1)
// some point in the unit cube at z transmits with power above r, and (2) all
// pairs in the side-3 cube are joined inside the radius-delta graph restricted
// to the side-6 cube, delta being half the noise-only reach of power level r.
inline SiteClassification classify_good_random_power(const MarkedPointCloud& pts,
                                                     const SinrParams& par, const PathLoss& ell,
                                                     double r_power) {
    par.validate();
    const double delta = delta_half_distance(ell, par.N0, par.tau, r_power);
    SiteClassification sc = detail::site_grid(pts.base.window, 1.0, 6.0);
    std::vector<long long> z;
    std::vector<double> c;
    for (long long f = 0; f < sc.sites(); ++f) {
        sc.coords(f, z);
        sc.site_center(z, c);
        std::vector<long long> in_small = detail::indices_in_cube(pts.base, c, 1.0);
        bool powered = false;
        for (long long idx : in_small)
            if (pts.marks[static_cast<size_t>(idx)] > r_power) {
                powered = true;
                break;
            }
        if (!powered) continue;
        std::vector<long long> in_mid = detail::indices_in_cube(pts.base, c, 3.0);
        std::vector<long long> in_big = detail::indices_in_cube(pts.base, c, 6.0);
        if (!detail::pairs_connected(pts.base, in_mid, in_big, delta)) continue;
        sc.flag[static_cast<size_t>(f)] = 1;
    }
    return sc;
}

// Bounded-interference classification at scale n: site z is tame when (1) the
// stabilization radius over the side-12n*sqrt(d) cube stays below n/2 and (2)
// the near part of the shifted shot noise at nz (contributions from that same
// cube, profile shifted by 6n) does not exceed M.
inline SiteClassification classify_n_tame(const PointCloud& pts, const PathLoss& ell,
                                          const BoxRadiusField& field, long long n, double M) {
    if (n < 1) throw std::invalid_argument("classify_n_tame: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double wide = 12.0 * nn * std::sqrt(static_cast<double>(pts.dim()));
    SiteClassification sc = detail::site_grid(pts.window, nn, wide);
    std::vector<long long> z;
    std::vector<double> c, blo, bhi;
    for (long long f = 0; f < sc.sites(); ++f) {
        sc.coords(f, z);
        sc.site_center(z, c);
        if (field) {
            blo.resize(static_cast<size_t>(sc.d));
            bhi.resize(static_cast<size_t>(sc.d));
            for (int k = 0; k < sc.d; ++k) {
                blo[static_cast<size_t>(k)] = c[static_cast<size_t>(k)] - wide / 2.0;
                bhi[static_cast<size_t>(k)] = c[static_cast<size_t>(k)] + wide / 2.0;
            }
            if (!(field(blo, bhi) < nn / 2.0)) continue;
        }
        double inner = shot_noise_split(pts, c.data(), ell, 6.0 * nn, wide).inner;
        if (inner > M) continue;
        sc.flag[static_cast<size_t>(f)] = 1;
    }
    return sc;
}

// Left-right crossing through flagged, non-boundary sites under nearest-
// neighbor adjacency, spanning the extreme non-boundary columns along axis 0.
inline bool site_percolation_crossing(const SiteClassification& sc) {
    const long long ns = sc.sites();
    long long col_lo = -1, col_hi = -1;
    std::vector<long long> z;
    for (long long f = 0; f < ns; ++f) {
        if (sc.boundary[static_cast<size_t>(f)]) continue;
        sc.coords(f, z);
        if (col_lo < 0 || z[0] < col_lo) col_lo = z[0];
        if (col_hi < 0 || z[0] > col_hi) col_hi = z[0];
    }
    if (col_lo < 0) return false;

    DisjointSetForest dsf;
    dsf.reset(static_cast<int>(ns));
    auto usable = [&](long long f) {
        return sc.flag[static_cast<size_t>(f)] && !sc.boundary[static_cast<size_t>(f)];
    };
    std::vector<long long> z2;
    for (long long f = 0; f < ns; ++f) {
        if (!usable(f)) continue;
        sc.coords(f, z);
        z2 = z;
        for (int k = 0; k < sc.d; ++k) {
            if (z[k] + 1 <= sc.z_hi[k]) {
                z2[k] = z[k] + 1;
                long long g = sc.flat(z2);
                if (usable(g)) dsf.unite(static_cast<int>(f), static_cast<int>(g));
                z2[k] = z[k];
            }
        }
    }
    std::vector<char> lo(static_cast<size_t>(ns), 0), hi(static_cast<size_t>(ns), 0);
    for (long long f = 0; f < ns; ++f) {
        if (!usable(f)) continue;
        sc.coords(f, z);
        int root = dsf.find(static_cast<int>(f));
        if (z[0] == col_lo) lo[root] = 1;
        if (z[0] == col_hi) hi[root] = 1;
    }
    for (long long f = 0; f < ns; ++f)
        if (lo[static_cast<size_t>(f)] && hi[static_cast<size_t>(f)]) return true;
    return false;
}

} // namespace perc
