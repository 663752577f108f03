#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "perc/geometry.hpp"
#include "perc/lattice.hpp"

namespace perc {

// Flat-top hexagonal tiling of the plane with side length s and one hexagon
// centered at the origin. Centers form a triangular lattice indexed by axial
// coordinates (q, r); the hexagons are the Voronoi cells of the centers, so
// point assignment is the nearest-center rule (lexicographic (q, r) on exact
// boundary ties).
struct HexGrid {
    double s = 1.0;

    double area() const { return 3.0 * std::numbers::sqrt3 * s * s / 2.0; }

    void center(long long q, long long r, double& cx, double& cy) const {
        cx = 1.5 * s * static_cast<double>(q);
        cy = std::numbers::sqrt3 * s * (static_cast<double>(r) + static_cast<double>(q) / 2.0);
    }

    std::pair<long long, long long> hex_of(double x, double y) const {
        // fractional axial coordinates, then cube rounding
        double qf = x / (1.5 * s);
        double rf = y / (std::numbers::sqrt3 * s) - qf / 2.0;
        double cx = qf, cz = rf, cy = -cx - cz;
        double rx = std::round(cx), ry = std::round(cy), rz = std::round(cz);
        double dx = std::abs(rx - cx), dy = std::abs(ry - cy), dz = std::abs(rz - cz);
        if (dx > dy && dx > dz)
            rx = -ry - rz;
        else if (dy > dz)
            ry = -rx - rz;
        else
            rz = -rx - ry;
        long long q = static_cast<long long>(rx), r = static_cast<long long>(rz);

        // verify against the 6 surrounding centers; nearest wins, lexicographic
        // (q, r) on ties, making the partition total and deterministic
        long long best_q = q, best_r = r;
        double best_d2 = center_dist2(q, r, x, y);
        static constexpr int dq[6] = {1, -1, 0, 0, 1, -1};
        static constexpr int dr[6] = {0, 0, 1, -1, -1, 1};
        for (int k = 0; k < 6; ++k) {
            long long q2 = q + dq[k], r2 = r + dr[k];
            double d2 = center_dist2(q2, r2, x, y);
            const double tol = 1e-12 * s * s;
            if (d2 < best_d2 - tol ||
                (d2 < best_d2 + tol && (q2 < best_q || (q2 == best_q && r2 < best_r)))) {
                best_q = q2;
                best_r = r2;
                best_d2 = d2;
            }
        }
        return {best_q, best_r};
    }

  private:
    double center_dist2(long long q, long long r, double x, double y) const {
        double cx, cy;
        center(q, r, cx, cy);
        return (x - cx) * (x - cx) + (y - cy) * (y - cy);
    }
};

// Continuum-to-lattice reduction: lay the hexagon tiling over a planar cloud,
// mark a site open when its hexagon contains at least one point, and keep a
// validity mask of hexagons fully inside the sampled (padded) region so that
// open-fraction statistics are exact.
struct HexCoarseGrain {
    HexGrid grid;
    TriangularSiteLattice lattice;
    long long q0 = 0, r0 = 0; // axial coordinates of lattice index (0, 0)

    void center_of(int iq, int ir, double& cx, double& cy) const {
        grid.center(q0 + iq, r0 + ir, cx, cy);
    }
    // lattice indices of the hexagon containing (x, y); may fall outside the
    // stored index range for points far from the window
    std::pair<int, int> site_of_point(double x, double y) const {
        auto [q, r] = grid.hex_of(x, y);
        return {static_cast<int>(q - q0), static_cast<int>(r - r0)};
    }
};

inline HexCoarseGrain hexagon_coarse_grain(const PointCloud& cloud, double s) {
    if (cloud.dim() != 2) throw std::invalid_argument("hexagon_coarse_grain: requires d = 2");
    if (!(s > 0.0)) throw std::invalid_argument("hexagon_coarse_grain: side must be > 0");
    HexCoarseGrain out;
    out.grid.s = s;
    const double lo = cloud.window.lo(), hi = cloud.window.hi();

    // index ranges wide enough that every point of the padded window maps into
    // the array (center within circumradius s of the box)
    const long long q_min = static_cast<long long>(std::floor((lo - s) / (1.5 * s))) - 1;
    const long long q_max = static_cast<long long>(std::ceil((hi + s) / (1.5 * s))) + 1;
    const double sdenom = std::numbers::sqrt3 * s;
    const long long r_min =
        static_cast<long long>(std::floor((lo - s) / sdenom - static_cast<double>(q_max) / 2.0)) - 1;
    const long long r_max =
        static_cast<long long>(std::ceil((hi + s) / sdenom - static_cast<double>(q_min) / 2.0)) + 1;

    out.q0 = q_min;
    out.r0 = r_min;
    out.lattice.nq = static_cast<int>(q_max - q_min + 1);
    out.lattice.nr = static_cast<int>(r_max - r_min + 1);
    out.lattice.p = 0.0;
    out.lattice.open_flags.assign(static_cast<size_t>(out.lattice.sites()), 0);
    out.lattice.valid.assign(static_cast<size_t>(out.lattice.sites()), 0);

    for (int iq = 0; iq < out.lattice.nq; ++iq)
        for (int ir = 0; ir < out.lattice.nr; ++ir) {
            double cx, cy;
            out.center_of(iq, ir, cx, cy);
            bool inside = cx >= lo + s && cx <= hi - s && cy >= lo + s && cy <= hi - s;
            out.lattice.valid[static_cast<size_t>(out.lattice.idx(iq, ir))] = inside ? 1 : 0;
        }
    for (long long i = 0; i < cloud.size(); ++i) {
        auto [iq, ir] = out.site_of_point(cloud.pt(i)[0], cloud.pt(i)[1]);
        if (out.lattice.in_range(iq, ir))
            out.lattice.open_flags[static_cast<size_t>(out.lattice.idx(iq, ir))] = 1;
    }
    return out;
}

} // namespace perc
