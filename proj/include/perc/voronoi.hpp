#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "perc/geometry.hpp"
#include "perc/segment_system.hpp"
#include "perc/spatial_grid.hpp"

namespace perc {

// Convex cell of a planar Voronoi diagram clipped to a construction box.
// Vertices run counter-clockwise; edge k joins vertex k to vertex (k+1) and
// carries its provenance: the index of the neighboring nucleus whose bisector
// produced it, or -1 for a piece of the construction box boundary.
struct VoronoiCell {
    long long nucleus = -1;
    std::vector<double> vx, vy;
    std::vector<long long> edge_source;

    size_t vertex_count() const { return vx.size(); }
};

namespace detail {

struct ProvPoly {
    std::vector<double> x, y;
    std::vector<long long> src;
};

// intersect with the half-plane {p : (p - m) . n <= 0}, tagging new edges j
inline void clip_halfplane(const ProvPoly& in, double mx, double my, double nx, double ny,
                           long long j, ProvPoly& out) {
    out.x.clear();
    out.y.clear();
    out.src.clear();
    const size_t m = in.x.size();
    if (m == 0) return;
    for (size_t k = 0; k < m; ++k) {
        const size_t kn = (k + 1) % m;
        const double fa = (in.x[k] - mx) * nx + (in.y[k] - my) * ny;
        const double fb = (in.x[kn] - mx) * nx + (in.y[kn] - my) * ny;
        if (fa <= 0.0) {
            out.x.push_back(in.x[k]);
            out.y.push_back(in.y[k]);
            out.src.push_back(in.src[k]);
            if (fb > 0.0) {
                const double t = fa / (fa - fb);
                out.x.push_back(in.x[k] + t * (in.x[kn] - in.x[k]));
                out.y.push_back(in.y[k] + t * (in.y[kn] - in.y[k]));
                out.src.push_back(j); // bisector edge starts at the exit point
            }
        } else if (fb <= 0.0) {
            const double t = fa / (fa - fb);
            out.x.push_back(in.x[k] + t * (in.x[kn] - in.x[k]));
            out.y.push_back(in.y[k] + t * (in.y[kn] - in.y[k]));
            out.src.push_back(in.src[k]); // re-entry continues the old edge
        }
    }
}

inline double poly_max_dist2(const ProvPoly& p, double px, double py) {
    double m = 0.0;
    for (size_t k = 0; k < p.x.size(); ++k) {
        const double dx = p.x[k] - px, dy = p.y[k] - py;
        m = std::max(m, dx * dx + dy * dy);
    }
    return m;
}

} // namespace detail

// Voronoi cells of planar nuclei, each clipped to the construction box
// [lx,hx] x [ly,hy]. Candidates for each cell are visited outward in rings of
// a uniform grid, nearest first, and the scan stops once every remaining
// nucleus is at least twice as far as the farthest current cell vertex (its
// bisector then cannot cut the cell).
inline std::vector<VoronoiCell> voronoi_cells(const PointCloud& nuclei, double lx, double hx,
                                              double ly, double hy) {
    if (nuclei.dim() != 2)
        throw std::invalid_argument("voronoi_cells: nuclei must be planar (d = 2)");
    if (!(hx > lx) || !(hy > ly))
        throw std::invalid_argument("voronoi_cells: construction box must have positive extent");
    const long long n = nuclei.size();
    std::vector<VoronoiCell> cells(static_cast<size_t>(n));
    if (n == 0) return cells;

    const double area = (hx - lx) * (hy - ly);
    const double cell_size = std::max(1e-12, 2.0 * std::sqrt(area / static_cast<double>(n)));
    UniformGrid grid;
    grid.build(nuclei.coords, 2, cell_size);

    auto axis_cell = [&](double v, int axis) {
        long long c = static_cast<long long>(std::floor((v - grid.lo[static_cast<size_t>(axis)]) /
                                                        grid.cell));
        return std::clamp<long long>(c, 0, grid.shape[static_cast<size_t>(axis)] - 1);
    };
    auto cell_items = [&](long long cx, long long cy, std::vector<long long>& out) {
        if (cx < 0 || cy < 0 || cx >= grid.shape[0] || cy >= grid.shape[1]) return;
        const long long f = cx * grid.shape[1] + cy; // matches UniformGrid::flat_index
        for (long long t = grid.start[static_cast<size_t>(f)];
             t < grid.start[static_cast<size_t>(f) + 1]; ++t)
            out.push_back(grid.items[static_cast<size_t>(t)]);
    };

    detail::ProvPoly poly, tmp;
    std::vector<long long> ring;
    std::vector<std::pair<double, long long>> batch;
    const long long max_ring = std::max(grid.shape[0], grid.shape[1]) + 1;

    for (long long i = 0; i < n; ++i) {
        const double px = nuclei.coords[static_cast<size_t>(2 * i)];
        const double py = nuclei.coords[static_cast<size_t>(2 * i) + 1];
        poly.x = {lx, hx, hx, lx};
        poly.y = {ly, ly, hy, hy};
        poly.src = {-1, -1, -1, -1};
        double max_d2 = detail::poly_max_dist2(poly, px, py);

        const long long cx = axis_cell(px, 0), cy = axis_cell(py, 1);
        for (long long k = 0; k <= max_ring; ++k) {
            if (k >= 1 &&
                static_cast<double>(k - 1) * grid.cell >= 2.0 * std::sqrt(max_d2))
                break;
            ring.clear();
            if (k == 0) {
                cell_items(cx, cy, ring);
            } else {
                for (long long dx = -k; dx <= k; ++dx) {
                    cell_items(cx + dx, cy - k, ring);
                    cell_items(cx + dx, cy + k, ring);
                }
                for (long long dy = -k + 1; dy <= k - 1; ++dy) {
                    cell_items(cx - k, cy + dy, ring);
                    cell_items(cx + k, cy + dy, ring);
                }
            }
            batch.clear();
            for (long long j : ring) {
                if (j == i) continue;
                const double qx = nuclei.coords[static_cast<size_t>(2 * j)];
                const double qy = nuclei.coords[static_cast<size_t>(2 * j) + 1];
                const double dx = qx - px, dy = qy - py;
                batch.emplace_back(dx * dx + dy * dy, j);
            }
            std::sort(batch.begin(), batch.end());
            for (const auto& [d2, j] : batch) {
                if (d2 == 0.0) continue; // coincident nucleus: bisector undefined
                if (d2 >= 4.0 * max_d2) break;
                const double qx = nuclei.coords[static_cast<size_t>(2 * j)];
                const double qy = nuclei.coords[static_cast<size_t>(2 * j) + 1];
                detail::clip_halfplane(poly, 0.5 * (px + qx), 0.5 * (py + qy), qx - px, qy - py,
                                       j, tmp);
                std::swap(poly, tmp);
                if (poly.x.empty()) break;
                max_d2 = detail::poly_max_dist2(poly, px, py);
            }
            if (poly.x.empty()) break;
        }

        VoronoiCell& c = cells[static_cast<size_t>(i)];
        c.nucleus = i;
        c.vx = poly.x;
        c.vy = poly.y;
        c.edge_source = poly.src;
    }
    return cells;
}

// all polygon vertices of a cell list, concatenated (duplicates across
// adjacent cells retained)
inline void voronoi_vertices(const std::vector<VoronoiCell>& cells, std::vector<double>& vx,
                             std::vector<double>& vy) {
    vx.clear();
    vy.clear();
    for (const VoronoiCell& c : cells)
        for (size_t k = 0; k < c.vertex_count(); ++k) {
            vx.push_back(c.vx[k]);
            vy.push_back(c.vy[k]);
        }
}

namespace detail {

inline void require_spanning_nuclei(const PointCloud& nuclei, const char* who) {
    if (nuclei.dim() != 2)
        throw std::invalid_argument(std::string(who) + ": nuclei must be planar (d = 2)");
    if (nuclei.size() < 3)
        throw std::invalid_argument(std::string(who) + ": need at least 3 nuclei");
    double scale = 1.0;
    for (double v : nuclei.coords) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * scale * scale;
    const double ax = nuclei.coords[0], ay = nuclei.coords[1];
    double bx = 0.0, by = 0.0;
    bool have_b = false;
    for (long long i = 1; i < nuclei.size(); ++i) {
        const double dx = nuclei.pt(i)[0] - ax, dy = nuclei.pt(i)[1] - ay;
        if (!have_b) {
            if (dx * dx + dy * dy > 0.0) {
                bx = dx;
                by = dy;
                have_b = true;
            }
            continue;
        }
        if (std::abs(bx * dy - by * dx) > tol) return; // non-collinear triple found
    }
    throw std::invalid_argument(std::string(who) + ": nuclei are collinear");
}

} // namespace detail

// Voronoi tessellation street system: every bisector edge of the diagram of
// the nuclei (built over their padded box, so boundary cells are shaped by
// off-window nuclei), clipped to the analysis window. Construction-box edges
// are clipping artifacts, not streets, and are dropped.
inline SegmentSystem build_pvt(const PointCloud& nuclei) {
    detail::require_spanning_nuclei(nuclei, "build_pvt");
    const Window& w = nuclei.window;
    std::vector<VoronoiCell> cells = voronoi_cells(nuclei, w.lo(), w.hi(), w.lo(), w.hi());
    SegmentSystem sys;
    sys.window = w;
    Segment clipped;
    for (const VoronoiCell& c : cells)
        for (size_t k = 0; k < c.vertex_count(); ++k) {
            const long long j = c.edge_source[k];
            if (j <= c.nucleus) continue; // box edge (-1) or already emitted by cell j
            const size_t kn = (k + 1) % c.vertex_count();
            Segment s{c.vx[k], c.vy[k], c.vx[kn], c.vy[kn]};
            if (clip_segment_to_box(s, 0.0, w.L, 0.0, w.L, clipped) && clipped.length() > 0.0)
                sys.segments.push_back(clipped);
        }
    sys.finalize();
    return sys;
}

// Nucleus pairs whose cells share a Voronoi edge longer than edge_tol
// (degenerate contacts through a single vertex do not count).
inline std::vector<std::pair<long long, long long>> delaunay_pairs(const PointCloud& nuclei,
                                                                  double edge_tol = 1e-9) {
    detail::require_spanning_nuclei(nuclei, "delaunay_pairs");
    const Window& w = nuclei.window;
    std::vector<VoronoiCell> cells = voronoi_cells(nuclei, w.lo(), w.hi(), w.lo(), w.hi());
    std::set<std::pair<long long, long long>> pairs;
    for (const VoronoiCell& c : cells)
        for (size_t k = 0; k < c.vertex_count(); ++k) {
            const long long j = c.edge_source[k];
            if (j <= c.nucleus) continue;
            const size_t kn = (k + 1) % c.vertex_count();
            const double len = std::hypot(c.vx[kn] - c.vx[k], c.vy[kn] - c.vy[k]);
            if (len > edge_tol) pairs.emplace(c.nucleus, j);
        }
    return {pairs.begin(), pairs.end()};
}

// Delaunay tessellation street system: segments between Voronoi-adjacent
// nuclei, clipped to the analysis window. Where four or more nuclei are
// cocircular the dual face is a polygon; it is triangulated by a fan of
// diagonals from its coordinate-least nucleus, which for a square face adds
// exactly one diagonal. Cocircular groups are detected by bucketing cell
// vertices on a 1e-7 grid.
inline SegmentSystem build_pdt(const PointCloud& nuclei, double edge_tol = 1e-9) {
    detail::require_spanning_nuclei(nuclei, "build_pdt");
    const Window& w = nuclei.window;
    std::vector<VoronoiCell> cells = voronoi_cells(nuclei, w.lo(), w.hi(), w.lo(), w.hi());

    std::set<std::pair<long long, long long>> pairs;
    for (const VoronoiCell& c : cells)
        for (size_t k = 0; k < c.vertex_count(); ++k) {
            const long long j = c.edge_source[k];
            if (j <= c.nucleus) continue;
            const size_t kn = (k + 1) % c.vertex_count();
            const double len = std::hypot(c.vx[kn] - c.vx[k], c.vy[kn] - c.vy[k]);
            if (len > edge_tol) pairs.emplace(c.nucleus, j);
        }

    struct Bucket {
        double sx = 0.0, sy = 0.0;
        long long count = 0;
        std::set<long long> nuclei;
    };
    const double snap = 1e-7;
    std::map<std::pair<long long, long long>, Bucket> buckets;
    for (const VoronoiCell& c : cells)
        for (size_t k = 0; k < c.vertex_count(); ++k) {
            // only true diagram vertices: both incident edges are bisectors
            const size_t kp = (k + c.vertex_count() - 1) % c.vertex_count();
            if (c.edge_source[k] < 0 || c.edge_source[kp] < 0) continue;
            const auto key = std::make_pair(std::llround(c.vx[k] / snap),
                                            std::llround(c.vy[k] / snap));
            Bucket& b = buckets[key];
            b.sx += c.vx[k];
            b.sy += c.vy[k];
            b.count += 1;
            b.nuclei.insert(c.nucleus);
        }
    for (const auto& [key, b] : buckets) {
        if (b.nuclei.size() < 4) continue;
        const double vx0 = b.sx / static_cast<double>(b.count);
        const double vy0 = b.sy / static_cast<double>(b.count);
        std::vector<long long> ring(b.nuclei.begin(), b.nuclei.end());
        std::sort(ring.begin(), ring.end(), [&](long long a, long long c2) {
            const double aa = std::atan2(nuclei.pt(a)[1] - vy0, nuclei.pt(a)[0] - vx0);
            const double cc = std::atan2(nuclei.pt(c2)[1] - vy0, nuclei.pt(c2)[0] - vx0);
            return aa < cc;
        });
        // coordinate-least nucleus of the face (lexicographic by x, then y)
        size_t apex_pos = 0;
        for (size_t t = 1; t < ring.size(); ++t) {
            const double* pa = nuclei.pt(ring[t]);
            const double* pb = nuclei.pt(ring[apex_pos]);
            if (pa[0] < pb[0] || (pa[0] == pb[0] && pa[1] < pb[1])) apex_pos = t;
        }
        const long long apex = ring[apex_pos];
        const size_t m = ring.size();
        for (size_t t = 0; t < m; ++t) {
            if (t == apex_pos || t == (apex_pos + 1) % m || t == (apex_pos + m - 1) % m)
                continue; // cyclic neighbors already joined by shared edges
            pairs.emplace(std::min(apex, ring[t]), std::max(apex, ring[t]));
        }
    }

    SegmentSystem sys;
    sys.window = w;
    Segment clipped;
    for (const auto& [i, j] : pairs) {
        Segment s{nuclei.pt(i)[0], nuclei.pt(i)[1], nuclei.pt(j)[0], nuclei.pt(j)[1]};
        if (clip_segment_to_box(s, 0.0, w.L, 0.0, w.L, clipped) && clipped.length() > 0.0)
            sys.segments.push_back(clipped);
    }
    sys.finalize();
    return sys;
}

} // namespace perc
