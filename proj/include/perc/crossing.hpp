#pragma once

#include <stdexcept>
#include <vector>

#include "perc/geometry.hpp"
#include "perc/spatial_graph.hpp"

namespace perc {

// Finite-window stand-in for an unbounded component: some single component
// must touch both faces of the analysis box along one axis. A point "touches"
// the low face if its coordinate is <= margin, the high face if >= L - margin
// (points in the sampling padding count via the same comparisons).
struct CrossingRule {
    int axis = 0;
    double margin = 0.0;

    void validate(const Window& w) const {
        if (axis < 0 || axis >= w.d) throw std::invalid_argument("crossing.axis: out of range");
        if (!(margin >= 0.0 && margin < w.L / 2.0))
            throw std::invalid_argument("crossing.margin: need 0 <= margin < L/2");
    }
};

inline bool crossing_indicator(const PointCloud& pts, const SpatialGraph& g,
                               const CrossingRule& rule) {
    rule.validate(pts.window);
    const long long n = pts.size();
    std::vector<char> touch_lo(static_cast<size_t>(n), 0), touch_hi(static_cast<size_t>(n), 0);
    for (long long i = 0; i < n; ++i) {
        double x = pts.pt(i)[rule.axis];
        int c = g.labels[static_cast<size_t>(i)];
        if (x <= rule.margin) touch_lo[c] = 1;
        if (x >= pts.window.L - rule.margin) touch_hi[c] = 1;
    }
    for (long long i = 0; i < n; ++i)
        if (touch_lo[static_cast<size_t>(i)] && touch_hi[static_cast<size_t>(i)]) return true;
    return false;
}

// Rescale a configuration by 1/R: coordinates, window side and padding all
// divide by R. Connectivity at radius r before equals connectivity at radius
// r/R after, point by point.
inline PointCloud scaling_transform(const PointCloud& pts, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("scaling_transform: R must be > 0");
    PointCloud out = pts;
    out.window.L /= R;
    out.window.padding /= R;
    for (double& c : out.coords) c /= R;
    return out;
}

} // namespace perc
