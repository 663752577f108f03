#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "perc/geometry.hpp"

namespace perc {

// planar line segment with cached length
struct Segment {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

    double length() const { return std::hypot(x2 - x1, y2 - y1); }
};

// A collection of segments in a planar window, e.g. streets of a random road
// network. `total_length` is maintained by finalize().
struct SegmentSystem {
    Window window;
    std::vector<Segment> segments;
    double total_length = 0.0;

    void finalize() {
        total_length = 0.0;
        for (const Segment& s : segments) total_length += s.length();
    }
};

// Liang-Barsky clip of a segment to the closed axis-aligned box
// [lx,hx] x [ly,hy]; returns false when the intersection is empty.
inline bool clip_segment_to_box(const Segment& s, double lx, double hx, double ly, double hy,
                                Segment& out) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = s.x2 - s.x1, dy = s.y2 - s.y1;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {s.x1 - lx, hx - s.x1, s.y1 - ly, hy - s.y1};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return false; // parallel and outside
            continue;
        }
        const double t = q[k] / p[k];
        if (p[k] < 0.0) {
            if (t > t1) return false;
            if (t > t0) t0 = t;
        } else {
            if (t < t0) return false;
            if (t < t1) t1 = t;
        }
    }
    out.x1 = s.x1 + t0 * dx;
    out.y1 = s.y1 + t0 * dy;
    out.x2 = s.x1 + t1 * dx;
    out.y2 = s.y1 + t1 * dy;
    return true;
}

// Total segment length falling inside the half-open box [lx,hx) x [ly,hy).
// Clipping itself uses the closed box; a clipped piece that lies entirely on
// an excluded (high) face is then discarded, so abutting boxes partition
// length without double counting axis-aligned segments on shared edges.
inline double measure_length_in_box(const SegmentSystem& sys, double lx, double hx, double ly,
                                    double hy) {
    if (!(hx > lx) || !(hy > ly))
        throw std::invalid_argument("measure_length_in_box: box must have positive extent");
    double total = 0.0;
    Segment c;
    for (const Segment& s : sys.segments) {
        if (!clip_segment_to_box(s, lx, hx, ly, hy, c)) continue;
        if (c.x1 == hx && c.x2 == hx) continue;
        if (c.y1 == hy && c.y2 == hy) continue;
        total += c.length();
    }
    return total;
}

} // namespace perc
