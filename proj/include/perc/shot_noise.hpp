#pragma once

#include <cmath>
#include <stdexcept>

#include "perc/geometry.hpp"
#include "perc/path_loss.hpp"

namespace perc {

// Total attenuated power received at x from every point of the cloud, with up
// to two senders excluded (the interference term of a link excludes both of
// its endpoints). Marks scale each contribution; the unmarked overload treats
// every mark as 1.
inline double shot_noise(const PointCloud& pts, const double* x, const PathLoss& ell,
                         long long exclude_a = -1, long long exclude_b = -1) {
    double total = 0.0;
    for (long long k = 0; k < pts.size(); ++k) {
        if (k == exclude_a || k == exclude_b) continue;
        total += ell(dist(x, pts.pt(k), pts.dim()));
    }
    return total;
}

inline double shot_noise(const MarkedPointCloud& pts, const double* x, const PathLoss& ell,
                         long long exclude_a = -1, long long exclude_b = -1) {
    double total = 0.0;
    for (long long k = 0; k < pts.base.size(); ++k) {
        if (k == exclude_a || k == exclude_b) continue;
        total += pts.marks[k] * ell(dist(x, pts.base.pt(k), pts.base.dim()));
    }
    return total;
}

// Shot noise under the cube-shifted profile ell_a. By construction it
// dominates the plain field: ell_a(|z - y|) >= ell(|x - y|) whenever z lies in
// the side-a cube around x, so I(x) <= I_a(z) pointwise over clouds.
inline double shot_noise_shifted(const PointCloud& pts, const double* x, const PathLoss& ell,
                                 double a, long long exclude_a = -1, long long exclude_b = -1) {
    double total = 0.0;
    for (long long k = 0; k < pts.size(); ++k) {
        if (k == exclude_a || k == exclude_b) continue;
        total += ell.shifted(a, dist(x, pts.pt(k), pts.dim()));
    }
    return total;
}

struct ShotNoiseSplit {
    double inner = 0.0; // contributions from points in the side-inner_side cube around x
    double outer = 0.0; // everything else
    double total() const { return inner + outer; }
};

// Near/far split of the shifted field: points inside the centered cube of side
// inner_side feed `inner`, the rest feed `outer`. The inner part has mean at
// most ell(0) * lambda * inner_side^d regardless of the profile's tail.
inline ShotNoiseSplit shot_noise_split(const PointCloud& pts, const double* x, const PathLoss& ell,
                                       double a, double inner_side) {
    if (!(inner_side >= 0.0))
        throw std::invalid_argument("shot_noise_split: inner_side must be >= 0");
    ShotNoiseSplit out;
    const int d = pts.dim();
    for (long long k = 0; k < pts.size(); ++k) {
        double v = ell.shifted(a, dist(x, pts.pt(k), d));
        if (in_centered_cube(pts.pt(k), x, inner_side, d))
            out.inner += v;
        else
            out.outer += v;
    }
    return out;
}

} // namespace perc
