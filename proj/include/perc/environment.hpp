#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "perc/classify.hpp"
#include "perc/geometry.hpp"
#include "perc/manhattan.hpp"
#include "perc/point_process.hpp"
#include "perc/rng.hpp"
#include "perc/segment_system.hpp"
#include "perc/voronoi.hpp"

namespace perc {

enum class EnvKind { PVT, PDT, ManhattanGrid, NestedManhattanGrid };

// Recipe for a random street system. `c_norm` rescales Cox intensities so
// that one unit of intensity yields one point per unit area on average; it is
// 1 until calibrated by normalize_environment.
struct EnvironmentSpec {
    EnvKind kind = EnvKind::PVT;
    double lambda_s = 1.0; // nucleus intensity for PVT/PDT
    ManhattanLaws laws{};  // line laws for the Manhattan kinds
    double c_norm = 1.0;

    void validate() const {
        if (kind == EnvKind::PVT || kind == EnvKind::PDT) {
            if (!(lambda_s > 0.0))
                throw std::invalid_argument("EnvironmentSpec: lambda_s must be > 0");
        } else {
            ManhattanLaws l = laws;
            l.nested = (kind == EnvKind::NestedManhattanGrid);
            l.validate();
        }
        if (!(c_norm > 0.0)) throw std::invalid_argument("EnvironmentSpec: c_norm must be > 0");
    }

    // construction pad for the nucleus process, suppressing tessellation
    // boundary artifacts (about three typical nucleus spacings)
    double construction_pad() const { return 3.0 / std::sqrt(lambda_s); }
};

// One realized street system; for the tessellation kinds the generating
// nuclei are kept so the stabilization field can be evaluated.
struct BuiltEnvironment {
    SegmentSystem streets;
    PointCloud nuclei;
    bool has_nuclei = false;
};

// Streets covering the *padded* box of `w`: the system is built on a shifted
// origin-anchored window as wide as the padded box, then translated so that
// the analysis box sits at [0, L]^2 as usual. Tessellations sample their
// nuclei with the extra construction pad and clip streets to the built
// region; Manhattan lines span it wall to wall.
inline BuiltEnvironment build_environment(const EnvironmentSpec& spec, const Window& w,
                                          RngStream& rng) {
    if (w.d != 2) throw std::invalid_argument("build_environment: window must be planar (d = 2)");
    w.validate();
    spec.validate();
    const double shift = w.lo();
    Window work;
    work.d = 2;
    work.L = w.side_padded();
    work.padding = 0.0;

    BuiltEnvironment env;
    switch (spec.kind) {
    case EnvKind::PVT:
    case EnvKind::PDT: {
        Window nwin = work;
        nwin.padding = spec.construction_pad();
        env.nuclei = sample_ppp(nwin, spec.lambda_s, rng);
        env.streets = spec.kind == EnvKind::PVT ? build_pvt(env.nuclei) : build_pdt(env.nuclei);
        env.has_nuclei = true;
        break;
    }
    case EnvKind::ManhattanGrid:
    case EnvKind::NestedManhattanGrid: {
        ManhattanLaws laws = spec.laws;
        laws.nested = (spec.kind == EnvKind::NestedManhattanGrid);
        env.streets = build_manhattan(laws, work, rng);
        break;
    }
    }
    for (Segment& s : env.streets.segments) {
        s.x1 += shift;
        s.y1 += shift;
        s.x2 += shift;
        s.y2 += shift;
    }
    env.streets.window = w;
    if (env.has_nuclei) {
        for (size_t t = 0; t < env.nuclei.coords.size(); ++t) env.nuclei.coords[t] += shift;
        Window nw = w;
        nw.padding = w.padding + spec.construction_pad();
        env.nuclei.window = nw;
    }
    return env;
}

// Cox sample on a fixed street system: a Poisson number of points with mean
// lambda * total length, each landing on a segment chosen proportionally to
// its length and uniformly along it.
inline PointCloud sample_cox(const SegmentSystem& segs, double lambda, RngStream& rng) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("sample_cox: lambda must be >= 0");
    const double mean = lambda * segs.total_length;
    if (mean > max_expected_points)
        throw std::invalid_argument("sample_cox: expected point count exceeds cap");
    PointCloud pts;
    pts.window = segs.window;
    if (segs.segments.empty() || mean == 0.0) return pts;

    std::vector<double> cum(segs.segments.size());
    double acc = 0.0;
    for (size_t k = 0; k < segs.segments.size(); ++k) {
        acc += segs.segments[k].length();
        cum[k] = acc;
    }
    const long long n = rng.poisson(mean);
    pts.coords.reserve(static_cast<size_t>(2 * n));
    for (long long i = 0; i < n; ++i) {
        const double u = rng.uniform() * acc;
        size_t k = static_cast<size_t>(
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (k >= segs.segments.size()) k = segs.segments.size() - 1;
        const Segment& s = segs.segments[k];
        const double t = rng.uniform();
        pts.push_back(s.x1 + t * (s.x2 - s.x1), s.y1 + t * (s.y2 - s.y1));
    }
    return pts;
}

// exact nearest-nucleus distance (the PVT stabilization radius at x)
inline double pvt_stabilization_radius(const double* x, const PointCloud& nuclei) {
    if (nuclei.size() == 0)
        throw std::invalid_argument("pvt_stabilization_radius: nuclei must be nonempty");
    double best = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < nuclei.size(); ++i)
        best = std::min(best, dist(x, nuclei.pt(i), nuclei.dim()));
    return best;
}

// Stabilization radius field of a tessellation environment: the distance to
// the nearest nucleus. The box supremum is approximated on a mesh of pitch
// <= 0.25 together with the Voronoi vertices falling inside the box, where
// the piecewise-smooth field peaks.
struct StabilizationField {
    PointCloud nuclei;
    std::vector<double> vert_x, vert_y;

    static StabilizationField for_environment(const BuiltEnvironment& env) {
        StabilizationField f;
        if (!env.has_nuclei) return f; // field identically 0 (deterministic-range streets)
        f.nuclei = env.nuclei;
        const Window& nw = env.nuclei.window;
        std::vector<VoronoiCell> cells =
            voronoi_cells(env.nuclei, nw.lo(), nw.hi(), nw.lo(), nw.hi());
        voronoi_vertices(cells, f.vert_x, f.vert_y);
        return f;
    }

    double eval(const double* x) const {
        if (nuclei.size() == 0) return 0.0;
        return pvt_stabilization_radius(x, nuclei);
    }

    double sup_over_box(const std::vector<double>& lo, const std::vector<double>& hi) const {
        if (nuclei.size() == 0) return 0.0;
        if (lo.size() != 2 || hi.size() != 2)
            throw std::invalid_argument("StabilizationField: box must be planar");
        double best = 0.0;
        double x[2];
        const int nx = std::max(1, static_cast<int>(std::ceil((hi[0] - lo[0]) / 0.25)));
        const int ny = std::max(1, static_cast<int>(std::ceil((hi[1] - lo[1]) / 0.25)));
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= ny; ++j) {
                x[0] = lo[0] + (hi[0] - lo[0]) * i / nx;
                x[1] = lo[1] + (hi[1] - lo[1]) * j / ny;
                best = std::max(best, eval(x));
            }
        for (size_t t = 0; t < vert_x.size(); ++t) {
            if (vert_x[t] < lo[0] || vert_x[t] > hi[0] || vert_y[t] < lo[1] ||
                vert_y[t] > hi[1])
                continue;
            x[0] = vert_x[t];
            x[1] = vert_y[t];
            best = std::max(best, eval(x));
        }
        return best;
    }

    BoxRadiusField as_box_field() const {
        if (nuclei.size() == 0) return {};
        return [f = *this](const std::vector<double>& lo, const std::vector<double>& hi) {
            return f.sup_over_box(lo, hi);
        };
    }
};

// Monte Carlo estimate of the normalization constant: the reciprocal of the
// expected street length in a central unit box. The trial window is sized so
// the unit box is far from construction boundaries.
struct NormalizationResult {
    double c_norm = 1.0;
    double std_error = 0.0; // of c_norm, via the delta method
    double mean_length = 0.0;
    long long reps = 0;
};

// `window_side` = 0 lets the routine pick a side large enough that the central
// unit box is far from construction boundaries; a positive value overrides it
// (the estimate should be stable under enlarging the window).
inline NormalizationResult normalize_environment(const EnvironmentSpec& spec, long long reps,
                                                 RngStream& rng, double window_side = 0.0) {
    spec.validate();
    if (reps < 100)
        throw std::invalid_argument("normalize_environment: replications must be >= 100");
    Window w;
    w.d = 2;
    w.padding = 0.0;
    if (window_side > 0.0) {
        if (window_side < 2.0)
            throw std::invalid_argument("normalize_environment: window side must be >= 2");
        w.L = window_side;
    } else {
        w.L = 12.0;
        if (spec.kind == EnvKind::PVT || spec.kind == EnvKind::PDT)
            w.L = std::max(w.L, 6.0 / std::sqrt(spec.lambda_s));
        else
            w.L = std::max({w.L, 6.0 * spec.laws.horizontal.mean_gap(),
                            6.0 * spec.laws.vertical.mean_gap()});
    }
    const double c = (w.L - 1.0) / 2.0;

    double sum = 0.0, sum_sq = 0.0;
    for (long long r = 0; r < reps; ++r) {
        BuiltEnvironment env = build_environment(spec, w, rng);
        const double len = measure_length_in_box(env.streets, c, c + 1.0, c, c + 1.0);
        sum += len;
        sum_sq += len * len;
    }
    const double mean = sum / static_cast<double>(reps);
    if (!(mean > 0.0))
        throw std::runtime_error("normalize_environment: zero measured length across replications");
    const double var = std::max(0.0, sum_sq / static_cast<double>(reps) - mean * mean);
    const double se_len = std::sqrt(var / static_cast<double>(reps));
    NormalizationResult res;
    res.mean_length = mean;
    res.c_norm = 1.0 / mean;
    res.std_error = se_len / (mean * mean);
    res.reps = reps;
    return res;
}

} // namespace perc
