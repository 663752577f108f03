#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "perc/crossing.hpp"
#include "perc/environment.hpp"
#include "perc/geometry.hpp"
#include "perc/hexagon.hpp"
#include "perc/lattice.hpp"
#include "perc/mark_distribution.hpp"
#include "perc/path_loss.hpp"
#include "perc/point_process.hpp"
#include "perc/rng.hpp"
#include "perc/spatial_graph.hpp"

namespace perc {

enum class ModelKind {
    Gilbert,        // PPP, connect below fixed distance r
    BooleanOverlap, // PPP with radius marks, balls overlap
    BooleanMin,     // PPP with radius marks, distance below both radii
    SinrConst,      // PPP, constant transmit power, mutual SINR above tau
    SinrRandom,     // PPP with power marks, mutual SINR above tau
    Bond,           // bond percolation on Z^d
    TriSite,        // site percolation on the triangular lattice
    HexCoarse,      // PPP coarse-grained to occupied hexagons
    CoxGilbert,     // Cox points on a street system, Gilbert rule
};

inline const char* model_name(ModelKind k) {
    switch (k) {
    case ModelKind::Gilbert: return "gilbert";
    case ModelKind::BooleanOverlap: return "boolean_overlap";
    case ModelKind::BooleanMin: return "boolean_min";
    case ModelKind::SinrConst: return "sinr_const";
    case ModelKind::SinrRandom: return "sinr_random";
    case ModelKind::Bond: return "bond";
    case ModelKind::TriSite: return "tri_site";
    case ModelKind::HexCoarse: return "hex_coarse";
    case ModelKind::CoxGilbert: return "cox_gilbert";
    }
    return "?";
}

inline bool model_is_lattice(ModelKind k) {
    return k == ModelKind::Bond || k == ModelKind::TriSite;
}

// Full parameter set of one percolation experiment. Negative `margin` or
// `window.padding` requests the automatic choice made by prepare_model.
struct ModelParams {
    ModelKind kind = ModelKind::Gilbert;
    Window window{};
    double lambda = 1.0;
    double r = 1.0; // connection distance (Gilbert / CoxGilbert)
    MarkDistribution marks = MarkDistribution::constant(1.0);
    PathLoss ell = PathLoss::power_law_one_plus(4.0, 2);
    SinrParams sinr{};
    EnvironmentSpec env{};
    double hex_side = 1.0;
    long long lat_n = 16; // lattice linear size
    double p = 0.5;       // lattice open probability
    int axis = 0;
    double margin = -1.0;
};

namespace detail {

// finite surrogate for the largest mark: the exact maximum when bounded, else
// the level the tail crosses eps (found by doubling; caps the auto padding)
inline double mark_scale(const MarkDistribution& dist, double eps = 1e-4) {
    const double mx = dist.max_value();
    if (std::isfinite(mx)) return mx;
    double m = std::max(1.0, dist.mean());
    for (int it = 0; it < 200 && dist.tail(m) > eps; ++it) m *= 2.0;
    return m;
}

} // namespace detail

// per-point connection reach as a function of the point's mark
inline double reach_of_mark(const ModelParams& mp, double mark) {
    switch (mp.kind) {
    case ModelKind::BooleanOverlap: return 2.0 * mark;
    case ModelKind::BooleanMin: return mark;
    case ModelKind::SinrRandom: return snr_radius(mp.ell, mark, mp.sinr.N0, mp.sinr.tau);
    default: throw std::logic_error("reach_of_mark: model has no marks");
    }
}

// Nominal largest connection distance of the model; for unbounded marks a
// high-quantile surrogate (the per-replication re-pad handles rare excursions
// beyond it).
inline double connection_reach(const ModelParams& mp) {
    switch (mp.kind) {
    case ModelKind::Gilbert:
    case ModelKind::CoxGilbert: return mp.r;
    case ModelKind::BooleanOverlap: return 2.0 * detail::mark_scale(mp.marks);
    case ModelKind::BooleanMin: return detail::mark_scale(mp.marks);
    case ModelKind::SinrConst: return snr_radius(mp.ell, mp.sinr.P, mp.sinr.N0, mp.sinr.tau);
    case ModelKind::SinrRandom:
        return snr_radius(mp.ell, detail::mark_scale(mp.marks), mp.sinr.N0, mp.sinr.tau);
    case ModelKind::Bond:
    case ModelKind::TriSite:
    case ModelKind::HexCoarse: return 0.0;
    }
    return 0.0;
}

// Resolve automatic padding (= connection reach) and margin (= reach clamped
// to a quarter window) and validate the combination. Call once before
// replicating; crossing_replication expects a prepared parameter set.
inline void prepare_model(ModelParams& mp) {
    if (model_is_lattice(mp.kind)) {
        if (mp.lat_n < 2) throw std::invalid_argument("ModelParams: lat_n must be >= 2");
        if (!(mp.p >= 0.0 && mp.p <= 1.0))
            throw std::invalid_argument("ModelParams: p must lie in [0, 1]");
        if (mp.kind == ModelKind::Bond) {
            if (mp.window.d < 1 || mp.window.d > 4)
                throw std::invalid_argument("ModelParams: bond dimension must be 1..4");
            if (mp.axis < 0 || mp.axis >= mp.window.d)
                throw std::invalid_argument("ModelParams: axis out of range");
        }
        return;
    }
    if (!(mp.lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
    if (mp.kind == ModelKind::Gilbert || mp.kind == ModelKind::CoxGilbert)
        if (!(mp.r > 0.0)) throw std::invalid_argument("ModelParams: r must be > 0");
    if (mp.kind == ModelKind::HexCoarse) {
        if (mp.window.d != 2) throw std::invalid_argument("ModelParams: hex_coarse needs d = 2");
        if (!(mp.hex_side > 0.0))
            throw std::invalid_argument("ModelParams: hex_side must be > 0");
    }
    if (mp.kind == ModelKind::CoxGilbert) {
        if (mp.window.d != 2)
            throw std::invalid_argument("ModelParams: cox_gilbert needs d = 2");
        mp.env.validate();
    }
    if (mp.kind == ModelKind::SinrConst || mp.kind == ModelKind::SinrRandom) {
        mp.sinr.validate();
        mp.sinr.random_power = (mp.kind == ModelKind::SinrRandom);
    }
    const double reach = connection_reach(mp);
    // constant power must clear the noise floor (hard invariant); for random
    // powers an all-dead sample is possible but legal, and the runner warns
    if (mp.kind == ModelKind::SinrConst && !(reach > 0.0))
        throw std::invalid_argument(
            "ModelParams: constant-power SINR needs ell(0) > tau*N0/P (no link can form)");
    if (mp.window.padding < 0.0)
        mp.window.padding = mp.kind == ModelKind::HexCoarse ? 0.0 : reach;
    mp.window.validate();
    if (mp.axis < 0 || mp.axis >= mp.window.d)
        throw std::invalid_argument("ModelParams: axis out of range");
    if (mp.margin < 0.0) mp.margin = std::min(reach, mp.window.L / 4.0);
    CrossingRule rule{mp.axis, mp.margin};
    rule.validate(mp.window);
}

namespace detail {

// Marked cloud sampling with the giant-mark guard: if a sampled mark reaches
// farther than the current padding, enlarge the padding to that reach and
// redraw, so rare giants are not silently truncated at the window edge.
inline MarkedPointCloud sample_marked_repad(const ModelParams& mp, RngStream& rng) {
    Window w = mp.window;
    for (int attempt = 0;; ++attempt) {
        MarkedPointCloud mc = attach_marks(sample_ppp(w, mp.lambda, rng), mp.marks, rng);
        double need = 0.0;
        for (double m : mc.marks) need = std::max(need, reach_of_mark(mp, m));
        if (need <= w.padding + 1e-12 || attempt >= 8) return mc;
        w.padding = need;
    }
}

} // namespace detail

// One crossing replication of a prepared model. Continuum models sample fresh
// points (and environment, for Cox) from `rng`; lattice models draw fresh
// open/closed flags.
inline bool crossing_replication(const ModelParams& mp, RngStream& rng) {
    const CrossingRule rule{mp.axis, mp.margin};
    switch (mp.kind) {
    case ModelKind::Gilbert: {
        PointCloud pts = sample_ppp(mp.window, mp.lambda, rng);
        SpatialGraph g = gilbert_graph(pts, mp.r);
        return crossing_indicator(pts, g, rule);
    }
    case ModelKind::BooleanOverlap:
    case ModelKind::BooleanMin: {
        MarkedPointCloud mc = detail::sample_marked_repad(mp, rng);
        SpatialGraph g = boolean_graph(
            mc, mp.kind == ModelKind::BooleanOverlap ? BooleanRule::Overlap : BooleanRule::Min);
        return crossing_indicator(mc.base, g, rule);
    }
    case ModelKind::SinrConst: {
        PointCloud pts = sample_ppp(mp.window, mp.lambda, rng);
        SpatialGraph g = sinr_graph(pts, mp.sinr, mp.ell);
        return crossing_indicator(pts, g, rule);
    }
    case ModelKind::SinrRandom: {
        MarkedPointCloud mc = detail::sample_marked_repad(mp, rng);
        SpatialGraph g = sinr_graph(mc, mp.sinr, mp.ell);
        return crossing_indicator(mc.base, g, rule);
    }
    case ModelKind::Bond: {
        BondLattice lat =
            sample_bond_lattice(mp.window.d, static_cast<int>(mp.lat_n), mp.p, rng);
        return bond_crossing(lat, mp.axis);
    }
    case ModelKind::TriSite: {
        TriangularSiteLattice lat = sample_tri_lattice(static_cast<int>(mp.lat_n),
                                                       static_cast<int>(mp.lat_n), mp.p, rng);
        return tri_crossing(lat);
    }
    case ModelKind::HexCoarse: {
        PointCloud pts = sample_ppp(mp.window, mp.lambda, rng);
        HexCoarseGrain hc = hexagon_coarse_grain(pts, mp.hex_side);
        return tri_crossing(hc.lattice);
    }
    case ModelKind::CoxGilbert: {
        BuiltEnvironment env = build_environment(mp.env, mp.window, rng);
        PointCloud pts = sample_cox(env.streets, mp.lambda * mp.env.c_norm, rng);
        SpatialGraph g = gilbert_graph(pts, mp.r);
        return crossing_indicator(pts, g, rule);
    }
    }
    return false;
}

// Axis overrides used by sweeps and bisection.
enum class SweepAxis { Lambda, Gamma, P };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::Gamma: return "gamma";
    case SweepAxis::P: return "p";
    }
    return "?";
}

// Copy of the prepared parameters with one axis value replaced. Lambda and
// gamma keep the prepared padding/margin (reach does not depend on lambda;
// for gamma the reach is the gamma = 0 noise-only radius, an upper bound for
// every gamma, so the coupling stays exact per seed).
inline ModelParams with_axis_value(const ModelParams& mp, SweepAxis axis, double value) {
    ModelParams out = mp;
    switch (axis) {
    case SweepAxis::Lambda:
        if (!(value >= 0.0)) throw std::invalid_argument("sweep: lambda must be >= 0");
        out.lambda = value;
        break;
    case SweepAxis::Gamma:
        if (mp.kind != ModelKind::SinrConst && mp.kind != ModelKind::SinrRandom)
            throw std::invalid_argument("sweep: gamma axis needs a SINR model");
        if (!(value >= 0.0)) throw std::invalid_argument("sweep: gamma must be >= 0");
        out.sinr.gamma = value;
        break;
    case SweepAxis::P:
        if (!model_is_lattice(mp.kind))
            throw std::invalid_argument("sweep: p axis needs a lattice model");
        if (!(value >= 0.0 && value <= 1.0))
            throw std::invalid_argument("sweep: p must lie in [0, 1]");
        out.p = value;
        break;
    }
    return out;
}

} // namespace perc
