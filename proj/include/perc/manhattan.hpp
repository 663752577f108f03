#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perc/geometry.hpp"
#include "perc/rng.hpp"
#include "perc/segment_system.hpp"

namespace perc {

// Inter-line gap law of a renewal street process.
enum class RenewalKind { DeterministicGap, ExponentialGap, UniformGap };

struct RenewalLaw {
    RenewalKind kind = RenewalKind::DeterministicGap;
    double a = 1.0; // deterministic: the gap; exponential: mean gap; uniform: lower bound
    double b = 0.0; // uniform: upper bound

    static RenewalLaw deterministic(double gap) {
        RenewalLaw l;
        l.kind = RenewalKind::DeterministicGap;
        l.a = gap;
        l.validate();
        return l;
    }
    static RenewalLaw exponential(double mean) {
        RenewalLaw l;
        l.kind = RenewalKind::ExponentialGap;
        l.a = mean;
        l.validate();
        return l;
    }
    static RenewalLaw uniform(double lo, double hi) {
        RenewalLaw l;
        l.kind = RenewalKind::UniformGap;
        l.a = lo;
        l.b = hi;
        l.validate();
        return l;
    }

    void validate() const {
        switch (kind) {
        case RenewalKind::DeterministicGap:
            if (!(a > 0.0)) throw std::invalid_argument("RenewalLaw: deterministic gap must be > 0");
            break;
        case RenewalKind::ExponentialGap:
            if (!(a > 0.0)) throw std::invalid_argument("RenewalLaw: exponential mean must be > 0");
            break;
        case RenewalKind::UniformGap:
            if (!(a >= 0.0) || !(b >= a) || !(b > 0.0))
                throw std::invalid_argument("RenewalLaw: uniform gap needs 0 <= lo <= hi, hi > 0");
            break;
        }
    }

    double mean_gap() const {
        switch (kind) {
        case RenewalKind::DeterministicGap: return a;
        case RenewalKind::ExponentialGap: return a;
        case RenewalKind::UniformGap: return 0.5 * (a + b);
        }
        return a;
    }

    double sample_gap(RngStream& rng) const {
        switch (kind) {
        case RenewalKind::DeterministicGap: return a;
        case RenewalKind::ExponentialGap: return rng.exponential(1.0 / a);
        case RenewalKind::UniformGap: return rng.uniform(a, b);
        }
        return a;
    }
};

// Line laws of a (possibly nested) Manhattan street grid: `horizontal` spaces
// the horizontal lines (gaps along y), `vertical` the vertical lines.
struct ManhattanLaws {
    RenewalLaw horizontal{}, vertical{};
    bool nested = false;
    RenewalLaw inner_horizontal{}, inner_vertical{};

    void validate() const {
        horizontal.validate();
        vertical.validate();
        if (nested) {
            inner_horizontal.validate();
            inner_vertical.validate();
        }
    }
};

inline constexpr size_t max_manhattan_segments = 1'000'000;

namespace detail {

// renewal positions anchored at lo (first line on the edge), kept through hi
inline std::vector<double> renewal_positions(const RenewalLaw& law, double lo, double hi,
                                             RngStream& rng) {
    std::vector<double> pos;
    double p = lo;
    while (p <= hi + 1e-12) {
        pos.push_back(p);
        if (pos.size() > max_manhattan_segments)
            throw std::runtime_error("build_manhattan: line count exceeds cap");
        const double g = law.sample_gap(rng);
        if (!(g > 0.0)) throw std::runtime_error("build_manhattan: sampled gap not positive");
        p += g;
    }
    return pos;
}

} // namespace detail

// Manhattan street grid over the padded window: horizontal and vertical lines
// spanning the window wall to wall, placed by the per-axis renewal laws with
// the first line anchored on the low edge. The nested variant adds an inner
// grid to every cell of the outer grid, confined to that cell, with inner
// positions strictly between the cell walls (independent laws per cell).
inline SegmentSystem build_manhattan(const ManhattanLaws& laws, const Window& w, RngStream& rng) {
    if (w.d != 2) throw std::invalid_argument("build_manhattan: window must be planar (d = 2)");
    laws.validate();
    const double lo = w.lo(), hi = w.hi();

    SegmentSystem sys;
    sys.window = w;
    std::vector<double> ys = detail::renewal_positions(laws.horizontal, lo, hi, rng);
    std::vector<double> xs = detail::renewal_positions(laws.vertical, lo, hi, rng);
    for (double y : ys) sys.segments.push_back(Segment{lo, y, hi, y});
    for (double x : xs) sys.segments.push_back(Segment{x, lo, x, hi});

    if (laws.nested) {
        auto add_cell = [&](double x0, double x1, double y0, double y1) {
            double q = y0;
            for (;;) {
                const double g = laws.inner_horizontal.sample_gap(rng);
                if (!(g > 0.0)) throw std::runtime_error("build_manhattan: sampled gap not positive");
                q += g;
                if (!(q < y1)) break;
                sys.segments.push_back(Segment{x0, q, x1, q});
                if (sys.segments.size() > max_manhattan_segments)
                    throw std::runtime_error("build_manhattan: line count exceeds cap");
            }
            q = x0;
            for (;;) {
                const double g = laws.inner_vertical.sample_gap(rng);
                if (!(g > 0.0)) throw std::runtime_error("build_manhattan: sampled gap not positive");
                q += g;
                if (!(q < x1)) break;
                sys.segments.push_back(Segment{q, y0, q, y1});
                if (sys.segments.size() > max_manhattan_segments)
                    throw std::runtime_error("build_manhattan: line count exceeds cap");
            }
        };
        for (size_t i = 0; i + 1 < xs.size(); ++i)
            for (size_t j = 0; j + 1 < ys.size(); ++j)
                add_cell(xs[i], xs[i + 1], ys[j], ys[j + 1]);
    }
    sys.finalize();
    return sys;
}

} // namespace perc
