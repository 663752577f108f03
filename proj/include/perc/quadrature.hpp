#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace perc {

// ---------------------------------------------------------------- 1-D adaptive Simpson

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth, int force) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    // `force` keeps the first few levels subdividing unconditionally: the
    // Richardson test alone can be fooled when the coarse and refined sums
    // agree by accident (three nodes say nothing about a jump between them).
    if (depth <= 0 || (force <= 0 && std::abs(delta) <= 15.0 * tol))
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, force - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, force - 1);
}

} // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int max_depth = 40) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, 4);
}

// -------------------------------------------------- d-dimensional adaptive box midpoint

struct BoxQuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long long cells = 0;
    bool converged = true;
};

// Midpoint rule with recursive 2^d refinement. A box is accepted when the
// difference between its one-point estimate and the sum over its children falls
// under the locally allotted tolerance; otherwise the children are refined.
inline BoxQuadResult integrate_box(const std::function<double(const double*)>& f,
                                   const std::vector<double>& lo, const std::vector<double>& hi,
                                   double abs_tol, long long max_cells = 20000000LL) {
    const int d = static_cast<int>(lo.size());
    struct Box {
        std::vector<double> lo, hi;
        double tol;
        int depth;
    };
    auto volume = [&](const Box& bx) {
        double v = 1.0;
        for (int k = 0; k < d; ++k) v *= bx.hi[k] - bx.lo[k];
        return v;
    };
    auto midpoint_eval = [&](const Box& bx) {
        std::vector<double> c(d);
        for (int k = 0; k < d; ++k) c[k] = 0.5 * (bx.lo[k] + bx.hi[k]);
        return f(c.data()) * volume(bx);
    };

    BoxQuadResult out;
    std::vector<Box> stack;
    stack.push_back({lo, hi, abs_tol, 0});
    const int max_depth = 42;
    while (!stack.empty()) {
        Box bx = std::move(stack.back());
        stack.pop_back();
        ++out.cells;
        double coarse = midpoint_eval(bx);
        // children: split every axis in half
        double refined = 0.0;
        long long nchild = 1LL << d;
        std::vector<Box> children;
        children.reserve(nchild);
        for (long long mask = 0; mask < nchild; ++mask) {
            Box ch;
            ch.lo.resize(d);
            ch.hi.resize(d);
            for (int k = 0; k < d; ++k) {
                double m = 0.5 * (bx.lo[k] + bx.hi[k]);
                if (mask & (1LL << k)) {
                    ch.lo[k] = m;
                    ch.hi[k] = bx.hi[k];
                } else {
                    ch.lo[k] = bx.lo[k];
                    ch.hi[k] = m;
                }
            }
            ch.tol = bx.tol / static_cast<double>(nchild);
            ch.depth = bx.depth + 1;
            refined += midpoint_eval(ch);
            children.push_back(std::move(ch));
        }
        double delta = std::abs(refined - coarse);
        if (delta <= bx.tol || bx.depth >= max_depth || out.cells >= max_cells) {
            out.value += refined;
            out.err_estimate += delta;
            if (delta > bx.tol && bx.depth >= max_depth) out.converged = false;
            if (out.cells >= max_cells && delta > bx.tol) out.converged = false;
        } else {
            for (auto& ch : children) stack.push_back(std::move(ch));
        }
    }
    return out;
}

// ------------------------------------------------------- improper integrals over [0,inf)

struct TailQuadResult {
    double value = 0.0;
    bool converged = true; // false signals a detected divergence / non-decaying tail
};

// Integrates f over [0,inf) by doubling blocks [T, 2T]. Once consecutive
// blocks decay geometrically the remaining tail is extrapolated from the
// observed ratio and folded into the value; blocks that stop decaying flag
// divergence instead.
inline TailQuadResult integrate_halfline(const std::function<double(double)>& f, double rel_tol,
                                         double block_tol_scale = 1e-3, int max_doublings = 200) {
    TailQuadResult out;
    double total = adaptive_simpson(f, 0.0, 1.0, rel_tol * block_tol_scale);
    double t = 1.0;
    double prev_block = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int k = 0; k < max_doublings; ++k) {
        double block = adaptive_simpson(f, t, 2.0 * t,
                                        rel_tol * block_tol_scale * std::max(1.0, std::abs(total)));
        total += block;
        if (std::abs(block) <= rel_tol * std::max(std::abs(total), 1e-300)) {
            out.value = total; // blocks vanished outright (e.g. f left its support)
            return out;
        }
        double ratio = std::abs(block) / std::abs(prev_block);
        if (std::isfinite(prev_block) && ratio < 0.999) {
            stalled = 0;
            double remainder = std::abs(block) * ratio / (1.0 - ratio);
            if (remainder <= rel_tol * std::max(std::abs(total), 1e-300)) {
                out.value = total + (block < 0.0 ? -remainder : remainder);
                return out;
            }
        } else if (std::isfinite(prev_block) && ++stalled >= 8) {
            break; // blocks not decaying: divergent by comparison
        }
        prev_block = block;
        t *= 2.0;
    }
    out.value = total;
    out.converged = false;
    return out;
}

} // namespace perc
