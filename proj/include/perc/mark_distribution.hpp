#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "perc/rng.hpp"

namespace perc {

// Law of the radius/power mark rho. All mass on [0,inf), P(rho=0) < 1.
//   Constant(c)            : rho = c
//   Uniform(a,b)           : uniform on [a,b]
//   ParetoTail(alpha,rstar): P(rho > r) = min(1, (r/rstar)^-alpha); support [rstar,inf)
//   TwoPoint(lo,hi,p_lo)   : rho = lo with prob p_lo, else hi
//   GeometricLike(q)       : P(rho = k) = (1-q) q^(k-1) on k = 1,2,...
enum class MarkKind { Constant, Uniform, ParetoTail, TwoPoint, GeometricLike };

struct MarkDistribution {
    MarkKind kind = MarkKind::Constant;
    double a = 1.0;    // Constant: value. Uniform: lower. ParetoTail: alpha. TwoPoint: lo. GeometricLike: q.
    double b = 1.0;    // Uniform: upper. ParetoTail: rstar. TwoPoint: hi.
    double p_lo = 0.5; // TwoPoint only.

    static MarkDistribution constant(double c) { return {MarkKind::Constant, c, 0.0, 0.0}; }
    static MarkDistribution uniform(double lo, double hi) { return {MarkKind::Uniform, lo, hi, 0.0}; }
    static MarkDistribution pareto_tail(double alpha, double rstar) {
        return {MarkKind::ParetoTail, alpha, rstar, 0.0};
    }
    static MarkDistribution two_point(double lo, double p_lo_, double hi, double p_hi) {
        if (std::abs(p_lo_ + p_hi - 1.0) > 1e-12)
            throw std::invalid_argument("MarkDistribution: two-point probabilities must sum to 1");
        return {MarkKind::TwoPoint, lo, hi, p_lo_};
    }
    static MarkDistribution geometric_like(double q) { return {MarkKind::GeometricLike, q, 0.0, 0.0}; }

    void validate() const {
        switch (kind) {
        case MarkKind::Constant:
            if (!(a > 0.0)) throw std::invalid_argument("MarkDistribution: constant mark must be > 0 (P(rho=0)<1)");
            break;
        case MarkKind::Uniform:
            if (!(0.0 <= a && a < b)) throw std::invalid_argument("MarkDistribution: uniform needs 0 <= a < b");
            break;
        case MarkKind::ParetoTail:
            if (!(a > 0.0) || !(b > 0.0))
                throw std::invalid_argument("MarkDistribution: pareto tail needs alpha > 0 and rstar > 0");
            break;
        case MarkKind::TwoPoint:
            if (!(a >= 0.0) || !(b >= a) || !(p_lo >= 0.0 && p_lo <= 1.0))
                throw std::invalid_argument("MarkDistribution: two-point needs 0 <= lo <= hi, p_lo in [0,1]");
            if (a == 0.0 && p_lo == 1.0)
                throw std::invalid_argument("MarkDistribution: P(rho=0) must be < 1");
            break;
        case MarkKind::GeometricLike:
            if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("MarkDistribution: geometric needs q in (0,1)");
            break;
        }
    }

    double sample(RngStream& rng) const {
        switch (kind) {
        case MarkKind::Constant: return a;
        case MarkKind::Uniform: return rng.uniform(a, b);
        case MarkKind::ParetoTail: {
            double u = 1.0 - rng.uniform(); // (0,1]
            return b * std::pow(u, -1.0 / a);
        }
        case MarkKind::TwoPoint: return rng.uniform() < p_lo ? a : b;
        case MarkKind::GeometricLike: {
            double u = rng.uniform();
            // smallest k >= 1 with 1 - q^k >= u
            double k = std::ceil(std::log1p(-u) / std::log(a));
            return k < 1.0 ? 1.0 : k;
        }
        }
        return 0.0;
    }

    double mean() const {
        switch (kind) {
        case MarkKind::Constant: return a;
        case MarkKind::Uniform: return 0.5 * (a + b);
        case MarkKind::ParetoTail:
            if (a <= 1.0) return std::numeric_limits<double>::infinity();
            return b * a / (a - 1.0);
        case MarkKind::TwoPoint: return p_lo * a + (1.0 - p_lo) * b;
        case MarkKind::GeometricLike: return 1.0 / (1.0 - a);
        }
        return 0.0;
    }

    // P(rho > r)
    double tail(double r) const {
        if (r < 0.0) return 1.0;
        switch (kind) {
        case MarkKind::Constant: return r < a ? 1.0 : 0.0;
        case MarkKind::Uniform:
            if (r < a) return 1.0;
            if (r >= b) return 0.0;
            return (b - r) / (b - a);
        case MarkKind::ParetoTail:
            if (r <= b) return 1.0;
            return std::pow(r / b, -a);
        case MarkKind::TwoPoint:
            if (r < a) return 1.0;
            if (r < b) return 1.0 - p_lo;
            return 0.0;
        case MarkKind::GeometricLike:
            if (r < 1.0) return 1.0;
            return std::pow(a, std::floor(r));
        }
        return 0.0;
    }

    // Smallest finite upper bound of the support, or +inf.
    double max_value() const {
        switch (kind) {
        case MarkKind::Constant: return a;
        case MarkKind::Uniform: return b;
        case MarkKind::ParetoTail: return std::numeric_limits<double>::infinity();
        case MarkKind::TwoPoint: return b;
        case MarkKind::GeometricLike: return std::numeric_limits<double>::infinity();
        }
        return std::numeric_limits<double>::infinity();
    }

    // P(ceil(rho) = j) for integer j >= 0; ceil(rho)=j iff rho in (j-1, j].
    double ceil_pmf(long long j) const {
        if (j < 0) return 0.0;
        if (j == 0) return 0.0; // all kinds here have P(rho = 0) = 0
        return tail(static_cast<double>(j - 1)) - tail(static_cast<double>(j));
    }

    // E[ceil(rho)^m] via the layer-cake sum over integer levels:
    //   E[ceil(rho)^m] = sum_{j>=0} ((j+1)^m - j^m) P(rho > j).
    // Throws on a divergent moment (ParetoTail with alpha <= m).
    double ceil_moment(int m) const {
        if (m < 1) throw std::invalid_argument("ceil_moment: power must be >= 1");
        if (kind == MarkKind::ParetoTail && a <= static_cast<double>(m))
            throw std::domain_error("ceil_moment: divergent (pareto tail alpha <= moment order)");
        double total = 0.0;
        int flat = 0;
        const long long cap = 1000000LL;
        for (long long j = 0; j < cap; ++j) {
            double t = tail(static_cast<double>(j));
            double term = (std::pow(j + 1.0, m) - std::pow(static_cast<double>(j), m)) * t;
            total += term;
            if (term <= 1e-14 * total) {
                if (++flat >= 4) return total;
            } else {
                flat = 0;
            }
        }
        if (kind == MarkKind::ParetoTail && b < static_cast<double>(cap)) {
            // Pure power-law tail from here on; the sum converges like
            // j^{m-alpha} so finish it analytically. The summand is
            //   f(x) = ((x+1)^m - x^m) (x/b)^{-alpha}
            //        = b^alpha * sum_{k<m} C(m,k) x^{k-alpha},
            // integrated with the midpoint rule from cap - 1/2; the
            // [integral, integral + f(cap)] bracket pins the error far below
            // the quadrature tolerances used downstream.
            const double J = static_cast<double>(cap) - 0.5;
            double integral = 0.0;
            double binom = 1.0; // C(m, k), updated in place
            for (int k = 0; k < m; ++k) {
                integral += binom * std::pow(J, k + 1.0 - a) / (a - (k + 1.0));
                binom = binom * static_cast<double>(m - k) / (k + 1.0);
            }
            return total + std::pow(b, a) * integral;
        }
        throw std::domain_error("ceil_moment: no numeric convergence (moment too heavy-tailed)");
    }

    // E[g(rho)] for bounded g (|g| <= g_bound); used by the marked Campbell formula.
    double expect(const std::function<double(double)>& g, double g_bound = 1.0,
                  double rel_tol = 1e-9) const;
};

} // namespace perc

#include "perc/quadrature.hpp"

namespace perc {

inline double MarkDistribution::expect(const std::function<double(double)>& g, double g_bound,
                                       double rel_tol) const {
    switch (kind) {
    case MarkKind::Constant: return g(a);
    case MarkKind::TwoPoint: return p_lo * g(a) + (1.0 - p_lo) * g(b);
    case MarkKind::Uniform:
        return adaptive_simpson(g, a, b, rel_tol * (b - a) * g_bound) / (b - a);
    case MarkKind::GeometricLike: {
        double total = 0.0, q = a, w = 1.0 - q;
        for (long long k = 1; k < 100000; ++k) {
            total += w * g(static_cast<double>(k));
            w *= q;
            if (w * g_bound <= rel_tol * std::max(std::abs(total), 1e-300)) break;
        }
        return total;
    }
    case MarkKind::ParetoTail: {
        // density alpha/rstar * (r/rstar)^(-alpha-1) on [rstar, inf)
        double alpha = a, rstar = b;
        auto h = [&](double r) {
            return g(r) * alpha / rstar * std::pow(r / rstar, -alpha - 1.0);
        };
        double total = 0.0, t = rstar;
        for (int k = 0; k < 80; ++k) {
            total += adaptive_simpson(h, t, 2.0 * t, rel_tol * g_bound * 1e-2);
            t *= 2.0;
            if (tail(t) * g_bound <= rel_tol * std::max(std::abs(total), 1e-300)) break;
        }
        return total;
    }
    }
    return 0.0;
}

} // namespace perc
