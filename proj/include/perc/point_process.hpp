#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/estimate.hpp"
#include "perc/geometry.hpp"
#include "perc/mark_distribution.hpp"
#include "perc/quadrature.hpp"
#include "perc/rng.hpp"

namespace perc {

// Hard cap on the expected point count of one replication; fail fast instead of
// exhausting memory on a mistyped intensity.
inline constexpr double max_expected_points = 1e8;

// Homogeneous Poisson process on the padded box of `window`: the count is
// Poisson(lambda * padded volume) and, given the count, points are i.i.d.
// uniform. Counts over disjoint sub-boxes then come out independent.
inline PointCloud sample_ppp(const Window& window, double lambda, RngStream& rng) {
    window.validate();
    if (lambda < 0.0) throw std::invalid_argument("sample_ppp: lambda must be >= 0");
    const double mean = lambda * window.volume_padded();
    if (mean > max_expected_points)
        throw std::runtime_error("sample_ppp: expected point count " + std::to_string(mean) +
                                 " exceeds hard cap");
    PointCloud cloud;
    cloud.window = window;
    const long long n = rng.poisson(mean);
    cloud.coords.resize(static_cast<std::size_t>(n) * window.d);
    const double lo = window.lo(), hi = window.hi();
    for (long long i = 0; i < n; ++i)
        for (int k = 0; k < window.d; ++k) cloud.coords[i * window.d + k] = rng.uniform(lo, hi);
    return cloud;
}

// Independent marking: marks i.i.d. from `dist`, positions untouched.
inline MarkedPointCloud attach_marks(const PointCloud& cloud, const MarkDistribution& dist,
                                     RngStream& rng) {
    dist.validate();
    MarkedPointCloud out;
    out.base = cloud;
    out.marks.resize(cloud.size());
    for (long long i = 0; i < cloud.size(); ++i) out.marks[i] = dist.sample(rng);
    return out;
}

// ------------------------------------------------------------- Laplace functionals

using ScalarField = std::function<double(const double* x, int d)>;
using MarkedScalarField = std::function<double(const double* x, int d, double mark)>;

// Monte Carlo estimate of E[exp(-sum_i f(X_i))] over the supplied clouds.
inline EstimateResult empirical_laplace(const ScalarField& f, const std::vector<PointCloud>& clouds) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& cloud : clouds) {
        double expo = 0.0;
        for (long long i = 0; i < cloud.size(); ++i) {
            double v = f(cloud.pt(i), cloud.dim());
            if (v < 0.0) throw std::invalid_argument("empirical_laplace: field takes negative values");
            expo += v;
        }
        double val = std::exp(-expo);
        sum += val;
        sum_sq += val * val;
    }
    return EstimateResult::from_moments(sum, sum_sq, static_cast<long long>(clouds.size()), 0);
}

// Marked variant: exponent sums f(X_i, m_i).
inline EstimateResult empirical_laplace(const MarkedScalarField& f,
                                        const std::vector<MarkedPointCloud>& clouds) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& mc : clouds) {
        double expo = 0.0;
        for (long long i = 0; i < mc.size(); ++i) {
            double v = f(mc.base.pt(i), mc.base.dim(), mc.marks[i]);
            if (v < 0.0) throw std::invalid_argument("empirical_laplace: field takes negative values");
            expo += v;
        }
        double val = std::exp(-expo);
        sum += val;
        sum_sq += val * val;
    }
    return EstimateResult::from_moments(sum, sum_sq, static_cast<long long>(clouds.size()), 0);
}

// Closed-form Laplace functional of the homogeneous process over the padded box
// (the sampling domain): exp( lambda * int (e^{-f(x)} - 1) dx ), evaluated by
// adaptive quadrature with relative error <= rel_tol. Throws if the quadrature
// cannot reach the target, reporting the error it achieved.
inline double campbell_laplace(const ScalarField& f, double lambda, const Window& window,
                               double rel_tol = 1e-6) {
    window.validate();
    const int d = window.d;
    auto g = [&](const double* x) {
        double v = f(x, d);
        if (v < 0.0) throw std::invalid_argument("campbell_laplace: field takes negative values");
        return std::exp(-v) - 1.0;
    };
    std::vector<double> lo(d, window.lo()), hi(d, window.hi());
    // |g| <= 1, so |integral| <= padded volume; use that scale for the budget.
    double abs_tol = rel_tol * std::max(1.0, window.volume_padded()) * 1e-2;
    BoxQuadResult q = integrate_box(g, lo, hi, abs_tol);
    double scale = std::max(std::abs(q.value), 1e-12);
    if (!q.converged || q.err_estimate > 2.0 * rel_tol * scale)
        throw std::runtime_error("campbell_laplace: quadrature did not converge (achieved rel err " +
                                 std::to_string(q.err_estimate / scale) + ")");
    return std::exp(lambda * q.value);
}

// Marked closed form under product intensity (position measure x mark kernel):
// exp( lambda * int E_K[e^{-f(x,rho)} - 1] dx ).
inline double campbell_laplace_marked(const MarkedScalarField& f, double lambda, const Window& window,
                                      const MarkDistribution& kernel, double rel_tol = 1e-6) {
    window.validate();
    kernel.validate();
    const int d = window.d;
    auto g = [&](const double* x) {
        double e = kernel.expect([&](double m) {
            double v = f(x, d, m);
            if (v < 0.0) throw std::invalid_argument("campbell_laplace_marked: field takes negative values");
            return std::exp(-v);
        });
        return e - 1.0;
    };
    std::vector<double> lo(d, window.lo()), hi(d, window.hi());
    double abs_tol = rel_tol * std::max(1.0, window.volume_padded()) * 1e-2;
    BoxQuadResult q = integrate_box(g, lo, hi, abs_tol);
    double scale = std::max(std::abs(q.value), 1e-12);
    if (!q.converged || q.err_estimate > 2.0 * rel_tol * scale)
        throw std::runtime_error("campbell_laplace_marked: quadrature did not converge");
    return std::exp(lambda * q.value);
}

} // namespace perc
