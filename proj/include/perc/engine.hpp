#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "perc/estimate.hpp"
#include "perc/rng.hpp"

namespace perc {

// Monte Carlo estimate of P(trial succeeds). Replication r always uses
// RngStream(seed, r), and workers own contiguous replication ranges with
// integer success counts merged in worker order, so the estimate is
// bit-identical for every thread count.
inline EstimateResult estimate_probability(const std::function<bool(RngStream&)>& trial,
                                           std::uint64_t seed, long long reps, int threads = 1) {
    if (reps < 1) throw std::invalid_argument("estimate_probability: reps must be >= 1");
    threads = std::max(1, threads);
    threads = static_cast<int>(std::min<long long>(threads, reps));
    std::vector<long long> counts(static_cast<size_t>(threads), 0);
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    auto worker = [&](int t) {
        try {
            const long long begin = reps * t / threads;
            const long long end = reps * (t + 1) / threads;
            long long c = 0;
            for (long long r = begin; r < end; ++r) {
                RngStream rng(seed, static_cast<std::uint64_t>(r));
                if (trial(rng)) ++c;
            }
            counts[static_cast<size_t>(t)] = c;
        } catch (...) {
            errors[static_cast<size_t>(t)] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    long long successes = 0;
    for (long long c : counts) successes += c;
    return EstimateResult::from_indicator(successes, reps, seed);
}

struct ProbePoint {
    double x = 0.0; // parameter value probed
    EstimateResult result;
};

struct CriticalResult {
    double lower = 0.0, upper = 0.0; // final bracket
    double estimate = 0.0;           // bracket midpoint
    bool increasing = true;          // response direction detected from the bracket ends
    bool monotone_warning = false;   // probes out of order beyond 3 joint std errors
    std::vector<ProbePoint> trace;
};

// Bisection for the parameter value where P(trial(x)) crosses `target`.
// Every probe draws fresh replication streams (seed mixed with the probe
// ordinal) so probe errors are independent; the bracket must straddle the
// target or the search refuses to start.
inline CriticalResult find_critical(const std::function<bool(double, RngStream&)>& trial,
                                    double lower, double upper, double target, double tolerance,
                                    std::uint64_t seed, long long reps_per_probe,
                                    int threads = 1) {
    if (!(lower < upper)) throw std::invalid_argument("find_critical: need lower < upper");
    if (!(tolerance > 0.0)) throw std::invalid_argument("find_critical: tolerance must be > 0");
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("find_critical: target must be in (0,1)");

    CriticalResult out;
    out.lower = lower;
    out.upper = upper;
    int probe_ordinal = 0;
    auto probe = [&](double x) {
        std::uint64_t probe_seed = RngStream::mix(seed, static_cast<std::uint64_t>(probe_ordinal++));
        auto bound = [&trial, x](RngStream& rng) { return trial(x, rng); };
        ProbePoint p;
        p.x = x;
        p.result = estimate_probability(bound, probe_seed, reps_per_probe, threads);
        out.trace.push_back(p);
        return p.result;
    };

    EstimateResult at_lo = probe(lower);
    EstimateResult at_hi = probe(upper);
    out.increasing = at_hi.estimate >= at_lo.estimate;
    const bool lo_below = at_lo.estimate < target;
    const bool hi_below = at_hi.estimate < target;
    if (lo_below == hi_below)
        throw std::runtime_error(
            "find_critical: bracket does not straddle the target (estimates " +
            std::to_string(at_lo.estimate) + " and " + std::to_string(at_hi.estimate) +
            " vs target " + std::to_string(target) + ")");

    while (out.upper - out.lower > tolerance) {
        double mid = 0.5 * (out.lower + out.upper);
        EstimateResult at_mid = probe(mid);
        if ((at_mid.estimate > target) == out.increasing)
            out.upper = mid;
        else
            out.lower = mid;
    }
    out.estimate = 0.5 * (out.lower + out.upper);

    // Flag probe pairs whose ordering contradicts the detected direction by
    // more than combined noise (finite-size effects, not an error).
    std::vector<ProbePoint> sorted = out.trace;
    std::sort(sorted.begin(), sorted.end(),
              [](const ProbePoint& a, const ProbePoint& b) { return a.x < b.x; });
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        double step = sorted[i + 1].result.estimate - sorted[i].result.estimate;
        if (!out.increasing) step = -step;
        double slack = 3.0 * (sorted[i].result.std_error + sorted[i + 1].result.std_error);
        if (step < -slack) out.monotone_warning = true;
    }
    return out;
}

struct SweepPoint {
    double x = 0.0;
    EstimateResult result;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double largest_positive = 0.0; // largest grid value whose estimate clears 3 std errors above 0
    bool any_positive = false;
};

// Evaluate P(trial(x)) along an ascending grid; each grid point gets its own
// seed material. Used for sweeps over the interference factor, where the
// reported threshold is the largest grid value still showing a significantly
// positive probability.
inline SweepResult sweep_grid(const std::function<bool(double, RngStream&)>& trial,
                              const std::vector<double>& grid, std::uint64_t seed, long long reps,
                              int threads = 1) {
    if (grid.empty()) throw std::invalid_argument("sweep_grid: grid must be nonempty");
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("sweep_grid: grid must be sorted strictly ascending");
    SweepResult out;
    for (size_t i = 0; i < grid.size(); ++i) {
        double x = grid[i];
        std::uint64_t point_seed = RngStream::mix(seed, static_cast<std::uint64_t>(i));
        auto bound = [&trial, x](RngStream& rng) { return trial(x, rng); };
        SweepPoint p;
        p.x = x;
        p.result = estimate_probability(bound, point_seed, reps, threads);
        out.points.push_back(p);
        if (p.result.estimate - 3.0 * p.result.std_error > 0.0) {
            out.largest_positive = x;
            out.any_positive = true;
        }
    }
    return out;
}

} // namespace perc
