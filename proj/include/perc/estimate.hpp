#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

namespace perc {

// Monte Carlo estimate with its standard error and seed provenance.
struct EstimateResult {
    double estimate = 0.0;
    double std_error = 0.0;
    long long reps = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> metadata;

    // Bernoulli estimate from a success count.
    static EstimateResult from_indicator(long long successes, long long reps, std::uint64_t seed) {
        EstimateResult r;
        r.reps = reps;
        r.seed = seed;
        if (reps > 0) {
            double p = static_cast<double>(successes) / static_cast<double>(reps);
            r.estimate = p;
            r.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
        }
        return r;
    }

    // Sample-mean estimate from accumulated sum and sum of squares.
    static EstimateResult from_moments(double sum, double sum_sq, long long reps, std::uint64_t seed) {
        EstimateResult r;
        r.reps = reps;
        r.seed = seed;
        if (reps > 0) {
            double mean = sum / static_cast<double>(reps);
            r.estimate = mean;
            if (reps > 1) {
                double var = (sum_sq - sum * mean) / static_cast<double>(reps - 1);
                if (var < 0.0) var = 0.0;
                r.std_error = std::sqrt(var / static_cast<double>(reps));
            }
        }
        return r;
    }
};

} // namespace perc
