#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace perc {

// Seeded random stream. A (seed, stream) pair pins the entire draw sequence:
// mt19937_64 is fully specified by the standard, and all distributions below are
// hand-rolled (inverse method / Knuth product), so sequences are bit-identical
// across platforms and compilers. Replications own distinct streams.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::mt19937_64 engine;

    RngStream() : engine(mix(0, 0)) {}
    RngStream(std::uint64_t seed_, std::uint64_t stream_)
        : seed(seed_), stream(stream_), engine(mix(seed_, stream_)) {}

    // splitmix64 finalizer applied twice; decorrelates nearby (seed, stream) pairs.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        for (int round = 0; round < 2; ++round) {
            z += 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            z = z ^ (z >> 31);
        }
        return z;
    }

    std::uint64_t next_u64() { return engine(); }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Exponential with given rate; inverse method. uniform() < 1 so the log is finite.
    double exponential(double rate) {
        if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be > 0");
        return -std::log1p(-uniform()) / rate;
    }

    // Exact Poisson sampler. Knuth's product method needs exp(-mean) to stay
    // above underflow, so large means are handled additively: a Poisson(m) is
    // the independent sum of Poisson(60) chunks plus a Poisson remainder,
    // which is exact for any split and keeps every factor in range.
    long long poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        long long total = 0;
        while (mean > 60.0) {
            total += poisson_knuth(60.0);
            mean -= 60.0;
        }
        return total + poisson_knuth(mean);
    }

  private:
    long long poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        long long k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k - 1;
    }
};

} // namespace perc
