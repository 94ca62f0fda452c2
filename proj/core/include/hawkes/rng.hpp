#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

/// Deterministic per-path random stream. The engine is seeded from
/// (master seed, stream index) through a splitmix64 mix, so path i draws the
/// same variates no matter how paths are distributed over threads.
/// All variate transforms are hand-rolled: standard-library distributions are
/// implementation-defined and would break byte-identical output across
/// toolchains.
class PathRng {
public:
    PathRng(std::uint64_t master_seed, std::uint64_t stream) {
        std::uint64_t x = master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        engine_.seed(mix(x));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate.
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

    /// Poisson by uniform products; the mean is chunked to avoid underflow.
    std::uint64_t poisson(double mean) {
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

private:
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        while (true) {
            p *= uniform();
            if (p <= limit) {
                return k;
            }
            ++k;
        }
    }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace hawkes
