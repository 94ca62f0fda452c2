#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

/// One realization of the process on [0, horizon]. `forced` lists the
/// deterministically added atoms (a subset of `events`).
struct SimulatedPath {
    std::vector<double> events; // sorted, in [0, horizon]
    std::vector<double> forced; // sorted, subset of events
    double horizon = 0.0;

    /// H_t: number of events in (0, t].
    std::size_t count_up_to(double t) const;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Exact simulation via the branching (cluster) construction: immigrants are
/// Poisson(mu) on [0, T]; every event spawns offspring with rate Phi(.-parent),
/// recursively. Works for any admissible kernel.
SimulatedPath simulate_hawkes(const ModelParams& params, double horizon, std::uint64_t seed);

/// Exact simulation by thinning the Poisson imbedding (Ogata). Requires a
/// nonincreasing kernel for the majorant; throws unsupported_kernel_error
/// otherwise. Equal in law to simulate_hawkes; used as a cross-check.
SimulatedPath simulate_thinning(const ModelParams& params, double horizon, std::uint64_t seed);

/// Branching simulation plus deterministically forced atoms (each with its own
/// descendant cluster). Forced times must be strictly increasing in (0, T].
SimulatedPath simulate_shifted(const ModelParams& params, double horizon,
                               const std::vector<double>& forced_times, std::uint64_t seed);

/// lambda_t = mu + sum_{e < t} Phi(t - e). Strict inequality: the intensity is
/// the left limit, so an event at exactly t does not contribute.
double intensity_on_path(const SimulatedPath& path, const ModelParams& params, double t);

/// Monte Carlo estimates of the mean/covariance quantities from per-path
/// samples of (H_s, H_t, lambda_s, lambda_t). Keys: mean_count, mean_intensity
/// (both at t), cov_count, cov_intensity, cov_intensity_count,
/// cov_count_intensity. Deterministic for a fixed seed regardless of the
/// thread count (HAWKES_THREADS caps parallelism).
std::map<std::string, McEstimate> mc_moment_estimates(const ModelParams& params, double horizon,
                                                      double s, double t, std::size_t n_paths,
                                                      std::uint64_t seed);

} // namespace hawkes
