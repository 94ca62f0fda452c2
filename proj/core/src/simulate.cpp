#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "hawkes/rng.hpp"

namespace hawkes {

std::size_t SimulatedPath::count_up_to(double t) const {
    return static_cast<std::size_t>(
        std::upper_bound(events.begin(), events.end(), t) - events.begin());
}

namespace {

/// Samples offspring arrival offsets by exact inversion of the integrated
/// rate int_0^tau Phi. Exponential and power-law shapes invert in closed
/// form; tabulated shapes invert the piecewise-quadratic cumulative segment
/// by segment.
class OffspringSampler {
public:
    explicit OffspringSampler(const Kernel& kernel) : kernel_(kernel) {
        if (const auto* t = std::get_if<TabulatedShape>(&kernel.shape())) {
            cum_.resize(t->values.size(), 0.0);
            for (std::size_t k = 1; k < t->values.size(); ++k) {
                cum_[k] = cum_[k - 1] + 0.5 * t->step * (t->values[k - 1] + t->values[k]);
            }
        }
    }

    double mass(double length) const {
        if (length <= 0.0) {
            return 0.0;
        }
        if (const auto* e = std::get_if<ExponentialShape>(&kernel_.shape())) {
            return e->alpha / e->beta * (1.0 - std::exp(-e->beta * length));
        }
        if (const auto* p = std::get_if<PowerLawShape>(&kernel_.shape())) {
            return p->alpha / (p->gamma - 1.0) *
                   (std::pow(p->c, 1.0 - p->gamma) - std::pow(p->c + length, 1.0 - p->gamma));
        }
        const auto& t = std::get<TabulatedShape>(kernel_.shape());
        const double support = t.step * static_cast<double>(t.values.size() - 1);
        if (length >= support) {
            return cum_.back();
        }
        const auto k = static_cast<std::size_t>(length / t.step);
        const double x = length - t.step * static_cast<double>(k);
        const double slope = (t.values[k + 1] - t.values[k]) / t.step;
        return cum_[k] + t.values[k] * x + 0.5 * slope * x * x;
    }

    double invert(double m) const {
        if (const auto* e = std::get_if<ExponentialShape>(&kernel_.shape())) {
            return -std::log1p(-e->beta * m / e->alpha) / e->beta;
        }
        if (const auto* p = std::get_if<PowerLawShape>(&kernel_.shape())) {
            const double base = std::pow(p->c, 1.0 - p->gamma) - m * (p->gamma - 1.0) / p->alpha;
            return std::pow(base, -1.0 / (p->gamma - 1.0)) - p->c;
        }
        const auto& t = std::get<TabulatedShape>(kernel_.shape());
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), m);
        const auto k = static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cum_.begin() - 1,
                                     static_cast<std::ptrdiff_t>(cum_.size()) - 2));
        const double r = m - cum_[k];
        const double v = t.values[k];
        const double slope = (t.values[k + 1] - t.values[k]) / t.step;
        const double disc = v * v + 2.0 * slope * r;
        const double denom = v + std::sqrt(std::max(disc, 0.0));
        const double x = denom > 0.0 ? 2.0 * r / denom : 0.0;
        return t.step * static_cast<double>(k) + x;
    }

private:
    const Kernel& kernel_;
    std::vector<double> cum_; // tabulated only
};

void spawn_cluster(double root, double horizon, const OffspringSampler& sampler, PathRng& rng,
                   std::vector<double>& events) {
    std::vector<double> stack{root};
    while (!stack.empty()) {
        const double parent = stack.back();
        stack.pop_back();
        const double total = sampler.mass(horizon - parent);
        const std::uint64_t count = rng.poisson(total);
        for (std::uint64_t j = 0; j < count; ++j) {
            const double child = parent + sampler.invert(rng.uniform() * total);
            if (child <= horizon) {
                events.push_back(child);
                stack.push_back(child);
            }
        }
    }
}

SimulatedPath branching_path(const ModelParams& params, double horizon,
                             const std::vector<double>& forced_times, PathRng& rng) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("simulation horizon must be positive");
    }
    const OffspringSampler sampler(params.kernel);
    SimulatedPath path;
    path.horizon = horizon;

    const std::uint64_t immigrants = rng.poisson(params.mu * horizon);
    for (std::uint64_t i = 0; i < immigrants; ++i) {
        const double t = rng.uniform() * horizon;
        path.events.push_back(t);
        spawn_cluster(t, horizon, sampler, rng, path.events);
    }
    for (double f : forced_times) {
        path.events.push_back(f);
        path.forced.push_back(f);
        spawn_cluster(f, horizon, sampler, rng, path.events);
    }
    std::sort(path.events.begin(), path.events.end());
    return path;
}

void check_forced_times(const std::vector<double>& forced_times, double horizon) {
    for (std::size_t i = 0; i < forced_times.size(); ++i) {
        if (!(forced_times[i] > 0.0) || forced_times[i] > horizon) {
            throw std::invalid_argument("forced times must lie in (0, horizon]");
        }
        if (i > 0 && !(forced_times[i] > forced_times[i - 1])) {
            throw std::invalid_argument("forced times must be strictly increasing");
        }
    }
}

} // namespace

SimulatedPath simulate_hawkes(const ModelParams& params, double horizon, std::uint64_t seed) {
    PathRng rng(seed, 0);
    return branching_path(params, horizon, {}, rng);
}

SimulatedPath simulate_shifted(const ModelParams& params, double horizon,
                               const std::vector<double>& forced_times, std::uint64_t seed) {
    check_forced_times(forced_times, horizon);
    PathRng rng(seed, 0);
    return branching_path(params, horizon, forced_times, rng);
}

SimulatedPath simulate_thinning(const ModelParams& params, double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("simulation horizon must be positive");
    }
    if (!params.kernel.is_nonincreasing()) {
        throw unsupported_kernel_error(
            "thinning needs a nonincreasing kernel; use the branching simulator instead");
    }
    PathRng rng(seed, 0);
    SimulatedPath path;
    path.horizon = horizon;
    const auto& phi = params.kernel;

    double t = 0.0;
    double majorant = params.mu; // lambda(0+) with no events yet
    while (majorant > 0.0) {
        const double candidate = t + rng.exponential(majorant);
        if (candidate > horizon) {
            break;
        }
        double lam = params.mu;
        for (double e : path.events) {
            if (e < candidate) {
                lam += phi(candidate - e);
            }
        }
        if (rng.uniform() * majorant <= lam) {
            path.events.push_back(candidate);
        }
        t = candidate;
        majorant = params.mu;
        for (double e : path.events) {
            majorant += phi(t - e); // Phi(0) for the event just accepted at t
        }
    }
    return path;
}

double intensity_on_path(const SimulatedPath& path, const ModelParams& params, double t) {
    if (t < 0.0 || t > path.horizon) {
        throw std::out_of_range("intensity query outside [0, horizon]");
    }
    double lam = params.mu;
    for (double e : path.events) {
        if (e >= t) {
            break;
        }
        lam += params.kernel(t - e);
    }
    return lam;
}

namespace {

std::size_t thread_budget() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HAWKES_THREADS")) {
        const long cap = std::atol(env);
        if (cap >= 1) {
            n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
        }
    }
    return std::min<std::size_t>(n, 64);
}

double mean_of(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) {
        acc += v;
    }
    return acc / static_cast<double>(x.size());
}

McEstimate mean_estimate(const std::vector<double>& x, std::uint64_t seed) {
    const auto n = x.size();
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return McEstimate{m, sd / std::sqrt(static_cast<double>(n)), n, seed};
}

// plug-in covariance with a first-order delta-method standard error from the
// per-path product deviations
McEstimate cov_estimate(const std::vector<double>& x, const std::vector<double>& y,
                        std::uint64_t seed) {
    const auto n = x.size();
    const double mx = mean_of(x);
    const double my = mean_of(y);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = (x[i] - mx) * (y[i] - my);
    }
    double cov = 0.0;
    for (double v : d) {
        cov += v;
    }
    cov /= static_cast<double>(n - 1);
    const double md = mean_of(d);
    double ss = 0.0;
    for (double v : d) {
        ss += (v - md) * (v - md);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return McEstimate{cov, sd / std::sqrt(static_cast<double>(n)), n, seed};
}

} // namespace

std::map<std::string, McEstimate> mc_moment_estimates(const ModelParams& params, double horizon,
                                                      double s, double t, std::size_t n_paths,
                                                      std::uint64_t seed) {
    if (!(0.0 <= s && s <= t && t <= horizon)) {
        throw std::invalid_argument("need 0 <= s <= t <= horizon");
    }
    if (n_paths < 2) {
        throw std::invalid_argument("need at least two paths");
    }

    std::vector<double> hs(n_paths), ht(n_paths), ls(n_paths), lt(n_paths);
    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            PathRng rng(seed, i);
            const SimulatedPath path = branching_path(params, horizon, {}, rng);
            hs[i] = static_cast<double>(path.count_up_to(s));
            ht[i] = static_cast<double>(path.count_up_to(t));
            ls[i] = intensity_on_path(path, params, s);
            lt[i] = intensity_on_path(path, params, t);
        }
    };

    const std::size_t n_threads = std::min(thread_budget(), n_paths);
    if (n_threads <= 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (n_paths + n_threads - 1) / n_threads;
        for (std::size_t k = 0; k < n_threads; ++k) {
            const std::size_t begin = k * chunk;
            const std::size_t end = std::min(begin + chunk, n_paths);
            if (begin < end) {
                threads.emplace_back(worker, begin, end);
            }
        }
        for (auto& th : threads) {
            th.join();
        }
    }

    std::map<std::string, McEstimate> out;
    out["mean_count"] = mean_estimate(ht, seed);
    out["mean_intensity"] = mean_estimate(lt, seed);
    out["cov_count"] = cov_estimate(hs, ht, seed);
    out["cov_intensity"] = cov_estimate(ls, lt, seed);
    out["cov_intensity_count"] = cov_estimate(ls, ht, seed);
    out["cov_count_intensity"] = cov_estimate(hs, lt, seed);
    return out;
}

} // namespace hawkes
