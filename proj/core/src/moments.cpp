#include "hawkes/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hawkes {

Quantity quantity_from_string(const std::string& name) {
    if (name == "mean_count") return Quantity::mean_count;
    if (name == "mean_intensity") return Quantity::mean_intensity;
    if (name == "cov_count") return Quantity::cov_count;
    if (name == "cov_intensity") return Quantity::cov_intensity;
    if (name == "cov_intensity_count") return Quantity::cov_intensity_count;
    if (name == "cov_count_intensity") return Quantity::cov_count_intensity;
    if (name == "second_moment_count") return Quantity::second_moment_count;
    throw std::invalid_argument("unknown quantity: " + name);
}

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::mean_count: return "mean_count";
        case Quantity::mean_intensity: return "mean_intensity";
        case Quantity::cov_count: return "cov_count";
        case Quantity::cov_intensity: return "cov_intensity";
        case Quantity::cov_intensity_count: return "cov_intensity_count";
        case Quantity::cov_count_intensity: return "cov_count_intensity";
        case Quantity::second_moment_count: return "second_moment_count";
    }
    throw std::invalid_argument("unknown quantity");
}

MomentEngine::MomentEngine(ModelParams params, ResolventTable table)
    : params_(std::move(params)), table_(std::move(table)) {
    const auto cum = table_.cum();
    one_plus_cum_.resize(cum.size());
    for (std::size_t k = 0; k < cum.size(); ++k) {
        one_plus_cum_[k] = 1.0 + cum[k];
    }
    count_cum_.resize(cum.size(), 0.0);
    const double h = table_.grid().step;
    for (std::size_t k = 1; k < cum.size(); ++k) {
        count_cum_[k] = count_cum_[k - 1] +
                        0.5 * h * params_.mu * (one_plus_cum_[k - 1] + one_plus_cum_[k]);
    }
}

std::size_t MomentEngine::snap(double t) const {
    if (t < 0.0) {
        throw std::out_of_range("negative time");
    }
    return table_.grid().index_near(t);
}

double MomentEngine::snap_distance(double t) const {
    return std::abs(t - table_.grid().node(snap(t)));
}

double MomentEngine::mean_intensity(double t) const {
    return params_.mu * one_plus_cum_[snap(t)];
}

double MomentEngine::mean_count(double t) const { return count_cum_[snap(t)]; }

namespace {

// trapezoid over indices 0..m of the node values produced by `f`
template <typename F>
double trapz(std::size_t m, double h, F&& f) {
    if (m == 0) {
        return 0.0;
    }
    double acc = 0.5 * (f(std::size_t{0}) + f(m));
    for (std::size_t v = 1; v < m; ++v) {
        acc += f(v);
    }
    return h * acc;
}

} // namespace

double MomentEngine::cov_count(double s, double t) const {
    if (s > t) {
        return cov_count(t, s);
    }
    const std::size_t is = snap(s);
    const std::size_t it = snap(t);
    const auto& a = one_plus_cum_;
    return params_.mu * trapz(is, table_.grid().step, [&](std::size_t v) {
        return a[v] * a[is - v] * a[it - v];
    });
}

double MomentEngine::cov_intensity(double s, double t) const {
    if (s > t) {
        return cov_intensity(t, s);
    }
    const std::size_t is = snap(s);
    const std::size_t it = snap(t);
    const auto psi = table_.psi();
    const auto& a = one_plus_cum_;
    return params_.mu * trapz(is, table_.grid().step, [&](std::size_t v) {
        return psi[is - v] * psi[it - v] * a[v];
    });
}

double MomentEngine::cov_mixed(double s, double t, MixedOrder order) const {
    if (s > t) {
        const MixedOrder transposed =
            order == MixedOrder::intensity_first ? MixedOrder::count_first
                                                 : MixedOrder::intensity_first;
        return cov_mixed(t, s, transposed);
    }
    const std::size_t is = snap(s);
    const std::size_t it = snap(t);
    const auto psi = table_.psi();
    const auto& a = one_plus_cum_;
    if (order == MixedOrder::intensity_first) {
        return params_.mu * trapz(is, table_.grid().step, [&](std::size_t v) {
            return psi[is - v] * a[v] * a[it - v];
        });
    }
    return params_.mu * trapz(is, table_.grid().step, [&](std::size_t v) {
        return psi[it - v] * a[v] * a[is - v];
    });
}

double MomentEngine::second_moment_count(double t) const {
    const std::size_t it = snap(t);
    const auto& a = one_plus_cum_;
    const double mean = count_cum_[it];
    const double var_term = params_.mu * trapz(it, table_.grid().step, [&](std::size_t v) {
        return a[v] * a[it - v] * a[it - v];
    });
    return mean * mean + var_term;
}

double MomentEngine::evaluate(Quantity q, double s, double t) const {
    switch (q) {
        case Quantity::mean_count: return mean_count(t);
        case Quantity::mean_intensity: return mean_intensity(t);
        case Quantity::cov_count: return cov_count(s, t);
        case Quantity::cov_intensity: return cov_intensity(s, t);
        case Quantity::cov_intensity_count: return cov_mixed(s, t, MixedOrder::intensity_first);
        case Quantity::cov_count_intensity: return cov_mixed(s, t, MixedOrder::count_first);
        case Quantity::second_moment_count: return second_moment_count(t);
    }
    throw std::invalid_argument("unknown quantity");
}

CovarianceSurface MomentEngine::surface(std::span<const double> s_nodes,
                                        std::span<const double> t_nodes, Quantity q) const {
    CovarianceSurface out;
    out.s_nodes.assign(s_nodes.begin(), s_nodes.end());
    out.t_nodes.assign(t_nodes.begin(), t_nodes.end());
    out.quantity = q;
    out.values.reserve(s_nodes.size() * t_nodes.size());
    for (double s : s_nodes) {
        for (double t : t_nodes) {
            out.values.push_back(evaluate(q, s, t));
        }
    }
    return out;
}

} // namespace hawkes
