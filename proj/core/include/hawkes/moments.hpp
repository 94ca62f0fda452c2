#pragma once

#include <span>
#include <string>
#include <vector>

#include "hawkes/resolvent.hpp"

namespace hawkes {

enum class Quantity {
    mean_count,
    mean_intensity,
    cov_count,
    cov_intensity,
    cov_intensity_count, // Cov(lambda_s, H_t)
    cov_count_intensity, // Cov(H_s, lambda_t)
    second_moment_count,
};

enum class MixedOrder { intensity_first, count_first };

Quantity quantity_from_string(const std::string& name);
std::string to_string(Quantity q);

struct CovarianceSurface {
    std::vector<double> s_nodes;
    std::vector<double> t_nodes;
    std::vector<double> values; // row-major, s index major
    Quantity quantity;

    double at(std::size_t i, std::size_t j) const { return values[i * t_nodes.size() + j]; }
};

/// Exact first- and second-order statistics of the Hawkes process and its
/// intensity, evaluated from a resolvent table.
///
/// All covariance formulas carry a leading factor mu. The convention here is
/// that every second-order statistic scales linearly in mu with the kernel
/// fixed; the Poisson collapse (Phi = 0 gives Cov(H_s,H_t) = mu*s) and the
/// Monte Carlo validation suite pin this down.
class MomentEngine {
public:
    MomentEngine(ModelParams params, ResolventTable table);

    double mean_intensity(double t) const;
    double mean_count(double t) const;
    /// Cov(H_s, H_t) = mu int_0^s (1+I(v)) (1+I(s-v)) (1+I(t-v)) dv, s <= t.
    double cov_count(double s, double t) const;
    /// Cov(lambda_s, lambda_t) = mu int_0^s Psi(s-v) Psi(t-v) (1+I(v)) dv, s <= t.
    double cov_intensity(double s, double t) const;
    /// intensity_first: Cov(lambda_s, H_t); count_first: Cov(H_s, lambda_t); s <= t.
    double cov_mixed(double s, double t, MixedOrder order) const;
    double second_moment_count(double t) const;

    /// Dispatch on quantity; swaps (s, t) and transposes the mixed order when
    /// s > t so the full surface follows the s <= t convention.
    double evaluate(Quantity q, double s, double t) const;

    CovarianceSurface surface(std::span<const double> s_nodes, std::span<const double> t_nodes,
                              Quantity q) const;

    /// Distance from t to the nearest grid node (arguments are snapped).
    double snap_distance(double t) const;

    const ModelParams& params() const { return params_; }
    const ResolventTable& table() const { return table_; }

private:
    std::size_t snap(double t) const;
    double integrate_diag(std::size_t is, std::size_t it, MixedOrder order, bool psi_s,
                          bool psi_t) const;

    ModelParams params_;
    ResolventTable table_;
    std::vector<double> one_plus_cum_; // 1 + I(t_k)
    std::vector<double> count_cum_;    // int_0^{t_k} mu (1 + I(u)) du
};

} // namespace hawkes
