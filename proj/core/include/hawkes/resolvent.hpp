#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

/// Uniform time grid t_k = k*step, k = 0..n_nodes-1.
struct Grid {
    double step;
    std::size_t n_nodes;

    Grid(double step_, std::size_t n_nodes_);

    double horizon() const { return step * static_cast<double>(n_nodes - 1); }
    double node(std::size_t k) const { return step * static_cast<double>(k); }

    /// Index of the grid node nearest to t. Throws std::out_of_range when t
    /// lies outside [0, horizon] by more than half a step.
    std::size_t index_near(double t) const;

    /// Grid covering [0, horizon] with spacing as close to `step` as an
    /// integer node count allows.
    static Grid with_horizon(double horizon, double step);
};

/// Trapezoidal discrete convolution (f*g)(t_k) = int_0^{t_k} f(t_k-u) g(u) du.
/// Node 0 is the empty integral, hence 0.
std::vector<double> convolve(std::span<const double> f, std::span<const double> g, double step);

/// Kernel sampled on the grid nodes.
std::vector<double> sample_on_grid(const Kernel& kernel, const Grid& grid);

/// Iterated convolution Phi_n (Phi_1 = Phi, Phi_n = Phi * Phi_{n-1}) on the
/// grid nodes. Throws std::invalid_argument for n = 0.
std::vector<double> iterated_convolution(const Kernel& kernel, std::size_t n, const Grid& grid);

/// Trapezoidal cumulative integral of a grid table; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> values, double step);

/// Resolvent Psi of Phi (sum of all iterated convolutions, equivalently the
/// unique solution of Psi = Phi + Phi * Psi) with its cumulative integral
/// I(t) = int_0^t Psi, tabulated on a uniform grid.
class ResolventTable {
public:
    ResolventTable(Grid grid, std::vector<double> psi, std::vector<double> cum,
                   double kernel_l1, double residual);

    const Grid& grid() const { return grid_; }
    std::span<const double> psi() const { return psi_; }
    std::span<const double> cum() const { return cum_; }
    double kernel_l1() const { return kernel_l1_; }
    /// Max-norm residual of Psi - Phi - Phi*Psi over the grid nodes.
    double residual() const { return residual_; }

    /// Psi(t) by linear interpolation between nodes.
    double psi_at(double t) const;
    /// I(t) = int_0^t Psi by linear interpolation between nodes.
    double cum_at(double t) const;

private:
    Grid grid_;
    std::vector<double> psi_;
    std::vector<double> cum_;
    double kernel_l1_;
    double residual_;
};

/// Computes the resolvent table by a node-by-node forward solve of the
/// discrete Volterra equation. Throws numerical_error on non-finite values.
ResolventTable resolvent(const Kernel& kernel, const Grid& grid);

struct VolterraSolution {
    std::vector<double> values;
    /// Max node-wise discrepancy between the forward solve of
    /// f = g + Phi*f and the resolvent form f = g + Psi*g.
    double route_discrepancy;
};

/// Solves f = g + Phi*f on the grid, both by forward substitution and via the
/// resolvent representation. Throws std::invalid_argument for non-finite g.
VolterraSolution solve_volterra(std::span<const double> g, const Kernel& kernel, const Grid& grid);
VolterraSolution solve_volterra(std::span<const double> g, const Kernel& kernel,
                                const ResolventTable& table);

} // namespace hawkes
