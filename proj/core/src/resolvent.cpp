#include "hawkes/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace hawkes {

Grid::Grid(double step_, std::size_t n_nodes_) : step(step_), n_nodes(n_nodes_) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("grid step must be positive");
    }
    if (n_nodes < 2) {
        throw std::invalid_argument("grid needs at least two nodes");
    }
}

std::size_t Grid::index_near(double t) const {
    const double k = t / step;
    const auto idx = static_cast<long long>(std::llround(k));
    if (idx < 0 || static_cast<std::size_t>(idx) >= n_nodes) {
        throw std::out_of_range("time outside the grid horizon");
    }
    return static_cast<std::size_t>(idx);
}

Grid Grid::with_horizon(double horizon, double step) {
    if (!(horizon > 0.0) || !(step > 0.0)) {
        throw std::invalid_argument("grid horizon and step must be positive");
    }
    const auto intervals = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    return Grid(horizon / static_cast<double>(std::max<std::size_t>(intervals, 1)),
                std::max<std::size_t>(intervals, 1) + 1);
}

std::vector<double> convolve(std::span<const double> f, std::span<const double> g, double step) {
    if (f.size() != g.size()) {
        throw std::invalid_argument("convolve: size mismatch");
    }
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.5 * (f[k] * g[0] + f[0] * g[k]);
        for (std::size_t j = 1; j < k; ++j) {
            acc += f[k - j] * g[j];
        }
        out[k] = step * acc;
    }
    return out;
}

std::vector<double> sample_on_grid(const Kernel& kernel, const Grid& grid) {
    std::vector<double> out(grid.n_nodes);
    for (std::size_t k = 0; k < grid.n_nodes; ++k) {
        out[k] = kernel(grid.node(k));
    }
    return out;
}

std::vector<double> iterated_convolution(const Kernel& kernel, std::size_t n, const Grid& grid) {
    if (n == 0) {
        throw std::invalid_argument("iterated convolution order must be at least 1");
    }
    auto phi = sample_on_grid(kernel, grid);
    auto current = phi;
    for (std::size_t m = 2; m <= n; ++m) {
        current = convolve(phi, current, grid.step);
    }
    return current;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, double step) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t k = 1; k < values.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * step * (values[k - 1] + values[k]);
    }
    return out;
}

ResolventTable::ResolventTable(Grid grid, std::vector<double> psi, std::vector<double> cum,
                               double kernel_l1, double residual)
    : grid_(grid), psi_(std::move(psi)), cum_(std::move(cum)),
      kernel_l1_(kernel_l1), residual_(residual) {}

namespace {

double interpolate(const Grid& grid, std::span<const double> table, double t) {
    if (t < 0.0 || t > grid.horizon() * (1.0 + 1e-12) + 1e-15) {
        throw std::out_of_range("time outside the resolvent horizon");
    }
    const double pos = std::min(t / grid.step, static_cast<double>(table.size() - 1));
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= table.size()) {
        return table.back();
    }
    const double frac = pos - static_cast<double>(k);
    return table[k] + frac * (table[k + 1] - table[k]);
}

} // namespace

double ResolventTable::psi_at(double t) const { return interpolate(grid_, psi_, t); }
double ResolventTable::cum_at(double t) const { return interpolate(grid_, cum_, t); }

ResolventTable resolvent(const Kernel& kernel, const Grid& grid) {
    const auto phi = sample_on_grid(kernel, grid);
    const double h = grid.step;
    const std::size_t n = grid.n_nodes;
    std::vector<double> psi(n, 0.0);
    psi[0] = phi[0]; // forced by the equation at t = 0 (empty convolution)
    const double diag = 1.0 - 0.5 * h * phi[0];
    if (!(diag > 0.0)) {
        throw numerical_error("grid step too coarse for the forward Volterra solve");
    }
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.5 * phi[k] * psi[0];
        for (std::size_t j = 1; j < k; ++j) {
            acc += phi[k - j] * psi[j];
        }
        double value = (phi[k] + h * acc) / diag;
        if (!std::isfinite(value)) {
            throw numerical_error("non-finite value in resolvent solve");
        }
        if (value < 0.0) {
            if (value < -1e-12) {
                throw numerical_error("negative resolvent value beyond roundoff");
            }
            value = 0.0;
        }
        psi[k] = value;
    }

    const auto conv = convolve(phi, psi, h);
    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        residual = std::max(residual, std::abs(psi[k] - phi[k] - conv[k]));
    }

    auto cum = cumulative_trapezoid(psi, h);
    return ResolventTable(grid, std::move(psi), std::move(cum), kernel.l1_norm(), residual);
}

VolterraSolution solve_volterra(std::span<const double> g, const Kernel& kernel,
                                const ResolventTable& table) {
    const Grid& grid = table.grid();
    if (g.size() != grid.n_nodes) {
        throw std::invalid_argument("solve_volterra: g must be tabulated on the grid");
    }
    for (double v : g) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("solve_volterra: g must be finite on all nodes");
        }
    }
    const auto phi = sample_on_grid(kernel, grid);
    const double h = grid.step;
    const std::size_t n = grid.n_nodes;

    std::vector<double> f(n, 0.0);
    f[0] = g[0];
    const double diag = 1.0 - 0.5 * h * phi[0];
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.5 * phi[k] * f[0];
        for (std::size_t j = 1; j < k; ++j) {
            acc += phi[k - j] * f[j];
        }
        f[k] = (g[k] + h * acc) / diag;
    }

    std::vector<double> gv(g.begin(), g.end());
    const auto psi_g = convolve(table.psi(), gv, h);
    double discrepancy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        discrepancy = std::max(discrepancy, std::abs(f[k] - (g[k] + psi_g[k])));
    }
    return VolterraSolution{std::move(f), discrepancy};
}

VolterraSolution solve_volterra(std::span<const double> g, const Kernel& kernel, const Grid& grid) {
    return solve_volterra(g, kernel, resolvent(kernel, grid));
}

} // namespace hawkes
