#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hawkes/resolvent.hpp"

using namespace hawkes;

namespace {

double l1_of(const std::vector<double>& table, double h) {
    double sum = 0.5 * (table.front() + table.back());
    for (std::size_t k = 1; k + 1 < table.size(); ++k) {
        sum += table[k];
    }
    return h * sum;
}

} // namespace

TEST_CASE("grid basics") {
    const Grid g(0.5, 5);
    CHECK(g.horizon() == doctest::Approx(2.0));
    CHECK(g.index_near(1.01) == 2);
    CHECK_THROWS_AS(g.index_near(2.6), std::out_of_range);
    CHECK_THROWS_AS(Grid(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.1, 1), std::invalid_argument);
    const Grid g2 = Grid::with_horizon(1.0, 1e-3);
    CHECK(g2.n_nodes == 1001);
}

TEST_CASE("iterated convolution of the exponential kernel") {
    // closed form: Phi_n(t) = alpha^n t^(n-1) e^(-beta t) / (n-1)!
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const Grid grid = Grid::with_horizon(2.0, 1e-3);
    const auto phi2 = iterated_convolution(kernel, 2, grid);
    CHECK(phi2[grid.index_near(1.0)] == doctest::Approx(std::exp(-2.0)).epsilon(1e-4));
    const auto phi3 = iterated_convolution(kernel, 3, grid);
    CHECK(phi3[grid.index_near(1.0)] ==
          doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-4));
}

TEST_CASE("iterated convolution edge cases") {
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const Grid grid(0.01, 101);
    CHECK_THROWS_AS(iterated_convolution(kernel, 0, grid), std::invalid_argument);
    const auto phi1 = iterated_convolution(kernel, 1, grid);
    for (std::size_t k = 0; k < grid.n_nodes; ++k) {
        CHECK(phi1[k] == kernel(grid.node(k)));
    }
    const auto zeros = iterated_convolution(Kernel::zero(), 4, grid);
    for (double v : zeros) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("resolvent of the exponential kernel is exponential") {
    // Psi(t) = alpha e^{-(beta-alpha) t} for Phi = alpha e^{-beta t}
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const auto table = resolvent(kernel, Grid::with_horizon(2.0, 1e-3));
    CHECK(table.psi_at(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
    CHECK(table.cum_at(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-5));
    CHECK(table.residual() < 1e-6 * std::exp(0.0));
}

TEST_CASE("zero kernel resolvent vanishes") {
    const auto table = resolvent(Kernel::zero(), Grid::with_horizon(2.0, 0.01));
    for (double v : table.psi()) {
        CHECK(v == 0.0);
    }
    CHECK(table.cum().back() == 0.0);
}

TEST_CASE("long-horizon cumulative approaches the norm identity") {
    // ||Psi||_1 = ||Phi||_1 / (1 - ||Phi||_1)
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const auto table = resolvent(kernel, Grid::with_horizon(10.0, 1e-3));
    CHECK(table.cum().back() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("truncated series converges to the resolvent") {
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const Grid grid = Grid::with_horizon(5.0, 2e-3);
    const auto table = resolvent(kernel, grid);
    const std::size_t N = 30;
    std::vector<double> series(grid.n_nodes, 0.0);
    auto conv = sample_on_grid(kernel, grid);
    const auto phi = conv;
    for (std::size_t n = 1; n <= N; ++n) {
        if (n > 1) {
            conv = convolve(phi, conv, grid.step);
        }
        for (std::size_t k = 0; k < grid.n_nodes; ++k) {
            series[k] += conv[k];
        }
    }
    double l1_dist = 0.0;
    for (std::size_t k = 0; k < grid.n_nodes; ++k) {
        l1_dist += std::abs(series[k] - table.psi()[k]);
    }
    l1_dist *= grid.step;
    const double l1 = kernel.l1_norm();
    const double truncation = std::pow(l1, N + 1) / (1.0 - l1);
    CHECK(l1_dist <= truncation + 1e-5);
}

TEST_CASE("kernel and resolvent commute under convolution") {
    const auto kernel = Kernel::power_law(1.5, 1.0, 4.0);
    const Grid grid = Grid::with_horizon(3.0, 2e-3);
    const auto table = resolvent(kernel, grid);
    const auto phi = sample_on_grid(kernel, grid);
    std::vector<double> psi(table.psi().begin(), table.psi().end());
    const auto ab = convolve(phi, psi, grid.step);
    const auto ba = convolve(psi, phi, grid.step);
    for (std::size_t k = 0; k < grid.n_nodes; ++k) {
        CHECK(ab[k] == doctest::Approx(ba[k]).epsilon(1e-8));
    }
}

TEST_CASE("iterated norms multiply") {
    // ||Phi_n||_1 = ||Phi||_1^n
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const Grid grid = Grid::with_horizon(30.0, 5e-3);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto phin = iterated_convolution(kernel, n, grid);
        CHECK(l1_of(phin, grid.step) ==
              doctest::Approx(std::pow(0.5, static_cast<double>(n))).epsilon(1e-4));
    }
}

TEST_CASE("ordered-simplex identity at n = 3") {
    // double integral of Phi_2 against the triple nested quadrature
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const double t = 1.0;
    const Grid grid = Grid::with_horizon(t, 1e-3);
    const auto phi2 = iterated_convolution(kernel, 2, grid);
    const auto inner = cumulative_trapezoid(phi2, grid.step);
    const double lhs = cumulative_trapezoid(inner, grid.step).back();

    // The simplex integral of Phi(v3-v2) Phi(v2-v1) over 0<v1<v2<v3<t reduces,
    // with u = v3-v2 and w = v2-v1, to int_{u+w<t} (t-u-w) Phi(u) Phi(w);
    // midpoint quadrature in (u, w) is second order since the integrand
    // vanishes on the oblique boundary.
    const double h = 0.005;
    const auto m = static_cast<std::size_t>(t / h);
    double rhs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * h;
        for (std::size_t j = 0; j < m; ++j) {
            const double w = (static_cast<double>(j) + 0.5) * h;
            if (u + w < t) {
                rhs += (t - u - w) * kernel(u) * kernel(w);
            }
        }
    }
    rhs *= h * h;
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-4));
}

TEST_CASE("volterra solve recovers known solutions") {
    const auto kernel = Kernel::exponential(1.0, 2.0);
    const Grid grid = Grid::with_horizon(2.0, 1e-3);
    const auto table = resolvent(kernel, grid);

    SUBCASE("constant forcing gives the intensity mean") {
        std::vector<double> g(grid.n_nodes, 1.0);
        const auto sol = solve_volterra(g, kernel, table);
        for (std::size_t k = 0; k < grid.n_nodes; k += 100) {
            CHECK(sol.values[k] == doctest::Approx(1.0 + table.cum()[k]).epsilon(1e-6));
        }
        CHECK(sol.route_discrepancy < 1e-6);
    }
    SUBCASE("zero kernel returns the forcing") {
        std::vector<double> g(grid.n_nodes);
        for (std::size_t k = 0; k < g.size(); ++k) {
            g[k] = std::sin(grid.node(k));
        }
        const auto sol = solve_volterra(g, Kernel::zero(), grid);
        for (std::size_t k = 0; k < g.size(); k += 50) {
            CHECK(sol.values[k] == doctest::Approx(g[k]));
        }
    }
    SUBCASE("forcing with the kernel itself returns the resolvent") {
        const auto g = sample_on_grid(kernel, grid);
        const auto sol = solve_volterra(g, kernel, table);
        for (std::size_t k = 0; k < g.size(); k += 100) {
            CHECK(sol.values[k] == doctest::Approx(table.psi()[k]).epsilon(1e-6));
        }
    }
    SUBCASE("non-finite forcing is rejected") {
        std::vector<double> g(grid.n_nodes, 1.0);
        g[5] = std::nan("");
        CHECK_THROWS_AS(solve_volterra(g, kernel, table), std::invalid_argument);
    }
}
