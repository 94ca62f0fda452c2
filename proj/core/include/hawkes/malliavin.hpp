#pragma once

#include <functional>
#include <vector>

#include "hawkes/resolvent.hpp"

namespace hawkes {

/// Marked point x = (t, theta) of the imbedding Poisson measure.
struct Atom {
    double t;
    double theta;
};

/// Finite configuration of atoms, strictly increasing in t (reordered at
/// construction; coincident times are rejected).
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
};

enum class Zeta { one, phi };

/// lambda_t evaluated on a deterministic configuration: atoms are accepted in
/// time order iff theta_k <= lambda_{t_k}(accepted predecessors); the result
/// is mu plus the excitation of the accepted atoms strictly before t.
double eval_intensity_config(const Configuration& config, const ModelParams& params, double t);

/// X_t^zeta on a configuration: sum of zeta(t - t_k) over accepted atoms,
/// with t_k < t for zeta = phi (predictable intensity) and t_k <= t for
/// zeta = one (cadlag counting path).
double eval_X_config(const Configuration& config, const ModelParams& params, Zeta zeta, double t);

/// Alternating subset sum D^n F = sum_{J subset} (-1)^{n-|J|} F(subconfig J).
/// n = 0 returns F(empty). Throws for n > 20 (2^n enumeration guard).
double pathwise_derivative(const std::function<double(const Configuration&)>& functional,
                           const std::vector<Atom>& atoms);

/// Pseudo-chaotic coefficient c_n^{zeta,t} computed two ways — (a) the n-th
/// pathwise derivative of X_t^zeta, (b) zeta(t-t_n) times the (n-1)-th
/// derivative of the acceptance indicator at t_n — returning (a) and throwing
/// numerical_error if the routes disagree beyond 1e-12.
double coefficient_c_n(const std::vector<Atom>& atoms, const ModelParams& params, Zeta zeta,
                       double t);

/// Integral of c_n^{zeta,t} over all mark levels: closed form
/// mu * zeta(t - t_n) * prod Phi(t_i - t_{i-1}), cross-checked against exact
/// piecewise-constant integration over the bounded support in theta
/// (n <= 6 for the cross-check route). Throws numerical_error on disagreement.
double theta_integral_c_n(const std::vector<double>& times, const ModelParams& params, Zeta zeta,
                          double t);

/// E[lambda_t] after forcing atoms at the given times:
/// mu (1 + I(t)) + sum_j Psi(t - t_j) for t >= t_j.
double shifted_mean_intensity(const ModelParams& params, const ResolventTable& table,
                              const std::vector<double>& forced_times, double t);

/// E[X_t^zeta] after forcing atoms: quadrature of zeta(t-u) against the
/// shifted intensity mean plus the boundary sum of zeta(t - t_i).
double shifted_mean_X(const ModelParams& params, const ResolventTable& table, Zeta zeta,
                      const std::vector<double>& forced_times, double t);

struct ChaosExpectation {
    double value;
    double truncation_bound; // mu * t * ||Phi||_1^{N+1} / (1 - ||Phi||_1)
};

/// Truncated series for E[X_t^zeta] built from the ordered-simplex integrals
/// of the chaos coefficients, each term reduced to iterated-convolution
/// quadratures on the grid.
ChaosExpectation expectation_via_chaos(const ModelParams& params, double t, Zeta zeta,
                                       std::size_t order, const Grid& grid);

} // namespace hawkes
