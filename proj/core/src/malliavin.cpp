#include "hawkes/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

Configuration::Configuration(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!(atoms_[i].t > 0.0) || atoms_[i].theta < 0.0) {
            throw std::invalid_argument("atoms need t > 0 and theta >= 0");
        }
        if (i > 0 && !(atoms_[i].t > atoms_[i - 1].t)) {
            throw std::invalid_argument("atom times must be distinct");
        }
    }
}

namespace {

// acceptance recursion: atom k enters iff theta_k <= lambda_{t_k} of the
// previously accepted atoms
std::vector<bool> accepted_mask(const Configuration& config, const ModelParams& params) {
    const auto& atoms = config.atoms();
    std::vector<bool> accepted(atoms.size(), false);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        double lam = params.mu;
        for (std::size_t j = 0; j < k; ++j) {
            if (accepted[j]) {
                lam += params.kernel(atoms[k].t - atoms[j].t);
            }
        }
        accepted[k] = atoms[k].theta <= lam;
    }
    return accepted;
}

double zeta_value(const ModelParams& params, Zeta zeta, double dt) {
    return zeta == Zeta::one ? 1.0 : params.kernel(dt);
}

void require_ordered_times(const std::vector<double>& times, double t) {
    if (times.empty()) {
        throw std::invalid_argument("need at least one atom time");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) {
            throw std::invalid_argument("atom times must be positive");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw std::invalid_argument("atom times must be strictly increasing");
        }
    }
    if (times.back() > t) {
        throw std::invalid_argument("atom times must not exceed t");
    }
}

} // namespace

double eval_intensity_config(const Configuration& config, const ModelParams& params, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("negative time");
    }
    const auto& atoms = config.atoms();
    const auto accepted = accepted_mask(config, params);
    double lam = params.mu;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (accepted[k] && atoms[k].t < t) {
            lam += params.kernel(t - atoms[k].t);
        }
    }
    return lam;
}

double eval_X_config(const Configuration& config, const ModelParams& params, Zeta zeta, double t) {
    const auto& atoms = config.atoms();
    const auto accepted = accepted_mask(config, params);
    double acc = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (!accepted[k]) {
            continue;
        }
        // open interval for zeta = Phi (predictability), closed for zeta = 1
        const bool in_window = zeta == Zeta::phi ? atoms[k].t < t : atoms[k].t <= t;
        if (in_window) {
            acc += zeta_value(params, zeta, t - atoms[k].t);
        }
    }
    return acc;
}

double pathwise_derivative(const std::function<double(const Configuration&)>& functional,
                           const std::vector<Atom>& atoms) {
    const std::size_t n = atoms.size();
    if (n > 20) {
        throw std::length_error("pathwise derivative capped at 20 atoms (2^n enumeration)");
    }
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<Atom> subset;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (1ULL << k)) {
                subset.push_back(atoms[k]);
            }
        }
        const std::size_t card = subset.size();
        const double sign = ((n - card) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * functional(Configuration(std::move(subset)));
    }
    return acc;
}

double coefficient_c_n(const std::vector<Atom>& atoms, const ModelParams& params, Zeta zeta,
                       double t) {
    if (atoms.empty()) {
        throw std::invalid_argument("need at least one atom");
    }
    std::vector<Atom> ordered = atoms;
    std::sort(ordered.begin(), ordered.end(),
              [](const Atom& a, const Atom& b) { return a.t < b.t; });
    const Atom last = ordered.back();
    if (last.t > t) {
        throw std::invalid_argument("atom times must not exceed t");
    }
    if (zeta == Zeta::phi && last.t == t) {
        // the open integration interval of X^Phi makes the direct derivative
        // degenerate at t_n = t
        throw std::invalid_argument("zeta = phi requires t_n < t");
    }

    const double direct = pathwise_derivative(
        [&](const Configuration& cfg) { return eval_X_config(cfg, params, zeta, t); }, ordered);

    std::vector<Atom> head(ordered.begin(), ordered.end() - 1);
    const double indicator_derivative = pathwise_derivative(
        [&](const Configuration& cfg) {
            return last.theta <= eval_intensity_config(cfg, params, last.t) ? 1.0 : 0.0;
        },
        head);
    const double factored = zeta_value(params, zeta, t - last.t) * indicator_derivative;

    if (std::abs(direct - factored) > 1e-12 * std::max(1.0, std::abs(direct))) {
        throw numerical_error("chaos coefficient routes disagree beyond tolerance");
    }
    return direct;
}

namespace {

// c_n as a function of the mark vector, in the factored form
// zeta(t-t_n) * D^{n-1} 1{theta_n <= lambda_{t_n}}
double c_n_at_marks(const std::vector<double>& times, const std::vector<double>& thetas,
                    const ModelParams& params, Zeta zeta, double t) {
    const std::size_t n = times.size();
    std::vector<Atom> head;
    head.reserve(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        head.push_back(Atom{times[k], thetas[k]});
    }
    const double tn = times.back();
    const double theta_n = thetas.back();
    const double deriv = pathwise_derivative(
        [&](const Configuration& cfg) {
            return theta_n <= eval_intensity_config(cfg, params, tn) ? 1.0 : 0.0;
        },
        head);
    return zeta_value(params, zeta, t - tn) * deriv;
}

} // namespace

double theta_integral_c_n(const std::vector<double>& times, const ModelParams& params, Zeta zeta,
                          double t) {
    require_ordered_times(times, t);
    const std::size_t n = times.size();

    double closed = params.mu * zeta_value(params, zeta, t - times.back());
    for (std::size_t i = 1; i < n; ++i) {
        closed *= params.kernel(times[i] - times[i - 1]);
    }

    if (n > 6) {
        throw std::length_error("theta integral cross-check capped at 6 atoms");
    }

    // Exact integration of the piecewise-constant mark dependence: every
    // acceptance comparison switches at a level mu + sum_{j in S} Phi(t_i-t_j),
    // so partitioning each mark axis at all such levels makes c_n constant on
    // every cell; beyond the largest level the coefficient vanishes.
    std::vector<std::vector<double>> breaks(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> levels{0.0};
        for (std::uint64_t mask = 0; mask < (1ULL << i); ++mask) {
            double lam = params.mu;
            for (std::size_t j = 0; j < i; ++j) {
                if (mask & (1ULL << j)) {
                    lam += params.kernel(times[i] - times[j]);
                }
            }
            levels.push_back(lam);
        }
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        breaks[i] = std::move(levels);
    }

    std::vector<std::size_t> cell(n, 0);
    std::vector<double> thetas(n, 0.0);
    double integral = 0.0;
    while (true) {
        double volume = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = breaks[i][cell[i]];
            const double hi = breaks[i][cell[i] + 1];
            thetas[i] = 0.5 * (lo + hi);
            volume *= hi - lo;
        }
        integral += volume * c_n_at_marks(times, thetas, params, zeta, t);

        std::size_t d = 0;
        while (d < n && ++cell[d] == breaks[d].size() - 1) {
            cell[d] = 0;
            ++d;
        }
        if (d == n) {
            break;
        }
    }

    if (std::abs(integral - closed) > 1e-12 * std::max(1.0, std::abs(closed))) {
        throw numerical_error("theta integral routes disagree beyond tolerance");
    }
    return closed;
}

double shifted_mean_intensity(const ModelParams& params, const ResolventTable& table,
                              const std::vector<double>& forced_times, double t) {
    double value = params.mu * (1.0 + table.cum_at(t));
    for (double tj : forced_times) {
        if (t >= tj) {
            value += table.psi_at(t - tj);
        }
    }
    return value;
}

namespace {

// shifted intensity mean phi(u); include_at_u controls whether a forced atom
// exactly at u contributes (right vs left limit across the Psi(0) jump)
double phi_shift(const ModelParams& params, const ResolventTable& table,
                 const std::vector<double>& forced_times, double u, bool include_at_u) {
    double value = params.mu * (1.0 + table.cum_at(u));
    for (double tj : forced_times) {
        if (u > tj || (include_at_u && u == tj)) {
            value += table.psi_at(u - tj);
        }
    }
    return value;
}

} // namespace

double shifted_mean_X(const ModelParams& params, const ResolventTable& table, Zeta zeta,
                      const std::vector<double>& forced_times, double t) {
    for (std::size_t i = 0; i < forced_times.size(); ++i) {
        if (!(forced_times[i] > 0.0) || !(forced_times[i] < t)) {
            throw std::invalid_argument("forced times must lie in (0, t)");
        }
        if (i > 0 && !(forced_times[i] > forced_times[i - 1])) {
            throw std::invalid_argument("forced times must be strictly increasing");
        }
    }
    if (t > table.grid().horizon() * (1.0 + 1e-12)) {
        throw std::out_of_range("t beyond the resolvent horizon");
    }

    // integrate zeta(t-u) phi(u) piecewise: phi jumps by Psi(0) at each forced
    // time, so segments are split there and endpoints use one-sided limits
    std::vector<double> cuts{0.0};
    for (double tj : forced_times) {
        cuts.push_back(tj);
    }
    cuts.push_back(t);

    const double h = table.grid().step;
    double integral = 0.0;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double a = cuts[seg];
        const double b = cuts[seg + 1];
        std::vector<double> nodes{a};
        for (double u = (std::floor(a / h) + 1.0) * h; u < b - 1e-15; u += h) {
            if (u > a) {
                nodes.push_back(u);
            }
        }
        nodes.push_back(b);
        double prev_u = nodes[0];
        double prev_f = zeta_value(params, zeta, t - prev_u) *
                        phi_shift(params, table, forced_times, prev_u, true);
        for (std::size_t k = 1; k < nodes.size(); ++k) {
            const double u = nodes[k];
            const bool at_end = k + 1 == nodes.size();
            const double f = zeta_value(params, zeta, t - u) *
                             phi_shift(params, table, forced_times, u, !at_end);
            integral += 0.5 * (u - prev_u) * (prev_f + f);
            prev_u = u;
            prev_f = f;
        }
    }

    double boundary = 0.0;
    for (double tj : forced_times) {
        boundary += zeta_value(params, zeta, t - tj);
    }
    return integral + boundary;
}

ChaosExpectation expectation_via_chaos(const ModelParams& params, double t, Zeta zeta,
                                       std::size_t order, const Grid& grid) {
    if (order < 1) {
        throw std::invalid_argument("truncation order must be at least 1");
    }
    const std::size_t it = grid.index_near(t);
    const double tt = grid.node(it);
    const auto phi = sample_on_grid(params.kernel, grid);
    const double h = grid.step;

    double value = 0.0;
    if (zeta == Zeta::phi) {
        // term of order n collapses to int_0^t Phi_n
        std::vector<double> conv = phi;
        for (std::size_t n = 1; n <= order; ++n) {
            if (n > 1) {
                conv = convolve(phi, conv, h);
            }
            value += cumulative_trapezoid(conv, h)[it];
        }
    } else {
        // n = 1 gives t (empty product); order n >= 2 gives
        // int_0^t int_0^u Phi_{n-1}(u-r) dr du
        value = tt;
        std::vector<double> conv = phi; // Phi_{n-1}
        for (std::size_t n = 2; n <= order; ++n) {
            if (n > 2) {
                conv = convolve(phi, conv, h);
            }
            const auto inner = cumulative_trapezoid(conv, h);
            value += cumulative_trapezoid(inner, h)[it];
        }
    }
    value *= params.mu;

    const double l1 = params.kernel.l1_norm();
    const double bound = params.mu * tt * std::pow(l1, static_cast<double>(order) + 1.0) /
                         (1.0 - l1);
    return ChaosExpectation{value, bound};
}

} // namespace hawkes
