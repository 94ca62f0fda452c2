#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hawkes/csv.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/malliavin.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulate.hpp"

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitStability = 3;
constexpr int kExitNumerical = 4;

hawkes::Kernel load_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw nlohmann::json::other_error::create(500, "cannot open kernel file: " + path, nullptr);
    }
    const auto spec = nlohmann::json::parse(in);
    const std::string type = spec.at("type").get<std::string>();
    if (type == "exponential") {
        return hawkes::Kernel::exponential(spec.at("alpha").get<double>(),
                                           spec.at("beta").get<double>());
    }
    if (type == "powerlaw") {
        return hawkes::Kernel::power_law(spec.at("alpha").get<double>(),
                                         spec.at("c").get<double>(),
                                         spec.at("gamma").get<double>());
    }
    if (type == "tabulated") {
        return hawkes::Kernel::tabulated(spec.at("step").get<double>(),
                                         spec.at("values").get<std::vector<double>>());
    }
    throw nlohmann::json::other_error::create(501, "unknown kernel type: " + type, nullptr);
}

double default_step(double horizon) { return std::min(1e-3, horizon / 1e4); }

std::vector<double> parse_time_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(std::stod(item));
        }
    }
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    return out;
}

struct CommonOpts {
    std::string kernel_path;
    double mu = 1.0;
    double step = 0.0; // 0 = pick default
    double horizon = 0.0;
};

hawkes::MomentEngine make_engine(const CommonOpts& opts, double needed_horizon) {
    const double horizon = opts.horizon > 0.0 ? opts.horizon : needed_horizon;
    const double step = opts.step > 0.0 ? opts.step : default_step(horizon);
    auto kernel = load_kernel(opts.kernel_path);
    auto table = hawkes::resolvent(kernel, hawkes::Grid::with_horizon(horizon, step));
    return hawkes::MomentEngine(hawkes::ModelParams(opts.mu, std::move(kernel)),
                                std::move(table));
}

int run_validate(const CommonOpts& opts, double s, double t, std::size_t n_paths,
                 std::uint64_t seed, const std::string& out_path) {
    auto engine = make_engine(opts, t);
    const auto estimates = hawkes::mc_moment_estimates(engine.params(), t, s, t, n_paths, seed);

    std::ofstream file;
    if (!out_path.empty()) {
        file = open_output(out_path);
        file << "quantity,s,t,mc_value,std_error,analytic,abs_z\n";
    }

    bool failed = false;
    for (const auto& [name, est] : estimates) {
        const auto q = hawkes::quantity_from_string(name);
        const double analytic = engine.evaluate(q, s, t);
        const double diff = std::abs(est.value - analytic);
        const double z = est.std_error > 0.0 ? diff / est.std_error : (diff > 0.0 ? HUGE_VAL : 0.0);
        if (z > 4.0) {
            failed = true;
        }
        std::ostringstream line;
        line << name << ',' << hawkes::format_double(s) << ',' << hawkes::format_double(t) << ','
             << hawkes::format_double(est.value) << ',' << hawkes::format_double(est.std_error)
             << ',' << hawkes::format_double(analytic) << ',' << hawkes::format_double(z);
        std::cout << line.str() << '\n';
        if (file.is_open()) {
            file << line.str() << '\n';
        }
    }
    return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hawkes process moments: resolvent tables, closed-form "
                 "covariances, exact simulation and Monte Carlo validation"};
    app.require_subcommand(1);

    CommonOpts opts;
    double s = 0.0;
    double t = 1.0;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    std::size_t order = 8;
    std::string quantity = "cov_count";
    std::string zeta = "one";
    std::string method = "cluster";
    std::string out_path;
    std::string forced_csv;
    std::string s_list;
    std::string t_list;

    const auto add_kernel = [&](CLI::App* cmd) {
        cmd->add_option("--kernel", opts.kernel_path, "kernel JSON file")->required();
        cmd->add_option("--mu", opts.mu, "baseline intensity");
        cmd->add_option("--step", opts.step, "grid step (default min(1e-3, T/1e4))");
    };

    auto* cmd_res = app.add_subcommand("resolvent", "tabulate Psi and its cumulative integral");
    add_kernel(cmd_res);
    cmd_res->add_option("--horizon", opts.horizon, "grid horizon")->required();
    cmd_res->add_option("--out", out_path, "output CSV (t,psi,cum)")->required();

    auto* cmd_mom = app.add_subcommand("moments", "evaluate one closed-form moment");
    add_kernel(cmd_mom);
    cmd_mom->add_option("--quantity", quantity, "quantity name");
    cmd_mom->add_option("--s", s, "first time");
    cmd_mom->add_option("--t", t, "second time")->required();
    cmd_mom->add_option("--horizon", opts.horizon, "grid horizon (default max(s,t))");

    auto* cmd_surf = app.add_subcommand("surface", "evaluate a covariance surface");
    add_kernel(cmd_surf);
    cmd_surf->add_option("--quantity", quantity, "quantity name");
    cmd_surf->add_option("--s-list", s_list, "comma-separated s nodes")->required();
    cmd_surf->add_option("--t-list", t_list, "comma-separated t nodes")->required();
    cmd_surf->add_option("--horizon", opts.horizon, "grid horizon (default max node)");
    cmd_surf->add_option("--out", out_path, "output CSV (s,t,value)")->required();

    auto* cmd_sim = app.add_subcommand("simulate", "simulate paths and export events");
    add_kernel(cmd_sim);
    cmd_sim->add_option("--horizon", opts.horizon, "simulation horizon")->required();
    cmd_sim->add_option("--paths", n_paths, "number of paths");
    cmd_sim->add_option("--seed", seed, "master seed");
    cmd_sim->add_option("--forced", forced_csv, "comma-separated forced atom times");
    cmd_sim->add_option("--method", method, "cluster | thinning");
    cmd_sim->add_option("--out", out_path, "output CSV (path_id,event_time,forced)")->required();

    auto* cmd_val = app.add_subcommand("validate", "Monte Carlo vs analytic for all quantities");
    add_kernel(cmd_val);
    cmd_val->add_option("--s", s, "first time")->required();
    cmd_val->add_option("--t", t, "second time")->required();
    cmd_val->add_option("--paths", n_paths, "number of paths");
    cmd_val->add_option("--seed", seed, "master seed");
    cmd_val->add_option("--out", out_path, "optional estimates CSV");

    auto* cmd_chaos = app.add_subcommand("chaos", "truncated chaotic series for E[X_t]");
    add_kernel(cmd_chaos);
    cmd_chaos->add_option("--t", t, "evaluation time")->required();
    cmd_chaos->add_option("--order", order, "truncation order N");
    cmd_chaos->add_option("--zeta", zeta, "one | phi");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_res->parsed()) {
            const double step = opts.step > 0.0 ? opts.step : default_step(opts.horizon);
            const auto kernel = load_kernel(opts.kernel_path);
            const auto table =
                hawkes::resolvent(kernel, hawkes::Grid::with_horizon(opts.horizon, step));
            auto out = open_output(out_path);
            out << "t,psi,cum\n";
            for (std::size_t k = 0; k < table.grid().n_nodes; ++k) {
                out << hawkes::format_double(table.grid().node(k)) << ','
                    << hawkes::format_double(table.psi()[k]) << ','
                    << hawkes::format_double(table.cum()[k]) << '\n';
            }
        } else if (cmd_mom->parsed()) {
            if (s > t) {
                std::swap(s, t);
            }
            const auto engine = make_engine(opts, t);
            const auto q = hawkes::quantity_from_string(quantity);
            std::cout << quantity << ',' << hawkes::format_double(s) << ','
                      << hawkes::format_double(t) << ','
                      << hawkes::format_double(engine.evaluate(q, s, t)) << '\n';
        } else if (cmd_surf->parsed()) {
            const auto s_nodes = parse_time_list(s_list);
            const auto t_nodes = parse_time_list(t_list);
            double horizon = 0.0;
            for (double v : s_nodes) horizon = std::max(horizon, v);
            for (double v : t_nodes) horizon = std::max(horizon, v);
            const auto engine = make_engine(opts, horizon);
            const auto surf =
                engine.surface(s_nodes, t_nodes, hawkes::quantity_from_string(quantity));
            auto out = open_output(out_path);
            out << "s,t,value\n";
            for (std::size_t i = 0; i < surf.s_nodes.size(); ++i) {
                for (std::size_t j = 0; j < surf.t_nodes.size(); ++j) {
                    out << hawkes::format_double(surf.s_nodes[i]) << ','
                        << hawkes::format_double(surf.t_nodes[j]) << ','
                        << hawkes::format_double(surf.at(i, j)) << '\n';
                }
            }
        } else if (cmd_sim->parsed()) {
            const hawkes::ModelParams params(opts.mu, load_kernel(opts.kernel_path));
            const auto forced = parse_time_list(forced_csv);
            auto out = open_output(out_path);
            out << "path_id,event_time,forced\n";
            for (std::size_t i = 0; i < n_paths; ++i) {
                const std::uint64_t path_seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
                hawkes::SimulatedPath path;
                if (method == "thinning") {
                    if (!forced.empty()) {
                        throw std::invalid_argument("forced atoms need the cluster method");
                    }
                    path = hawkes::simulate_thinning(params, opts.horizon, path_seed);
                } else if (forced.empty()) {
                    path = hawkes::simulate_hawkes(params, opts.horizon, path_seed);
                } else {
                    path = hawkes::simulate_shifted(params, opts.horizon, forced, path_seed);
                }
                for (double e : path.events) {
                    const bool is_forced =
                        std::find(path.forced.begin(), path.forced.end(), e) != path.forced.end();
                    out << i << ',' << hawkes::format_double(e) << ',' << (is_forced ? 1 : 0)
                        << '\n';
                }
            }
        } else if (cmd_val->parsed()) {
            return run_validate(opts, s, t, n_paths, seed, out_path);
        } else if (cmd_chaos->parsed()) {
            const double step = opts.step > 0.0 ? opts.step : default_step(t);
            const hawkes::ModelParams params(opts.mu, load_kernel(opts.kernel_path));
            const auto z = zeta == "phi" ? hawkes::Zeta::phi : hawkes::Zeta::one;
            const auto result = hawkes::expectation_via_chaos(
                params, t, z, order, hawkes::Grid::with_horizon(t, step));
            std::cout << "value," << hawkes::format_double(result.value) << '\n'
                      << "truncation_bound," << hawkes::format_double(result.truncation_bound)
                      << '\n';
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const hawkes::stability_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitStability;
    } catch (const hawkes::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
