// Command line front end: evaluate closed forms, run Monte Carlo estimates,
// sweep parameters and regenerate the reference tables as CSV.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsaloha/analytic.hpp"
#include "nsaloha/config.hpp"
#include "nsaloha/csv.hpp"
#include "nsaloha/simulator.hpp"

namespace {

using namespace nsaloha;
using steady_clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<double> beta;
    std::optional<double> T;
    std::optional<double> lambda;
    std::optional<double> r;
    std::optional<double> tau;
    std::optional<long long> replications;
    std::optional<long long> seed;
    std::optional<std::string> constraint;
    std::optional<std::string> boundary;
    std::optional<std::string> model;
    std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "flat key = value configuration file");
    cmd->add_option("--beta", opt.beta, "path loss exponent (> 2)");
    cmd->add_option("--T", opt.T, "SINR threshold");
    cmd->add_option("--lambda", opt.lambda, "node density per m^2");
    cmd->add_option("--r", opt.r, "link distance in meters");
    cmd->add_option("--tau", opt.tau, "channel occupation fraction");
    cmd->add_option("--replications", opt.replications, "Monte Carlo replications");
    cmd->add_option("--seed", opt.seed, "RNG seed");
    cmd->add_option("--constraint", opt.constraint, "mean|max interference constraint");
    cmd->add_option("--boundary", opt.boundary, "torus|none|guard window boundary");
    cmd->add_option("--model", opt.model, "slotted|renewal|rain MAC model");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
}

SimConfig resolve_scenario(const CommonOptions& opt) {
    SimConfig cfg = default_scenario();
    if (!opt.config_path.empty()) cfg = scenario_from_config(load_config_file(opt.config_path), cfg);

    // Flag overrides stack on top of the file.
    ConfigMap overrides;
    if (opt.beta) overrides["beta"] = format_double(*opt.beta, 17);
    if (opt.T) overrides["T"] = format_double(*opt.T, 17);
    if (opt.lambda) overrides["lambda"] = format_double(*opt.lambda, 17);
    if (opt.r) overrides["r"] = format_double(*opt.r, 17);
    if (opt.replications) overrides["replications"] = std::to_string(*opt.replications);
    if (opt.seed) overrides["seed"] = std::to_string(*opt.seed);
    if (opt.constraint) overrides["constraint"] = *opt.constraint;
    if (opt.boundary) overrides["boundary"] = *opt.boundary;
    if (opt.model) overrides["mac.kind"] = *opt.model;
    if (opt.threads) overrides["threads"] = std::to_string(*opt.threads);
    if (!overrides.empty()) cfg = scenario_from_config(overrides, cfg);

    if (opt.tau) {
        const double tau = *opt.tau;
        if (std::holds_alternative<SlottedMac>(cfg.mac)) {
            auto mac = std::get<SlottedMac>(cfg.mac);
            mac.p = tau;
            cfg.mac = mac;
        } else if (std::holds_alternative<RenewalMac>(cfg.mac)) {
            cfg.mac = RenewalMac::from_tau(tau, mac_duration(cfg.mac));
        } else {
            auto mac = std::get<RainMac>(cfg.mac);
            mac.lambda_s = equivalent_rain_density(cfg.net.lambda, tau, mac.B);
            cfg.mac = mac;
        }
    }
    return cfg;
}

// Occupation fraction of the resolved MAC; the fair-comparison linkage makes
// every eval quantity reachable from any MAC kind.
double resolved_tau(const SimConfig& cfg) {
    if (std::holds_alternative<RainMac>(cfg.mac)) {
        const auto& m = std::get<RainMac>(cfg.mac);
        if (cfg.net.lambda <= 0.0)
            throw std::invalid_argument("tau from a rain MAC needs lambda > 0");
        return m.lambda_s * m.B / cfg.net.lambda;
    }
    return channel_occupation_fraction(cfg.mac);
}

const char* method_name(EvalMethod m) {
    return m == EvalMethod::ClosedForm ? "closed-form" : "quadrature";
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

RunManifest make_manifest(const SimConfig& cfg, const std::string& command,
                          const std::string& provenance) {
    RunManifest m;
    m.command = command;
    m.seed = cfg.rng_seed;
    m.provenance = provenance;
    for (const auto& kv : config_from_scenario(cfg)) m.config.emplace_back(kv.first, kv.second);
    return m;
}

int run_eval(const CommonOptions& opt, const std::string& quantity, bool optimized) {
    SimConfig cfg = resolve_scenario(opt);
    QuadratureSettings q;
    const NetworkParams& net = cfg.net;
    const double beta = net.path_loss.beta;
    const double B = mac_duration(cfg.mac);

    double value = 0.0;
    const char* method = "closed-form";
    if (quantity == "k") {
        value = k_beta(beta);
    } else if (quantity == "kprime") {
        value = k_prime_beta(beta, q);
        method = "quadrature";
    } else if (quantity == "p_slot") {
        auto res = p_slot(net, SlottedMac{resolved_tau(cfg), B}, q);
        value = res.probability;
        method = method_name(res.method);
    } else if (quantity == "p_rain") {
        auto res = p_rain_mean(net, to_equivalent_rain(net.lambda, cfg.mac), q);
        value = res.probability;
        method = method_name(res.method);
    } else if (quantity == "p_ren") {
        const double tau = resolved_tau(cfg);
        auto res = p_renewal_mean(net, RenewalMac::from_tau(tau, B), q);
        value = res.probability;
        method = method_name(res.method);
    } else if (quantity == "p_ns") {
        const double tau = resolved_tau(cfg);
        const RenewalMac mac = RenewalMac::from_tau(tau, B);
        value = p_ns(net.lambda, mac.epsilon, mac.B, net.r, net.T, beta, q);
    } else if (quantity == "tau_max") {
        auto res = optimal_tau(net, q);
        value = res.control;
        if (res.no_backoff) {
            std::printf("tau_max = no-backoff (thin network, transmit immediately), "
                        "d_suc at tau=1: %.10g\n", res.objective_value);
            return kExitOk;
        }
    } else if (quantity == "r_max") {
        auto res = optimal_r(net.lambda * resolved_tau(cfg), net.T, beta, q);
        value = res.control;
        method = "quadrature";
    } else if (quantity == "dsuc_max") {
        auto res = optimal_tau(net, q);
        value = res.objective_value;
        method = "quadrature";
    } else if (quantity == "goodput_ratio") {
        value = optimized ? optimized_goodput_ratio(beta, q)
                          : goodput_ratio(net, resolved_tau(cfg), q);
        method = "quadrature";
    } else {
        std::cerr << "error: unknown quantity '" << quantity
                  << "' (expected k, kprime, p_slot, p_rain, p_ren, p_ns, tau_max, r_max, "
                     "dsuc_max, goodput_ratio)\n";
        return kExitUsage;
    }
    std::printf("%s = %.10g  [%s]\n", quantity.c_str(), value, method);
    return kExitOk;
}

int run_simulate(const CommonOptions& opt, const std::string& out_path) {
    SimConfig cfg = resolve_scenario(opt);
    const auto t0 = steady_clock::now();
    const Estimate est = simulate(cfg);
    const double secs = std::chrono::duration<double>(steady_clock::now() - t0).count();

    const char* model = std::holds_alternative<SlottedMac>(cfg.mac)   ? "slotted"
                        : std::holds_alternative<RenewalMac>(cfg.mac) ? "renewal"
                                                                      : "rain";
    const char* constraint =
        cfg.constraint == SinrConstraint::MeanInterference ? "mean" : "max";
    std::printf("p_success = %.6f +- %.6f  (n = %lld, model = %s, constraint = %s, %.2f s)\n",
                est.mean, est.ci95_halfwidth, est.n, model, constraint, secs);

    if (!out_path.empty()) {
        RunManifest manifest = make_manifest(cfg, "simulate", "simulated");
        manifest.wall_seconds = secs;
        double param = 0.0;
        if (std::holds_alternative<SlottedMac>(cfg.mac))
            param = std::get<SlottedMac>(cfg.mac).p;
        else if (std::holds_alternative<RenewalMac>(cfg.mac))
            param = std::get<RenewalMac>(cfg.mac).epsilon_b();
        else
            param = std::get<RainMac>(cfg.mac).lambda_s;
        append_csv(out_path, manifest, {"param", "estimate", "ci95", "n", "constraint", "model"},
                   {{format_double(param), format_double(est.mean), format_double(est.ci95_halfwidth),
                     std::to_string(est.n), constraint, model}});
        std::printf("appended 1 row to %s\n", out_path.c_str());
    }
    return kExitOk;
}

int run_sweep(const CommonOptions& opt, const std::string& param, double from, double to,
              int steps, const std::string& quantity, bool simulate_flag,
              const std::string& out_path) {
    if (steps < 1) {
        std::cerr << "error: --steps must be >= 1\n";
        return kExitUsage;
    }
    SimConfig base = resolve_scenario(opt);
    QuadratureSettings q;

    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    const auto t0 = steady_clock::now();

    if (simulate_flag) {
        if (param != "tau") {
            std::cerr << "error: simulation sweeps support --param tau\n";
            return kExitUsage;
        }
        std::vector<double> taus;
        for (int i = 0; i <= steps; ++i)
            taus.push_back(from + (to - from) * i / std::max(1, steps));
        const auto sweep = estimate_density_of_success(base, taus);
        columns = {"param", "estimate", "ci95", "n", "constraint", "model"};
        const char* model = std::holds_alternative<SlottedMac>(base.mac)   ? "slotted"
                            : std::holds_alternative<RenewalMac>(base.mac) ? "renewal"
                                                                           : "rain";
        for (const auto& row : sweep.rows) {
            const bool mean_first = base.constraint == SinrConstraint::MeanInterference;
            const Estimate& est = mean_first ? row.est_mean : row.est_max;
            rows.push_back({format_double(row.tau), format_double(est.mean),
                            format_double(est.ci95_halfwidth), std::to_string(est.n),
                            mean_first ? "mean" : "max", model});
        }
    } else {
        columns = {"param", "value"};
        for (int i = 0; i <= steps; ++i) {
            const double v = from + (to - from) * i / std::max(1, steps);
            ConfigMap override_map;
            CommonOptions point = opt;
            if (param == "tau") point.tau = v;
            else if (param == "beta") point.beta = v;
            else if (param == "T") point.T = v;
            else if (param == "lambda") point.lambda = v;
            else if (param == "r") point.r = v;
            else {
                std::cerr << "error: unknown sweep parameter '" << param << "'\n";
                return kExitUsage;
            }
            SimConfig cfg = resolve_scenario(point);
            double value = 0.0;
            if (quantity == "p_slot")
                value = p_slot(cfg.net, SlottedMac{resolved_tau(cfg), mac_duration(cfg.mac)}, q).probability;
            else if (quantity == "p_rain")
                value = p_rain_mean(cfg.net, to_equivalent_rain(cfg.net.lambda, cfg.mac), q).probability;
            else if (quantity == "p_ren")
                value = p_renewal_mean(cfg.net, RenewalMac::from_tau(resolved_tau(cfg), mac_duration(cfg.mac)), q).probability;
            else if (quantity == "p_ns") {
                const RenewalMac mac = RenewalMac::from_tau(resolved_tau(cfg), mac_duration(cfg.mac));
                value = p_ns(cfg.net.lambda, mac.epsilon, mac.B, cfg.net.r, cfg.net.T,
                             cfg.net.path_loss.beta, q);
            } else if (quantity == "k")
                value = k_beta(cfg.net.path_loss.beta);
            else if (quantity == "kprime")
                value = k_prime_beta(cfg.net.path_loss.beta, q);
            else if (quantity == "goodput_ratio")
                value = goodput_ratio(cfg.net, resolved_tau(cfg), q);
            else {
                std::cerr << "error: unknown sweep quantity '" << quantity << "'\n";
                return kExitUsage;
            }
            rows.push_back({format_double(v), format_double(value)});
        }
    }

    SimConfig cfg = resolve_scenario(opt);
    RunManifest manifest = make_manifest(
        cfg, "sweep --param " + param + " --from " + format_double(from) + " --to " +
                 format_double(to) + " --steps " + std::to_string(steps) +
                 (simulate_flag ? " --simulate" : " --quantity " + quantity),
        simulate_flag ? "simulated" : "analytic");
    manifest.wall_seconds = std::chrono::duration<double>(steady_clock::now() - t0).count();
    const std::string path = out_path.empty() ? "sweep.csv" : out_path;
    write_csv(path, manifest, columns, rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), path.c_str());
    return kExitOk;
}

void write_plot_script(const std::string& csv_path, const std::string& title, int columns,
                       const std::vector<std::string>& names) {
    const std::string path = csv_path + ".gnuplot";
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "set datafile separator ','\n");
    std::fprintf(f, "set key autotitle columnhead\n");
    std::fprintf(f, "set title '%s'\n", title.c_str());
    std::fprintf(f, "plot \\\n");
    for (int c = 2; c <= columns; ++c) {
        std::fprintf(f, "  '%s' using 1:%d with linespoints title '%s'%s\n", csv_path.c_str(), c,
                     names[static_cast<std::size_t>(c - 2)].c_str(), c < columns ? ", \\" : "");
    }
    std::fclose(f);
    std::printf("wrote %s\n", path.c_str());
}

int run_reproduce(const CommonOptions& opt, const std::string& target,
                  const std::string& out_path, bool analytic_only, bool plot_script) {
    SimConfig cfg = resolve_scenario(opt);
    QuadratureSettings q;
    const auto t0 = steady_clock::now();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::string provenance = "analytic";
    std::string title;

    if (target == "fig1") {
        // Non-slotted / slotted goodput ratio vs beta for several T.
        title = "goodput ratio (%), non-slotted vs slotted, tau = 0.05";
        columns = {"beta", "ratio_pct_T1", "ratio_pct_T10", "ratio_pct_T100"};
        for (double beta = 2.5; beta <= 6.0 + 1e-9; beta += 0.1) {
            NetworkParams net = cfg.net;
            net.path_loss = PathLossModel::power_law(cfg.net.path_loss.amplitude, beta);
            std::vector<std::string> row{format_double(beta, 6)};
            for (double T : {1.0, 10.0, 100.0}) {
                net.T = T;
                row.push_back(format_double(100.0 * goodput_ratio(net, 0.05, q), 8));
            }
            rows.push_back(row);
        }
    } else if (target == "fig2") {
        title = "optimized goodput ratio (%), non-slotted vs slotted";
        columns = {"beta", "ratio_pct"};
        for (double beta = 2.1; beta <= 6.0 + 1e-9; beta += 0.1)
            rows.push_back({format_double(beta, 6),
                            format_double(100.0 * optimized_goodput_ratio(beta, q), 8)});
    } else if (target == "fig3") {
        title = "density of successful transmissions vs tau";
        provenance = analytic_only ? "analytic" : "analytic+simulated";
        columns = {"tau", "dsuc_renewal", "dsuc_rain"};
        if (!analytic_only) {
            columns.push_back("dsuc_sim");
            columns.push_back("ci95");
            columns.push_back("n");
        }
        std::vector<double> taus;
        for (double tau = 0.02; tau <= 0.30 + 1e-9; tau += 0.02) taus.push_back(tau);
        for (double tau : taus) {
            const RenewalMac mac = RenewalMac::from_tau(tau, mac_duration(cfg.mac));
            const double density = cfg.net.lambda * tau;
            const double ren = p_renewal_mean(cfg.net, mac, q).probability;
            const double rain =
                p_rain_mean(cfg.net, RainMac{equivalent_rain_density(cfg.net.lambda, tau, mac.B), mac.B}, q)
                    .probability;
            std::vector<std::string> row{format_double(tau, 6), format_double(density * ren, 8),
                                         format_double(density * rain, 8)};
            if (!analytic_only) {
                SimConfig point = cfg;
                point.mac = mac;
                point.boundary = Boundary::None;  // bounded-square setup
                const Estimate est = simulate(point);
                row.push_back(format_double(density * est.mean, 8));
                row.push_back(format_double(density * est.ci95_halfwidth, 8));
                row.push_back(std::to_string(est.n));
            }
            rows.push_back(row);
        }
    } else if (target == "fig4") {
        title = "density of successful transmissions vs tau, mean and max constraints";
        provenance = "simulated";
        columns = {"epsilonB", "tau", "dsuc_mean", "ci_mean", "dsuc_max", "ci_max", "n"};
        SimConfig point = cfg;
        point.mac = RenewalMac::from_epsilon_b(0.045, mac_duration(cfg.mac));
        point.boundary = Boundary::None;
        std::vector<double> taus;
        for (double eb : {0.01, 0.02, 0.03, 0.0375, 0.045, 0.0525, 0.06, 0.07, 0.085, 0.10, 0.12, 0.15})
            taus.push_back(eb / (1.0 + eb));
        const auto sweep = estimate_density_of_success(point, taus);
        for (const auto& row : sweep.rows) {
            rows.push_back({format_double(row.control, 6), format_double(row.tau, 6),
                            format_double(row.dsuc_mean, 8),
                            format_double(cfg.net.lambda * row.tau * row.est_mean.ci95_halfwidth, 8),
                            format_double(row.dsuc_max, 8),
                            format_double(cfg.net.lambda * row.tau * row.est_max.ci95_halfwidth, 8),
                            std::to_string(row.est_mean.n)});
        }
    } else if (target == "fig5") {
        title = "optimized density of successful transmissions vs beta";
        provenance = "analytic+simulated";
        columns = {"beta", "dsuc_slotted_opt", "dsuc_ns_mean_opt", "dsuc_ns_max_opt", "ci_max"};
        for (double beta : {3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0}) {
            SimConfig point = cfg;
            point.net.path_loss = PathLossModel::power_law(cfg.net.path_loss.amplitude, beta);
            const double scale = point.net.r * point.net.r * std::pow(point.net.T, 2.0 / beta);
            const double slotted_opt = 1.0 / (std::exp(1.0) * k_beta(beta) * scale);
            const double ns_opt = 1.0 / (std::exp(1.0) * k_prime_beta(beta, q) * scale);
            // Max-constraint optimum has no closed form; sweep around the
            // mean-constraint optimum.
            point.mac = RenewalMac::from_epsilon_b(0.045, mac_duration(cfg.mac));
            point.boundary = Boundary::None;
            const double tau_star = std::min(0.9, 1.0 / (point.net.lambda * k_prime_beta(beta, q) * scale));
            std::vector<double> taus;
            for (double f : {0.5, 0.75, 1.0, 1.25, 1.5}) taus.push_back(tau_star * f);
            const auto sweep = estimate_density_of_success(point, taus);
            const auto& best = sweep.rows[sweep.argmax_max];
            rows.push_back({format_double(beta, 6), format_double(slotted_opt, 8),
                            format_double(ns_opt, 8), format_double(best.dsuc_max, 8),
                            format_double(point.net.lambda * best.tau * best.est_max.ci95_halfwidth, 8)});
        }
    } else {
        std::cerr << "error: unknown target '" << target
                  << "' (expected fig1, fig2, fig3, fig4, fig5)\n";
        return kExitUsage;
    }

    RunManifest manifest = make_manifest(cfg, "reproduce " + target, provenance);
    manifest.wall_seconds = std::chrono::duration<double>(steady_clock::now() - t0).count();
    const std::string path = out_path.empty() ? target + ".csv" : out_path;
    write_csv(path, manifest, columns, rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), path.c_str());
    if (plot_script) {
        std::vector<std::string> names(columns.begin() + 1, columns.end());
        write_plot_script(path, title, static_cast<int>(columns.size()), names);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analytic and Monte Carlo toolkit for slotted and non-slotted Aloha coverage"};
    app.require_subcommand(1);

    CommonOptions opt;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a closed form or quadrature quantity");
    std::string quantity;
    bool optimized = false;
    eval_cmd->add_option("quantity", quantity,
                         "k|kprime|p_slot|p_rain|p_ren|p_ns|tau_max|r_max|dsuc_max|goodput_ratio")
        ->required();
    eval_cmd->add_flag("--optimized", optimized, "use the individually optimized schemes");
    add_common_flags(eval_cmd, opt);

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo success probability estimate");
    std::string out_path;
    sim_cmd->add_option("--out", out_path, "CSV file to append the estimate to");
    add_common_flags(sim_cmd, opt);

    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate a quantity over a parameter grid");
    std::string sweep_param = "tau", sweep_quantity = "p_ns";
    double sweep_from = 0.01, sweep_to = 0.3;
    int sweep_steps = 10;
    bool sweep_simulate = false;
    sweep_cmd->add_option("--param", sweep_param, "tau|beta|T|lambda|r");
    sweep_cmd->add_option("--from", sweep_from, "grid start")->required();
    sweep_cmd->add_option("--to", sweep_to, "grid end")->required();
    sweep_cmd->add_option("--steps", sweep_steps, "number of grid intervals");
    sweep_cmd->add_option("--quantity", sweep_quantity, "quantity for analytic sweeps");
    sweep_cmd->add_flag("--simulate", sweep_simulate, "simulate d_suc instead of evaluating");
    sweep_cmd->add_option("--out", out_path, "output CSV path");
    add_common_flags(sweep_cmd, opt);

    auto* rep_cmd = app.add_subcommand("reproduce", "regenerate a reference table");
    std::string target;
    bool analytic_only = false, plot_script = false;
    rep_cmd->add_option("target", target, "fig1|fig2|fig3|fig4|fig5")->required();
    rep_cmd->add_option("--out", out_path, "output CSV path");
    rep_cmd->add_flag("--analytic-only", analytic_only, "skip the simulation columns (fig3)");
    rep_cmd->add_flag("--plot-script", plot_script, "emit a gnuplot script next to the CSV");
    add_common_flags(rep_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eval_cmd->parsed()) return run_eval(opt, quantity, optimized);
        if (sim_cmd->parsed()) return run_simulate(opt, out_path);
        if (sweep_cmd->parsed())
            return run_sweep(opt, sweep_param, sweep_from, sweep_to, sweep_steps, sweep_quantity,
                             sweep_simulate, out_path);
        if (rep_cmd->parsed())
            return run_reproduce(opt, target, out_path, analytic_only, plot_script);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
