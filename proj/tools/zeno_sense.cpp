// zeno_sense: sweeps, crossover search and Monte Carlo validation from the command line.
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 numeric failure,
// 3 crossover not found.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "zeno/zeno.hpp"

using nlohmann::json;
using namespace zeno;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kNoCrossover = 3 };

struct Globals {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    std::string gnuplot;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

ExperimentConfig resolve_config(const Globals& g) {
    if (!g.config_path.empty() && !g.preset.empty()) {
        throw ConfigError("--config and --preset are mutually exclusive");
    }
    ExperimentConfig c;
    if (!g.config_path.empty()) {
        c = load_config(g.config_path);
    } else if (g.preset == "fig1") {
        c = fig1_preset();
    } else if (g.preset == "fig2") {
        c = fig2_preset();
    } else if (g.preset.empty()) {
        throw ConfigError("no configuration given; use --config FILE or --preset fig1|fig2");
    } else {
        throw ConfigError("unknown preset '" + g.preset + "'");
    }
    if (g.seed) {
        if (!c.monte_carlo) c.monte_carlo = MonteCarloSettings{};
        c.monte_carlo->seed = *g.seed;
    }
    return c;
}

void write_json(const json& j, const std::string& path) {
    Output out(path);
    out.stream() << j.dump(2) << '\n';
    out.stream().flush();
    if (!out.stream()) throw std::ios_base::failure("write failed");
}

int cmd_sweep(const Globals& g, std::optional<std::uint64_t> trials, const std::string& report) {
    auto cfg = resolve_config(g);
    if (trials) {
        if (*trials < 1) throw ConfigError("--mc-trials must be >= 1");
        if (!cfg.monte_carlo) cfg.monte_carlo = MonteCarloSettings{};
        cfg.monte_carlo->trials = *trials;
    }
    const auto res = run_sweep(cfg);
    {
        Output out(g.out);
        emit_csv(res.rows, out.stream());
    }
    if (!g.gnuplot.empty()) {
        Output gp(g.gnuplot);
        emit_gnuplot(res.rows, gp.stream());
    }
    for (const auto& d : res.diagnostics) std::cerr << "warning: " << d << '\n';
    if (!report.empty()) {
        json j;
        j["config"] = to_json(cfg);
        j["rows"] = res.rows.size();
        j["diagnostics"] = res.diagnostics;
        if (res.crossover) {
            j["crossover"] = crossover_report_json(cfg, res.rows.front().t_conventional, *res.crossover);
        }
        write_json(j, report);
    }
    return kOk;
}

int cmd_crossover(const Globals& g, std::optional<std::uint64_t> L_max) {
    const auto cfg = resolve_config(g);
    const std::uint64_t limit =
        L_max ? *L_max : (cfg.crossover_scan ? cfg.crossover_scan->L_max : CrossoverScan{}.L_max);
    if (limit < 1) throw ConfigError("--L-max must be >= 1");
    const auto outcome = report_crossover(cfg, limit);
    write_json(outcome.report, g.out);
    return std::holds_alternative<CrossoverReport>(outcome.result) ? kOk : kNoCrossover;
}

int cmd_validate(const Globals& g, std::vector<std::uint64_t> Ls, std::optional<std::uint64_t> trials,
                 unsigned threads) {
    const auto cfg = resolve_config(g);
    const MonteCarloSettings mc = cfg.monte_carlo.value_or(MonteCarloSettings{});
    const std::uint64_t R = trials.value_or(100000);
    if (R < 2) throw ConfigError("--trials must be >= 2");
    if (Ls.empty()) Ls = {100, 10000};
    const double t_conv = conventional_time(cfg);
    json rows = json::array();
    bool all_ok = true;
    for (const std::uint64_t L : Ls) {
        if (L < 1) throw ConfigError("--L entries must be >= 1");
        for (const char* protocol : {"conventional", "zeno"}) {
            const double t = std::string(protocol) == "zeno" ? zeno_time(cfg.tau, L) : t_conv;
            TrialConfig trial;
            trial.believed = linearize(believed_model(cfg), t, cfg.interpretation);
            trial.true_probability =
                projection_probability(true_model(cfg), t, mc.omega_true, false, cfg.interpretation);
            trial.qubit_count = L;
            trial.trial_count = R;
            trial.seed = mc.seed;
            trial.omega_true = mc.omega_true;
            trial.threads = threads;
            const auto est = run_trials(trial);
            const double analytic = uncertainty_at(cfg, t, L).total;
            const double z = (est.empirical_mse - analytic) / est.standard_error;
            const bool ok = std::abs(z) <= 3.0;
            all_ok = all_ok && ok;
            rows.push_back({{"L", L},
                            {"protocol", protocol},
                            {"t", t},
                            {"analytic", analytic},
                            {"monte_carlo", est.empirical_mse},
                            {"standard_error", est.standard_error},
                            {"z", z},
                            {"within_3se", ok}});
        }
    }
    json j;
    j["config"] = to_json(cfg);
    j["trials"] = R;
    j["seed"] = mc.seed;
    j["generator"] = kGeneratorName;
    j["rows"] = rows;
    j["pass"] = all_ok;
    write_json(j, g.out);
    return all_ok ? kOk : kNumeric;
}

int cmd_constants(const Globals& g) {
    json j;
    j["gaussian_time_constant"] = gaussian_time_constant();
    j["bohr_magneton_rad_per_s_per_tesla"] = kBohrMagnetonRadPerSecondTesla;
    j["linearization_limit"] = kLinearizationLimit;
    j["generator"] = kGeneratorName;
    if (!g.config_path.empty() || !g.preset.empty()) {
        const auto cfg = resolve_config(g);
        j["config"] = to_json(cfg);
        j["t_conventional"] = conventional_time(cfg);
    }
    write_json(j, g.out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zeno-regime frequency estimation: uncertainty sweeps and crossover search"};
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--preset", g.preset, "built-in configuration")
        ->check(CLI::IsMember({"fig1", "fig2"}));
    app.add_option("--seed", g.seed, "Monte Carlo seed (overrides the configuration)");
    app.add_option("--out", g.out, "output file, '-' for stdout");
    app.add_option("--gnuplot", g.gnuplot, "also write a gnuplot data file (sweep)");

    auto* sweep = app.add_subcommand("sweep", "uncertainty of both protocols over the L grid (CSV)");
    std::optional<std::uint64_t> sweep_trials;
    std::string report;
    sweep->add_option("--mc-trials", sweep_trials, "Monte Carlo trials per row");
    sweep->add_option("--report", report, "write a JSON summary to this file");

    auto* crossover = app.add_subcommand("crossover", "smallest L where the Zeno protocol wins (JSON)");
    std::optional<std::uint64_t> L_max;
    crossover->add_option("--L-max", L_max, "largest L searched");

    auto* validate = app.add_subcommand("validate", "Monte Carlo check of the analytic uncertainty (JSON)");
    std::vector<std::uint64_t> validate_L;
    std::optional<std::uint64_t> validate_trials;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    validate->add_option("--L", validate_L, "qubit counts to check");
    validate->add_option("--trials", validate_trials, "trials per point (default 100000)");
    validate->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    auto* constants = app.add_subcommand("constants", "derived constants (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(g, sweep_trials, report);
        if (crossover->parsed()) return cmd_crossover(g, L_max);
        if (validate->parsed()) return cmd_validate(g, validate_L, validate_trials, threads);
        if (constants->parsed()) return cmd_constants(g);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}
