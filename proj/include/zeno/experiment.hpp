// experiment.hpp: run configurations, L sweeps, CSV output and crossover
// reports for the conventional and Zeno protocols.
//
// Configurations are JSON objects:
//
//   {
//     "decay": "gaussian" | "lorentzian",
//     "believed_T1": 1.0,            // s, what the experimenter assumes
//     "true_T1": 1.4,                // s, actual coherence time
//     "gamma": 1.0,                  // 1/s, lorentzian only
//     "tau": 2.0,                    // s, Zeno time t = tau L^{-1/4}
//     "L": [1, 2, 3] | {"start": 1, "stop": 1e7, "per_decade": 200},
//     "interpretation": "survival" | "literal",   // lorentzian only
//     "crossover_scan": {"L_max": 100000, "half_width": 0.1},   // optional
//     "monte_carlo": {"trials": 1000, "seed": 1, "omega_true": 0.0}  // optional
//   }

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zeno/decay.hpp"
#include "zeno/errors.hpp"
#include "zeno/monte_carlo.hpp"
#include "zeno/protocols.hpp"
#include "zeno/readout.hpp"
#include "zeno/uncertainty.hpp"

namespace zeno {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class DecayKind { gaussian, lorentzian };

inline const char* to_string(DecayKind k) {
    return k == DecayKind::gaussian ? "gaussian" : "lorentzian";
}

struct MonteCarloSettings {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    double omega_true = 0.0;
};

struct CrossoverScan {
    std::uint64_t L_max = 100000;
    double half_width = 0.1;  // relative; integers in [(1-w) Lc, (1+w) Lc] are added
};

struct GridSpec {
    std::uint64_t start;
    std::uint64_t stop;
    double per_decade;
};

struct ExperimentConfig {
    DecayKind decay_kind = DecayKind::gaussian;
    double believed_T1 = 1.0;
    double true_T1 = 1.4;
    double gamma = 1.0;
    double tau = 2.0;
    std::vector<std::uint64_t> L_values;
    std::optional<GridSpec> L_grid;  // echoed instead of L_values while they agree
    Interpretation interpretation = Interpretation::survival;
    std::optional<CrossoverScan> crossover_scan;
    std::optional<MonteCarloSettings> monte_carlo;
};

struct SweepRow {
    std::uint64_t L;
    double t_conventional;
    double t_zeno;
    double conv_total;
    double conv_statistical;
    double conv_systematic;
    double zeno_total;
    double zeno_statistical;
    double zeno_systematic;
    std::optional<double> mc_mse;
    std::optional<double> mc_stderr;
};

inline constexpr const char* kSweepColumns[] = {
    "L",          "t_conventional",   "t_zeno",          "conv_total",
    "conv_statistical", "conv_systematic", "zeno_total", "zeno_statistical",
    "zeno_systematic",  "mc_mse",          "mc_stderr"};

/// Geometric grid from start to stop with `per_decade` points per decade,
/// rounded to integers, deduplicated, always containing both ends.
inline std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop,
                                                 double per_decade) {
    if (start < 1 || stop < start) throw ConfigError("field 'L': need 1 <= start <= stop");
    if (!(per_decade > 0.0)) throw ConfigError("field 'L.per_decade': must be positive");
    std::set<std::uint64_t> values{start, stop};
    const double decades = std::log10(static_cast<double>(stop) / static_cast<double>(start));
    const auto steps = static_cast<std::uint64_t>(std::ceil(decades * per_decade));
    for (std::uint64_t i = 0; i <= steps; ++i) {
        const double v = static_cast<double>(start) *
                         std::pow(10.0, static_cast<double>(i) / per_decade);
        const auto L = static_cast<std::uint64_t>(std::llround(v));
        if (L >= start && L <= stop) values.insert(L);
    }
    return {values.begin(), values.end()};
}

namespace detail {

inline double positive_field(const nlohmann::json& j, const char* key, double fallback,
                             bool required) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(std::string("field '") + key + "': missing");
        return fallback;
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("field '") + key + "': must be a number");
    }
    const double v = j.at(key).get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("field '") + key + "': must be positive");
    }
    return v;
}

inline std::uint64_t count_field(const nlohmann::json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number() || v.get<double>() < 1.0 || v.get<double>() != std::floor(v.get<double>())) {
        throw ConfigError(std::string("field '") + key + "': must be a positive integer");
    }
    return static_cast<std::uint64_t>(v.get<double>());
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
    if (c.L_values.empty()) throw ConfigError("field 'L': must not be empty");
    for (std::size_t i = 0; i < c.L_values.size(); ++i) {
        if (c.L_values[i] < 1) throw ConfigError("field 'L': values must be positive");
        if (i > 0 && c.L_values[i] <= c.L_values[i - 1]) {
            throw ConfigError("field 'L': values must be strictly increasing");
        }
    }
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string("field '") + name + "': must be positive");
        }
    };
    positive(c.believed_T1, "believed_T1");
    positive(c.true_T1, "true_T1");
    positive(c.tau, "tau");
    if (c.decay_kind == DecayKind::lorentzian) positive(c.gamma, "gamma");
    if (c.monte_carlo && c.monte_carlo->trials < 1) {
        throw ConfigError("field 'monte_carlo.trials': must be >= 1");
    }
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    ExperimentConfig c;
    const std::string decay = j.value("decay", std::string("gaussian"));
    if (decay == "gaussian") {
        c.decay_kind = DecayKind::gaussian;
    } else if (decay == "lorentzian") {
        c.decay_kind = DecayKind::lorentzian;
    } else {
        throw ConfigError("field 'decay': expected \"gaussian\" or \"lorentzian\"");
    }
    c.believed_T1 = detail::positive_field(j, "believed_T1", 0.0, true);
    c.true_T1 = detail::positive_field(j, "true_T1", 0.0, true);
    c.gamma = detail::positive_field(j, "gamma", 1.0, c.decay_kind == DecayKind::lorentzian);
    c.tau = detail::positive_field(j, "tau", 2.0, false);

    const std::string interp = j.value("interpretation", std::string("survival"));
    if (interp == "survival") {
        c.interpretation = Interpretation::survival;
    } else if (interp == "literal") {
        c.interpretation = Interpretation::literal;
    } else {
        throw ConfigError("field 'interpretation': expected \"survival\" or \"literal\"");
    }

    if (!j.contains("L")) throw ConfigError("field 'L': missing");
    const auto& L = j.at("L");
    if (L.is_array()) {
        for (const auto& v : L) {
            if (!v.is_number() || v.get<double>() < 1.0 ||
                v.get<double>() != std::floor(v.get<double>())) {
                throw ConfigError("field 'L': entries must be positive integers");
            }
            c.L_values.push_back(static_cast<std::uint64_t>(v.get<double>()));
        }
    } else if (L.is_object()) {
        const auto start = detail::count_field(L, "start", 1);
        const auto stop = detail::count_field(L, "stop", 0);
        if (stop == 0) throw ConfigError("field 'L.stop': missing");
        const double per_decade = detail::positive_field(L, "per_decade", 200.0, false);
        c.L_values = geometric_grid(start, stop, per_decade);
        c.L_grid = GridSpec{start, stop, per_decade};
    } else {
        throw ConfigError("field 'L': expected a list or {start, stop, per_decade}");
    }

    if (j.contains("crossover_scan")) {
        const auto& s = j.at("crossover_scan");
        if (!s.is_object()) throw ConfigError("field 'crossover_scan': expected an object");
        CrossoverScan scan;
        scan.L_max = detail::count_field(s, "L_max", scan.L_max);
        scan.half_width = detail::positive_field(s, "half_width", scan.half_width, false);
        c.crossover_scan = scan;
    }
    if (j.contains("monte_carlo")) {
        const auto& m = j.at("monte_carlo");
        if (!m.is_object()) throw ConfigError("field 'monte_carlo': expected an object");
        MonteCarloSettings mc;
        mc.trials = detail::count_field(m, "trials", mc.trials);
        if (m.contains("seed")) {
            if (!m.at("seed").is_number_unsigned()) {
                throw ConfigError("field 'monte_carlo.seed': must be a non-negative integer");
            }
            mc.seed = m.at("seed").get<std::uint64_t>();
        }
        if (m.contains("omega_true")) {
            if (!m.at("omega_true").is_number()) {
                throw ConfigError("field 'monte_carlo.omega_true': must be a number");
            }
            mc.omega_true = m.at("omega_true").get<double>();
        }
        c.monte_carlo = mc;
    }
    validate(c);
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["decay"] = to_string(c.decay_kind);
    j["believed_T1"] = c.believed_T1;
    j["true_T1"] = c.true_T1;
    if (c.decay_kind == DecayKind::lorentzian) {
        j["gamma"] = c.gamma;
        j["interpretation"] = to_string(c.interpretation);
    }
    j["tau"] = c.tau;
    if (c.L_grid && geometric_grid(c.L_grid->start, c.L_grid->stop, c.L_grid->per_decade) ==
                        c.L_values) {
        j["L"] = {{"start", c.L_grid->start},
                  {"stop", c.L_grid->stop},
                  {"per_decade", c.L_grid->per_decade}};
    } else {
        j["L"] = c.L_values;
    }
    if (c.crossover_scan) {
        j["crossover_scan"] = {{"L_max", c.crossover_scan->L_max},
                               {"half_width", c.crossover_scan->half_width}};
    }
    if (c.monte_carlo) {
        j["monte_carlo"] = {{"trials", c.monte_carlo->trials},
                            {"seed", c.monte_carlo->seed},
                            {"omega_true", c.monte_carlo->omega_true}};
    }
    return j;
}

/// Gaussian setting: T1 = 1 s, T1' = 1.4 s, tau = 2 s.
inline ExperimentConfig fig1_preset() {
    ExperimentConfig c;
    c.decay_kind = DecayKind::gaussian;
    c.believed_T1 = 1.0;
    c.true_T1 = 1.4;
    c.tau = 2.0;
    c.L_values = geometric_grid(1, 10'000'000, 200);
    c.L_grid = GridSpec{1, 10'000'000, 200};
    c.crossover_scan = CrossoverScan{};
    return c;
}

/// Spin-boson setting: believed 2 s, true 2.4 s, gamma = 1/s, tau = 2 s.
inline ExperimentConfig fig2_preset() {
    ExperimentConfig c;
    c.decay_kind = DecayKind::lorentzian;
    c.believed_T1 = 2.0;
    c.true_T1 = 2.4;
    c.gamma = 1.0;
    c.tau = 2.0;
    c.L_values = geometric_grid(1, 10'000'000, 200);
    c.L_grid = GridSpec{1, 10'000'000, 200};
    c.interpretation = Interpretation::survival;
    c.crossover_scan = CrossoverScan{};
    return c;
}

inline DecayModel believed_model(const ExperimentConfig& c) {
    if (c.decay_kind == DecayKind::gaussian) return GaussianDecay(c.believed_T1);
    return lorentzian_from_coherence(c.gamma, c.believed_T1);
}

inline DecayModel true_model(const ExperimentConfig& c) {
    if (c.decay_kind == DecayKind::gaussian) return GaussianDecay(c.true_T1);
    return lorentzian_from_coherence(c.gamma, c.true_T1);
}

/// Actual uncertainty (true coherence time) at interaction time t.
inline UncertaintyBreakdown uncertainty_at(const ExperimentConfig& c, double t, std::uint64_t L,
                                           Diagnostics* diag = nullptr) {
    if (c.decay_kind == DecayKind::gaussian) {
        return gaussian_uncertainty(c.believed_T1, c.true_T1, t, L);
    }
    return lorentzian_uncertainty(c.gamma, c.believed_T1, c.true_T1, t, L, c.interpretation, diag);
}

/// L-independent conventional interaction time for the configuration.
inline double conventional_time(const ExperimentConfig& c) {
    return conventional_time(believed_model(c),
                             c.decay_kind == DecayKind::gaussian ? Interpretation::survival
                                                                 : c.interpretation);
}

inline CrossoverResult find_config_crossover(const ExperimentConfig& c, double t_conventional,
                                      std::uint64_t L_max) {
    auto total_or_inf = [&](double t, std::uint64_t L) {
        try {
            return uncertainty_at(c, t, L).total;
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    return find_crossover([&](std::uint64_t L) { return total_or_inf(t_conventional, L); },
                          [&](std::uint64_t L) { return total_or_inf(zeno_time(c.tau, L), L); },
                          L_max);
}

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<CrossoverResult> crossover;
    std::vector<std::string> diagnostics;
};

inline SweepResult run_sweep(const ExperimentConfig& config) {
    validate(config);
    SweepResult out;
    const double t_conv = conventional_time(config);

    std::set<std::uint64_t> Ls(config.L_values.begin(), config.L_values.end());
    if (config.crossover_scan) {
        out.crossover = find_config_crossover(config, t_conv, config.crossover_scan->L_max);
        if (const auto* r = std::get_if<CrossoverReport>(&*out.crossover)) {
            const double w = config.crossover_scan->half_width;
            const double lc = static_cast<double>(r->crossover_L);
            const auto lo = static_cast<std::uint64_t>(std::max(1.0, std::floor(lc * (1.0 - w))));
            const auto hi = static_cast<std::uint64_t>(std::ceil(lc * (1.0 + w)));
            for (std::uint64_t L = lo; L <= hi; ++L) Ls.insert(L);
        }
    }

    const DecayModel believed = believed_model(config);
    const DecayModel truth = true_model(config);
    const Interpretation interp = config.interpretation;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t row_index = 0;
    for (const std::uint64_t L : Ls) {
        const double t_zeno = zeno_time(config.tau, L);
        SweepRow row{L, t_conv, t_zeno, nan, nan, nan, nan, nan, nan, std::nullopt, std::nullopt};
        Diagnostics diag;
        try {
            const auto conv = uncertainty_at(config, t_conv, L, &diag);
            row.conv_total = conv.total;
            row.conv_statistical = conv.statistical;
            row.conv_systematic = conv.systematic;
        } catch (const DomainError& e) {
            diag.note(std::string("conventional: ") + e.what());
        }
        try {
            const auto zen = uncertainty_at(config, t_zeno, L, &diag);
            row.zeno_total = zen.total;
            row.zeno_statistical = zen.statistical;
            row.zeno_systematic = zen.systematic;
            if (config.monte_carlo) {
                const auto& mc = *config.monte_carlo;
                TrialConfig trial;
                trial.true_probability =
                    projection_probability(truth, t_zeno, mc.omega_true, false, interp, &diag);
                trial.believed = linearize(believed, t_zeno, interp, &diag);
                trial.qubit_count = L;
                trial.trial_count = mc.trials;
                trial.seed = mc.seed ^ (L * 0x9e3779b97f4a7c15ULL);
                trial.omega_true = mc.omega_true;
                const auto est = run_trials(trial);
                row.mc_mse = est.empirical_mse;
                row.mc_stderr = est.standard_error;
            }
        } catch (const DomainError& e) {
            diag.note(std::string("zeno: ") + e.what());
        }
        for (auto& m : diag.messages) {
            out.diagnostics.push_back("row " + std::to_string(row_index) + " (L=" +
                                      std::to_string(L) + "): " + m);
        }
        out.rows.push_back(row);
        ++row_index;
    }
    return out;
}

/// 17 significant digits, which round-trips every double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> row_fields(const SweepRow& r) {
    return {std::to_string(r.L),
            format_double(r.t_conventional),
            format_double(r.t_zeno),
            format_double(r.conv_total),
            format_double(r.conv_statistical),
            format_double(r.conv_systematic),
            format_double(r.zeno_total),
            format_double(r.zeno_statistical),
            format_double(r.zeno_systematic),
            r.mc_mse ? format_double(*r.mc_mse) : std::string(),
            r.mc_stderr ? format_double(*r.mc_stderr) : std::string()};
}

inline void check_stream(const std::ostream& os) {
    if (!os) throw std::ios_base::failure("write to output stream failed");
}

}  // namespace detail

inline void emit_csv(std::span<const SweepRow> rows, std::ostream& os) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows to write");
    bool first = true;
    for (const char* name : kSweepColumns) {
        os << (first ? "" : ",") << name;
        first = false;
    }
    os << '\n';
    for (const auto& r : rows) {
        const auto fields = detail::row_fields(r);
        for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i];
        os << '\n';
    }
    os.flush();
    detail::check_stream(os);
}

/// Whitespace-separated variant with a commented, numbered column legend;
/// missing Monte Carlo values are written as NaN.
inline void emit_gnuplot(std::span<const SweepRow> rows, std::ostream& os) {
    if (rows.empty()) throw std::invalid_argument("emit_gnuplot: no rows to write");
    std::size_t col = 1;
    os << "# columns:";
    for (const char* name : kSweepColumns) os << ' ' << col++ << ':' << name;
    os << '\n';
    for (const auto& r : rows) {
        auto fields = detail::row_fields(r);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            os << (i ? " " : "") << (fields[i].empty() ? "NaN" : fields[i]);
        }
        os << '\n';
    }
    os.flush();
    detail::check_stream(os);
}

/// Structured crossover report with the configuration echo.
inline nlohmann::json crossover_report_json(const ExperimentConfig& c, double t_conventional,
                                            const CrossoverResult& result) {
    nlohmann::json j;
    j["config"] = to_json(c);
    j["t_conventional"] = t_conventional;
    if (const auto* r = std::get_if<CrossoverReport>(&result)) {
        j["found"] = true;
        j["crossover_L"] = r->crossover_L;
        j["conventional_at_crossover"] = r->conventional_at_crossover;
        j["zeno_at_crossover"] = r->zeno_at_crossover;
        j["t_zeno_at_crossover"] = zeno_time(c.tau, r->crossover_L);
    } else {
        const auto& nf = std::get<CrossoverNotFound>(result);
        j["found"] = false;
        j["L_max"] = nf.L_max;
        j["final_gap"] = nf.final_gap;
    }
    return j;
}

struct CrossoverOutcome {
    double t_conventional;
    CrossoverResult result;
    nlohmann::json report;
};

inline CrossoverOutcome report_crossover(const ExperimentConfig& c, std::uint64_t L_max) {
    validate(c);
    const double t_conv = conventional_time(c);
    auto result = find_config_crossover(c, t_conv, L_max);
    auto report = crossover_report_json(c, t_conv, result);
    return {t_conv, std::move(result), std::move(report)};
}

}  // namespace zeno
