#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zeno/experiment.hpp"

using namespace zeno;
using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string f;
        std::istringstream ls(line);
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        out.push_back(fields);
    }
    return out;
}

std::string expect_config_error(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    ADD_FAILURE() << "no ConfigError for " << j.dump();
    return {};
}

json minimal() { return {{"believed_T1", 1.0}, {"true_T1", 1.4}, {"L", {1, 10, 100}}}; }

}  // namespace

TEST(Config, MinimalGaussian) {
    const auto c = parse_config(minimal());
    EXPECT_EQ(c.decay_kind, DecayKind::gaussian);
    EXPECT_EQ(c.tau, 2.0);
    EXPECT_EQ(c.L_values, (std::vector<std::uint64_t>{1, 10, 100}));
    EXPECT_FALSE(c.monte_carlo.has_value());
}

TEST(Config, FieldLevelErrors) {
    auto j = minimal();
    j["believed_T1"] = -1.0;
    EXPECT_NE(expect_config_error(j).find("believed_T1"), std::string::npos);
    j = minimal();
    j.erase("true_T1");
    EXPECT_NE(expect_config_error(j).find("true_T1"), std::string::npos);
    j = minimal();
    j["decay"] = "lorentzian";
    EXPECT_NE(expect_config_error(j).find("gamma"), std::string::npos);
    j = minimal();
    j["L"] = {1, 0};
    EXPECT_NE(expect_config_error(j).find("'L'"), std::string::npos);
    j = minimal();
    j["decay"] = "cauchy";
    EXPECT_NE(expect_config_error(j).find("decay"), std::string::npos);
    j = minimal();
    j["interpretation"] = "other";
    EXPECT_NE(expect_config_error(j).find("interpretation"), std::string::npos);
    j = minimal();
    j["monte_carlo"] = {{"seed", -3}};
    EXPECT_NE(expect_config_error(j).find("monte_carlo.seed"), std::string::npos);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, GeometricGrid) {
    const auto g = geometric_grid(1, 1000, 10);
    EXPECT_EQ(g.front(), 1u);
    EXPECT_EQ(g.back(), 1000u);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i - 1], g[i]);
    EXPECT_THROW(geometric_grid(0, 10, 5), ConfigError);
}

TEST(Config, PresetsRoundTrip) {
    for (const auto& c : {fig1_preset(), fig2_preset()}) {
        const auto back = parse_config(to_json(c));
        EXPECT_EQ(back.decay_kind, c.decay_kind);
        EXPECT_EQ(back.believed_T1, c.believed_T1);
        EXPECT_EQ(back.true_T1, c.true_T1);
        EXPECT_EQ(back.L_values, c.L_values);
        EXPECT_EQ(back.crossover_scan.has_value(), c.crossover_scan.has_value());
    }
}

TEST(Sweep, GaussianBoundaryAroundCrossover) {
    auto c = fig1_preset();
    c.L_values = {1, 10, 100};
    const auto res = run_sweep(c);
    ASSERT_TRUE(res.crossover.has_value());
    EXPECT_EQ(std::get<CrossoverReport>(*res.crossover).crossover_L, oracle::kGaussianCrossover);
    const SweepRow* before = nullptr;
    const SweepRow* at = nullptr;
    for (const auto& r : res.rows) {
        if (r.L == oracle::kGaussianCrossover - 1) before = &r;
        if (r.L == oracle::kGaussianCrossover) at = &r;
    }
    ASSERT_NE(before, nullptr);
    ASSERT_NE(at, nullptr);
    EXPECT_GE(before->zeno_total, before->conv_total);
    EXPECT_LT(at->zeno_total, at->conv_total);
}

TEST(Sweep, PerfectKnowledgeHasNoSystematicTerm) {
    auto c = fig1_preset();
    c.true_T1 = c.believed_T1;
    c.L_values = {1, 50, 5000};
    c.crossover_scan.reset();
    for (const auto& r : run_sweep(c).rows) {
        EXPECT_EQ(r.conv_systematic, 0.0);
        EXPECT_EQ(r.zeno_systematic, 0.0);
    }
}

TEST(Sweep, StatisticalTermsOrderedByInteractionTime) {
    // Past L = (tau/t_c)^4 the Zeno time is shorter than t_c; both models then give
    // the shorter time a larger statistical term.
    for (auto c : {fig1_preset(), fig2_preset()}) {
        c.crossover_scan.reset();
        c.L_values = geometric_grid(1000, 1'000'000, 5);
        for (const auto& r : run_sweep(c).rows) {
            ASSERT_LT(r.t_zeno, r.t_conventional);
            EXPECT_GT(r.zeno_statistical, r.conv_statistical) << "L=" << r.L;
        }
    }
}

TEST(Sweep, MonteCarloColumnsTrackAnalytic) {
    auto c = fig1_preset();
    c.crossover_scan.reset();
    c.L_values = {100, 10000};
    c.monte_carlo = MonteCarloSettings{20000, 11, 0.0};
    for (const auto& r : run_sweep(c).rows) {
        ASSERT_TRUE(r.mc_mse.has_value());
        EXPECT_LT(std::abs(*r.mc_mse - r.zeno_total), 4.0 * *r.mc_stderr) << "L=" << r.L;
    }
}

TEST(Csv, SingleRowAndExactRoundTrip) {
    auto c = fig2_preset();
    c.crossover_scan.reset();
    c.L_values = {37};
    const auto res = run_sweep(c);
    std::ostringstream os;
    emit_csv(res.rows, os);
    const auto table = parse_csv(os.str());
    ASSERT_EQ(table.size(), 2u);
    ASSERT_EQ(table[0].size(), std::size(kSweepColumns));
    ASSERT_EQ(table[1].size(), std::size(kSweepColumns));
    EXPECT_EQ(table[0][0], "L");
    EXPECT_EQ(table[1][0], "37");
    const auto& r = res.rows[0];
    const double expected[] = {r.t_conventional,   r.t_zeno,         r.conv_total,
                               r.conv_statistical, r.conv_systematic, r.zeno_total,
                               r.zeno_statistical, r.zeno_systematic};
    for (std::size_t i = 0; i < std::size(expected); ++i) {
        EXPECT_EQ(std::stod(table[1][i + 1]), expected[i]) << kSweepColumns[i + 1];
    }
    EXPECT_EQ(table[1][9], "");
    EXPECT_EQ(table[1][10], "");
}

TEST(Csv, EmptyRowsAndFailedStream) {
    std::ostringstream os;
    EXPECT_THROW(emit_csv({}, os), std::invalid_argument);
    auto c = fig1_preset();
    c.crossover_scan.reset();
    c.L_values = {3};
    const auto rows = run_sweep(c).rows;
    std::ostringstream bad;
    bad.setstate(std::ios::badbit);
    EXPECT_THROW(emit_csv(rows, bad), std::ios_base::failure);
}

TEST(Csv, ByteIdenticalReruns) {
    auto c = fig1_preset();
    c.L_values = geometric_grid(1, 100000, 20);
    c.monte_carlo = MonteCarloSettings{500, 99, 0.0};
    std::ostringstream a, b;
    emit_csv(run_sweep(c).rows, a);
    emit_csv(run_sweep(c).rows, b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_GT(a.str().size(), 1000u);
}

TEST(Gnuplot, LegendAndNaNPlaceholders) {
    auto c = fig1_preset();
    c.crossover_scan.reset();
    c.L_values = {1, 2};
    std::ostringstream os;
    emit_gnuplot(run_sweep(c).rows, os);
    std::istringstream in(os.str());
    std::string legend, line;
    std::getline(in, legend);
    EXPECT_EQ(legend.rfind("# columns: 1:L 2:t_conventional", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("1 ", 0), 0u);
    EXPECT_NE(line.find("NaN NaN"), std::string::npos);
}

TEST(Sweep, LiteralInterpretationHasNoConventionalOptimum) {
    auto c = fig2_preset();
    c.interpretation = Interpretation::literal;
    c.crossover_scan.reset();
    c.L_values = {1, 100};
    EXPECT_THROW(run_sweep(c), NumericError);
}

TEST(Report, CrossoverJson) {
    const auto found = report_crossover(fig1_preset(), 10000);
    EXPECT_TRUE(found.report.at("found").get<bool>());
    EXPECT_EQ(found.report.at("crossover_L").get<std::uint64_t>(), oracle::kGaussianCrossover);
    EXPECT_EQ(found.report.at("t_conventional").get<double>(), found.t_conventional);
    EXPECT_EQ(found.report.at("config").at("decay"), "gaussian");

    auto same = fig1_preset();
    same.true_T1 = same.believed_T1;
    const auto nf = report_crossover(same, 1000);
    EXPECT_FALSE(nf.report.at("found").get<bool>());
    EXPECT_EQ(nf.report.at("L_max").get<std::uint64_t>(), 1000u);
}

TEST(Config, GridEchoedOnlyWhileConsistent) {
    auto c = fig1_preset();
    EXPECT_TRUE(to_json(c).at("L").is_object());
    c.L_values = {5, 6};
    EXPECT_EQ(to_json(c).at("L"), json({5, 6}));
}
