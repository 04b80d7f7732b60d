#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zeno/monte_carlo.hpp"
#include "zeno/protocols.hpp"
#include "zeno/uncertainty.hpp"

using namespace zeno;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(EstimateOmega, Examples) {
    const ReadoutProbability ideal{0.5, 0.5, 1.0};
    EXPECT_EQ(estimate_omega(50, 100, ideal), 0.0);
    EXPECT_NEAR(estimate_omega(55, 100, ideal), 0.1, 1e-15);
    // Reduces to (2 k/L - 1)/t for the ideal qubit.
    const ReadoutProbability t3{0.5, 1.5, 3.0};
    EXPECT_NEAR(estimate_omega(7, 10, t3), (2 * 0.7 - 1) / 3.0, 1e-15);
}

TEST(EstimateOmega, Errors) {
    EXPECT_THROW(estimate_omega(1, 10, ReadoutProbability{0.5, 0.0, 1.0}), DegenerateEstimator);
    EXPECT_THROW(estimate_omega(11, 10, ReadoutProbability{0.5, 0.5, 1.0}), DomainError);
    EXPECT_THROW(estimate_omega(0, 0, ReadoutProbability{0.5, 0.5, 1.0}), DomainError);
}

TEST(EstimateOmega, MeanOverBinomialIsLinearInversion) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 40; ++i) {
        const std::uint64_t L = 1 + i % 20;
        const double p = u(rng);
        const ReadoutProbability b{u(rng) * 0.5, 0.1 + u(rng), 1.0};
        double mean = 0.0;
        for (std::uint64_t k = 0; k <= L; ++k) {
            mean += oracle::binomial_pmf(L, k, p) * estimate_omega(k, L, b);
        }
        EXPECT_NEAR(mean, (p - b.intercept) / b.slope, 1e-12);
    }
}

TEST(ExactMse, HandEnumeration) {
    EXPECT_NEAR(exact_mse(1, 0.5, ReadoutProbability{0.5, 0.5, 1.0}, 0.0), 1.0, 1e-15);
    EXPECT_THROW(exact_mse(21, 0.5, ReadoutProbability{0.5, 0.5, 1.0}), DomainError);
    EXPECT_THROW(exact_mse(0, 0.5, ReadoutProbability{0.5, 0.5, 1.0}), DomainError);
}

TEST(ExactMse, BiasVarianceDecomposition) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    std::uniform_real_distribution<double> w(-0.3, 0.3);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t L = 1 + i % 20;
        const double p = u(rng), omega = w(rng);
        const ReadoutProbability b{u(rng) * 0.5, 0.05 + u(rng), 1.0};
        const double var = p * (1 - p) / (b.slope * b.slope * L);
        const double bias = (p - b.intercept) / b.slope - omega;
        EXPECT_LT(rel(exact_mse(L, p, b, omega), var + bias * bias), 1e-12);
    }
}

TEST(ExactMse, MatchesGeneralFormulaAtZeroField) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t L = 1 + i % 20;
        const ReadoutProbability believed{u(rng) * 0.5, 0.05 + u(rng), 1.0};
        const ReadoutProbability truth{u(rng) * 0.9 + 0.05, 0.05 + u(rng), 1.0};
        const double analytic = general_uncertainty({believed, truth, L, 1}, 0.0).total;
        EXPECT_LT(rel(exact_mse(L, truth.intercept, believed, 0.0), analytic), 1e-12);
    }
}

TEST(ExactMse, SmallFieldAgreementIsFirstOrder) {
    // Gaussian readouts at |omega t| <= 0.01: the formula is leading order in omega.
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double T1 = u(rng), T1p = T1 * (1.2 + 0.2 * u(rng)), t = 0.5 * u(rng);
        const std::uint64_t L = 1 + i % 20;
        const double omega = 0.01 / t;
        const auto believed = linearize(GaussianDecay(T1), t);
        const auto truth = linearize(GaussianDecay(T1p), t);
        const double analytic = general_uncertainty({believed, truth, L, 1}, omega).total;
        const double exact = exact_mse(L, truth.at(omega), believed, omega);
        EXPECT_LT(rel(exact, analytic), 5.0 * omega * t);
    }
}

TEST(Generator, DeterministicAndDistinctStreams) {
    auto a = trial_stream(42, 0), b = trial_stream(42, 0), c = trial_stream(42, 1),
         d = trial_stream(43, 0);
    const auto va = a(), vb = b(), vc = c(), vd = d();
    EXPECT_EQ(va, vb);
    EXPECT_NE(va, vc);
    EXPECT_NE(va, vd);
    // xoshiro256** reference output for the state seeded by splitmix64(0).
    Xoshiro256StarStar x(0);
    EXPECT_EQ(x(), 0x99ec5f36cb75f2b4ULL);
}

TEST(RunTrials, IdealQubitMatchesOneOverT2L) {
    TrialConfig cfg{0.5, ReadoutProbability{0.5, 0.5, 1.0}, 100, 100000, 2024, 0.0};
    const auto est = run_trials(cfg);
    EXPECT_EQ(est.trials, 100000u);
    EXPECT_LT(std::abs(est.empirical_mse - 0.01), 3.0 * est.standard_error);
}

TEST(RunTrials, UnbiasedCaseMatchesVariance) {
    const ReadoutProbability b{0.3, 0.4, 0.8};
    TrialConfig cfg{0.3, b, 250, 50000, 77, 0.0};
    const auto est = run_trials(cfg);
    const double expected = 0.3 * 0.7 / (0.4 * 0.4 * 250);
    EXPECT_LT(std::abs(est.empirical_mse - expected), 3.0 * est.standard_error);
}

TEST(RunTrials, GaussianOperatingPointMatchesClosedForm) {
    const double t = 0.876;
    const std::uint64_t L = 10000;
    TrialConfig cfg;
    cfg.believed = linearize(GaussianDecay(1.0), t);
    cfg.true_probability = projection_probability(GaussianDecay(1.4), t, 0.0, false);
    cfg.qubit_count = L;
    cfg.trial_count = 100000;
    cfg.seed = 5;
    const auto est = run_trials(cfg);
    const double analytic = gaussian_uncertainty(1.0, 1.4, t, L).total;
    EXPECT_LT(std::abs(est.empirical_mse - analytic), 3.0 * est.standard_error);
    // Bias identity: mean estimate -> (P' - x)/y.
    const double bias = (cfg.true_probability - cfg.believed.intercept) / cfg.believed.slope;
    EXPECT_LT(std::abs(est.mean_estimate - bias), 3.0 * est.mean_standard_error);
}

TEST(RunTrials, ConvergesToExactMse) {
    const ReadoutProbability b{0.45, 0.35, 1.0};
    TrialConfig cfg{0.52, b, 12, 1'000'000, 31337, 0.02};
    const auto est = run_trials(cfg);
    EXPECT_LT(std::abs(est.empirical_mse - exact_mse(12, 0.52, b, 0.02)), 3.0 * est.standard_error);
}

TEST(RunTrials, BitReproducibleAndThreadIndependent) {
    TrialConfig cfg{0.37, ReadoutProbability{0.4, 0.3, 0.9}, 5000, 20000, 9, 0.0};
    const auto a = run_trials(cfg);
    const auto b = run_trials(cfg);
    cfg.threads = 4;
    const auto c = run_trials(cfg);
    EXPECT_EQ(a.empirical_mse, b.empirical_mse);
    EXPECT_EQ(a.standard_error, b.standard_error);
    EXPECT_EQ(a.empirical_mse, c.empirical_mse);
    EXPECT_EQ(a.mean_estimate, c.mean_estimate);
    cfg.seed = 10;
    EXPECT_NE(run_trials(cfg).empirical_mse, a.empirical_mse);
}

TEST(RunTrials, BernoulliSelfCheckAgreesWithBinomial) {
    const ReadoutProbability b{0.5, 0.5, 1.0};
    TrialConfig bin{0.41, b, 48, 200000, 1, 0.0};
    TrialConfig ber = bin;
    ber.sampler = Sampler::bernoulli;
    ber.seed = 2;
    const auto x = run_trials(bin), y = run_trials(ber);
    const double se = std::hypot(x.standard_error, y.standard_error);
    EXPECT_LT(std::abs(x.empirical_mse - y.empirical_mse), 4.0 * se);
    ber.qubit_count = 65;
    EXPECT_THROW(run_trials(ber), DomainError);
}

TEST(RunTrials, InvalidConfigs) {
    const ReadoutProbability b{0.5, 0.5, 1.0};
    EXPECT_THROW(run_trials(TrialConfig{0.0, b, 10, 10, 0, 0.0}), DomainError);
    EXPECT_THROW(run_trials(TrialConfig{1.0, b, 10, 10, 0, 0.0}), DomainError);
    EXPECT_THROW(run_trials(TrialConfig{0.5, b, 10, 0, 0, 0.0}), DomainError);
    EXPECT_THROW(run_trials(TrialConfig{0.5, ReadoutProbability{0.5, 0.0, 1.0}, 10, 10, 0, 0.0}),
                 DegenerateEstimator);
}

TEST(RunTrials, EstimatesAreNotClipped) {
    // Believed slope tiny: raw estimates are huge and must not be clamped.
    TrialConfig cfg{0.9, ReadoutProbability{0.1, 1e-3, 1.0}, 10, 100, 3, 0.0};
    const auto est = run_trials(cfg);
    EXPECT_GT(est.mean_estimate, 500.0);
}
