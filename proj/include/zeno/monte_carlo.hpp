// monte_carlo.hpp: simulated readout of L qubits and the linear estimator.
//
// Each trial draws its own generator from (seed, trial index), so serial and
// threaded runs produce bit-identical aggregates.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/random/binomial_distribution.hpp>

#include "zeno/errors.hpp"
#include "zeno/readout.hpp"

namespace zeno {

inline constexpr std::string_view kGeneratorName =
    "xoshiro256** 1.0, splitmix64 substreams keyed by (seed, trial)";

/// splitmix64 (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256StarStar(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

inline Xoshiro256StarStar trial_stream(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t key = seed;
    const std::uint64_t a = splitmix64(key);
    std::uint64_t mixed = a ^ (trial * 0xd1b54a32d192ed03ULL);
    return Xoshiro256StarStar(splitmix64(mixed));
}

enum class Sampler {
    binomial,   // one Binomial(L, p) draw per trial
    bernoulli,  // L independent draws; self-check path, L <= 64
};

inline constexpr std::uint64_t kBernoulliMaxQubits = 64;

struct TrialConfig {
    double true_probability;          // P'
    ReadoutProbability believed;      // x, y used for inversion
    std::uint64_t qubit_count;        // L
    std::uint64_t trial_count;        // R
    std::uint64_t seed = 0;
    double omega_true = 0.0;
    Sampler sampler = Sampler::binomial;
    unsigned threads = 1;
};

struct MseEstimate {
    double empirical_mse;
    double standard_error;
    std::uint64_t trials;
    double mean_estimate;           // average omega_est
    double mean_standard_error;     // standard error of mean_estimate
};

/// omega_est = (k/L - x) / y. Reduces to (2 k/L - 1)/t for the ideal qubit.
inline double estimate_omega(std::uint64_t success_count, std::uint64_t L,
                             const ReadoutProbability& believed) {
    if (L < 1) throw DomainError("qubit count L must be >= 1");
    if (success_count > L) throw DomainError("success count exceeds L");
    if (believed.slope == 0.0) throw DegenerateEstimator("believed slope y is zero");
    return (static_cast<double>(success_count) / static_cast<double>(L) - believed.intercept) /
           believed.slope;
}

inline std::uint64_t sample_successes(Xoshiro256StarStar& rng, std::uint64_t L, double p,
                                      Sampler sampler) {
    if (sampler == Sampler::bernoulli) {
        std::uint64_t k = 0;
        for (std::uint64_t m = 0; m < L; ++m) k += rng.uniform() < p ? 1 : 0;
        return k;
    }
    boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(L),
                                                                     p);
    return static_cast<std::uint64_t>(dist(rng));
}

namespace detail {

inline void validate(const TrialConfig& c) {
    if (!(c.true_probability > 0.0 && c.true_probability < 1.0)) {
        throw DomainError("true probability must lie in (0,1)");
    }
    if (c.qubit_count < 1) throw DomainError("qubit count L must be >= 1");
    if (c.trial_count < 1) throw DomainError("trial count must be >= 1");
    if (c.believed.slope == 0.0) throw DegenerateEstimator("believed slope y is zero");
    if (c.sampler == Sampler::bernoulli && c.qubit_count > kBernoulliMaxQubits) {
        throw DomainError("bernoulli sampler is limited to L <= 64");
    }
}

}  // namespace detail

inline MseEstimate run_trials(const TrialConfig& cfg) {
    detail::validate(cfg);
    const std::uint64_t R = cfg.trial_count;
    std::vector<double> estimates(R);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
            auto rng = trial_stream(cfg.seed, r);
            const auto k = sample_successes(rng, cfg.qubit_count, cfg.true_probability, cfg.sampler);
            estimates[r] = estimate_omega(k, cfg.qubit_count, cfg.believed);
        }
    };
    const std::uint64_t threads = std::clamp<std::uint64_t>(cfg.threads, 1, R);
    if (threads == 1) {
        work(0, R);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (R + threads - 1) / threads;
        for (std::uint64_t b = 0; b < R; b += chunk) {
            pool.emplace_back(work, b, std::min(R, b + chunk));
        }
    }

    // Aggregation in trial order keeps the result independent of threading.
    double sum_sq = 0.0, sum_sq2 = 0.0, sum_est = 0.0, sum_est2 = 0.0;
    for (double est : estimates) {
        const double err = cfg.omega_true - est;
        const double sq = err * err;
        sum_sq += sq;
        sum_sq2 += sq * sq;
        sum_est += est;
        sum_est2 += est * est;
    }
    const double n = static_cast<double>(R);
    const double mse = sum_sq / n;
    const double mean_est = sum_est / n;
    auto stderr_of = [n](double sum, double sum2) {
        if (n < 2.0) return 0.0;
        const double mean = sum / n;
        const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
        return std::sqrt(var / n);
    };
    return {mse, stderr_of(sum_sq, sum_sq2), R, mean_est, stderr_of(sum_est, sum_est2)};
}

inline constexpr std::uint64_t kExactMseMaxQubits = 20;

/// Exact mean-squared error by summing over the Binomial(L, P') outcomes.
inline double exact_mse(std::uint64_t L, double true_probability,
                        const ReadoutProbability& believed, double omega_true = 0.0) {
    if (L < 1 || L > kExactMseMaxQubits) throw DomainError("exact_mse needs 1 <= L <= 20");
    if (!(true_probability >= 0.0 && true_probability <= 1.0)) {
        throw DomainError("true probability must lie in [0,1]");
    }
    double total = 0.0;
    double binom = 1.0;  // C(L, k)
    for (std::uint64_t k = 0; k <= L; ++k) {
        const double weight = binom * std::pow(true_probability, static_cast<double>(k)) *
                              std::pow(1.0 - true_probability, static_cast<double>(L - k));
        const double err = omega_true - estimate_omega(k, L, believed);
        total += weight * err * err;
        binom = binom * static_cast<double>(L - k) / static_cast<double>(k + 1);
    }
    return total;
}

}  // namespace zeno
