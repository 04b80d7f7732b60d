// protocols.hpp: interaction-time choices and the Zeno/conventional crossover.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <variant>
#include <vector>

#include "zeno/decay.hpp"
#include "zeno/errors.hpp"
#include "zeno/optimize.hpp"
#include "zeno/readout.hpp"
#include "zeno/uncertainty.hpp"

namespace zeno {

enum class ProtocolKind { conventional, zeno, oracle_optimal };

struct ProtocolChoice {
    ProtocolKind kind = ProtocolKind::zeno;
    double tau = 2.0;  // seconds; Zeno coefficient in t = tau L^{-1/4}
};

/// Search bracket for the conventional time, in units of the believed
/// coherence time T: (1e-6 T, 5T]. The quadratic model is cut at T.
inline constexpr double kBracketLowFactor = 1e-6;
inline constexpr double kBracketHighFactor = 5.0;

/// Minimizes the believed uncertainty over t. The believer takes T1' = T1,
/// so the systematic term vanishes and the result is independent of L.
inline double conventional_time(const DecayModel& believed,
                                Interpretation interp = Interpretation::survival) {
    if (std::holds_alternative<NoDecay>(believed)) {
        throw NoFiniteOptimum("without decay the believed uncertainty decreases for all t");
    }
    const double T = coherence_time_of(believed);
    const bool quadratic = std::holds_alternative<QuadraticShortTime>(believed);
    const double lo = kBracketLowFactor * T;
    const double hi = quadratic ? T : kBracketHighFactor * T;
    auto objective = [&](double t) {
        try {
            return believed_uncertainty(believed, t, 1, interp);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    MinimizeOptions opt;
    opt.abs_tol = 1e-9 * T;
    return minimize_on_bracket(objective, lo, hi, opt).argmin;
}

/// c = argmin_x (2 e^{x^2} - 1) / x^2, the Gaussian conventional time in
/// units of T1 (about 0.876).
inline double gaussian_time_constant() {
    return conventional_time(GaussianDecay(1.0));
}

inline double zeno_time(double tau, std::uint64_t L) {
    detail::require_positive(tau, "tau");
    if (L < 1) throw DomainError("qubit count L must be >= 1");
    return tau * std::pow(static_cast<double>(L), -0.25);
}

struct CrossoverReport {
    std::uint64_t crossover_L;
    double conventional_at_crossover;
    double zeno_at_crossover;
};

struct CrossoverNotFound {
    std::uint64_t L_max;
    double final_gap;  // zeno(L_max) - conventional(L_max)
};

using CrossoverResult = std::variant<CrossoverReport, CrossoverNotFound>;

/// Smallest L such that zeno(L') < conventional(L') for every integer
/// L' in [L, min(4L, L_max)]. The persistence window rejects transient sign
/// flips from oscillating survival probabilities.
template <typename Conventional, typename Zeno>
CrossoverResult find_crossover(Conventional&& conventional, Zeno&& zeno, std::uint64_t L_max) {
    if (L_max < 1) throw DomainError("L_max must be >= 1");
    std::vector<double> conv(L_max + 1), zen(L_max + 1);
    for (std::uint64_t L = 1; L <= L_max; ++L) {
        conv[L] = conventional(L);
        zen[L] = zeno(L);
    }
    // next_bad[L]: smallest L' >= L where zeno is not strictly better.
    std::vector<std::uint64_t> next_bad(L_max + 2, L_max + 1);
    for (std::uint64_t L = L_max; L >= 1; --L) {
        next_bad[L] = zen[L] < conv[L] ? next_bad[L + 1] : L;
    }
    for (std::uint64_t L = 1; L <= L_max; ++L) {
        if (!(zen[L] < conv[L])) continue;
        const std::uint64_t window_end = std::min<std::uint64_t>(4 * L, L_max);
        if (next_bad[L] > window_end) return CrossoverReport{L, conv[L], zen[L]};
    }
    return CrossoverNotFound{L_max, zen[L_max] - conv[L_max]};
}

}  // namespace zeno
