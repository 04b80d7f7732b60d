// decay.hpp: survival probabilities for the Gaussian, Lorentzian spin-boson
// and quadratic short-time decay models.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

using complex = std::complex<double>;

// Collects non-fatal numerical notes (e.g. clamped probabilities).
struct Diagnostics {
    std::vector<std::string> messages;
    void note(std::string m) { messages.push_back(std::move(m)); }
};

namespace detail {

inline double require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
    return v;
}

inline void require_nonnegative_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("interaction time must be non-negative and finite");
    }
}

}  // namespace detail

/// S(t) = exp(-(t/T)^2).
class GaussianDecay {
public:
    explicit GaussianDecay(double coherence_time)
        : coherence_time_(detail::require_positive(coherence_time, "coherence_time")) {}
    double coherence_time() const { return coherence_time_; }

private:
    double coherence_time_;
};

/// Qubit coupled to a bath with Lorentzian form factor of strength gamma
/// and linewidth Delta. The survival amplitude has two exponential modes
/// whose rates solve lambda(lambda + i Delta) = gamma Delta / 2.
class LorentzianSpinBoson {
public:
    LorentzianSpinBoson(double noise_strength, double linewidth)
        : noise_strength_(detail::require_positive(noise_strength, "noise_strength")),
          linewidth_(detail::require_positive(linewidth, "linewidth")) {
        if (!std::isfinite(2.0 / (noise_strength_ * linewidth_))) {
            throw DomainError("gamma * Delta too small: coherence time is not finite");
        }
    }
    double noise_strength() const { return noise_strength_; }
    double linewidth() const { return linewidth_; }

private:
    double noise_strength_;
    double linewidth_;
};

/// S(t) = 1 - (t/T)^2, only meaningful for t <= T.
class QuadraticShortTime {
public:
    explicit QuadraticShortTime(double coherence_time)
        : coherence_time_(detail::require_positive(coherence_time, "coherence_time")) {}
    double coherence_time() const { return coherence_time_; }

private:
    double coherence_time_;
};

/// Ideal qubit, S(t) = 1.
struct NoDecay {};

using DecayModel = std::variant<NoDecay, GaussianDecay, LorentzianSpinBoson, QuadraticShortTime>;

/// Relative threshold on |1 - 2 gamma/Delta| below which the confluent-root
/// limit is used.
inline constexpr double kCriticalDampingTolerance = 1e-9;
/// Excess above 1 tolerated silently before clamping is reported.
inline constexpr double kClampReportThreshold = 1e-9;

/// Coherence time sqrt(2/(gamma Delta)) fixed by the short-time expansion
/// |f(t)|^2 = 1 - gamma Delta t^2 / 2 + O(t^4).
inline double coherence_time_of(const LorentzianSpinBoson& m) {
    return std::sqrt(2.0 / (m.noise_strength() * m.linewidth()));
}

/// Inverse of coherence_time_of: Delta = 2 / (gamma T^2).
inline double linewidth_from_coherence(double gamma, double coherence_time) {
    detail::require_positive(gamma, "gamma");
    detail::require_positive(coherence_time, "coherence time");
    return 2.0 / (gamma * coherence_time * coherence_time);
}

/// Builds the spin-boson model whose coherence time is `coherence_time` for
/// the given noise strength.
inline LorentzianSpinBoson lorentzian_from_coherence(double gamma, double coherence_time) {
    return LorentzianSpinBoson(gamma, linewidth_from_coherence(gamma, coherence_time));
}

inline double coherence_time_of(const DecayModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianSpinBoson>) {
                return coherence_time_of(m);
            } else if constexpr (std::is_same_v<M, NoDecay>) {
                return std::numeric_limits<double>::infinity();
            } else {
                return m.coherence_time();
            }
        },
        model);
}

/// Principal square root s = sqrt(1 - 2 gamma / Delta). Imaginary in the
/// underdamped regime Delta < 2 gamma.
inline complex mode_splitting(const LorentzianSpinBoson& m) {
    return std::sqrt(complex(1.0 - 2.0 * m.noise_strength() / m.linewidth(), 0.0));
}

/// Roots (lambda1, lambda2) of lambda(lambda + i Delta) - gamma Delta / 2 = 0.
/// lambda1 = -i Delta (1 - s)/2 carries the weight A = (1+s)/(2s), lambda2
/// the weight B = -(1-s)/(2s). This pairing makes f'(0) = 0.
inline std::pair<complex, complex> decay_roots(const LorentzianSpinBoson& m) {
    const complex s = mode_splitting(m);
    const complex half_width(0.0, -0.5 * m.linewidth());
    return {half_width * (1.0 - s), half_width * (1.0 + s)};
}

namespace detail {

// No sign check on t, so tests can take central differences through t = 0.
inline complex amplitude_unchecked(const LorentzianSpinBoson& m, double t) {
    const double delta = m.linewidth();
    const double detuning = 1.0 - 2.0 * m.noise_strength() / delta;
    if (std::abs(detuning) < kCriticalDampingTolerance) {
        // Confluent roots: limit s -> 0 of the two-mode expression.
        const double half = 0.5 * delta * t;
        return complex((1.0 + half) * std::exp(-half), 0.0);
    }
    const complex s = mode_splitting(m);
    const auto [lambda1, lambda2] = decay_roots(m);
    const complex a = (1.0 + s) / (2.0 * s);
    const complex b = -(1.0 - s) / (2.0 * s);
    const complex minus_i(0.0, -1.0);
    return a * std::exp(minus_i * lambda1 * t) + b * std::exp(minus_i * lambda2 * t);
}

inline double clamp_probability(double p, Diagnostics* diag, const char* source) {
    if (p > 1.0 || p < 0.0) {
        const double excess = p > 1.0 ? p - 1.0 : -p;
        if (excess > kClampReportThreshold && diag != nullptr) {
            diag->note(std::string(source) + ": probability " + std::to_string(p) +
                       " clamped to [0,1]");
        }
        return p > 1.0 ? 1.0 : 0.0;
    }
    return p;
}

}  // namespace detail

/// Complex survival amplitude f(t); f(0) = 1.
inline complex survival_amplitude(const LorentzianSpinBoson& m, double t) {
    detail::require_nonnegative_time(t);
    if (t == 0.0) return complex(1.0, 0.0);
    return detail::amplitude_unchecked(m, t);
}

inline double survival_probability(const DecayModel& model, double t,
                                   Diagnostics* diag = nullptr) {
    detail::require_nonnegative_time(t);
    if (t == 0.0) return 1.0;
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NoDecay>) {
                return 1.0;
            } else if constexpr (std::is_same_v<M, GaussianDecay>) {
                const double r = t / m.coherence_time();
                return std::exp(-r * r);
            } else if constexpr (std::is_same_v<M, LorentzianSpinBoson>) {
                return detail::clamp_probability(std::norm(detail::amplitude_unchecked(m, t)),
                                                 diag, "lorentzian survival");
            } else {
                if (t > m.coherence_time()) {
                    throw DomainError("quadratic short-time decay used beyond t = T");
                }
                const double r = t / m.coherence_time();
                return detail::clamp_probability(1.0 - r * r, diag, "quadratic survival");
            }
        },
        model);
}

}  // namespace zeno
