// readout.hpp: sigma_y projection probability and its linearization in omega.

#pragma once

#include <cmath>

#include "zeno/decay.hpp"
#include "zeno/errors.hpp"

namespace zeno {

/// Which population carries the sensing signal.
///  survival: P = S(t)/2 (1 + omega t)          (coherent part, default)
///  literal:  P = (1 - S(t))/2 (1 + omega t)
enum class Interpretation { survival, literal };

inline const char* to_string(Interpretation i) {
    return i == Interpretation::survival ? "survival" : "literal";
}

/// Largest |omega t| for which the linear model is accepted.
inline constexpr double kLinearizationLimit = 0.1;

/// Bohr magneton over hbar, rad s^-1 T^-1 (mu_B = 9.27401e-24 J/T,
/// hbar = 1.05457e-34 J s). With this constant omega = 2 g mu_b B is an
/// angular frequency.
inline constexpr double kBohrMagnetonRadPerSecondTesla = 8.79410e10;

/// P = x + y omega at fixed interaction time.
struct ReadoutProbability {
    double intercept;         // x
    double slope;             // y, seconds
    double interaction_time;  // t, seconds

    double at(double omega) const { return intercept + slope * omega; }
};

inline double signal_weight(const DecayModel& model, double t, Interpretation interp,
                            Diagnostics* diag = nullptr) {
    const double s = survival_probability(model, t, diag);
    return interp == Interpretation::survival ? s : 1.0 - s;
}

inline double projection_probability(const DecayModel& model, double t, double omega,
                                     bool linearized,
                                     Interpretation interp = Interpretation::survival,
                                     Diagnostics* diag = nullptr) {
    detail::require_positive(t, "interaction time");
    const double phase = omega * t;
    if (linearized && std::abs(phase) > kLinearizationLimit) {
        throw DomainError("|omega t| exceeds the linearization limit 0.1");
    }
    const double w = signal_weight(model, t, interp, diag);
    return 0.5 * w * (1.0 + (linearized ? phase : std::sin(phase)));
}

/// x = w/2, y = w t/2 with w the signal weight, so that y = x t exactly.
inline ReadoutProbability linearize(const DecayModel& model, double t,
                                    Interpretation interp = Interpretation::survival,
                                    Diagnostics* diag = nullptr) {
    detail::require_positive(t, "interaction time");
    const double x = 0.5 * signal_weight(model, t, interp, diag);
    return {x, x * t, t};
}

inline double field_to_frequency(double g_factor, double field_tesla) {
    return 2.0 * g_factor * kBohrMagnetonRadPerSecondTesla * field_tesla;
}

}  // namespace zeno
