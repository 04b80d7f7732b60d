// uncertainty.hpp: analytic estimation uncertainty of omega.
//
// All uncertainties are mean-squared errors in rad^2/s^2. The general
// formula for a linear readout believed to be P = x + y w while the truth is
// P' = x' + y' w, with L qubits and N repetitions, is
//
//     d^2w = [ P'(1 - P') / (L N) + (x - x')^2 ] / y^2 .
//
// The first term is statistical, the second the bias from the wrong model.

#pragma once

#include <cmath>
#include <cstdint>

#include "zeno/decay.hpp"
#include "zeno/errors.hpp"
#include "zeno/readout.hpp"

namespace zeno {

struct UncertaintyBreakdown {
    double statistical;
    double systematic;
    double total;
};

inline UncertaintyBreakdown make_breakdown(double statistical, double systematic) {
    return {statistical, systematic, statistical + systematic};
}

struct EstimationScenario {
    ReadoutProbability believed;    // x, y
    ReadoutProbability true_model;  // x', y'
    std::uint64_t qubit_count;      // L
    std::uint64_t repetitions = 1;  // N
};

inline UncertaintyBreakdown general_uncertainty(const EstimationScenario& sc, double omega = 0.0) {
    if (sc.qubit_count < 1 || sc.repetitions < 1) {
        throw DomainError("qubit_count and repetitions must be >= 1");
    }
    const double y = sc.believed.slope;
    if (y == 0.0) throw DegenerateEstimator("believed slope y is zero");
    const double p_true = sc.true_model.at(omega);
    if (!(p_true > 0.0 && p_true < 1.0)) {
        throw DomainError("true probability P' must lie in (0,1)");
    }
    const double samples =
        static_cast<double>(sc.qubit_count) * static_cast<double>(sc.repetitions);
    const double offset = sc.believed.intercept - sc.true_model.intercept;
    return make_breakdown(p_true * (1.0 - p_true) / (y * y * samples), offset * offset / (y * y));
}

namespace detail {

inline void require_qubits(std::uint64_t L) {
    if (L < 1) throw DomainError("qubit count L must be >= 1");
}

// Uncertainty when the believed and true survival factors are s_est, s_true
// under the survival interpretation (same form as the Gaussian closed form).
inline UncertaintyBreakdown survival_form(double s_est, double s_true, double t, std::uint64_t L) {
    if (s_est == 0.0) throw DegenerateEstimator("believed survival probability is zero");
    const double scale = 1.0 / (s_est * s_est * t * t);
    const double diff = s_est - s_true;
    return make_breakdown(scale * s_true * (2.0 - s_true) / static_cast<double>(L),
                          scale * diff * diff);
}

inline UncertaintyBreakdown literal_form(double s_est, double s_true, double t, std::uint64_t L) {
    const double decayed = 1.0 - s_est;
    if (decayed == 0.0) {
        throw DomainError("1 - |f_est|^2 vanishes: literal readout has no signal at this time");
    }
    const double scale = 1.0 / (t * t * decayed * decayed);
    const double diff = s_est - s_true;
    return make_breakdown(scale * (1.0 - s_true) * (1.0 + s_true) / static_cast<double>(L),
                          scale * diff * diff);
}

}  // namespace detail

/// Closed form for Gaussian decay with believed time T1 and true time T1'.
inline UncertaintyBreakdown gaussian_uncertainty(double T1, double T1p, double t, std::uint64_t L) {
    detail::require_positive(T1, "T1");
    detail::require_positive(T1p, "T1'");
    detail::require_positive(t, "interaction time");
    detail::require_qubits(L);
    const double rb = t / T1;
    const double rt = t / T1p;
    return detail::survival_form(std::exp(-rb * rb), std::exp(-rt * rt), t, L);
}

/// Spin-boson decay with known gamma and believed/true coherence times.
inline UncertaintyBreakdown lorentzian_uncertainty(double gamma, double T1_est, double T1_true,
                                                   double t, std::uint64_t L,
                                                   Interpretation interp = Interpretation::survival,
                                                   Diagnostics* diag = nullptr) {
    detail::require_positive(t, "interaction time");
    detail::require_qubits(L);
    const DecayModel est = lorentzian_from_coherence(gamma, T1_est);
    const DecayModel truth = lorentzian_from_coherence(gamma, T1_true);
    const double s_est = survival_probability(est, t, diag);
    const double s_true = survival_probability(truth, t, diag);
    return interp == Interpretation::survival ? detail::survival_form(s_est, s_true, t, L)
                                              : detail::literal_form(s_est, s_true, t, L);
}

/// Uncertainty for arbitrary believed/true decay models, through the
/// linearized readout and the general formula.
inline UncertaintyBreakdown model_uncertainty(const DecayModel& believed, const DecayModel& truth,
                                              double t, std::uint64_t L,
                                              Interpretation interp = Interpretation::survival,
                                              double omega = 0.0, Diagnostics* diag = nullptr) {
    return general_uncertainty({linearize(believed, t, interp, diag),
                                linearize(truth, t, interp, diag), L, 1},
                               omega);
}

/// What the experimenter expects when assuming the true model equals the
/// believed one (no systematic term).
inline double believed_uncertainty(const DecayModel& believed, double t, std::uint64_t L,
                                   Interpretation interp = Interpretation::survival) {
    return model_uncertainty(believed, believed, t, L, interp).total;
}

/// Leading small-t expansion 1/(L t^2) + t^2 (T1^-2 - T1'^-2)^2.
inline UncertaintyBreakdown small_time_uncertainty(double T1, double T1p, double t,
                                                   std::uint64_t L) {
    detail::require_positive(t, "interaction time");
    detail::require_qubits(L);
    const double rate_gap = 1.0 / (T1 * T1) - 1.0 / (T1p * T1p);
    return make_breakdown(1.0 / (static_cast<double>(L) * t * t), t * t * rate_gap * rate_gap);
}

/// AM-GM lower bound (2/sqrt(L)) |T1^-2 - T1'^-2| on the small-t expansion.
inline double zeno_lower_bound(double T1, double T1p, std::uint64_t L) {
    detail::require_positive(T1, "T1");
    detail::require_positive(T1p, "T1'");
    detail::require_qubits(L);
    const double rate_gap = std::abs(1.0 / (T1 * T1) - 1.0 / (T1p * T1p));
    return 2.0 / std::sqrt(static_cast<double>(L)) * rate_gap;
}

/// Time that balances the two small-t terms: L^{-1/4} |T1^-2 - T1'^-2|^{-1/2}.
/// Needs oracle knowledge of T1'.
inline double optimal_time(double T1, double T1p, std::uint64_t L) {
    detail::require_positive(T1, "T1");
    detail::require_positive(T1p, "T1'");
    detail::require_qubits(L);
    const double rate_gap = std::abs(1.0 / (T1 * T1) - 1.0 / (T1p * T1p));
    if (rate_gap == 0.0) throw NoFiniteOptimum("T1 == T1': no finite optimal time");
    return std::pow(static_cast<double>(L), -0.25) / std::sqrt(rate_gap);
}

/// Limit L -> infinity of the Gaussian closed form at fixed t.
inline double gaussian_bias_floor(double T1, double T1p, double t) {
    detail::require_positive(T1, "T1");
    detail::require_positive(T1p, "T1'");
    detail::require_positive(t, "interaction time");
    const double rb = t / T1;
    const double rt = t / T1p;
    const double diff = std::exp(-rb * rb) - std::exp(-rt * rt);
    return std::exp(2.0 * rb * rb) / (t * t) * diff * diff;
}

}  // namespace zeno
