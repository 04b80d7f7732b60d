// Compares the conventional and Zeno interaction times for a Gaussian-decaying
// sensor whose coherence time is misjudged by 40%.

#include <cstdio>
#include <variant>

#include "zeno/zeno.hpp"

int main() {
    using namespace zeno;
    const auto cfg = fig1_preset();
    const double t_conv = conventional_time(cfg);
    std::printf("believed T1 = %g s, true T1 = %g s, conventional t = %.6f s\n\n", cfg.believed_T1,
                cfg.true_T1, t_conv);
    std::printf("%10s %12s %14s %14s\n", "L", "t_zeno", "conventional", "zeno");
    for (std::uint64_t L : {1ULL, 10ULL, 100ULL, 1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
        const double t_zeno = zeno_time(cfg.tau, L);
        std::printf("%10llu %12.6f %14.6e %14.6e\n", static_cast<unsigned long long>(L), t_zeno,
                    uncertainty_at(cfg, t_conv, L).total, uncertainty_at(cfg, t_zeno, L).total);
    }

    const auto out = report_crossover(cfg, 100000);
    if (const auto* r = std::get_if<CrossoverReport>(&out.result)) {
        std::printf("\nZeno protocol wins from L = %llu on\n",
                    static_cast<unsigned long long>(r->crossover_L));
    }

    // Sampled check at one operating point.
    TrialConfig trial;
    trial.believed = linearize(believed_model(cfg), t_conv);
    trial.true_probability = projection_probability(true_model(cfg), t_conv, 0.0, false);
    trial.qubit_count = 1000;
    trial.trial_count = 20000;
    trial.seed = 42;
    const auto est = run_trials(trial);
    std::printf("L = 1000, conventional: analytic %.6e, sampled %.6e +/- %.1e\n",
                uncertainty_at(cfg, t_conv, 1000).total, est.empirical_mse, est.standard_error);
    return 0;
}
