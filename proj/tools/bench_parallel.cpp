// Times the serial reference loop against the OpenMP fan-out on the same
// study and checks that both produce identical results.

#include <chrono>
#include <iostream>
#include <omp.h>

#include "rsg/experiment.hpp"

namespace {

double run_timed(const rsg::ExperimentConfig& config, bool parallel, rsg::ExperimentReport& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = parallel ? rsg::run_experiment(config) : rsg::run_experiment_serial(config);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool reports_equal(const rsg::ExperimentReport& a, const rsg::ExperimentReport& b) {
    if (a.realizations.size() != b.realizations.size()) return false;
    for (std::size_t k = 0; k < a.realizations.size(); ++k) {
        const auto& ra = a.realizations[k];
        const auto& rb = b.realizations[k];
        if (ra.rates.size() != rb.rates.size()) return false;
        for (std::size_t i = 0; i < ra.rates.size(); ++i)
            if (ra.rates[i].rate_game != rb.rates[i].rate_game ||
                ra.rates[i].rate_default != rb.rates[i].rate_default)
                return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    rsg::ExperimentConfig config;
    config.preset = "two-player";
    config.user_realizations = argc > 1 ? std::atoi(argv[1]) : 8;
    config.fading_realizations = argc > 2 ? std::atoi(argv[2]) : 4;
    config.seed = 42;
    config.threads = 0;

    std::cout << "realizations: " << config.total_realizations()
              << ", threads: " << omp_get_max_threads() << "\n";

    rsg::ExperimentReport serial, parallel;
    const double t_serial = run_timed(config, false, serial);
    const double t_parallel = run_timed(config, true, parallel);

    std::cout << "serial:   " << t_serial << " s\n";
    std::cout << "parallel: " << t_parallel << " s\n";
    std::cout << "speedup:  " << t_serial / t_parallel << "x\n";
    if (!reports_equal(serial, parallel)) {
        std::cout << "MISMATCH: parallel run diverged from the serial reference\n";
        return 1;
    }
    std::cout << "results identical\n";
    return 0;
}
