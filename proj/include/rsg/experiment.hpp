#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsg/orchestrator.hpp"
#include "rsg/scenario.hpp"

namespace rsg {

/// Batch study configuration; loaded from a single JSON file, with individual
/// fields overridable from the command line.
struct ExperimentConfig {
    std::string preset = "two-player"; ///< "two-player" or "four-player"
    double visiting_prob = 0.0;
    DefaultKind kind = DefaultKind::MRG;
    GameMode mode = GameMode::MDSG;
    int user_realizations = 100;   ///< user count/location draws
    int fading_realizations = 20;  ///< fast-fading draws per user draw
    std::uint64_t seed = 1;
    std::vector<double> alphas = {1.0};
    double mean_users_per_tx = 5.0;
    double epsilon = 1e-6;
    double nash_eps = 1e-3;
    bool comp_mode = false;
    std::string out_dir = "out";
    int threads = 0; ///< 0 = all available, 1 = serial reference path
    ChannelParams channel;
    double tx_power_dbm_per_hz = -53.0;
    double noise_dbm_per_hz = -195.0;
    double background_w_per_hz = 0.0;
    double bandwidth_hz_per_player = 20e6; ///< unit resource = N x this

    int total_realizations() const { return user_realizations * fading_realizations; }
};

ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment_config(const std::string& path);

struct UserRateRecord {
    int realization = 0, player = 0, user = 0;
    double rate_game = 0.0, rate_default = 0.0, rate_cs_sr = 0.0, rate_cs_lr = 0.0; // bit/s
};

struct ConvergenceRecord {
    int realization = 0;
    std::string mode;
    int iterations = 0;
    bool converged = false;
};

struct RealizationResult {
    int realization = 0;
    std::vector<UserRateRecord> rates;
    std::vector<ConvergenceRecord> convergence;
    std::vector<double> utility_game, utility_default, utility_cs_sr, utility_cs_lr;
    std::vector<double> nash_gains;
};

struct ExperimentReport {
    ExperimentConfig config;
    int n_players = 0;
    std::vector<RealizationResult> realizations;
};

/// Seed derivation scheme (documented contract): with F fading draws per user
/// draw and flat index k = r * F + f,
///   user positions:  derive_seed(seed, 3*r)
///   fading:          derive_seed(seed, 3*k + 1)
///   vote draws:      derive_seed(seed, 3*k + 2)
RealizationResult run_realization(const ExperimentConfig& config, const Layout& layout, int k);

/// Plain loop over realizations; the reference the parallel path is tested
/// against.
ExperimentReport run_experiment_serial(const ExperimentConfig& config);

/// OpenMP fan-out over realizations. Results are stored by realization index,
/// so outputs are identical to the serial path regardless of thread count.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes rates.csv, convergence.csv and summary.json into `dir`.
void emit_outputs(const ExperimentReport& report, const std::string& dir);

Layout preset_layout(const std::string& preset, const ChannelParams& channel);

} // namespace rsg
