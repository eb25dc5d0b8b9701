#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rsg/subsets.hpp"

namespace rsg {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Log-distance path loss plus a per-wall penalty counted on an axis-aligned
/// wall grid. Defaults approximate an indoor office corridor layout.
struct ChannelParams {
    double pl0_db = 46.8;      ///< loss at the reference distance
    double exponent = 1.87;    ///< 10*exponent dB per decade
    double d0_m = 1.0;         ///< reference distance; shorter links are clamped
    double wall_loss_db = 12.0;
    double wall_spacing_m = 10.0; ///< grid pitch; <= 0 disables walls
};

struct Layout {
    double x_min = -50.0, x_max = 50.0;
    double y_min = -25.0, y_max = 25.0;
    ChannelParams channel;
    std::vector<Vec2> tx_positions;
    std::vector<int> tx_player; ///< owning player per transmitter
};

struct User {
    Vec2 pos;
    int player = -1;
    int serving_tx = -1; ///< strongest-gain transmitter of the own operator
};

/// A fully realized draw: positions, fading, powers. Immutable once built.
struct Scenario {
    Layout layout;
    int n_players = 0;
    std::vector<User> users;
    Eigen::MatrixXd gain; ///< tx x user, linear power gain |h|^2 / L
    double tx_power_w_per_hz = 0.0;
    double noise_w_per_hz = 0.0;
    double background_w_per_hz = 0.0; ///< constant inter-floor interference
    std::uint64_t user_seed = 0, fading_seed = 0;

    std::vector<int> players_users(int player) const; ///< user indices of one operator
    std::vector<int> operator_txs(int player) const;
};

struct ScenarioParams {
    double mean_users_per_tx = 5.0;
    double visiting_prob = 0.0;
    double tx_power_dbm_per_hz = -53.0;
    double noise_dbm_per_hz = -195.0;
    double background_w_per_hz = 0.0;
};

inline double dbm_per_hz_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double w_to_dbm_per_hz(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Four transmitters at (+-25, +-12.5) on a 100 x 50 m floor.
/// Two-player preset: TXs 1 and 3 belong to player 0, TXs 2 and 4 to player 1.
/// Four-player preset: TX n belongs to player n.
Layout two_player_layout();
Layout four_player_layout();
int layout_players(const Layout& layout);

double path_loss_db(Vec2 tx, Vec2 user, const Layout& layout);

/// One fading draw: exponential(1) fast-fading power over the linear path loss.
double channel_gain(Vec2 tx, Vec2 user, const Layout& layout, std::mt19937_64& rng);

/// Poisson(mean) users per transmitter of `player`. Each user lands uniformly
/// in the 50 x 25 rectangle centered on its own transmitter, or uniformly on
/// the whole floor with probability `visiting_prob`.
std::vector<User> generate_users(const Layout& layout, int player, double mean_users,
                                 double visiting_prob, std::mt19937_64& rng);

Scenario make_scenario(const Layout& layout, const ScenarioParams& params,
                       std::uint64_t user_seed, std::uint64_t fading_seed);

/// Documented JSON schema: meters for positions, linear gains, dBm/Hz powers.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

} // namespace rsg
