#pragma once

#include <random>
#include <vector>

#include "rsg/scenario.hpp"
#include "rsg/scheduler.hpp"

namespace rsg::testing {

/// Hand-built scenario: one transmitter per entry of tx_player, users with an
/// explicit gain matrix, unit power density. Keeps channel modeling out of
/// scheduler tests.
inline Scenario synthetic_scenario(const std::vector<int>& tx_player,
                                   const std::vector<int>& user_player,
                                   const Eigen::MatrixXd& gain, double noise_w_per_hz) {
    Scenario s;
    s.n_players = 0;
    for (int p : tx_player) s.n_players = std::max(s.n_players, p + 1);
    for (int p : user_player) s.n_players = std::max(s.n_players, p + 1);
    s.layout.tx_player = tx_player;
    s.layout.tx_positions.assign(tx_player.size(), Vec2{0.0, 0.0});
    s.gain = gain;
    s.tx_power_w_per_hz = 1.0;
    s.noise_w_per_hz = noise_w_per_hz;
    s.background_w_per_hz = 0.0;
    for (std::size_t u = 0; u < user_player.size(); ++u) {
        User user;
        user.player = user_player[u];
        int best = -1;
        double best_gain = -1.0;
        for (std::size_t v = 0; v < tx_player.size(); ++v) {
            if (tx_player[v] != user_player[u]) continue;
            if (gain(static_cast<int>(v), static_cast<int>(u)) > best_gain) {
                best_gain = gain(static_cast<int>(v), static_cast<int>(u));
                best = static_cast<int>(v);
            }
        }
        user.serving_tx = best;
        s.users.push_back(user);
    }
    return s;
}

/// A small random interference scenario around the two- or four-player layout.
inline Scenario random_indoor_scenario(int n_players, std::uint64_t seed,
                                       double visiting_prob = 0.5) {
    Layout layout = n_players == 2 ? two_player_layout() : four_player_layout();
    ScenarioParams params;
    params.visiting_prob = visiting_prob;
    params.mean_users_per_tx = 3.0;
    return make_scenario(layout, params, seed, seed ^ 0x5bd1e995u);
}

/// Central finite differences of the utility in the pattern coordinates.
inline Eigen::VectorXd fd_gradient(const SpectralEfficiencyTable& table,
                                   const AllocationPattern& b, double alpha,
                                   double h = 1e-6) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(b.values.size());
    for (SubsetId s : table.subsets) {
        AllocationPattern up = b, down = b;
        up[s] += h;
        down[s] -= h;
        grad[static_cast<int>(s)] =
            (evaluate(table, up, alpha).value - evaluate(table, down, alpha).value) / (2.0 * h);
    }
    return grad;
}

} // namespace rsg::testing
