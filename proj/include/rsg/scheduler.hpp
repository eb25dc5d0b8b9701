#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rsg/allocation.hpp"
#include "rsg/scenario.hpp"
#include "rsg/subsets.hpp"

namespace rsg {

/// Per-user spectral efficiencies of one operator over the subsets that
/// contain it. Column j corresponds to subsets[j]. In CoMP mode mu_comp[c]
/// holds the table when the operator's transmitters jointly serve user group
/// groups[c]; rows outside the group are zero.
struct SpectralEfficiencyTable {
    int player = -1;
    int n_players = 0;
    bool comp_mode = false;

    std::vector<int> user_ids;              ///< scenario user indices
    std::vector<int> user_tx;               ///< local tx index serving each local user
    std::vector<std::vector<int>> tx_users; ///< local user indices per local tx
    std::vector<SubsetId> subsets;          ///< subsets containing the player, ascending
    Eigen::MatrixXd mu;                     ///< users x subsets, bits/s/Hz

    std::vector<std::vector<int>> groups;   ///< CoMP user groups (local indices)
    std::vector<Eigen::MatrixXd> mu_comp;   ///< per group: users x subsets

    int n_users() const { return static_cast<int>(user_ids.size()); }
    int n_subsets() const { return static_cast<int>(subsets.size()); }
    int subset_index(SubsetId s) const;
};

/// Bandwidth fractions handed to users (rows) per subset (columns); for CoMP
/// tables the rows are user groups.
struct AllocationMatrix {
    Eigen::MatrixXd w;
};

struct UtilityResult {
    double value = 0.0;            ///< may be -inf for alpha >= 1 with starved users
    AllocationMatrix allocation;
    Eigen::VectorXd rates;         ///< per local user
    Eigen::VectorXd supergradient; ///< full 2^N vector, zero outside the player's subsets
};

/// SINR of `user` when the subset `s` shares the resource; the serving
/// transmitter must belong to the user's operator.
double sinr(const Scenario& scenario, int serving_tx, int user, SubsetId s);

/// log2(1 + gamma).
double spectral_efficiency(double gamma);

/// alpha-fair utility: ln(r) at alpha = 1, r^(1-alpha)/(1-alpha) otherwise.
/// Returns -inf (sentinel, not an exception) for r = 0 with alpha >= 1.
double alpha_fair_value(double rate, double alpha);

double user_rate(const Eigen::VectorXd& w_row, const Eigen::VectorXd& mu_row);

inline constexpr int kMaxCompGroups = 4096;

SpectralEfficiencyTable mu_table(const Scenario& scenario, int player, bool comp_mode = false,
                                 int max_groups = kMaxCompGroups);

/// Operator utility g_n(b): alpha-fair sum over users, maximized over the
/// bandwidth split subject to per-transmitter totals b_S. Projected-gradient
/// ascent on the product of simplices; `warm` seeds the solver.
UtilityResult evaluate_utility(const SpectralEfficiencyTable& table, const AllocationPattern& b,
                               double alpha, const Eigen::MatrixXd* warm = nullptr);

/// CoMP variant: per-subset totals are split across user groups.
UtilityResult evaluate_utility_comp(const SpectralEfficiencyTable& table,
                                    const AllocationPattern& b, double alpha,
                                    const Eigen::MatrixXd* warm = nullptr);

/// Dispatch on table.comp_mode.
UtilityResult evaluate(const SpectralEfficiencyTable& table, const AllocationPattern& b,
                       double alpha, const Eigen::MatrixXd* warm = nullptr);

/// Supergradient of g_n at b from the optimal duals of the per-transmitter
/// constraints. Throws std::domain_error when the utility is -inf at b.
Eigen::VectorXd utility_supergradient(const SpectralEfficiencyTable& table,
                                      const AllocationPattern& b, double alpha);

} // namespace rsg
