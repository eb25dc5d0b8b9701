#pragma once

#include <random>
#include <span>
#include <vector>

#include "rsg/allocation.hpp"

namespace rsg {

// Brute-force cross-checks for small player counts. Everything here is kept
// independent of the simplex/projection code paths it is used to validate:
// vertices come from exhaustive basis enumeration and the movement objective
// is evaluated directly (no sign linearization).

struct OracleResolution {
    double objective = 0.0;
    std::vector<Eigen::VectorXd> optimal_vertices; ///< all vertices within 1e-9 of the best
};

/// All vertices of {x : eq x = rhs, lo <= x <= hi} by enumerating bases.
/// Intended for systems with at most ~8 columns.
std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& eq,
                                                const Eigen::VectorXd& rhs,
                                                const Eigen::VectorXd& lo,
                                                const Eigen::VectorXd& hi);

/// Maximum of sum_S |b_S - b0_S| over the feasible polytope cut by the bid
/// boxes, via vertex enumeration (the objective is convex, so some vertex
/// attains the maximum). Player counts above 3 are rejected.
OracleResolution oracle_resolve(std::span<const Bid> bids, const AllocationPattern& b0);

/// A uniformly-weighted random point of one player's strategy space.
Bid random_bid(int player, int n_players, std::mt19937_64& rng);

/// A random feasible pattern: a convex combination of feasible vertices.
AllocationPattern random_feasible_pattern(int n_players, std::mt19937_64& rng);

} // namespace rsg
