#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "rsg/subsets.hpp"

namespace rsg {

inline constexpr double kFeasibilityTol = 1e-9;

/// How one unit of resource is split over the 2^N player subsets.
/// values[mask] is the fraction allocated to (and shared by) that subset.
/// The empty-set entry is stored but pinned to zero.
struct AllocationPattern {
    int n_players = 0;
    Eigen::VectorXd values;

    AllocationPattern() = default;
    AllocationPattern(int n, Eigen::VectorXd v);

    double operator[](SubsetId s) const { return values[static_cast<int>(s)]; }
    double& operator[](SubsetId s) { return values[static_cast<int>(s)]; }
    double total_mass() const { return values.sum(); }
};

enum class DefaultKind { MRG, RPG };

/// One player's preferred pattern over the subsets containing her.
/// Entries for subsets not containing the player hold the void value (NaN).
struct Bid {
    int player = -1;
    int n_players = 0;
    Eigen::VectorXd values;

    static constexpr double void_value() { return std::numeric_limits<double>::quiet_NaN(); }
    bool is_void(SubsetId s) const { return !contains(s, player); }
};

/// Per-subset interval between a player's bid and the default pattern.
/// Subsets outside P_n are unconstrained (+-inf).
struct BidBox {
    int player = -1;
    int n_players = 0;
    Eigen::VectorXd lo, hi;
};

/// Default usage pattern: MRG puts 1/N on each singleton (all private),
/// RPG puts everything on the full player set (all pooled).
AllocationPattern default_pattern(DefaultKind kind, int n_players);

/// Per-player reciprocity shares sum_{S : n in S} b_S / |S|.
Eigen::VectorXd reciprocity_shares(const AllocationPattern& b);

/// True iff b is non-negative and every player's reciprocity share is 1/N,
/// both within `tol` (absolute).
bool is_feasible(const AllocationPattern& b, double tol = kFeasibilityTol);

/// Reciprocity share of a single bid over its own subsets (should be 1/N).
double bid_reciprocity_share(const Bid& bid);

/// A bid carrying the restriction of `b0` to the player's subsets.
Bid default_bid(int player, const AllocationPattern& b0);

BidBox bid_box(const Bid& bid, const AllocationPattern& b0);

/// True iff b lies inside the box on every subset containing the box's player.
bool box_contains(const BidBox& box, const AllocationPattern& b, double tol = 1e-8);

/// Rows of the reciprocity equality system: row n holds 1/|S| on every subset
/// containing player n, so that (matrix * b) = (1/N, ..., 1/N) on feasible b.
Eigen::MatrixXd reciprocity_matrix(int n_players);

/// Coordinate-wise bounds |S|/N implied by reciprocity and non-negativity.
Eigen::VectorXd pattern_upper_bounds(int n_players);

} // namespace rsg
