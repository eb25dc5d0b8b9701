#pragma once

#include <span>

#include "rsg/allocation.hpp"

namespace rsg {

/// Per-subset sign of the objective term |b_S - b0_S| once the bid boxes are
/// known: +1 when every member bids strictly above the default, -1 when every
/// member bids strictly below, 0 otherwise (the boxes then pin b_S = b0_S).
struct SignCoefficients {
    Eigen::VectorXi alpha;
};

struct ResolutionOutcome {
    AllocationPattern pattern;
    double objective = 0.0; ///< total l1 movement away from the default
    bool unique = true;     ///< false when the optimum sat on a degenerate face
};

/// Bid values within this distance of the default are treated as equal to it
/// before sign classification.
inline constexpr double kSignSnapTol = 1e-12;

SignCoefficients sign_coefficients(std::span<const Bid> bids, const AllocationPattern& b0);

/// The agreed pattern: maximizes total movement away from the default over the
/// feasible polytope intersected with every player's bid box, then picks the
/// point of the optimal face closest (l2) to the default.
ResolutionOutcome resolve(std::span<const Bid> bids, const AllocationPattern& b0);

} // namespace rsg
