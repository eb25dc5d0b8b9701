#pragma once

#include <optional>
#include <span>

#include "rsg/allocation.hpp"
#include "rsg/scheduler.hpp"

namespace rsg {

/// Inputs of one player's bid computation. `restriction`, when set, limits the
/// negotiation to that multi-player subset plus the player's own singleton
/// (all other multi-player coordinates stay at the default).
struct StrategyProblem {
    int player = -1;
    AllocationPattern b0;
    const SpectralEfficiencyTable* table = nullptr;
    double alpha = 1.0;
    std::optional<SubsetId> restriction;
};

struct BidResult {
    Bid bid;
    double value = 0.0;         ///< utility of the bid played as a pattern
    double default_value = 0.0; ///< utility of bidding the default restriction
};

/// Bid maximizing the player's own utility over her whole strategy space
/// (non-negative, reciprocity share 1/N, void outside her subsets).
BidResult greedy_bid_result(const StrategyProblem& problem);
Bid greedy_bid(const StrategyProblem& problem);

/// Single-subset variant: a 1-D concave line search in the restricted
/// coordinate; reciprocity pins the player's singleton. Flat objectives
/// tie-break toward the default.
BidResult restricted_greedy_bid_result(const StrategyProblem& problem);
Bid restricted_greedy_bid(const StrategyProblem& problem);

/// Upper bound on what the player could gain by re-bidding: her best utility
/// over the feasible patterns the opponents' boxes still allow, minus her
/// payoff at the resolved outcome. Non-negative up to solver tolerance.
double best_response_gain(int player, std::span<const Bid> bids, const AllocationPattern& b0,
                          const std::vector<SpectralEfficiencyTable>& tables,
                          const std::vector<double>& alphas);

} // namespace rsg
