#pragma once

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "rsg/allocation.hpp"
#include "rsg/scenario.hpp"
#include "rsg/scheduler.hpp"

namespace rsg {

enum class GameMode { MDSG, SDSG, MDSG_THEN_SDSG };

struct GameConfig {
    DefaultKind kind = DefaultKind::MRG;
    GameMode mode = GameMode::MDSG;
    double epsilon = 1e-6;   ///< l1 movement below this counts as converged
    int mdsg_iteration_cap = 100;
    int sdsg_sweep_cap = 50;
    std::vector<double> alphas; ///< per player; a single entry broadcasts
    bool comp_mode = false;
    std::uint64_t rng_seed = 0; ///< subset-vote draws (SDSG)
};

struct IterationRecord {
    std::vector<Bid> bids;
    AllocationPattern pattern;      ///< resolved outcome of this step
    std::vector<double> utilities;  ///< per player at the outcome
    double movement = 0.0;          ///< l1 distance from the previous pattern
    std::optional<SubsetId> subset; ///< negotiated subset (SDSG)
    int sweep = 0;                  ///< sweep index (SDSG)
};

struct GameTrace {
    std::vector<IterationRecord> iterations;
    bool converged = false;
    /// MDSG: iterations that moved the pattern by >= epsilon.
    /// SDSG: sweeps whose total movement was >= epsilon.
    int iterations_count = 0;
    AllocationPattern initial_pattern, final_pattern;
    std::vector<double> initial_utilities;
    std::vector<Bid> final_bids;
};

std::vector<double> resolve_alphas(const GameConfig& config, int n_players);

/// Sequential game: all players re-bid greedily, the resolution updates the
/// default, repeat until the pattern stops moving.
GameTrace run_mdsg(const GameConfig& config, const std::vector<SpectralEfficiencyTable>& tables,
                   const AllocationPattern& initial_b0);
GameTrace run_mdsg(const GameConfig& config, const Scenario& scenario);

/// Sequential single-dimensional subset game: sweeps over the multi-player
/// subsets, one vote-selected subset per step.
GameTrace run_sdsg(const GameConfig& config, const std::vector<SpectralEfficiencyTable>& tables,
                   const AllocationPattern& initial_b0, std::mt19937_64& rng);
GameTrace run_sdsg(const GameConfig& config, const Scenario& scenario);

/// Sample among the voted subsets with probability proportional to the vote
/// count. Preferences must be multi-player subsets containing their voter.
SubsetId choose_subset_by_vote(const std::map<int, SubsetId>& preferences, std::mt19937_64& rng);

/// Per-player best-response gains at a joint bid profile; the profile is an
/// eps-Nash point iff every entry is <= eps.
std::vector<double> verify_nash(const std::vector<Bid>& bids, const AllocationPattern& b0,
                                const std::vector<SpectralEfficiencyTable>& tables,
                                const std::vector<double>& alphas);

/// Centralized sum-utility scheduler under per-player reciprocity.
/// `extra_inits` seeds additional ascent starts (the best result wins).
AllocationPattern centralized_sr(const std::vector<SpectralEfficiencyTable>& tables,
                                 const std::vector<double>& alphas,
                                 const std::vector<Eigen::VectorXd>& extra_inits = {});

/// Centralized sum-utility scheduler under the total-mass constraint only.
AllocationPattern centralized_lr(const std::vector<SpectralEfficiencyTable>& tables,
                                 const std::vector<double>& alphas,
                                 const std::vector<Eigen::VectorXd>& extra_inits = {});

/// Sum of player utilities at a pattern (exact alpha-fair values).
double sum_utility(const std::vector<SpectralEfficiencyTable>& tables,
                   const std::vector<double>& alphas, const AllocationPattern& b);

std::vector<SpectralEfficiencyTable> build_tables(const Scenario& scenario, bool comp_mode);

} // namespace rsg
