#include "rsg/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsg/lp.hpp"
#include "rsg/resolution.hpp"
#include "rsg/rng.hpp"
#include "rsg/strategy.hpp"

namespace rsg {

namespace {

std::vector<double> utilities_at(const std::vector<SpectralEfficiencyTable>& tables,
                                 const std::vector<double>& alphas, const AllocationPattern& b,
                                 std::vector<Eigen::MatrixXd>& warm) {
    std::vector<double> out(tables.size());
    for (std::size_t n = 0; n < tables.size(); ++n) {
        const UtilityResult r = evaluate(tables[n], b, alphas[n], &warm[n]);
        warm[n] = r.allocation.w;
        out[n] = r.value;
    }
    return out;
}

} // namespace

std::vector<double> resolve_alphas(const GameConfig& config, int n_players) {
    if (config.alphas.empty()) return std::vector<double>(n_players, 1.0);
    if (config.alphas.size() == 1)
        return std::vector<double>(n_players, config.alphas.front());
    if (static_cast<int>(config.alphas.size()) != n_players)
        throw std::invalid_argument("alpha list does not match the player count");
    return config.alphas;
}

std::vector<SpectralEfficiencyTable> build_tables(const Scenario& scenario, bool comp_mode) {
    std::vector<SpectralEfficiencyTable> tables;
    tables.reserve(scenario.n_players);
    for (int n = 0; n < scenario.n_players; ++n)
        tables.push_back(mu_table(scenario, n, comp_mode));
    return tables;
}

GameTrace run_mdsg(const GameConfig& config, const std::vector<SpectralEfficiencyTable>& tables,
                   const AllocationPattern& initial_b0) {
    if (config.epsilon <= 0.0 || config.mdsg_iteration_cap < 1)
        throw std::invalid_argument("bad game config");
    const int n_players = initial_b0.n_players;
    const std::vector<double> alphas = resolve_alphas(config, n_players);

    GameTrace trace;
    trace.initial_pattern = initial_b0;
    std::vector<Eigen::MatrixXd> warm(tables.size());
    trace.initial_utilities = utilities_at(tables, alphas, initial_b0, warm);

    AllocationPattern b0 = initial_b0;
    for (int iter = 0; iter < config.mdsg_iteration_cap; ++iter) {
        std::vector<Bid> bids(static_cast<std::size_t>(n_players));
        #pragma omp parallel for schedule(dynamic)
        for (int n = 0; n < n_players; ++n) {
            StrategyProblem problem{n, b0, &tables[static_cast<std::size_t>(n)], alphas[n], {}};
            bids[static_cast<std::size_t>(n)] = greedy_bid(problem);
        }

        const ResolutionOutcome out = resolve(bids, b0);
        IterationRecord rec;
        rec.movement = (out.pattern.values - b0.values).cwiseAbs().sum();
        rec.pattern = out.pattern;
        rec.utilities = utilities_at(tables, alphas, out.pattern, warm);
        rec.bids = bids;
        trace.iterations.push_back(std::move(rec));

        b0 = out.pattern;
        trace.final_bids = std::move(bids);
        if (trace.iterations.back().movement < config.epsilon) {
            trace.converged = true;
            break;
        }
    }

    trace.final_pattern = b0;
    for (const IterationRecord& rec : trace.iterations)
        if (rec.movement >= config.epsilon) ++trace.iterations_count;
    return trace;
}

GameTrace run_mdsg(const GameConfig& config, const Scenario& scenario) {
    return run_mdsg(config, build_tables(scenario, config.comp_mode),
                    default_pattern(config.kind, scenario.n_players));
}

GameTrace run_sdsg(const GameConfig& config, const std::vector<SpectralEfficiencyTable>& tables,
                   const AllocationPattern& initial_b0, std::mt19937_64& rng) {
    if (config.epsilon <= 0.0 || config.sdsg_sweep_cap < 1)
        throw std::invalid_argument("bad game config");
    const int n_players = initial_b0.n_players;
    const std::vector<double> alphas = resolve_alphas(config, n_players);

    GameTrace trace;
    trace.initial_pattern = initial_b0;
    std::vector<Eigen::MatrixXd> warm(tables.size());
    trace.initial_utilities = utilities_at(tables, alphas, initial_b0, warm);

    AllocationPattern b0 = initial_b0;
    for (int sweep = 0; sweep < config.sdsg_sweep_cap; ++sweep) {
        std::vector<SubsetId> remaining = multiplayer_subsets(n_players);
        double sweep_movement = 0.0;

        while (!remaining.empty()) {
            // Everyone votes for the remaining subset promising the largest
            // ideal improvement; computed bids are kept for the chosen subset.
            std::map<int, SubsetId> prefs;
            std::vector<std::map<SubsetId, BidResult>> cache(static_cast<std::size_t>(n_players));
            #pragma omp parallel for schedule(dynamic)
            for (int n = 0; n < n_players; ++n) {
                double best_gain = -1.0;
                SubsetId best_subset = 0;
                for (SubsetId s : remaining) {
                    if (!contains(s, n)) continue;
                    StrategyProblem problem{n, b0, &tables[static_cast<std::size_t>(n)],
                                            alphas[n], s};
                    BidResult r = restricted_greedy_bid_result(problem);
                    const double gain = r.value - r.default_value;
                    cache[static_cast<std::size_t>(n)].emplace(s, std::move(r));
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_subset = s;
                    }
                }
                if (best_subset != 0) {
                    #pragma omp critical
                    prefs[n] = best_subset;
                }
            }

            const SubsetId chosen = choose_subset_by_vote(prefs, rng);

            std::vector<Bid> bids;
            bids.reserve(static_cast<std::size_t>(n_players));
            for (int n = 0; n < n_players; ++n) {
                if (contains(chosen, n))
                    bids.push_back(cache[static_cast<std::size_t>(n)].at(chosen).bid);
                else
                    bids.push_back(default_bid(n, b0)); // no negotiable coordinate left
            }

            const ResolutionOutcome out = resolve(bids, b0);
            IterationRecord rec;
            rec.movement = (out.pattern.values - b0.values).cwiseAbs().sum();
            rec.pattern = out.pattern;
            rec.utilities = utilities_at(tables, alphas, out.pattern, warm);
            rec.bids = bids;
            rec.subset = chosen;
            rec.sweep = sweep;
            sweep_movement += rec.movement;
            trace.iterations.push_back(std::move(rec));

            b0 = out.pattern;
            trace.final_bids = std::move(bids);
            remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
        }

        if (sweep_movement >= config.epsilon) ++trace.iterations_count;
        if (sweep_movement < config.epsilon) {
            trace.converged = true;
            break;
        }
    }

    trace.final_pattern = b0;
    return trace;
}

GameTrace run_sdsg(const GameConfig& config, const Scenario& scenario) {
    std::mt19937_64 rng = make_rng(config.rng_seed);
    return run_sdsg(config, build_tables(scenario, config.comp_mode),
                    default_pattern(config.kind, scenario.n_players), rng);
}

SubsetId choose_subset_by_vote(const std::map<int, SubsetId>& preferences, std::mt19937_64& rng) {
    if (preferences.empty()) throw std::invalid_argument("no subset preferences to vote on");
    std::map<SubsetId, int> counts;
    for (const auto& [player, subset] : preferences) {
        if (subset_size(subset) < 2 || !contains(subset, player))
            throw std::invalid_argument("preference must be a multi-player subset of the voter");
        ++counts[subset];
    }
    int total = 0;
    for (const auto& [subset, count] : counts) total += count;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng) * total;
    for (const auto& [subset, count] : counts) {
        u -= count;
        if (u < 0.0) return subset;
    }
    return counts.rbegin()->first; // numerical edge: u landed exactly on total
}

std::vector<double> verify_nash(const std::vector<Bid>& bids, const AllocationPattern& b0,
                                const std::vector<SpectralEfficiencyTable>& tables,
                                const std::vector<double>& alphas) {
    std::vector<double> gains(tables.size());
    #pragma omp parallel for schedule(dynamic)
    for (int n = 0; n < static_cast<int>(tables.size()); ++n)
        gains[static_cast<std::size_t>(n)] = best_response_gain(n, bids, b0, tables, alphas);
    return gains;
}

namespace {

AllocationPattern centralized_optimum(const std::vector<SpectralEfficiencyTable>& tables,
                                      const std::vector<double>& alphas,
                                      const Eigen::MatrixXd& eq, const Eigen::VectorXd& rhs,
                                      const Eigen::VectorXd& hi,
                                      std::vector<Eigen::VectorXd> inits) {
    const int n_players = tables.empty() ? 0 : tables.front().n_players;
    const int len = static_cast<int>(pattern_length(n_players));
    const Eigen::VectorXd lo = Eigen::VectorXd::Zero(len);

    std::vector<Eigen::MatrixXd> warm(tables.size());
    const ConcaveOracle oracle = [&](const Eigen::VectorXd& x) {
        const AllocationPattern b(n_players, x);
        double value = 0.0;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(len);
        for (std::size_t n = 0; n < tables.size(); ++n) {
            const UtilityResult r = evaluate(tables[n], b, alphas[n], &warm[n]);
            warm[n] = r.allocation.w;
            value += r.value;
            grad += r.supergradient;
        }
        return std::make_pair(value, grad);
    };

    double best_value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    for (Eigen::VectorXd& init : inits) {
        init = project_affine_box(init, eq, rhs, lo, hi, nullptr);
        const ConcaveMaxResult r = maximize_concave(oracle, eq, rhs, lo, hi, init);
        if (r.value > best_value) {
            best_value = r.value;
            best_x = r.x;
        }
    }
    return AllocationPattern(n_players, best_x);
}

} // namespace

AllocationPattern centralized_sr(const std::vector<SpectralEfficiencyTable>& tables,
                                 const std::vector<double>& alphas,
                                 const std::vector<Eigen::VectorXd>& extra_inits) {
    const int n_players = static_cast<int>(tables.size());
    Eigen::VectorXd hi = pattern_upper_bounds(n_players);

    // Interior start: halfway between the two default patterns.
    std::vector<Eigen::VectorXd> inits;
    inits.push_back(0.5 * (default_pattern(DefaultKind::MRG, n_players).values +
                           default_pattern(DefaultKind::RPG, n_players).values));
    for (const auto& x : extra_inits) inits.push_back(x);

    return centralized_optimum(tables, alphas, reciprocity_matrix(n_players),
                               Eigen::VectorXd::Constant(n_players, 1.0 / n_players), hi,
                               std::move(inits));
}

AllocationPattern centralized_lr(const std::vector<SpectralEfficiencyTable>& tables,
                                 const std::vector<double>& alphas,
                                 const std::vector<Eigen::VectorXd>& extra_inits) {
    const int n_players = static_cast<int>(tables.size());
    const int len = static_cast<int>(pattern_length(n_players));

    Eigen::MatrixXd eq = Eigen::MatrixXd::Ones(1, len);
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd hi = Eigen::VectorXd::Ones(len);
    hi[0] = 0.0;

    // Any feasible point of the per-player problem is feasible here, so
    // seeding with the stricter optimum makes the relaxation provably no
    // worse. Callers that already computed it pass it via extra_inits.
    std::vector<Eigen::VectorXd> inits;
    if (extra_inits.empty()) inits.push_back(centralized_sr(tables, alphas).values);
    for (const auto& x : extra_inits) inits.push_back(x);

    return centralized_optimum(tables, alphas, eq, rhs, hi, std::move(inits));
}

double sum_utility(const std::vector<SpectralEfficiencyTable>& tables,
                   const std::vector<double>& alphas, const AllocationPattern& b) {
    double total = 0.0;
    for (std::size_t n = 0; n < tables.size(); ++n) total += evaluate(tables[n], b, alphas[n]).value;
    return total;
}

} // namespace rsg
