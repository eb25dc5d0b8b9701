#include "rsg/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsg/errors.hpp"
#include "rsg/lp.hpp"
#include "rsg/resolution.hpp"

namespace rsg {

namespace {

constexpr int kOuterMaxIters = 5000;
constexpr double kOuterRelTol = 1e-9;

/// Exact projection onto {a >= 0, sum_j d_j a_j = target} with d_j > 0.
Eigen::VectorXd project_weighted_simplex(const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                                         double target) {
    const int n = static_cast<int>(y.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return y[i] / d[i] > y[j] / d[j]; });

    // Coordinates activate as theta falls past their breakpoints y_j / d_j.
    double s1 = 0.0, s2 = 0.0;
    double theta = 0.0;
    for (int k = 0; k < n; ++k) {
        const int j = order[k];
        s1 += d[j] * y[j];
        s2 += d[j] * d[j];
        theta = (s1 - target) / s2;
        const double next_break = (k + 1 < n)
                                      ? y[order[k + 1]] / d[order[k + 1]]
                                      : -std::numeric_limits<double>::infinity();
        if (theta >= next_break) break;
    }
    return (y.array() - theta * d.array()).max(0.0).matrix();
}

AllocationPattern embed_bid_values(const StrategyProblem& p, const Eigen::VectorXd& a_sub) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<int>(pattern_length(p.b0.n_players)));
    for (int j = 0; j < p.table->n_subsets(); ++j)
        full[static_cast<int>(p.table->subsets[static_cast<std::size_t>(j)])] = a_sub[j];
    return AllocationPattern(p.b0.n_players, std::move(full));
}

Bid assemble_bid(const StrategyProblem& p, const Eigen::VectorXd& a_sub) {
    Bid bid;
    bid.player = p.player;
    bid.n_players = p.b0.n_players;
    bid.values = Eigen::VectorXd::Constant(p.b0.values.size(), Bid::void_value());
    for (int j = 0; j < p.table->n_subsets(); ++j)
        bid.values[static_cast<int>(p.table->subsets[static_cast<std::size_t>(j)])] =
            std::max(a_sub[j], 0.0);
    return bid;
}

Eigen::VectorXd default_restriction(const StrategyProblem& p) {
    Eigen::VectorXd a(p.table->n_subsets());
    for (int j = 0; j < p.table->n_subsets(); ++j)
        a[j] = p.b0[p.table->subsets[static_cast<std::size_t>(j)]];
    return a;
}

void validate(const StrategyProblem& p) {
    if (!p.table) throw std::invalid_argument("strategy problem carries no table");
    if (p.table->player != p.player || p.table->n_players != p.b0.n_players)
        throw std::invalid_argument("table does not match the strategy problem");
    if (p.restriction) {
        if (subset_size(*p.restriction) < 2 || !contains(*p.restriction, p.player))
            throw std::invalid_argument(
                "restriction must be a multi-player subset containing the player");
    }
}

} // namespace

BidResult greedy_bid_result(const StrategyProblem& p) {
    validate(p);
    const SpectralEfficiencyTable& table = *p.table;
    const int n_sub = table.n_subsets();
    const double target = 1.0 / p.b0.n_players;

    Eigen::VectorXd weights(n_sub);
    for (int j = 0; j < n_sub; ++j)
        weights[j] = 1.0 / subset_size(table.subsets[static_cast<std::size_t>(j)]);

    const Eigen::VectorXd a_default = default_restriction(p);

    BidResult out;
    if (table.n_users() == 0) {
        // Indifferent player: stick with the default pattern.
        out.bid = assemble_bid(p, a_default);
        out.value = out.default_value = 0.0;
        return out;
    }

    Eigen::MatrixXd warm;
    const auto eval_sub = [&](const Eigen::VectorXd& a_sub) {
        const UtilityResult r = evaluate(table, embed_bid_values(p, a_sub), p.alpha, &warm);
        warm = r.allocation.w;
        Eigen::VectorXd grad(n_sub);
        for (int j = 0; j < n_sub; ++j)
            grad[j] = r.supergradient[static_cast<int>(table.subsets[static_cast<std::size_t>(j)])];
        return std::make_pair(r.value, grad);
    };

    Eigen::VectorXd a = a_default;
    auto [value, grad] = eval_sub(a);
    const double default_value = value;

    double step = 1.0;
    for (int it = 0; it < kOuterMaxIters; ++it) {
        bool accepted = false;
        double value_try = value;
        Eigen::VectorXd a_try, grad_try;
        for (int ls = 0; ls < 60; ++ls) {
            a_try = project_weighted_simplex(a + step * grad, weights, target);
            const double predicted = grad.dot(a_try - a);
            if (predicted <= 0.0) break;
            auto [v, g] = eval_sub(a_try);
            value_try = v;
            grad_try = std::move(g);
            if (value_try >= value + 1e-4 * predicted) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double change = value_try - value;
        a = std::move(a_try);
        value = value_try;
        grad = std::move(grad_try);
        step = std::min(step * 1.3, 1e6);
        if (change <= kOuterRelTol * std::max(1.0, std::abs(value))) break;
    }

    // Flat objective: prefer the default over an arbitrary maximizer.
    if (default_value >= value - 1e-10 * std::max(1.0, std::abs(value))) {
        out.bid = assemble_bid(p, a_default);
        out.value = default_value;
    } else {
        out.bid = assemble_bid(p, a);
        out.value = value;
    }
    out.default_value = default_value;
    return out;
}

Bid greedy_bid(const StrategyProblem& p) { return greedy_bid_result(p).bid; }

BidResult restricted_greedy_bid_result(const StrategyProblem& p) {
    validate(p);
    if (!p.restriction) throw std::invalid_argument("restricted bid needs a restriction");
    const SpectralEfficiencyTable& table = *p.table;
    const SubsetId s = *p.restriction;
    const int s_size = subset_size(s);
    const double target = 1.0 / p.b0.n_players;
    const SubsetId singleton = SubsetId{1} << p.player;

    const Eigen::VectorXd a_default = default_restriction(p);

    BidResult out;
    if (table.n_users() == 0) {
        out.bid = assemble_bid(p, a_default);
        out.value = out.default_value = 0.0;
        return out;
    }

    // All other multi-player coordinates stay at the default; reciprocity then
    // ties the own singleton to the negotiated coordinate.
    double pinned = 0.0;
    for (int j = 0; j < table.n_subsets(); ++j) {
        const SubsetId t = table.subsets[static_cast<std::size_t>(j)];
        if (t != s && subset_size(t) > 1) pinned += p.b0[t] / subset_size(t);
    }
    const double s_max = std::max(s_size * (target - pinned), 0.0);

    Eigen::MatrixXd warm;
    const auto bid_for = [&](double v) {
        Eigen::VectorXd a = a_default;
        a[table.subset_index(s)] = v;
        a[table.subset_index(singleton)] = std::max(target - pinned - v / s_size, 0.0);
        return a;
    };
    const auto phi = [&](double v) {
        const UtilityResult r = evaluate(table, embed_bid_values(p, bid_for(v)), p.alpha, &warm);
        warm = r.allocation.w;
        return r.value;
    };

    // Golden-section over the concave 1-D objective.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 0.0, hi = s_max;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-10 * std::max(1.0, s_max); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = phi(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = phi(x1);
        }
    }
    double best_s = (f1 >= f2) ? x1 : x2;
    double best_val = std::max(f1, f2);
    for (const double cand : {0.0, s_max}) {
        const double v = phi(cand);
        if (v > best_val) {
            best_val = v;
            best_s = cand;
        }
    }

    const double s0 = std::clamp(p.b0[s], 0.0, s_max);
    const double default_value = phi(s0);
    if (default_value >= best_val - 1e-10 * std::max(1.0, std::abs(best_val))) {
        best_s = s0;
        best_val = default_value;
    }

    out.bid = assemble_bid(p, bid_for(best_s));
    out.value = best_val;
    out.default_value = default_value;
    return out;
}

Bid restricted_greedy_bid(const StrategyProblem& p) { return restricted_greedy_bid_result(p).bid; }

double best_response_gain(int player, std::span<const Bid> bids, const AllocationPattern& b0,
                          const std::vector<SpectralEfficiencyTable>& tables,
                          const std::vector<double>& alphas) {
    const int n_players = b0.n_players;
    const int len = static_cast<int>(b0.values.size());
    const SpectralEfficiencyTable& table = tables[static_cast<std::size_t>(player)];
    if (table.n_users() == 0) return 0.0;

    const ResolutionOutcome outcome = resolve(bids, b0);
    Eigen::MatrixXd warm;
    const UtilityResult current = evaluate(table, outcome.pattern, alphas[player], &warm);

    // The outcome must stay inside every opponent's box no matter what the
    // player bids; her best case is the utility maximum over that set.
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(len);
    Eigen::VectorXd hi = pattern_upper_bounds(n_players);
    hi[0] = 0.0;
    for (const Bid& bid : bids) {
        if (bid.player == player) continue;
        for (SubsetId s = 1; s < static_cast<SubsetId>(len); ++s) {
            if (!contains(s, bid.player)) continue;
            const int i = static_cast<int>(s);
            lo[i] = std::max(lo[i], std::min(bid.values[i], b0[s]));
            hi[i] = std::min(hi[i], std::max(bid.values[i], b0[s]));
        }
    }

    const Eigen::MatrixXd eq = reciprocity_matrix(n_players);
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n_players, 1.0 / n_players);

    const ConcaveOracle oracle = [&](const Eigen::VectorXd& x) {
        const UtilityResult r =
            evaluate(table, AllocationPattern(n_players, x), alphas[player], &warm);
        warm = r.allocation.w;
        return std::make_pair(r.value, r.supergradient);
    };
    // Ascending from the outcome itself keeps the gain non-negative.
    const ConcaveMaxResult best = maximize_concave(oracle, eq, rhs, lo, hi, outcome.pattern.values);

    return std::max(best.value, current.value) - current.value;
}

} // namespace rsg
