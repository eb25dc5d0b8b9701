#include "rsg/allocation.hpp"

#include <cmath>
#include <stdexcept>

namespace rsg {

AllocationPattern::AllocationPattern(int n, Eigen::VectorXd v) : n_players(n), values(std::move(v)) {
    check_player_count(n);
    if (static_cast<std::size_t>(values.size()) != pattern_length(n))
        throw std::invalid_argument("pattern vector has wrong length for player count");
    values[0] = 0.0; // empty set holds no resource
}

AllocationPattern default_pattern(DefaultKind kind, int n_players) {
    check_player_count(n_players);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<int>(pattern_length(n_players)));
    if (kind == DefaultKind::MRG) {
        for (int n = 0; n < n_players; ++n)
            v[static_cast<int>(SubsetId{1} << n)] = 1.0 / n_players;
    } else {
        v[static_cast<int>(full_set(n_players))] = 1.0;
    }
    return AllocationPattern(n_players, std::move(v));
}

Eigen::VectorXd reciprocity_shares(const AllocationPattern& b) {
    Eigen::VectorXd shares = Eigen::VectorXd::Zero(b.n_players);
    for (SubsetId s = 1; s <= full_set(b.n_players); ++s) {
        const double contribution = b[s] / subset_size(s);
        for (int n = 0; n < b.n_players; ++n)
            if (contains(s, n)) shares[n] += contribution;
    }
    return shares;
}

bool is_feasible(const AllocationPattern& b, double tol) {
    if (b.values.minCoeff() < -tol) return false;
    const Eigen::VectorXd shares = reciprocity_shares(b);
    const double target = 1.0 / b.n_players;
    return (shares.array() - target).abs().maxCoeff() <= tol;
}

double bid_reciprocity_share(const Bid& bid) {
    double share = 0.0;
    for (SubsetId s = 1; s <= full_set(bid.n_players); ++s)
        if (contains(s, bid.player)) share += bid.values[static_cast<int>(s)] / subset_size(s);
    return share;
}

Bid default_bid(int player, const AllocationPattern& b0) {
    Bid bid;
    bid.player = player;
    bid.n_players = b0.n_players;
    bid.values = Eigen::VectorXd::Constant(b0.values.size(), Bid::void_value());
    for (SubsetId s = 1; s <= full_set(b0.n_players); ++s)
        if (contains(s, player)) bid.values[static_cast<int>(s)] = b0[s];
    return bid;
}

BidBox bid_box(const Bid& bid, const AllocationPattern& b0) {
    if (bid.n_players != b0.n_players)
        throw std::invalid_argument("bid and default pattern dimensioned differently");
    const int len = static_cast<int>(b0.values.size());
    BidBox box;
    box.player = bid.player;
    box.n_players = bid.n_players;
    box.lo = Eigen::VectorXd::Constant(len, -std::numeric_limits<double>::infinity());
    box.hi = Eigen::VectorXd::Constant(len, std::numeric_limits<double>::infinity());
    for (SubsetId s = 0; s < static_cast<SubsetId>(len); ++s) {
        if (!contains(s, bid.player)) continue;
        const double a = bid.values[static_cast<int>(s)];
        if (std::isnan(a)) throw std::invalid_argument("bid holds void value on an own subset");
        box.lo[static_cast<int>(s)] = std::min(a, b0[s]);
        box.hi[static_cast<int>(s)] = std::max(a, b0[s]);
    }
    return box;
}

bool box_contains(const BidBox& box, const AllocationPattern& b, double tol) {
    for (int i = 0; i < b.values.size(); ++i) {
        if (b.values[i] < box.lo[i] - tol) return false;
        if (b.values[i] > box.hi[i] + tol) return false;
    }
    return true;
}

Eigen::MatrixXd reciprocity_matrix(int n_players) {
    check_player_count(n_players);
    const int len = static_cast<int>(pattern_length(n_players));
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_players, len);
    for (SubsetId s = 1; s <= full_set(n_players); ++s)
        for (int n = 0; n < n_players; ++n)
            if (contains(s, n)) a(n, static_cast<int>(s)) = 1.0 / subset_size(s);
    return a;
}

Eigen::VectorXd pattern_upper_bounds(int n_players) {
    check_player_count(n_players);
    const int len = static_cast<int>(pattern_length(n_players));
    Eigen::VectorXd ub(len);
    ub[0] = 0.0;
    for (SubsetId s = 1; s < static_cast<SubsetId>(len); ++s)
        ub[static_cast<int>(s)] = static_cast<double>(subset_size(s)) / n_players;
    return ub;
}

} // namespace rsg
