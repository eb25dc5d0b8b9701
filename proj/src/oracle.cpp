#include "rsg/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace rsg {

namespace {

constexpr double kVertexTol = 1e-9;

void collect_bases(int n_cols, int m, int start, std::vector<int>& current,
                   std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == m) {
        out.push_back(current);
        return;
    }
    for (int j = start; j < n_cols; ++j) {
        current.push_back(j);
        collect_bases(n_cols, m, j + 1, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& eq,
                                                const Eigen::VectorXd& rhs,
                                                const Eigen::VectorXd& lo,
                                                const Eigen::VectorXd& hi) {
    const int m = static_cast<int>(eq.rows());
    const int n = static_cast<int>(eq.cols());
    if (n > 20) throw std::invalid_argument("vertex enumeration limited to small systems");

    std::vector<std::vector<int>> bases;
    std::vector<int> scratch;
    collect_bases(n, m, 0, scratch, bases);

    std::vector<Eigen::VectorXd> vertices;
    for (const std::vector<int>& basis : bases) {
        Eigen::MatrixXd basis_mat(m, m);
        for (int i = 0; i < m; ++i) basis_mat.col(i) = eq.col(basis[static_cast<std::size_t>(i)]);
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
        if (!lu.isInvertible()) continue;

        std::vector<int> nonbasic;
        for (int j = 0; j < n; ++j)
            if (std::find(basis.begin(), basis.end(), j) == basis.end()) nonbasic.push_back(j);

        // Movable nonbasic columns take either bound; pinned ones only lo.
        std::vector<int> movable;
        for (int j : nonbasic)
            if (hi[j] - lo[j] > kVertexTol) movable.push_back(j);
        const int combos = 1 << movable.size();

        for (int mask = 0; mask < combos; ++mask) {
            Eigen::VectorXd x(n);
            for (int j : nonbasic) x[j] = lo[j];
            for (std::size_t t = 0; t < movable.size(); ++t)
                if ((mask >> t) & 1) x[movable[t]] = hi[movable[t]];

            Eigen::VectorXd r = rhs;
            for (int j : nonbasic) r -= eq.col(j) * x[j];
            const Eigen::VectorXd xb = lu.solve(r);

            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                const int j = basis[static_cast<std::size_t>(i)];
                if (xb[i] < lo[j] - kVertexTol || xb[i] > hi[j] + kVertexTol) ok = false;
                x[j] = xb[i];
            }
            if (!ok) continue;

            bool duplicate = false;
            for (const Eigen::VectorXd& v : vertices)
                if ((v - x).cwiseAbs().maxCoeff() <= 1e-7) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) vertices.push_back(std::move(x));
        }
    }
    return vertices;
}

OracleResolution oracle_resolve(std::span<const Bid> bids, const AllocationPattern& b0) {
    const int n_players = b0.n_players;
    if (n_players > 3)
        throw std::invalid_argument("brute-force resolution oracle supports at most 3 players");
    const int len = static_cast<int>(b0.values.size());

    // Box intersection built directly from the definition.
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(len);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(len, std::numeric_limits<double>::infinity());
    lo[0] = hi[0] = 0.0;
    for (SubsetId s = 1; s < static_cast<SubsetId>(len); ++s) {
        for (const Bid& bid : bids) {
            if (!contains(s, bid.player)) continue;
            const int i = static_cast<int>(s);
            lo[i] = std::max(lo[i], std::min(bid.values[i], b0[s]));
            hi[i] = std::min(hi[i], std::max(bid.values[i], b0[s]));
        }
    }

    const std::vector<Eigen::VectorXd> vertices = enumerate_vertices(
        reciprocity_matrix(n_players), Eigen::VectorXd::Constant(n_players, 1.0 / n_players), lo,
        hi);
    if (vertices.empty()) throw std::runtime_error("oracle found no feasible vertex");

    OracleResolution res;
    res.objective = -1.0;
    for (const Eigen::VectorXd& v : vertices)
        res.objective = std::max(res.objective, (v - b0.values).cwiseAbs().sum());
    for (const Eigen::VectorXd& v : vertices)
        if ((v - b0.values).cwiseAbs().sum() >= res.objective - 1e-9)
            res.optimal_vertices.push_back(v);
    return res;
}

Bid random_bid(int player, int n_players, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp_dist(1.0);
    Bid bid;
    bid.player = player;
    bid.n_players = n_players;
    bid.values =
        Eigen::VectorXd::Constant(static_cast<int>(pattern_length(n_players)), Bid::void_value());

    double weighted_sum = 0.0;
    std::vector<std::pair<int, double>> draws;
    for (SubsetId s = 1; s <= full_set(n_players); ++s) {
        if (!contains(s, player)) continue;
        const double e = exp_dist(rng);
        draws.emplace_back(static_cast<int>(s), e);
        weighted_sum += e / subset_size(static_cast<SubsetId>(s));
    }
    for (const auto& [idx, e] : draws)
        bid.values[idx] = e / weighted_sum / n_players;
    return bid;
}

AllocationPattern random_feasible_pattern(int n_players, std::mt19937_64& rng) {
    // Convex combination of hand-built feasible extreme patterns: the all-
    // private default plus, per multi-player subset T, the pattern that pours
    // the members' whole shares into T. Exactly feasible by linearity.
    const int len = static_cast<int>(pattern_length(n_players));
    std::exponential_distribution<double> exp_dist(1.0);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(len);
    double total = exp_dist(rng);
    x += total * default_pattern(DefaultKind::MRG, n_players).values;
    for (SubsetId t = 1; t <= full_set(n_players); ++t) {
        if (subset_size(t) < 2) continue;
        const double w = exp_dist(rng);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(len);
        v[static_cast<int>(t)] = static_cast<double>(subset_size(t)) / n_players;
        for (int n = 0; n < n_players; ++n)
            if (!contains(t, n)) v[static_cast<int>(SubsetId{1} << n)] = 1.0 / n_players;
        x += w * v;
        total += w;
    }
    return AllocationPattern(n_players, x / total);
}

} // namespace rsg
