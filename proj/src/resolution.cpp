#include "rsg/resolution.hpp"

#include <cmath>
#include <vector>

#include "rsg/errors.hpp"
#include "rsg/lp.hpp"

namespace rsg {

namespace {

void check_profile(std::span<const Bid> bids, const AllocationPattern& b0) {
    if (static_cast<int>(bids.size()) != b0.n_players)
        throw std::invalid_argument("need exactly one bid per player");
    std::vector<bool> seen(b0.n_players, false);
    for (const Bid& bid : bids) {
        if (bid.player < 0 || bid.player >= b0.n_players)
            throw std::invalid_argument("bid carries an out-of-range player index");
        if (seen[bid.player]) throw std::invalid_argument("duplicate bid for player");
        seen[bid.player] = true;
        if (bid.n_players != b0.n_players || bid.values.size() != b0.values.size())
            throw std::invalid_argument("bid dimensioned differently from default pattern");
    }
}

} // namespace

SignCoefficients sign_coefficients(std::span<const Bid> bids, const AllocationPattern& b0) {
    check_profile(bids, b0);
    const int len = static_cast<int>(b0.values.size());
    SignCoefficients sc;
    sc.alpha = Eigen::VectorXi::Zero(len);
    for (SubsetId s = 1; s < static_cast<SubsetId>(len); ++s) {
        bool all_above = true, all_below = true;
        for (const Bid& bid : bids) {
            if (!contains(s, bid.player)) continue;
            double a = bid.values[static_cast<int>(s)];
            if (std::abs(a - b0[s]) <= kSignSnapTol) a = b0[s];
            all_above &= a > b0[s];
            all_below &= a < b0[s];
        }
        if (all_above)
            sc.alpha[static_cast<int>(s)] = +1;
        else if (all_below)
            sc.alpha[static_cast<int>(s)] = -1;
    }
    return sc;
}

ResolutionOutcome resolve(std::span<const Bid> bids, const AllocationPattern& b0) {
    check_profile(bids, b0);
    const int n_players = b0.n_players;
    const int len = static_cast<int>(b0.values.size());
    const SignCoefficients signs = sign_coefficients(bids, b0);

    // Intersected bid boxes. Subsets with sign 0 are pinned to the default
    // (that is already the box intersection there; pinning keeps it exact).
    Eigen::VectorXd lo(len), hi(len);
    lo[0] = hi[0] = 0.0;
    for (SubsetId s = 1; s < static_cast<SubsetId>(len); ++s) {
        const int i = static_cast<int>(s);
        if (signs.alpha[i] == 0) {
            lo[i] = hi[i] = b0[s];
            continue;
        }
        double l = 0.0, h = std::numeric_limits<double>::infinity();
        for (const Bid& bid : bids) {
            if (!contains(s, bid.player)) continue;
            const double a = bid.values[i];
            l = std::max(l, std::min(a, b0[s]));
            h = std::min(h, std::max(a, b0[s]));
        }
        if (h < l) {
            if (h < l - 1e-9) throw InternalError("bid boxes have empty intersection");
            l = h = 0.5 * (l + h);
        }
        lo[i] = l;
        hi[i] = h;
    }

    BoxLp lp;
    lp.eq = reciprocity_matrix(n_players);
    lp.rhs = Eigen::VectorXd::Constant(n_players, 1.0 / n_players);
    lp.lo = lo;
    lp.hi = hi;
    lp.objective = signs.alpha.cast<double>();

    LpSolution lp_sol;
    try {
        lp_sol = solve_box_lp(lp);
    } catch (const SolverError& e) {
        // The default pattern lies in every box, so infeasibility is a bug.
        throw InternalError(std::string("resolution LP failed: ") + e.what());
    }

    // Tie-break: among optimal patterns, the one closest to the default. When
    // the optimum is a single vertex this is a no-op.
    const int rows = n_players + 1;
    Eigen::MatrixXd eq_face(rows, len);
    eq_face.topRows(n_players) = lp.eq;
    eq_face.row(n_players) = lp.objective.transpose();
    Eigen::VectorXd rhs_face(rows);
    rhs_face.head(n_players) = lp.rhs;
    rhs_face[n_players] = lp.objective.dot(lp_sol.x);

    const Eigen::VectorXd projected =
        project_affine_box(b0.values, eq_face, rhs_face, lo, hi, &lp_sol.x);

    ResolutionOutcome out;
    out.pattern = AllocationPattern(n_players, projected);
    out.objective = (projected - b0.values).cwiseAbs().sum();
    out.unique = lp_sol.unique && (projected - lp_sol.x).cwiseAbs().maxCoeff() <= 1e-7;
    return out;
}

} // namespace rsg
