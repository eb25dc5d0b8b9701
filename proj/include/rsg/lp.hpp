#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>

namespace rsg {

/// maximize objective . x   subject to   eq x = rhs,  lo <= x <= hi.
/// Structural bounds must be finite; lo == hi pins a variable.
struct BoxLp {
    Eigen::MatrixXd eq;
    Eigen::VectorXd rhs;
    Eigen::VectorXd lo, hi;
    Eigen::VectorXd objective;
};

struct LpSolution {
    Eigen::VectorXd x;
    double objective = 0.0;
    bool unique = true; ///< false when an alternative optimum was detected
    int iterations = 0;
};

/// Dense two-phase bounded-variable simplex with Bland's rule.
/// Throws SolverError on infeasible/unbounded input or iteration blow-up.
LpSolution solve_box_lp(const BoxLp& lp);

/// Euclidean projection of x0 onto {x : E x = d, lo <= x <= hi}, computed by
/// semismooth Newton on the dual. `feasible_hint`, when given, must lie in the
/// set; it is returned if the dual iteration fails to close the residual.
Eigen::VectorXd project_affine_box(const Eigen::VectorXd& x0,
                                   const Eigen::MatrixXd& E,
                                   const Eigen::VectorXd& d,
                                   const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& hi,
                                   const Eigen::VectorXd* feasible_hint = nullptr);

/// Value and supergradient of a concave function at a point.
using ConcaveOracle = std::function<std::pair<double, Eigen::VectorXd>(const Eigen::VectorXd&)>;

struct ConcaveMaxResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
};

/// Projected-gradient ascent with backtracking over {E x = d, lo <= x <= hi}.
/// x0 must be feasible; the iterate never leaves the set and the value never
/// decreases, so the result dominates fn(x0).
ConcaveMaxResult maximize_concave(const ConcaveOracle& fn,
                                  const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                                  const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                  const Eigen::VectorXd& x0,
                                  int max_iters = 2000, double rel_tol = 1e-9);

} // namespace rsg
