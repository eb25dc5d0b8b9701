#include "rsg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rsg/errors.hpp"

namespace rsg {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kResidualTol = 1e-9;
constexpr int kMaxSimplexIters = 20000;

enum class VarStatus { Basic, AtLo, AtHi };

struct Tableau {
    Eigen::MatrixXd a;  // m x n_total, artificials appended
    Eigen::VectorXd lo, hi, cost, x;
    std::vector<VarStatus> status;
    std::vector<int> basis; // size m, column index per row

    int rows() const { return static_cast<int>(a.rows()); }
    int cols() const { return static_cast<int>(a.cols()); }
};

// One simplex pass (maximization) on the current cost vector.
// Returns the number of iterations spent.
int run_simplex(Tableau& t, const Eigen::VectorXd& rhs, bool* alt_optimum) {
    const int m = t.rows();
    const int n = t.cols();
    int iters = 0;
    if (alt_optimum) *alt_optimum = false;

    for (;; ++iters) {
        if (iters > kMaxSimplexIters) throw SolverError("simplex iteration limit exceeded");

        Eigen::MatrixXd basis_mat(m, m);
        for (int i = 0; i < m; ++i) basis_mat.col(i) = t.a.col(t.basis[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_mat);

        // Nonbasic contribution, then basic values from the factorization.
        Eigen::VectorXd rhs_reduced = rhs;
        for (int j = 0; j < n; ++j)
            if (t.status[j] != VarStatus::Basic && t.x[j] != 0.0)
                rhs_reduced -= t.a.col(j) * t.x[j];
        Eigen::VectorXd xb = lu.solve(rhs_reduced);
        for (int i = 0; i < m; ++i) t.x[t.basis[i]] = xb[i];

        Eigen::VectorXd cb(m);
        for (int i = 0; i < m; ++i) cb[i] = t.cost[t.basis[i]];
        Eigen::VectorXd y = lu.transpose().solve(cb);

        // Bland: smallest-index improving nonbasic column.
        int entering = -1;
        int direction = 0; // +1 leaves a lower bound, -1 leaves an upper bound
        for (int j = 0; j < n; ++j) {
            if (t.status[j] == VarStatus::Basic) continue;
            if (t.hi[j] - t.lo[j] <= kPivotTol) continue; // pinned
            const double d = t.cost[j] - y.dot(t.a.col(j));
            if (t.status[j] == VarStatus::AtLo && d > kReducedCostTol) {
                entering = j;
                direction = +1;
                break;
            }
            if (t.status[j] == VarStatus::AtHi && d < -kReducedCostTol) {
                entering = j;
                direction = -1;
                break;
            }
        }
        if (entering < 0) {
            // Optimal. Flag alternative optima: a movable nonbasic column with
            // zero reduced cost means the optimal face is not a single vertex.
            if (alt_optimum) {
                for (int j = 0; j < n; ++j) {
                    if (t.status[j] == VarStatus::Basic) continue;
                    if (t.hi[j] - t.lo[j] <= kPivotTol) continue;
                    const double d = t.cost[j] - y.dot(t.a.col(j));
                    if (std::abs(d) <= kReducedCostTol) {
                        *alt_optimum = true;
                        break;
                    }
                }
            }
            return iters;
        }

        const Eigen::VectorXd w = lu.solve(t.a.col(entering));

        // Ratio test; ties broken toward the smallest basis column index (Bland).
        double step = t.hi[entering] - t.lo[entering]; // bound flip distance
        int leaving_row = -1;
        for (int i = 0; i < m; ++i) {
            const double delta = -direction * w[i]; // change of basic i per unit step
            double limit;
            if (delta > kPivotTol)
                limit = (t.hi[t.basis[i]] - t.x[t.basis[i]]) / delta;
            else if (delta < -kPivotTol)
                limit = (t.lo[t.basis[i]] - t.x[t.basis[i]]) / delta;
            else
                continue;
            limit = std::max(limit, 0.0);
            if (limit < step - 1e-13) {
                step = limit;
                leaving_row = i;
            } else if (limit <= step + 1e-13 && leaving_row >= 0 &&
                       t.basis[i] < t.basis[leaving_row]) {
                leaving_row = i;
            }
        }
        if (std::isinf(step)) throw SolverError("LP is unbounded");

        // Apply the step.
        t.x[entering] += direction * step;
        for (int i = 0; i < m; ++i) t.x[t.basis[i]] -= direction * step * w[i];

        if (leaving_row < 0) {
            // Bound flip: entering stays nonbasic at its other bound.
            t.status[entering] = (direction > 0) ? VarStatus::AtHi : VarStatus::AtLo;
            t.x[entering] = (direction > 0) ? t.hi[entering] : t.lo[entering];
        } else {
            const int leaving = t.basis[leaving_row];
            const double delta = -direction * w[leaving_row];
            t.status[leaving] = (delta > 0) ? VarStatus::AtHi : VarStatus::AtLo;
            t.x[leaving] = (delta > 0) ? t.hi[leaving] : t.lo[leaving];
            t.basis[leaving_row] = entering;
            t.status[entering] = VarStatus::Basic;
        }
    }
}

} // namespace

LpSolution solve_box_lp(const BoxLp& lp) {
    const int m = static_cast<int>(lp.eq.rows());
    const int n = static_cast<int>(lp.eq.cols());
    if (lp.rhs.size() != m || lp.lo.size() != n || lp.hi.size() != n || lp.objective.size() != n)
        throw std::invalid_argument("box LP dimensions disagree");
    for (int j = 0; j < n; ++j) {
        if (!(lp.lo[j] <= lp.hi[j] + 1e-12))
            throw std::invalid_argument("box LP has lo > hi");
        if (!std::isfinite(lp.lo[j]) || !std::isfinite(lp.hi[j]))
            throw std::invalid_argument("box LP requires finite structural bounds");
    }

    Tableau t;
    t.a.resize(m, n + m);
    t.a.leftCols(n) = lp.eq;
    t.lo.resize(n + m);
    t.hi.resize(n + m);
    t.cost = Eigen::VectorXd::Zero(n + m);
    t.x = Eigen::VectorXd::Zero(n + m);
    t.status.assign(n + m, VarStatus::AtLo);
    t.basis.resize(m);

    t.lo.head(n) = lp.lo;
    t.hi.head(n) = lp.hi;
    for (int j = 0; j < n; ++j) t.x[j] = lp.lo[j];

    // Artificial columns close the initial residual; phase 1 drives them to 0.
    const Eigen::VectorXd residual = lp.rhs - lp.eq * lp.lo;
    for (int i = 0; i < m; ++i) {
        const int j = n + i;
        t.a.col(j) = Eigen::VectorXd::Unit(m, i);
        if (residual[i] >= 0.0) {
            t.lo[j] = 0.0;
            t.hi[j] = std::numeric_limits<double>::infinity();
            t.cost[j] = -1.0;
        } else {
            t.lo[j] = -std::numeric_limits<double>::infinity();
            t.hi[j] = 0.0;
            t.cost[j] = 1.0;
        }
        t.x[j] = residual[i];
        t.status[j] = VarStatus::Basic;
        t.basis[i] = j;
    }

    LpSolution sol;
    sol.iterations = run_simplex(t, lp.rhs, nullptr);

    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i) infeasibility += std::abs(t.x[n + i]) * std::abs(t.cost[n + i]);
    if (infeasibility > 1e-8) throw SolverError("LP constraint system is infeasible");

    // Pin artificials at zero for phase 2. Ones still basic (redundant rows)
    // are frozen in place by the degenerate bounds.
    for (int i = 0; i < m; ++i) {
        const int j = n + i;
        t.lo[j] = t.hi[j] = 0.0;
        if (t.status[j] != VarStatus::Basic) {
            t.status[j] = VarStatus::AtLo;
            t.x[j] = 0.0;
        }
    }
    t.cost.setZero();
    t.cost.head(n) = lp.objective;

    bool alt = false;
    sol.iterations += run_simplex(t, lp.rhs, &alt);

    sol.x = t.x.head(n);
    for (int j = 0; j < n; ++j) sol.x[j] = std::clamp(sol.x[j], lp.lo[j], lp.hi[j]);
    sol.objective = lp.objective.dot(sol.x);
    sol.unique = !alt;

    const double res = (lp.eq * sol.x - lp.rhs).cwiseAbs().maxCoeff();
    if (res > kResidualTol) throw SolverError("LP solution violates equality constraints");
    return sol;
}

Eigen::VectorXd project_affine_box(const Eigen::VectorXd& x0,
                                   const Eigen::MatrixXd& E,
                                   const Eigen::VectorXd& d,
                                   const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& hi,
                                   const Eigen::VectorXd* feasible_hint) {
    const int m = static_cast<int>(E.rows());
    const int n = static_cast<int>(E.cols());
    constexpr double kTol = 1e-11;
    constexpr int kMaxIters = 300;

    const auto clamp_point = [&](const Eigen::VectorXd& y) {
        return y.cwiseMax(lo).cwiseMin(hi);
    };

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd x = clamp_point(x0);
    Eigen::VectorXd g = E * x - d;

    double best_res = g.cwiseAbs().maxCoeff();
    Eigen::VectorXd best_x = x;

    for (int it = 0; it < kMaxIters && best_res > kTol; ++it) {
        // Active-coordinate mask: coordinates strictly inside the box respond
        // to multiplier changes, clamped ones do not.
        Eigen::VectorXd y = x0 - E.transpose() * lambda;
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < n; ++j)
            if (y[j] > lo[j] && y[j] < hi[j]) jac += E.col(j) * E.col(j).transpose();
        jac.diagonal().array() += 1e-12 + 1e-10 * jac.diagonal().maxCoeff();

        const Eigen::VectorXd p = jac.ldlt().solve(g);

        // Backtracking on the residual norm.
        double step = 1.0;
        const double res0 = g.squaredNorm();
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            Eigen::VectorXd lam_try = lambda + step * p;
            Eigen::VectorXd x_try = clamp_point(x0 - E.transpose() * lam_try);
            Eigen::VectorXd g_try = E * x_try - d;
            if (g_try.squaredNorm() <= res0 * (1.0 - 1e-4 * step) || g_try.squaredNorm() < kTol * kTol) {
                lambda = lam_try;
                x = x_try;
                g = g_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const double res = g.cwiseAbs().maxCoeff();
        if (res < best_res) {
            best_res = res;
            best_x = x;
        }
    }

    if (best_res > 1e-9) {
        if (feasible_hint) return *feasible_hint;
        throw SolverError("affine-box projection failed to converge");
    }
    return best_x;
}

ConcaveMaxResult maximize_concave(const ConcaveOracle& fn,
                                  const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                                  const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                  const Eigen::VectorXd& x0,
                                  int max_iters, double rel_tol) {
    ConcaveMaxResult res;
    res.x = x0;
    auto [value, grad] = fn(res.x);
    res.value = value;

    double step = 1.0;
    for (int it = 0; it < max_iters; ++it) {
        ++res.iterations;
        bool accepted = false;
        double value_try = value;
        Eigen::VectorXd x_try, grad_try;
        for (int ls = 0; ls < 60; ++ls) {
            x_try = project_affine_box(res.x + step * grad, E, d, lo, hi, &res.x);
            const double predicted = grad.dot(x_try - res.x);
            auto [v, g] = fn(x_try);
            value_try = v;
            grad_try = std::move(g);
            if (predicted <= 0.0) break; // stationary within the set
            if (value_try >= value + 1e-4 * predicted) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const double change = value_try - value;
        res.x = std::move(x_try);
        value = value_try;
        grad = std::move(grad_try);
        res.value = value;
        step = std::min(step * 1.3, 1e6);
        if (change <= rel_tol * std::max(1.0, std::abs(value))) break;
    }
    return res;
}

} // namespace rsg
