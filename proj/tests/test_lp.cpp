#include <doctest.h>

#include "rsg/allocation.hpp"
#include "rsg/errors.hpp"
#include "rsg/lp.hpp"
#include "rsg/oracle.hpp"
#include "rsg/rng.hpp"

using namespace rsg;

TEST_CASE("simplex solves a textbook instance") {
    // max 3x + 2y, x + y <= 4 as equality with slack, x <= 2, y <= 3.
    BoxLp lp;
    lp.eq.resize(1, 3);
    lp.eq << 1.0, 1.0, 1.0; // x + y + slack = 4
    lp.rhs.resize(1);
    lp.rhs << 4.0;
    lp.lo = Eigen::VectorXd::Zero(3);
    lp.hi.resize(3);
    lp.hi << 2.0, 3.0, 4.0;
    lp.objective.resize(3);
    lp.objective << 3.0, 2.0, 0.0;

    const LpSolution sol = solve_box_lp(lp);
    CHECK(sol.objective == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(2.0));
}

TEST_CASE("simplex respects pinned variables and reports infeasibility") {
    BoxLp lp;
    lp.eq.resize(1, 2);
    lp.eq << 1.0, 1.0;
    lp.rhs.resize(1);
    lp.rhs << 1.0;
    lp.lo.resize(2);
    lp.hi.resize(2);
    lp.lo << 0.25, 0.0;
    lp.hi << 0.25, 1.0; // first variable pinned
    lp.objective.resize(2);
    lp.objective << 1.0, 0.0;

    const LpSolution sol = solve_box_lp(lp);
    CHECK(sol.x[0] == doctest::Approx(0.25));
    CHECK(sol.x[1] == doctest::Approx(0.75));

    lp.hi[1] = 0.5; // now sum cannot reach 1
    CHECK_THROWS_AS(solve_box_lp(lp), SolverError);
}

TEST_CASE("simplex agrees with vertex enumeration on random boxed systems") {
    std::mt19937_64 rng = make_rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(unit(rng) * 4); // 3..6 variables
        const int m = 1 + static_cast<int>(unit(rng) * 2); // 1..2 rows
        Eigen::MatrixXd eq(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) eq(i, j) = unit(rng) < 0.3 ? 0.0 : unit(rng);
        Eigen::VectorXd lo(n), hi(n), c(n);
        for (int j = 0; j < n; ++j) {
            lo[j] = unit(rng) * 0.2;
            hi[j] = lo[j] + unit(rng);
            c[j] = unit(rng) * 2.0 - 1.0;
        }
        // Right-hand side from an interior point keeps the system feasible.
        Eigen::VectorXd interior(n);
        for (int j = 0; j < n; ++j) interior[j] = lo[j] + 0.5 * (hi[j] - lo[j]);
        const Eigen::VectorXd rhs = eq * interior;

        BoxLp lp{eq, rhs, lo, hi, c};
        const LpSolution sol = solve_box_lp(lp);

        const auto vertices = enumerate_vertices(eq, rhs, lo, hi);
        REQUIRE(!vertices.empty());
        double best = -1e300;
        for (const auto& v : vertices) best = std::max(best, c.dot(v));
        CHECK(sol.objective == doctest::Approx(best).epsilon(1e-7));
        CHECK((eq * sol.x - rhs).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("affine-box projection matches its optimality conditions") {
    std::mt19937_64 rng = make_rng(202);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(unit(rng) * 5);
        const int m = 1 + static_cast<int>(unit(rng) * 2);
        Eigen::MatrixXd eq(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) eq(i, j) = unit(rng);
        Eigen::VectorXd lo(n), hi(n), x0(n);
        for (int j = 0; j < n; ++j) {
            lo[j] = unit(rng) * 0.2;
            hi[j] = lo[j] + 0.2 + unit(rng);
            x0[j] = lo[j] - 0.5 + 2.0 * unit(rng);
        }
        Eigen::VectorXd interior(n);
        for (int j = 0; j < n; ++j) interior[j] = lo[j] + 0.5 * (hi[j] - lo[j]);
        const Eigen::VectorXd rhs = eq * interior;

        const Eigen::VectorXd p = project_affine_box(x0, eq, rhs, lo, hi, &interior);
        CHECK((eq * p - rhs).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((p - lo).minCoeff() >= -1e-12);
        CHECK((hi - p).minCoeff() >= -1e-12);

        // Projection inequality: no feasible vertex may be closer to x0.
        for (const auto& v : enumerate_vertices(eq, rhs, lo, hi))
            CHECK((p - x0).squaredNorm() <= (v - x0).squaredNorm() + 1e-7);
    }
}

TEST_CASE("concave maximizer solves a quadratic over the feasible polytope") {
    // max -||x - target||^2 over the 3-player feasible set; optimum is the
    // projection of the target, checked against project_affine_box.
    const int n_players = 3;
    const Eigen::MatrixXd eq = reciprocity_matrix(n_players);
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n_players, 1.0 / 3);
    const Eigen::VectorXd lo = Eigen::VectorXd::Zero(eq.cols());
    const Eigen::VectorXd hi = pattern_upper_bounds(n_players);

    Eigen::VectorXd target(8);
    target << 0.0, 0.4, 0.1, 0.0, 0.2, 0.3, 0.0, 0.35;

    const ConcaveOracle fn = [&](const Eigen::VectorXd& x) {
        return std::make_pair(-(x - target).squaredNorm(), Eigen::VectorXd(-2.0 * (x - target)));
    };
    const Eigen::VectorXd start = default_pattern(DefaultKind::MRG, n_players).values;
    const ConcaveMaxResult got = maximize_concave(fn, eq, rhs, lo, hi, start, 5000, 1e-12);
    const Eigen::VectorXd expect = project_affine_box(target, eq, rhs, lo, hi, &start);
    CHECK((got.x - expect).cwiseAbs().maxCoeff() <= 1e-5);
}
