#include <doctest.h>

#include "rsg/allocation.hpp"
#include "rsg/oracle.hpp"
#include "rsg/rng.hpp"

using namespace rsg;

namespace {
SubsetId mask(std::initializer_list<int> players) {
    SubsetId s = 0;
    for (int p : players) s |= SubsetId{1} << p;
    return s;
}
} // namespace

TEST_CASE("subsets_containing enumerates the player's subsets") {
    const auto p0 = subsets_containing(0, 2);
    REQUIRE(p0.size() == 2);
    CHECK(p0[0] == mask({0}));
    CHECK(p0[1] == mask({0, 1}));

    const auto p1 = subsets_containing(1, 3);
    REQUIRE(p1.size() == 4);
    for (SubsetId s : p1) CHECK(contains(s, 1));

    CHECK(subsets_containing(0, 4).size() == 8);
    CHECK_THROWS_AS(subsets_containing(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(subsets_containing(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(subsets_containing(0, kMaxPlayers + 1), std::invalid_argument);
}

TEST_CASE("default patterns match their definitions and are feasible") {
    const AllocationPattern mrg2 = default_pattern(DefaultKind::MRG, 2);
    CHECK(mrg2[mask({0})] == doctest::Approx(0.5));
    CHECK(mrg2[mask({1})] == doctest::Approx(0.5));
    CHECK(mrg2[mask({0, 1})] == 0.0);

    const AllocationPattern rpg2 = default_pattern(DefaultKind::RPG, 2);
    CHECK(rpg2[mask({0, 1})] == 1.0);
    CHECK(rpg2[mask({0})] == 0.0);
    CHECK(rpg2[mask({1})] == 0.0);

    const AllocationPattern mrg4 = default_pattern(DefaultKind::MRG, 4);
    for (int n = 0; n < 4; ++n) CHECK(mrg4[SubsetId{1} << n] == doctest::Approx(0.25));

    for (int n = 2; n <= kMaxPlayers; ++n) {
        CHECK(is_feasible(default_pattern(DefaultKind::MRG, n)));
        CHECK(is_feasible(default_pattern(DefaultKind::RPG, n)));
    }
    CHECK_THROWS_AS(default_pattern(DefaultKind::MRG, 1), std::invalid_argument);
}

TEST_CASE("reciprocity shares and feasibility") {
    const AllocationPattern rpg3 = default_pattern(DefaultKind::RPG, 3);
    const Eigen::VectorXd shares = reciprocity_shares(rpg3);
    for (int n = 0; n < 3; ++n) CHECK(shares[n] == doctest::Approx(1.0 / 3));

    Eigen::VectorXd v(4);
    v << 0.0, 0.3, 0.3, 0.4;
    const AllocationPattern b(2, v);
    CHECK(is_feasible(b, 1e-9));
    const Eigen::VectorXd s2 = reciprocity_shares(b);
    CHECK(s2[0] == doctest::Approx(0.5));
    CHECK(s2[1] == doctest::Approx(0.5));

    Eigen::VectorXd bad(4);
    bad << 0.0, 0.6, 0.4, 0.0;
    CHECK_FALSE(is_feasible(AllocationPattern(2, bad), 1e-9));

    const AllocationPattern zero(2, Eigen::VectorXd::Zero(4));
    CHECK(reciprocity_shares(zero).isZero());
    CHECK_FALSE(is_feasible(zero));
}

TEST_CASE("bid boxes bracket bid and default") {
    const AllocationPattern b0 = default_pattern(DefaultKind::MRG, 2);

    Bid bid;
    bid.player = 0;
    bid.n_players = 2;
    bid.values = Eigen::VectorXd::Constant(4, Bid::void_value());
    bid.values[mask({0})] = 0.3;
    bid.values[mask({0, 1})] = 0.4;

    const BidBox box = bid_box(bid, b0);
    CHECK(box.lo[mask({0})] == doctest::Approx(0.3));
    CHECK(box.hi[mask({0})] == doctest::Approx(0.5));
    CHECK(box.lo[mask({0, 1})] == doctest::Approx(0.0));
    CHECK(box.hi[mask({0, 1})] == doctest::Approx(0.4));
    CHECK(box.lo[mask({1})] == -std::numeric_limits<double>::infinity());

    // Identity case: all intervals collapse.
    const Bid same = default_bid(1, b0);
    const BidBox degenerate = bid_box(same, b0);
    CHECK(degenerate.lo[mask({1})] == degenerate.hi[mask({1})]);
    CHECK(degenerate.lo[mask({0, 1})] == degenerate.hi[mask({0, 1})]);

    // RPG: bidding 1 on the full set against an MRG default spans [0, 1].
    Bid full;
    full.player = 0;
    full.n_players = 2;
    full.values = Eigen::VectorXd::Constant(4, Bid::void_value());
    full.values[mask({0})] = 0.0;
    full.values[mask({0, 1})] = 1.0;
    const BidBox span = bid_box(full, b0);
    CHECK(span.lo[mask({0, 1})] == 0.0);
    CHECK(span.hi[mask({0, 1})] == 1.0);
}

TEST_CASE("random bids satisfy the strategy-space constraint") {
    std::mt19937_64 rng = make_rng(7);
    for (int n_players : {2, 3, 4}) {
        for (int trial = 0; trial < 50; ++trial) {
            const int player = trial % n_players;
            const Bid bid = random_bid(player, n_players, rng);
            CHECK(bid_reciprocity_share(bid) == doctest::Approx(1.0 / n_players).epsilon(1e-9));
            for (SubsetId s = 0; s <= full_set(n_players); ++s) {
                if (contains(s, player))
                    CHECK(bid.values[static_cast<int>(s)] >= 0.0);
                else
                    CHECK(std::isnan(bid.values[static_cast<int>(s)]));
            }
        }
    }
}

TEST_CASE("feasible set is convex and carries unit mass") {
    std::mt19937_64 rng = make_rng(11);
    for (int n_players : {2, 3, 4}) {
        for (int trial = 0; trial < 40; ++trial) {
            const AllocationPattern b1 = random_feasible_pattern(n_players, rng);
            const AllocationPattern b2 = random_feasible_pattern(n_players, rng);
            REQUIRE(is_feasible(b1, 1e-9));
            REQUIRE(is_feasible(b2, 1e-9));
            CHECK(b1.total_mass() == doctest::Approx(1.0).epsilon(1e-9));

            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double theta = unit(rng);
            const AllocationPattern mix(n_players,
                                        theta * b1.values + (1.0 - theta) * b2.values);
            CHECK(is_feasible(mix, 1e-9));
            CHECK(mix.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}
