#include <doctest.h>

#include <cmath>

#include "rsg/rng.hpp"
#include "rsg/scenario.hpp"

using namespace rsg;

TEST_CASE("path loss follows the log-distance and wall model") {
    Layout layout = two_player_layout();
    layout.channel.wall_spacing_m = 10.0;

    const Vec2 tx{1.0, 1.0};
    SUBCASE("reference distance gives the base loss") {
        CHECK(path_loss_db(tx, {2.0, 1.0}, layout) == doctest::Approx(46.8));
    }
    SUBCASE("distances below the reference are clamped") {
        CHECK(path_loss_db(tx, {1.0, 1.0}, layout) == doctest::Approx(46.8));
        CHECK(path_loss_db(tx, {1.3, 1.0}, layout) == doctest::Approx(46.8));
    }
    SUBCASE("doubling the distance adds the slope") {
        const double pl2 = path_loss_db(tx, {3.0, 1.0}, layout);
        const double pl4 = path_loss_db(tx, {5.0, 1.0}, layout);
        CHECK(pl4 - pl2 == doctest::Approx(10.0 * 1.87 * std::log10(2.0)).epsilon(1e-9));
    }
    SUBCASE("each wall crossing adds the wall loss") {
        // From x=1 to x=12 crosses the x=10 grid line once.
        const double no_wall = path_loss_db(tx, {9.0, 1.0}, layout);
        const double one_wall = path_loss_db(tx, {12.0, 1.0}, layout);
        const double distance_part =
            10.0 * 1.87 * (std::log10(11.0) - std::log10(8.0));
        CHECK(one_wall - no_wall == doctest::Approx(distance_part + 12.0).epsilon(1e-9));
    }
    SUBCASE("diagonal paths count both axes") {
        const double pl = path_loss_db({-1.0, -1.0}, {11.0, 11.0}, layout);
        const double d = distance({-1.0, -1.0}, {11.0, 11.0});
        CHECK(pl == doctest::Approx(46.8 + 18.7 * std::log10(d) + 2 * 12.0));
    }
}

TEST_CASE("transmit power density integrates to the per-band budget") {
    // -53 dBm/Hz over 20 MHz is 20 dBm.
    const double w_per_hz = dbm_per_hz_to_w(-53.0);
    const double total_dbm = 10.0 * std::log10(w_per_hz * 20e6 * 1000.0);
    CHECK(total_dbm == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(w_to_dbm_per_hz(w_per_hz) == doctest::Approx(-53.0).epsilon(1e-12));
}

TEST_CASE("layout presets place the four transmitters at the paper grid") {
    const Layout two = two_player_layout();
    REQUIRE(two.tx_positions.size() == 4);
    CHECK(two.tx_positions[0].x == 25.0);
    CHECK(two.tx_positions[0].y == 12.5);
    CHECK(two.tx_positions[2].x == -25.0);
    CHECK(two.tx_positions[2].y == -12.5);
    CHECK(two.tx_player == std::vector<int>{0, 1, 0, 1});
    CHECK(layout_players(two) == 2);

    const Layout four = four_player_layout();
    CHECK(four.tx_player == std::vector<int>{0, 1, 2, 3});
    CHECK(layout_players(four) == 4);
    for (const Vec2& p : four.tx_positions) {
        CHECK(p.x >= four.x_min);
        CHECK(p.x <= four.x_max);
        CHECK(p.y >= four.y_min);
        CHECK(p.y <= four.y_max);
    }
}

TEST_CASE("generated users follow the visiting rule") {
    const Layout layout = two_player_layout();

    SUBCASE("zero visiting keeps users in the home rectangle") {
        std::mt19937_64 rng = make_rng(5);
        for (int rep = 0; rep < 50; ++rep) {
            const auto users = generate_users(layout, 0, 5.0, 0.0, rng);
            for (const User& u : users) {
                const bool near_tx1 = std::abs(u.pos.x - 25.0) <= 25.0 &&
                                      std::abs(u.pos.y - 12.5) <= 12.5;
                const bool near_tx3 = std::abs(u.pos.x + 25.0) <= 25.0 &&
                                      std::abs(u.pos.y + 12.5) <= 12.5;
                CHECK((near_tx1 || near_tx3));
            }
        }
    }
    SUBCASE("sample mean of the Poisson counts") {
        std::mt19937_64 rng = make_rng(6);
        long total = 0;
        const int reps = 5000; // 10000 per-tx draws
        for (int rep = 0; rep < reps; ++rep)
            total += static_cast<long>(generate_users(layout, 0, 5.0, 0.0, rng).size());
        const double mean = static_cast<double>(total) / (2.0 * reps);
        CHECK(mean == doctest::Approx(5.0).epsilon(0.02)); // 5 +- 0.1
    }
    SUBCASE("full visiting spreads users over the floor") {
        std::mt19937_64 rng = make_rng(7);
        int outside_home = 0, total = 0;
        double mean_x = 0.0, mean_y = 0.0;
        for (int rep = 0; rep < 200; ++rep) {
            for (const User& u : generate_users(layout, 0, 5.0, 1.0, rng)) {
                ++total;
                mean_x += u.pos.x;
                mean_y += u.pos.y;
                const bool near_tx1 = std::abs(u.pos.x - 25.0) <= 25.0 &&
                                      std::abs(u.pos.y - 12.5) <= 12.5;
                const bool near_tx3 = std::abs(u.pos.x + 25.0) <= 25.0 &&
                                      std::abs(u.pos.y + 12.5) <= 12.5;
                if (!near_tx1 && !near_tx3) ++outside_home;
                CHECK(u.pos.x >= layout.x_min);
                CHECK(u.pos.x <= layout.x_max);
                CHECK(u.pos.y >= layout.y_min);
                CHECK(u.pos.y <= layout.y_max);
            }
        }
        // The two home rectangles cover half the floor area.
        CHECK(static_cast<double>(outside_home) / total == doctest::Approx(0.5).epsilon(0.1));
        CHECK(std::abs(mean_x / total) < 2.0);
        CHECK(std::abs(mean_y / total) < 1.0);
    }
    SUBCASE("invalid arguments are rejected") {
        std::mt19937_64 rng = make_rng(8);
        CHECK_THROWS_AS(generate_users(layout, 0, 5.0, 1.5, rng), std::invalid_argument);
        CHECK_THROWS_AS(generate_users(layout, 0, -1.0, 0.0, rng), std::invalid_argument);
    }
}

TEST_CASE("fading draws have unit mean and scale with the path loss") {
    Layout layout = two_player_layout();
    layout.channel.wall_spacing_m = 0.0; // no walls for this check

    std::mt19937_64 rng = make_rng(9);
    const Vec2 tx{0.0, 0.0}, user{10.0, 0.0};
    const double loss_linear = std::pow(10.0, path_loss_db(tx, user, layout) / 10.0);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) sum += channel_gain(tx, user, layout, rng) * loss_linear;
    CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("scenarios are deterministic and serialize reproducibly") {
    const Layout layout = four_player_layout();
    ScenarioParams params;
    params.visiting_prob = 0.5;

    const Scenario a = make_scenario(layout, params, 111, 222);
    const Scenario b = make_scenario(layout, params, 111, 222);
    CHECK(a.users.size() == b.users.size());
    CHECK(a.gain == b.gain);
    CHECK(scenario_to_json(a) == scenario_to_json(b));

    const Scenario c = make_scenario(layout, params, 111, 223);
    CHECK(scenario_to_json(a) != scenario_to_json(c));

    // Round trip preserves every field we read back.
    const Scenario back = scenario_from_json(scenario_to_json(a));
    CHECK(back.n_players == a.n_players);
    CHECK(back.users.size() == a.users.size());
    CHECK((back.gain - a.gain).cwiseAbs().maxCoeff() <= 1e-12 * a.gain.cwiseAbs().maxCoeff());
    CHECK(back.tx_power_w_per_hz == doctest::Approx(a.tx_power_w_per_hz).epsilon(1e-12));
    for (std::size_t i = 0; i < a.users.size(); ++i) {
        CHECK(back.users[i].pos.x == a.users[i].pos.x);
        CHECK(back.users[i].serving_tx == a.users[i].serving_tx);
    }

    // Every user is served by a transmitter of its own operator.
    for (const User& u : a.users)
        CHECK(a.layout.tx_player[static_cast<std::size_t>(u.serving_tx)] == u.player);
}
