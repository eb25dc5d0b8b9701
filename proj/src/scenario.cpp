#include "rsg/scenario.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "rsg/rng.hpp"

namespace rsg {

namespace {

int grid_crossings(double a, double b, double spacing) {
    if (spacing <= 0.0) return 0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const long first = static_cast<long>(std::floor(lo / spacing)) + 1;
    const long last = static_cast<long>(std::ceil(hi / spacing)) - 1;
    return last >= first ? static_cast<int>(last - first + 1) : 0;
}

Layout base_layout() {
    Layout l;
    l.tx_positions = {{25.0, 12.5}, {25.0, -12.5}, {-25.0, -12.5}, {-25.0, 12.5}};
    return l;
}

} // namespace

std::vector<int> Scenario::players_users(int player) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < users.size(); ++i)
        if (users[i].player == player) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Scenario::operator_txs(int player) const {
    std::vector<int> out;
    for (std::size_t v = 0; v < layout.tx_player.size(); ++v)
        if (layout.tx_player[v] == player) out.push_back(static_cast<int>(v));
    return out;
}

Layout two_player_layout() {
    Layout l = base_layout();
    l.tx_player = {0, 1, 0, 1};
    return l;
}

Layout four_player_layout() {
    Layout l = base_layout();
    l.tx_player = {0, 1, 2, 3};
    return l;
}

int layout_players(const Layout& layout) {
    int n = 0;
    for (int p : layout.tx_player) n = std::max(n, p + 1);
    return n;
}

double path_loss_db(Vec2 tx, Vec2 user, const Layout& layout) {
    const ChannelParams& c = layout.channel;
    const double d = std::max(distance(tx, user), c.d0_m);
    const int walls = grid_crossings(tx.x, user.x, c.wall_spacing_m) +
                      grid_crossings(tx.y, user.y, c.wall_spacing_m);
    return c.pl0_db + 10.0 * c.exponent * std::log10(d / c.d0_m) + walls * c.wall_loss_db;
}

double channel_gain(Vec2 tx, Vec2 user, const Layout& layout, std::mt19937_64& rng) {
    std::exponential_distribution<double> fading(1.0);
    double power = fading(rng);
    while (power <= 0.0) power = fading(rng); // gains must stay positive
    const double loss_linear = std::pow(10.0, path_loss_db(tx, user, layout) / 10.0);
    return power / loss_linear;
}

std::vector<User> generate_users(const Layout& layout, int player, double mean_users,
                                 double visiting_prob, std::mt19937_64& rng) {
    if (visiting_prob < 0.0 || visiting_prob > 1.0)
        throw std::invalid_argument("visiting probability must lie in [0, 1]");
    if (mean_users <= 0.0) throw std::invalid_argument("mean user count must be positive");

    std::poisson_distribution<int> count_dist(mean_users);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<User> out;
    for (std::size_t v = 0; v < layout.tx_positions.size(); ++v) {
        if (layout.tx_player[v] != player) continue;
        const Vec2 tx = layout.tx_positions[v];
        const int count = count_dist(rng);
        for (int k = 0; k < count; ++k) {
            User u;
            u.player = player;
            if (unit(rng) < visiting_prob) {
                u.pos.x = layout.x_min + unit(rng) * (layout.x_max - layout.x_min);
                u.pos.y = layout.y_min + unit(rng) * (layout.y_max - layout.y_min);
            } else {
                u.pos.x = tx.x + (unit(rng) - 0.5) * 50.0;
                u.pos.y = tx.y + (unit(rng) - 0.5) * 25.0;
            }
            out.push_back(u);
        }
    }
    return out;
}

Scenario make_scenario(const Layout& layout, const ScenarioParams& params,
                       std::uint64_t user_seed, std::uint64_t fading_seed) {
    Scenario s;
    s.layout = layout;
    s.n_players = layout_players(layout);
    s.user_seed = user_seed;
    s.fading_seed = fading_seed;
    s.tx_power_w_per_hz = dbm_per_hz_to_w(params.tx_power_dbm_per_hz);
    s.noise_w_per_hz = dbm_per_hz_to_w(params.noise_dbm_per_hz);
    s.background_w_per_hz = params.background_w_per_hz;

    std::mt19937_64 user_rng = make_rng(user_seed);
    for (int p = 0; p < s.n_players; ++p) {
        auto users = generate_users(layout, p, params.mean_users_per_tx, params.visiting_prob,
                                    user_rng);
        s.users.insert(s.users.end(), users.begin(), users.end());
    }

    const int n_tx = static_cast<int>(layout.tx_positions.size());
    const int n_users = static_cast<int>(s.users.size());
    s.gain.resize(n_tx, n_users);
    std::mt19937_64 fading_rng = make_rng(fading_seed);
    for (int v = 0; v < n_tx; ++v)
        for (int u = 0; u < n_users; ++u)
            s.gain(v, u) = channel_gain(layout.tx_positions[v], s.users[u].pos, layout, fading_rng);

    for (int u = 0; u < n_users; ++u) {
        int best = -1;
        double best_gain = -1.0;
        for (int v = 0; v < n_tx; ++v) {
            if (layout.tx_player[v] != s.users[u].player) continue;
            if (s.gain(v, u) > best_gain) {
                best_gain = s.gain(v, u);
                best = v;
            }
        }
        s.users[u].serving_tx = best;
    }
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["n_players"] = s.n_players;
    j["layout"] = {
        {"x_min", s.layout.x_min}, {"x_max", s.layout.x_max},
        {"y_min", s.layout.y_min}, {"y_max", s.layout.y_max},
        {"channel",
         {{"pl0_db", s.layout.channel.pl0_db},
          {"exponent", s.layout.channel.exponent},
          {"d0_m", s.layout.channel.d0_m},
          {"wall_loss_db", s.layout.channel.wall_loss_db},
          {"wall_spacing_m", s.layout.channel.wall_spacing_m}}},
    };
    nlohmann::json txs = nlohmann::json::array();
    for (std::size_t v = 0; v < s.layout.tx_positions.size(); ++v)
        txs.push_back({{"x", s.layout.tx_positions[v].x},
                       {"y", s.layout.tx_positions[v].y},
                       {"player", s.layout.tx_player[v]}});
    j["layout"]["tx"] = txs;

    j["tx_power_dbm_per_hz"] = w_to_dbm_per_hz(s.tx_power_w_per_hz);
    j["noise_dbm_per_hz"] = w_to_dbm_per_hz(s.noise_w_per_hz);
    if (s.background_w_per_hz > 0.0)
        j["background_dbm_per_hz"] = w_to_dbm_per_hz(s.background_w_per_hz);
    else
        j["background_dbm_per_hz"] = nullptr;

    nlohmann::json users = nlohmann::json::array();
    for (const User& u : s.users)
        users.push_back(
            {{"x", u.pos.x}, {"y", u.pos.y}, {"player", u.player}, {"serving_tx", u.serving_tx}});
    j["users"] = users;

    nlohmann::json gain = nlohmann::json::array();
    for (int v = 0; v < s.gain.rows(); ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (int u = 0; u < s.gain.cols(); ++u) row.push_back(s.gain(v, u));
        gain.push_back(row);
    }
    j["gain"] = gain;
    j["user_seed"] = s.user_seed;
    j["fading_seed"] = s.fading_seed;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Scenario s;
    s.n_players = j.at("n_players").get<int>();
    const auto& jl = j.at("layout");
    s.layout.x_min = jl.at("x_min").get<double>();
    s.layout.x_max = jl.at("x_max").get<double>();
    s.layout.y_min = jl.at("y_min").get<double>();
    s.layout.y_max = jl.at("y_max").get<double>();
    const auto& jc = jl.at("channel");
    s.layout.channel.pl0_db = jc.at("pl0_db").get<double>();
    s.layout.channel.exponent = jc.at("exponent").get<double>();
    s.layout.channel.d0_m = jc.at("d0_m").get<double>();
    s.layout.channel.wall_loss_db = jc.at("wall_loss_db").get<double>();
    s.layout.channel.wall_spacing_m = jc.at("wall_spacing_m").get<double>();
    for (const auto& jt : jl.at("tx")) {
        s.layout.tx_positions.push_back({jt.at("x").get<double>(), jt.at("y").get<double>()});
        s.layout.tx_player.push_back(jt.at("player").get<int>());
    }
    s.tx_power_w_per_hz = dbm_per_hz_to_w(j.at("tx_power_dbm_per_hz").get<double>());
    s.noise_w_per_hz = dbm_per_hz_to_w(j.at("noise_dbm_per_hz").get<double>());
    s.background_w_per_hz = j.at("background_dbm_per_hz").is_null()
                                ? 0.0
                                : dbm_per_hz_to_w(j.at("background_dbm_per_hz").get<double>());
    for (const auto& ju : j.at("users")) {
        User u;
        u.pos = {ju.at("x").get<double>(), ju.at("y").get<double>()};
        u.player = ju.at("player").get<int>();
        u.serving_tx = ju.at("serving_tx").get<int>();
        s.users.push_back(u);
    }
    const auto& jg = j.at("gain");
    const int n_tx = static_cast<int>(jg.size());
    const int n_users = n_tx > 0 ? static_cast<int>(jg[0].size()) : 0;
    s.gain.resize(n_tx, n_users);
    for (int v = 0; v < n_tx; ++v)
        for (int u = 0; u < n_users; ++u) s.gain(v, u) = jg[v][u].get<double>();
    s.user_seed = j.at("user_seed").get<std::uint64_t>();
    s.fading_seed = j.at("fading_seed").get<std::uint64_t>();
    return s;
}

} // namespace rsg
