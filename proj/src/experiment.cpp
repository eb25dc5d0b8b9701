#include "rsg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <omp.h>
#include <stdexcept>

#include "rsg/rng.hpp"

namespace rsg {

namespace {

std::string mode_name(GameMode mode) {
    switch (mode) {
        case GameMode::MDSG: return "MDSG";
        case GameMode::SDSG: return "SDSG";
        case GameMode::MDSG_THEN_SDSG: return "MDSG_THEN_SDSG";
    }
    return "?";
}

GameMode mode_from_name(const std::string& name) {
    if (name == "MDSG") return GameMode::MDSG;
    if (name == "SDSG") return GameMode::SDSG;
    if (name == "MDSG_THEN_SDSG") return GameMode::MDSG_THEN_SDSG;
    throw std::invalid_argument("unknown game mode: " + name);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

Layout preset_layout(const std::string& preset, const ChannelParams& channel) {
    Layout layout;
    if (preset == "two-player")
        layout = two_player_layout();
    else if (preset == "four-player")
        layout = four_player_layout();
    else
        throw std::invalid_argument("unknown scenario preset: " + preset);
    layout.channel = channel;
    return layout;
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig c;
    if (j.contains("preset")) c.preset = j.at("preset").get<std::string>();
    if (j.contains("visiting_prob")) c.visiting_prob = j.at("visiting_prob").get<double>();
    if (j.contains("game")) {
        const std::string g = j.at("game").get<std::string>();
        if (g == "MRG")
            c.kind = DefaultKind::MRG;
        else if (g == "RPG")
            c.kind = DefaultKind::RPG;
        else
            throw std::invalid_argument("game must be MRG or RPG");
    }
    if (j.contains("mode")) c.mode = mode_from_name(j.at("mode").get<std::string>());
    if (j.contains("user_realizations")) c.user_realizations = j.at("user_realizations").get<int>();
    if (j.contains("fading_realizations"))
        c.fading_realizations = j.at("fading_realizations").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("alpha")) {
        if (j.at("alpha").is_array())
            c.alphas = j.at("alpha").get<std::vector<double>>();
        else
            c.alphas = {j.at("alpha").get<double>()};
    }
    if (j.contains("mean_users_per_tx")) c.mean_users_per_tx = j.at("mean_users_per_tx").get<double>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("nash_eps")) c.nash_eps = j.at("nash_eps").get<double>();
    if (j.contains("comp_mode")) c.comp_mode = j.at("comp_mode").get<bool>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("channel")) {
        const auto& jc = j.at("channel");
        if (jc.contains("pl0_db")) c.channel.pl0_db = jc.at("pl0_db").get<double>();
        if (jc.contains("exponent")) c.channel.exponent = jc.at("exponent").get<double>();
        if (jc.contains("d0_m")) c.channel.d0_m = jc.at("d0_m").get<double>();
        if (jc.contains("wall_loss_db")) c.channel.wall_loss_db = jc.at("wall_loss_db").get<double>();
        if (jc.contains("wall_spacing_m"))
            c.channel.wall_spacing_m = jc.at("wall_spacing_m").get<double>();
    }
    if (j.contains("tx_power_dbm_per_hz"))
        c.tx_power_dbm_per_hz = j.at("tx_power_dbm_per_hz").get<double>();
    if (j.contains("noise_dbm_per_hz")) c.noise_dbm_per_hz = j.at("noise_dbm_per_hz").get<double>();
    if (j.contains("background_dbm_per_hz") && !j.at("background_dbm_per_hz").is_null())
        c.background_w_per_hz = dbm_per_hz_to_w(j.at("background_dbm_per_hz").get<double>());
    if (j.contains("bandwidth_hz_per_player"))
        c.bandwidth_hz_per_player = j.at("bandwidth_hz_per_player").get<double>();

    if (c.user_realizations < 1 || c.fading_realizations < 1)
        throw std::invalid_argument("realization counts must be >= 1");
    if (c.visiting_prob < 0.0 || c.visiting_prob > 1.0)
        throw std::invalid_argument("visiting_prob must lie in [0, 1]");
    preset_layout(c.preset, c.channel); // validates the preset name
    return c;
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["preset"] = c.preset;
    j["visiting_prob"] = c.visiting_prob;
    j["game"] = c.kind == DefaultKind::MRG ? "MRG" : "RPG";
    j["mode"] = mode_name(c.mode);
    j["user_realizations"] = c.user_realizations;
    j["fading_realizations"] = c.fading_realizations;
    j["seed"] = c.seed;
    j["alpha"] = c.alphas;
    j["mean_users_per_tx"] = c.mean_users_per_tx;
    j["epsilon"] = c.epsilon;
    j["nash_eps"] = c.nash_eps;
    j["comp_mode"] = c.comp_mode;
    j["out_dir"] = c.out_dir;
    j["threads"] = c.threads;
    j["channel"] = {{"pl0_db", c.channel.pl0_db},
                    {"exponent", c.channel.exponent},
                    {"d0_m", c.channel.d0_m},
                    {"wall_loss_db", c.channel.wall_loss_db},
                    {"wall_spacing_m", c.channel.wall_spacing_m}};
    j["tx_power_dbm_per_hz"] = c.tx_power_dbm_per_hz;
    j["noise_dbm_per_hz"] = c.noise_dbm_per_hz;
    if (c.background_w_per_hz > 0.0)
        j["background_dbm_per_hz"] = w_to_dbm_per_hz(c.background_w_per_hz);
    else
        j["background_dbm_per_hz"] = nullptr;
    j["bandwidth_hz_per_player"] = c.bandwidth_hz_per_player;
    return j.dump(2);
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return experiment_config_from_json(text);
}

RealizationResult run_realization(const ExperimentConfig& config, const Layout& layout, int k) {
    const int f_count = config.fading_realizations;
    const int r = k / f_count;
    const std::uint64_t flat = static_cast<std::uint64_t>(k);

    ScenarioParams params;
    params.mean_users_per_tx = config.mean_users_per_tx;
    params.visiting_prob = config.visiting_prob;
    params.tx_power_dbm_per_hz = config.tx_power_dbm_per_hz;
    params.noise_dbm_per_hz = config.noise_dbm_per_hz;
    params.background_w_per_hz = config.background_w_per_hz;

    const Scenario scenario =
        make_scenario(layout, params, derive_seed(config.seed, 3 * static_cast<std::uint64_t>(r)),
                      derive_seed(config.seed, 3 * flat + 1));
    const int n_players = scenario.n_players;
    const std::vector<SpectralEfficiencyTable> tables = build_tables(scenario, config.comp_mode);

    GameConfig gc;
    gc.kind = config.kind;
    gc.epsilon = config.epsilon;
    gc.alphas = config.alphas;
    gc.comp_mode = config.comp_mode;
    const std::vector<double> alphas = resolve_alphas(gc, n_players);
    gc.alphas = alphas;

    RealizationResult res;
    res.realization = k;

    const AllocationPattern b_default = default_pattern(config.kind, n_players);
    GameTrace trace;
    std::vector<Bid> nash_bids; // full-space greedy bids, the meaningful profile to verify
    std::mt19937_64 vote_rng = make_rng(derive_seed(config.seed, 3 * flat + 2));
    if (config.mode == GameMode::MDSG) {
        trace = run_mdsg(gc, tables, b_default);
        res.convergence.push_back({k, "MDSG", trace.iterations_count, trace.converged});
        nash_bids = trace.final_bids;
    } else if (config.mode == GameMode::SDSG) {
        trace = run_sdsg(gc, tables, b_default, vote_rng);
        res.convergence.push_back({k, "SDSG", trace.iterations_count, trace.converged});
        nash_bids = trace.final_bids;
    } else {
        const GameTrace first = run_mdsg(gc, tables, b_default);
        res.convergence.push_back({k, "MDSG", first.iterations_count, first.converged});
        trace = run_sdsg(gc, tables, first.final_pattern, vote_rng);
        res.convergence.push_back({k, "SDSG", trace.iterations_count, trace.converged});
        nash_bids = first.final_bids;
    }

    const AllocationPattern& b_game = trace.final_pattern;
    const AllocationPattern b_cs_sr = centralized_sr(tables, alphas, {b_game.values});
    const AllocationPattern b_cs_lr = centralized_lr(tables, alphas, {b_cs_sr.values});

    if (!nash_bids.empty()) res.nash_gains = verify_nash(nash_bids, b_game, tables, alphas);

    const double unit_bandwidth = n_players * config.bandwidth_hz_per_player;
    res.utility_game.resize(n_players);
    res.utility_default.resize(n_players);
    res.utility_cs_sr.resize(n_players);
    res.utility_cs_lr.resize(n_players);
    for (int n = 0; n < n_players; ++n) {
        const auto& table = tables[static_cast<std::size_t>(n)];
        const UtilityResult game = evaluate(table, b_game, alphas[n]);
        const UtilityResult dflt = evaluate(table, b_default, alphas[n]);
        const UtilityResult sr = evaluate(table, b_cs_sr, alphas[n]);
        const UtilityResult lr = evaluate(table, b_cs_lr, alphas[n]);
        res.utility_game[static_cast<std::size_t>(n)] = game.value;
        res.utility_default[static_cast<std::size_t>(n)] = dflt.value;
        res.utility_cs_sr[static_cast<std::size_t>(n)] = sr.value;
        res.utility_cs_lr[static_cast<std::size_t>(n)] = lr.value;
        for (int u = 0; u < table.n_users(); ++u) {
            UserRateRecord rec;
            rec.realization = k;
            rec.player = n;
            rec.user = table.user_ids[static_cast<std::size_t>(u)];
            rec.rate_game = game.rates[u] * unit_bandwidth;
            rec.rate_default = dflt.rates[u] * unit_bandwidth;
            rec.rate_cs_sr = sr.rates[u] * unit_bandwidth;
            rec.rate_cs_lr = lr.rates[u] * unit_bandwidth;
            res.rates.push_back(rec);
        }
    }
    return res;
}

namespace {

ExperimentReport run_all(const ExperimentConfig& config, bool parallel) {
    const Layout layout = preset_layout(config.preset, config.channel);
    ExperimentReport report;
    report.config = config;
    report.n_players = layout_players(layout);
    report.realizations.resize(static_cast<std::size_t>(config.total_realizations()));

    const int total = config.total_realizations();
    if (parallel) {
        const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
        #pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int k = 0; k < total; ++k)
            report.realizations[static_cast<std::size_t>(k)] = run_realization(config, layout, k);
    } else {
        for (int k = 0; k < total; ++k)
            report.realizations[static_cast<std::size_t>(k)] = run_realization(config, layout, k);
    }
    return report;
}

} // namespace

ExperimentReport run_experiment_serial(const ExperimentConfig& config) {
    return run_all(config, /*parallel=*/false);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.threads == 1) return run_experiment_serial(config);
    return run_all(config, /*parallel=*/true);
}

void emit_outputs(const ExperimentReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir);

    const auto open = [&](const std::string& name) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + dir + "/" + name);
        return out;
    };

    {
        std::ofstream out = open("rates.csv");
        out << "realization,player,user,rate_game,rate_default,rate_cs_sr,rate_cs_lr\n";
        for (const RealizationResult& rr : report.realizations)
            for (const UserRateRecord& rec : rr.rates)
                out << rec.realization << ',' << rec.player << ',' << rec.user << ','
                    << format_double(rec.rate_game) << ',' << format_double(rec.rate_default) << ','
                    << format_double(rec.rate_cs_sr) << ',' << format_double(rec.rate_cs_lr)
                    << '\n';
    }
    {
        std::ofstream out = open("convergence.csv");
        out << "realization,mode,iterations,converged\n";
        for (const RealizationResult& rr : report.realizations)
            for (const ConvergenceRecord& rec : rr.convergence)
                out << rec.realization << ',' << rec.mode << ',' << rec.iterations << ','
                    << (rec.converged ? 1 : 0) << '\n';
    }

    std::vector<double> game, dflt, sr, lr;
    for (const RealizationResult& rr : report.realizations)
        for (const UserRateRecord& rec : rr.rates) {
            game.push_back(rec.rate_game);
            dflt.push_back(rec.rate_default);
            sr.push_back(rec.rate_cs_sr);
            lr.push_back(rec.rate_cs_lr);
        }

    std::vector<double> mean_utility_game(report.n_players, 0.0),
        mean_utility_default(report.n_players, 0.0), mean_utility_sr(report.n_players, 0.0),
        mean_utility_lr(report.n_players, 0.0);
    if (!report.realizations.empty()) {
        for (const RealizationResult& rr : report.realizations)
            for (int n = 0; n < report.n_players; ++n) {
                mean_utility_game[static_cast<std::size_t>(n)] += rr.utility_game[static_cast<std::size_t>(n)];
                mean_utility_default[static_cast<std::size_t>(n)] += rr.utility_default[static_cast<std::size_t>(n)];
                mean_utility_sr[static_cast<std::size_t>(n)] += rr.utility_cs_sr[static_cast<std::size_t>(n)];
                mean_utility_lr[static_cast<std::size_t>(n)] += rr.utility_cs_lr[static_cast<std::size_t>(n)];
            }
        for (int n = 0; n < report.n_players; ++n) {
            const double count = static_cast<double>(report.realizations.size());
            mean_utility_game[static_cast<std::size_t>(n)] /= count;
            mean_utility_default[static_cast<std::size_t>(n)] /= count;
            mean_utility_sr[static_cast<std::size_t>(n)] /= count;
            mean_utility_lr[static_cast<std::size_t>(n)] /= count;
        }
    }

    double max_gain = 0.0;
    int nash_checked = 0, nash_ok = 0;
    for (const RealizationResult& rr : report.realizations) {
        if (rr.nash_gains.empty()) continue;
        ++nash_checked;
        double g = 0.0;
        for (double x : rr.nash_gains) g = std::max(g, x);
        max_gain = std::max(max_gain, g);
        if (g <= report.config.nash_eps) ++nash_ok;
    }

    std::map<std::string, std::map<int, int>> histogram;
    for (const RealizationResult& rr : report.realizations)
        for (const ConvergenceRecord& rec : rr.convergence) ++histogram[rec.mode][rec.iterations];

    nlohmann::json j;
    j["config"] = nlohmann::json::parse(experiment_config_to_json(report.config));
    j["n_players"] = report.n_players;
    j["realizations"] = report.realizations.size();
    j["rates_bps"] = {
        {"median", {{"game", median(game)}, {"default", median(dflt)}, {"cs_sr", median(sr)}, {"cs_lr", median(lr)}}},
        {"mean", {{"game", mean(game)}, {"default", mean(dflt)}, {"cs_sr", mean(sr)}, {"cs_lr", mean(lr)}}}};
    j["mean_utilities"] = {{"game", mean_utility_game},
                           {"default", mean_utility_default},
                           {"cs_sr", mean_utility_sr},
                           {"cs_lr", mean_utility_lr}};
    j["nash"] = {{"eps", report.config.nash_eps},
                 {"checked", nash_checked},
                 {"within_eps", nash_ok},
                 {"max_gain", max_gain}};
    nlohmann::json jh;
    for (const auto& [mode, counts] : histogram) {
        nlohmann::json jm;
        for (const auto& [iters, count] : counts) jm[std::to_string(iters)] = count;
        jh[mode] = jm;
    }
    j["convergence_histogram"] = jh;

    std::ofstream out = open("summary.json");
    out << j.dump(2) << '\n';
}

} // namespace rsg
