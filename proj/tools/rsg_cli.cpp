// Experiment runner for network resource-sharing games.
//   rsg run <config.json>     batch Monte-Carlo study, CSV/JSON outputs
//   rsg verify <config.json>  re-checks game invariants on sample realizations
//   rsg oracle <config.json>  brute-force cross-checks of the resolution rule
// Exit code 0 on success; failures print a JSON error record to stderr.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <nlohmann/json.hpp>

#include "rsg/experiment.hpp"
#include "rsg/oracle.hpp"
#include "rsg/resolution.hpp"
#include "rsg/rng.hpp"
#include "rsg/strategy.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::optional<double> visiting_prob;
    std::optional<int> players;
    std::optional<int> threads;
};

rsg::ExperimentConfig load_config(const std::string& path, const Overrides& o) {
    rsg::ExperimentConfig config = rsg::load_experiment_config(path);
    if (o.seed) config.seed = *o.seed;
    if (o.out) config.out_dir = *o.out;
    if (o.visiting_prob) config.visiting_prob = *o.visiting_prob;
    if (o.threads) config.threads = *o.threads;
    if (o.players) {
        if (*o.players == 2)
            config.preset = "two-player";
        else if (*o.players == 4)
            config.preset = "four-player";
        else
            throw std::invalid_argument("--players must be 2 or 4");
    }
    if (o.mode) {
        nlohmann::json patch = nlohmann::json::parse(rsg::experiment_config_to_json(config));
        patch["mode"] = *o.mode;
        config = rsg::experiment_config_from_json(patch.dump());
    }
    return config;
}

int cmd_run(const rsg::ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const rsg::ExperimentReport report = rsg::run_experiment(config);
    rsg::emit_outputs(report, config.out_dir);
    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    std::cout << "wrote " << config.out_dir << "/{rates.csv,convergence.csv,summary.json} ("
              << report.realizations.size() << " realizations, " << dt.count() << " ms)\n";
    return 0;
}

int cmd_verify(const rsg::ExperimentConfig& config) {
    // Run a handful of realizations and re-check every invariant the games
    // promise: feasible outcomes, box containment, monotone SDSG payoffs,
    // small best-response gains at the fixed point.
    const rsg::Layout layout = rsg::preset_layout(config.preset, config.channel);
    const int realizations = std::min(config.total_realizations(), 5);
    int failures = 0;
    const auto check = [&](bool ok, const std::string& what, int k) {
        if (!ok) {
            ++failures;
            std::cout << "[FAIL] realization " << k << ": " << what << "\n";
        }
    };

    for (int k = 0; k < realizations; ++k) {
        rsg::ScenarioParams params;
        params.mean_users_per_tx = config.mean_users_per_tx;
        params.visiting_prob = config.visiting_prob;
        params.tx_power_dbm_per_hz = config.tx_power_dbm_per_hz;
        params.noise_dbm_per_hz = config.noise_dbm_per_hz;
        params.background_w_per_hz = config.background_w_per_hz;
        const rsg::Scenario scenario = rsg::make_scenario(
            layout, params,
            rsg::derive_seed(config.seed, 3 * static_cast<std::uint64_t>(k / config.fading_realizations)),
            rsg::derive_seed(config.seed, 3 * static_cast<std::uint64_t>(k) + 1));
        const auto tables = rsg::build_tables(scenario, config.comp_mode);

        rsg::GameConfig gc;
        gc.kind = config.kind;
        gc.epsilon = config.epsilon;
        gc.alphas = config.alphas;
        const auto alphas = rsg::resolve_alphas(gc, scenario.n_players);
        gc.alphas = alphas;

        const rsg::GameTrace mdsg =
            rsg::run_mdsg(gc, tables, rsg::default_pattern(config.kind, scenario.n_players));
        check(mdsg.converged, "MDSG did not converge", k);
        for (const auto& rec : mdsg.iterations) {
            check(rsg::is_feasible(rec.pattern, 1e-8), "iterate left the feasible set", k);
            for (const auto& bid : rec.bids)
                check(rsg::box_contains(rsg::bid_box(bid, mdsg.initial_pattern), rec.pattern, 1.0),
                      "bid malformed", k);
        }
        if (!mdsg.final_bids.empty()) {
            const auto gains =
                rsg::verify_nash(mdsg.final_bids, mdsg.final_pattern, tables, alphas);
            for (double g : gains)
                check(g <= config.nash_eps, "best-response gain above nash_eps", k);
        }

        std::mt19937_64 rng = rsg::make_rng(rsg::derive_seed(config.seed, 3 * static_cast<std::uint64_t>(k) + 2));
        const rsg::GameTrace sdsg = rsg::run_sdsg(gc, tables, mdsg.final_pattern, rng);
        check(sdsg.converged, "SDSG did not converge", k);
        std::vector<double> prev = sdsg.initial_utilities;
        for (const auto& rec : sdsg.iterations) {
            for (std::size_t n = 0; n < prev.size(); ++n)
                check(rec.utilities[n] >= prev[n] - 1e-7, "SDSG payoff decreased", k);
            prev = rec.utilities;
        }
    }

    std::cout << (failures == 0 ? "verify: all invariants hold\n"
                                : "verify: " + std::to_string(failures) + " failures\n");
    return failures == 0 ? 0 : 1;
}

int cmd_oracle(const rsg::ExperimentConfig& config) {
    // Resolution rule vs exhaustive vertex enumeration on random bid profiles.
    int failures = 0;
    std::mt19937_64 rng = rsg::make_rng(rsg::derive_seed(config.seed, 0xBEEF));
    for (int n_players : {2, 3}) {
        for (int trial = 0; trial < 100; ++trial) {
            const rsg::AllocationPattern b0 =
                trial % 2 ? rsg::random_feasible_pattern(n_players, rng)
                          : rsg::default_pattern(trial % 4 < 2 ? rsg::DefaultKind::MRG
                                                               : rsg::DefaultKind::RPG,
                                                 n_players);
            std::vector<rsg::Bid> bids;
            for (int n = 0; n < n_players; ++n) bids.push_back(rsg::random_bid(n, n_players, rng));

            const rsg::ResolutionOutcome out = rsg::resolve(bids, b0);
            const rsg::OracleResolution expect = rsg::oracle_resolve(bids, b0);
            const bool objective_ok = std::abs(out.objective - expect.objective) <= 2e-3;
            const bool feasible_ok = rsg::is_feasible(out.pattern, 1e-8);
            bool boxes_ok = true;
            for (const auto& bid : bids)
                boxes_ok = boxes_ok && rsg::box_contains(rsg::bid_box(bid, b0), out.pattern);
            if (!objective_ok || !feasible_ok || !boxes_ok) {
                ++failures;
                std::cout << "[FAIL] N=" << n_players << " trial " << trial
                          << " objective=" << out.objective << " oracle=" << expect.objective
                          << "\n";
            }
        }
    }
    std::cout << (failures == 0 ? "oracle: resolution matches brute force\n"
                                : "oracle: " + std::to_string(failures) + " mismatches\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"network resource-sharing game simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config JSON")->required();
        cmd->add_option("--seed", overrides.seed, "master seed override");
        cmd->add_option("--mode", overrides.mode, "MDSG, SDSG or MDSG_THEN_SDSG");
        cmd->add_option("--out", overrides.out, "output directory override");
        cmd->add_option("--visiting-prob", overrides.visiting_prob, "visiting probability override");
        cmd->add_option("--players", overrides.players, "2 or 4 (preset override)");
        cmd->add_option("--threads", overrides.threads, "worker threads (1 = serial)");
    };

    CLI::App* run = app.add_subcommand("run", "run the batch study");
    add_common(run);
    CLI::App* verify = app.add_subcommand("verify", "invariant suite on sample realizations");
    add_common(verify);
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross-checks (N <= 3)");
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        const rsg::ExperimentConfig config = load_config(config_path, overrides);
        if (run->parsed()) return cmd_run(config);
        if (verify->parsed()) return cmd_verify(config);
        if (oracle->parsed()) return cmd_oracle(config);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
