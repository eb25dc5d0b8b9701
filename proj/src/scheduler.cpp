#include "rsg/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsg/errors.hpp"

namespace rsg {

namespace {

constexpr double kRateFloor = 1e-12;
constexpr double kInnerRelTol = 1e-9;
constexpr int kInnerMaxIters = 10000;

double fprime(double rate, double alpha) {
    const double r = rate + kRateFloor;
    if (alpha == 0.0) return 1.0;
    if (alpha == 1.0) return 1.0 / r;
    return std::pow(r, -alpha);
}

double f_floor(double rate, double alpha) {
    const double r = rate + kRateFloor;
    if (alpha == 1.0) return std::log(r);
    return std::pow(r, 1.0 - alpha) / (1.0 - alpha);
}

/// Exact Euclidean projection of y onto {w >= 0, sum w = total}.
void project_simplex(Eigen::Ref<Eigen::VectorXd> y, double total) {
    const int k = static_cast<int>(y.size());
    if (total <= 0.0) {
        y.setZero();
        return;
    }
    std::vector<double> sorted(y.data(), y.data() + k);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumsum = 0.0, theta = 0.0;
    int rho = 0;
    for (int j = 0; j < k; ++j) {
        cumsum += sorted[j];
        const double t = (cumsum - total) / (j + 1);
        if (sorted[j] - t > 0.0) {
            rho = j + 1;
            theta = t;
        }
    }
    (void)rho;
    y = (y.array() - theta).max(0.0);
}

struct InnerProblem {
    const SpectralEfficiencyTable* table;
    double alpha;
    Eigen::VectorXd b_sub;          // pattern restricted to the player's subsets
    std::vector<bool> counted_user; // false for users with an all-zero mu row

    // Row groups sharing one simplex constraint per subset column: transmitter
    // user lists in plain mode, the whole group-row range in CoMP mode.
    std::vector<std::vector<int>> row_groups;
    const Eigen::MatrixXd* mu_of_row(int c) const; // CoMP: per-group table
    bool comp;

    int n_rows() const { return comp ? static_cast<int>(table->groups.size()) : table->n_users(); }
};

Eigen::VectorXd compute_rates(const InnerProblem& p, const Eigen::MatrixXd& w) {
    const int n_users = p.table->n_users();
    Eigen::VectorXd rates = Eigen::VectorXd::Zero(n_users);
    if (!p.comp) {
        for (int u = 0; u < n_users; ++u) rates[u] = p.table->mu.row(u).dot(w.row(u));
    } else {
        for (std::size_t c = 0; c < p.table->groups.size(); ++c) {
            const Eigen::MatrixXd& mu_c = p.table->mu_comp[c];
            for (int u : p.table->groups[c]) rates[u] += mu_c.row(u).dot(w.row(static_cast<int>(c)));
        }
    }
    return rates;
}

double objective_floor(const InnerProblem& p, const Eigen::VectorXd& rates) {
    double val = 0.0;
    for (int u = 0; u < rates.size(); ++u)
        if (p.counted_user[u]) val += f_floor(rates[u], p.alpha);
    return val;
}

Eigen::MatrixXd objective_gradient(const InnerProblem& p, const Eigen::VectorXd& rates) {
    const int n_sub = p.table->n_subsets();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p.n_rows(), n_sub);
    if (!p.comp) {
        for (int u = 0; u < p.table->n_users(); ++u) {
            if (!p.counted_user[u]) continue;
            g.row(u) = fprime(rates[u], p.alpha) * p.table->mu.row(u);
        }
    } else {
        for (std::size_t c = 0; c < p.table->groups.size(); ++c) {
            const Eigen::MatrixXd& mu_c = p.table->mu_comp[c];
            for (int u : p.table->groups[c])
                if (p.counted_user[u])
                    g.row(static_cast<int>(c)) += fprime(rates[u], p.alpha) * mu_c.row(u);
        }
    }
    return g;
}

void project_columns(const InnerProblem& p, Eigen::MatrixXd& w) {
    const int n_sub = p.table->n_subsets();
    Eigen::VectorXd buf;
    for (int j = 0; j < n_sub; ++j) {
        const double total = std::max(p.b_sub[j], 0.0);
        if (!p.comp) {
            for (const auto& users : p.row_groups) {
                if (users.empty()) continue;
                buf.resize(static_cast<int>(users.size()));
                for (std::size_t k = 0; k < users.size(); ++k) buf[static_cast<int>(k)] = w(users[k], j);
                project_simplex(buf, total);
                for (std::size_t k = 0; k < users.size(); ++k) w(users[k], j) = buf[static_cast<int>(k)];
            }
        } else {
            Eigen::VectorXd col = w.col(j);
            project_simplex(col, total);
            w.col(j) = col;
        }
    }
}

Eigen::MatrixXd initial_allocation(const InnerProblem& p, const Eigen::MatrixXd* warm) {
    const int rows = p.n_rows();
    const int n_sub = p.table->n_subsets();
    Eigen::MatrixXd w;
    if (warm && warm->rows() == rows && warm->cols() == n_sub)
        w = *warm;
    else
        w = Eigen::MatrixXd::Ones(rows, n_sub);
    project_columns(p, w);
    return w;
}

/// Projected-gradient ascent with backtracking on the product of simplices.
Eigen::MatrixXd maximize_inner(const InnerProblem& p, const Eigen::MatrixXd* warm) {
    Eigen::MatrixXd w = initial_allocation(p, warm);
    if (w.size() == 0) return w;

    Eigen::VectorXd rates = compute_rates(p, w);
    double value = objective_floor(p, rates);
    double step = 1.0;

    for (int it = 0; it < kInnerMaxIters; ++it) {
        const Eigen::MatrixXd grad = objective_gradient(p, rates);

        bool accepted = false;
        Eigen::MatrixXd w_try;
        double value_try = value;
        for (int ls = 0; ls < 60; ++ls) {
            w_try = w + step * grad;
            project_columns(p, w_try);
            const Eigen::VectorXd rates_try = compute_rates(p, w_try);
            value_try = objective_floor(p, rates_try);
            const double gain_pred = (grad.array() * (w_try - w).array()).sum();
            if (value_try >= value + 1e-4 * gain_pred || gain_pred <= 0.0) {
                rates = rates_try;
                accepted = value_try > value;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const double change = std::abs(value_try - value);
        w.swap(w_try);
        value = value_try;
        step = std::min(step * 1.3, 1e6);
        if (change <= kInnerRelTol * std::max(1.0, std::abs(value))) break;
    }
    return w;
}

InnerProblem make_problem(const SpectralEfficiencyTable& table, const AllocationPattern& b,
                          double alpha, bool comp) {
    if (table.n_players != b.n_players ||
        static_cast<std::size_t>(b.values.size()) != pattern_length(b.n_players))
        throw std::invalid_argument("pattern dimensioned differently from the table");
    if (comp && !table.comp_mode)
        throw std::invalid_argument("CoMP evaluation needs a table built in comp mode");

    InnerProblem p;
    p.table = &table;
    p.alpha = alpha;
    p.comp = comp;
    p.b_sub.resize(table.n_subsets());
    for (int j = 0; j < table.n_subsets(); ++j)
        p.b_sub[j] = b[table.subsets[static_cast<std::size_t>(j)]];

    p.counted_user.resize(table.n_users());
    for (int u = 0; u < table.n_users(); ++u) {
        double row_max = table.mu.row(u).maxCoeff();
        if (comp)
            for (const auto& mu_c : table.mu_comp) row_max = std::max(row_max, mu_c.row(u).maxCoeff());
        p.counted_user[u] = row_max > 0.0;
    }
    if (!comp) p.row_groups = table.tx_users;
    return p;
}

UtilityResult finish(const InnerProblem& p, Eigen::MatrixXd w) {
    const SpectralEfficiencyTable& table = *p.table;
    UtilityResult res;
    res.rates = compute_rates(p, w);

    res.value = 0.0;
    for (int u = 0; u < res.rates.size(); ++u)
        if (p.counted_user[u]) res.value += alpha_fair_value(res.rates[u], p.alpha);

    // Duals of the equality constraints give the supergradient; each
    // transmitter contributes its own multiplier for the shared total b_S.
    res.supergradient = Eigen::VectorXd::Zero(static_cast<int>(pattern_length(table.n_players)));
    for (int j = 0; j < table.n_subsets(); ++j) {
        double g = 0.0;
        if (!p.comp) {
            for (const auto& users : p.row_groups) {
                double lam = 0.0;
                for (int u : users) lam = std::max(lam, fprime(res.rates[u], p.alpha) * table.mu(u, j));
                g += lam;
            }
        } else {
            for (std::size_t c = 0; c < table.groups.size(); ++c) {
                double slope = 0.0;
                for (int u : table.groups[c])
                    slope += fprime(res.rates[u], p.alpha) * table.mu_comp[c](u, j);
                g = std::max(g, slope);
            }
        }
        res.supergradient[static_cast<int>(table.subsets[static_cast<std::size_t>(j)])] = g;
    }

    res.allocation.w = std::move(w);
    return res;
}

} // namespace

int SpectralEfficiencyTable::subset_index(SubsetId s) const {
    const auto it = std::lower_bound(subsets.begin(), subsets.end(), s);
    if (it == subsets.end() || *it != s)
        throw std::invalid_argument("subset does not contain the table's player");
    return static_cast<int>(it - subsets.begin());
}

double sinr(const Scenario& scenario, int serving_tx, int user, SubsetId s) {
    const int n_tx = static_cast<int>(scenario.layout.tx_positions.size());
    if (serving_tx < 0 || serving_tx >= n_tx)
        throw std::invalid_argument("serving transmitter is not part of the scenario");
    if (user < 0 || user >= static_cast<int>(scenario.users.size()))
        throw std::invalid_argument("user is not part of the scenario");
    const int player = scenario.users[static_cast<std::size_t>(user)].player;
    if (scenario.layout.tx_player[static_cast<std::size_t>(serving_tx)] != player)
        throw std::invalid_argument("serving transmitter belongs to another operator");

    const double p = scenario.tx_power_w_per_hz;
    double interference = scenario.noise_w_per_hz + scenario.background_w_per_hz;
    for (int v = 0; v < n_tx; ++v) {
        if (v == serving_tx) continue;
        const int owner = scenario.layout.tx_player[static_cast<std::size_t>(v)];
        const bool intra = owner == player;
        const bool inter = owner != player && contains(s, owner);
        if (intra || inter) interference += p * scenario.gain(v, user);
    }
    return p * scenario.gain(serving_tx, user) / interference;
}

double spectral_efficiency(double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("SINR must be non-negative");
    return std::log2(1.0 + gamma);
}

double alpha_fair_value(double rate, double alpha) {
    if (rate < 0.0) throw std::invalid_argument("rate must be non-negative");
    if (alpha == 1.0)
        return rate > 0.0 ? std::log(rate) : -std::numeric_limits<double>::infinity();
    if (rate == 0.0 && alpha > 1.0) return -std::numeric_limits<double>::infinity();
    return std::pow(rate, 1.0 - alpha) / (1.0 - alpha);
}

double user_rate(const Eigen::VectorXd& w_row, const Eigen::VectorXd& mu_row) {
    if (w_row.size() != mu_row.size())
        throw std::invalid_argument("bandwidth and efficiency rows are misaligned");
    return w_row.dot(mu_row);
}

SpectralEfficiencyTable mu_table(const Scenario& scenario, int player, bool comp_mode,
                                 int max_groups) {
    SpectralEfficiencyTable t;
    t.player = player;
    t.n_players = scenario.n_players;
    t.comp_mode = comp_mode;
    t.subsets = subsets_containing(player, scenario.n_players);

    t.user_ids = scenario.players_users(player);
    const std::vector<int> txs = scenario.operator_txs(player);
    const int n_users = static_cast<int>(t.user_ids.size());
    const int n_sub = t.n_subsets();

    t.user_tx.resize(n_users);
    t.tx_users.resize(txs.size());
    for (int u = 0; u < n_users; ++u) {
        const int serving = scenario.users[static_cast<std::size_t>(t.user_ids[u])].serving_tx;
        const auto it = std::find(txs.begin(), txs.end(), serving);
        t.user_tx[u] = static_cast<int>(it - txs.begin());
        t.tx_users[static_cast<std::size_t>(t.user_tx[u])].push_back(u);
    }

    const double p = scenario.tx_power_w_per_hz;

    // Inter-operator interference per (other player, user); subsets then just
    // sum the members' contributions.
    Eigen::MatrixXd inter = Eigen::MatrixXd::Zero(scenario.n_players, n_users);
    for (int u = 0; u < n_users; ++u) {
        const int uid = t.user_ids[u];
        for (std::size_t v = 0; v < scenario.layout.tx_positions.size(); ++v) {
            const int owner = scenario.layout.tx_player[v];
            if (owner == player) continue;
            inter(owner, u) += p * scenario.gain(static_cast<int>(v), uid);
        }
    }

    t.mu.resize(n_users, n_sub);
    for (int u = 0; u < n_users; ++u) {
        const int uid = t.user_ids[u];
        const int serving = scenario.users[static_cast<std::size_t>(uid)].serving_tx;
        double intra = 0.0;
        for (int v : txs)
            if (v != serving) intra += p * scenario.gain(v, uid);
        const double signal = p * scenario.gain(serving, uid);
        for (int j = 0; j < n_sub; ++j) {
            double denom = intra + scenario.noise_w_per_hz + scenario.background_w_per_hz;
            for (int other = 0; other < scenario.n_players; ++other)
                if (other != player && contains(t.subsets[static_cast<std::size_t>(j)], other))
                    denom += inter(other, u);
            t.mu(u, j) = spectral_efficiency(signal / denom);
        }
    }

    if (comp_mode && n_users > 0) {
        const int max_size = std::min(n_users, static_cast<int>(txs.size()));
        std::vector<int> combo;
        // All user groups up to the transmitter count, small sizes first.
        for (int size = 1; size <= max_size; ++size) {
            combo.assign(static_cast<std::size_t>(size), 0);
            for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
            if (size > n_users) break;
            for (;;) {
                if (static_cast<int>(t.groups.size()) >= max_groups) break;
                t.groups.push_back(combo);
                int i = size - 1;
                while (i >= 0 && combo[static_cast<std::size_t>(i)] == n_users - size + i) --i;
                if (i < 0) break;
                ++combo[static_cast<std::size_t>(i)];
                for (int k = i + 1; k < size; ++k)
                    combo[static_cast<std::size_t>(k)] = combo[static_cast<std::size_t>(k - 1)] + 1;
            }
            if (static_cast<int>(t.groups.size()) >= max_groups) break;
        }

        t.mu_comp.reserve(t.groups.size());
        for (const auto& group : t.groups) {
            Eigen::MatrixXd mu_c = Eigen::MatrixXd::Zero(n_users, n_sub);

            // Transmitters active for this group, and the served user per
            // transmitter (strongest gain wins a conflict).
            std::vector<int> served_by(txs.size(), -1);
            for (int u : group) {
                const int vloc = t.user_tx[u];
                const int uid = t.user_ids[u];
                const int cur = served_by[static_cast<std::size_t>(vloc)];
                if (cur < 0 || scenario.gain(txs[static_cast<std::size_t>(vloc)], uid) >
                                   scenario.gain(txs[static_cast<std::size_t>(vloc)], t.user_ids[cur]))
                    served_by[static_cast<std::size_t>(vloc)] = u;
            }

            for (int u : group) {
                const int vloc = t.user_tx[u];
                if (served_by[static_cast<std::size_t>(vloc)] != u) continue; // lost the conflict
                const int uid = t.user_ids[u];
                const int serving = txs[static_cast<std::size_t>(vloc)];
                double intra = 0.0;
                for (std::size_t v2 = 0; v2 < txs.size(); ++v2)
                    if (served_by[v2] >= 0 && static_cast<int>(v2) != vloc)
                        intra += p * scenario.gain(txs[v2], uid);
                const double signal = p * scenario.gain(serving, uid);
                for (int j = 0; j < n_sub; ++j) {
                    double denom = intra + scenario.noise_w_per_hz + scenario.background_w_per_hz;
                    for (int other = 0; other < scenario.n_players; ++other)
                        if (other != player && contains(t.subsets[static_cast<std::size_t>(j)], other))
                            denom += inter(other, u);
                    mu_c(u, j) = spectral_efficiency(signal / denom);
                }
            }
            t.mu_comp.push_back(std::move(mu_c));
        }
    }
    return t;
}

UtilityResult evaluate_utility(const SpectralEfficiencyTable& table, const AllocationPattern& b,
                               double alpha, const Eigen::MatrixXd* warm) {
    InnerProblem p = make_problem(table, b, alpha, /*comp=*/false);
    return finish(p, maximize_inner(p, warm));
}

UtilityResult evaluate_utility_comp(const SpectralEfficiencyTable& table,
                                    const AllocationPattern& b, double alpha,
                                    const Eigen::MatrixXd* warm) {
    InnerProblem p = make_problem(table, b, alpha, /*comp=*/true);
    return finish(p, maximize_inner(p, warm));
}

UtilityResult evaluate(const SpectralEfficiencyTable& table, const AllocationPattern& b,
                       double alpha, const Eigen::MatrixXd* warm) {
    return table.comp_mode ? evaluate_utility_comp(table, b, alpha, warm)
                           : evaluate_utility(table, b, alpha, warm);
}

Eigen::VectorXd utility_supergradient(const SpectralEfficiencyTable& table,
                                      const AllocationPattern& b, double alpha) {
    const UtilityResult res = evaluate(table, b, alpha);
    if (std::isinf(res.value) && res.value < 0.0)
        throw std::domain_error("utility is -inf at this pattern; gradient undefined");
    return res.supergradient;
}

} // namespace rsg
