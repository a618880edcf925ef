#include "classeq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "classeq/designer.hpp"
#include "classeq/rng.hpp"
#include "classeq/voters.hpp"

namespace classeq {

namespace {

struct Tally {
    std::uint64_t comply = 0;
    std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;
    std::uint64_t rewarded = 0;

    Tally& operator+=(const Tally& o) {
        comply += o.comply;
        tp += o.tp;
        fn += o.fn;
        fp += o.fp;
        tn += o.tn;
        rewarded += o.rewarded;
        return *this;
    }
};

struct AgentState {
    double cost;
    int behavior, signal, decision;
};

AgentState draw_agent(std::uint64_t seed, std::uint64_t index, double threshold,
                      const CostDistribution& dist, double phi, Classifier c) {
    const auto draws = rng::agent_draws(seed, index);
    AgentState a;
    a.cost = dist.quantile(draws.cost_u);
    a.behavior = a.cost <= threshold ? 1 : 0;
    a.signal = draws.signal_u < phi ? a.behavior : 1 - a.behavior;
    const double follow = a.signal == 1 ? c.delta1 : c.delta0;
    a.decision = draws.decision_u < follow ? a.signal : 1 - a.signal;
    return a;
}

void tally_range(std::uint64_t seed, std::uint64_t first, std::uint64_t last, double threshold,
                 const CostDistribution& dist, double phi, Classifier c, Tally& t) {
    for (std::uint64_t i = first; i < last; ++i) {
        const auto a = draw_agent(seed, i, threshold, dist, phi, c);
        t.comply += a.behavior;
        t.rewarded += a.decision;
        if (a.behavior == 1) {
            a.decision == 1 ? ++t.tp : ++t.fn;
        } else {
            a.decision == 1 ? ++t.fp : ++t.tn;
        }
    }
}

}  // namespace

GridArgmax grid_designer_argmax(double reward, const Scenario& s, int resolution) {
    if (resolution < 11) {
        std::ostringstream os;
        os << "grid resolution must be at least 11 (got " << resolution << ")";
        throw std::invalid_argument(os.str());
    }
    GridArgmax best;
    best.payoff = -std::numeric_limits<double>::infinity();
    const double step = 1.0 / (resolution - 1);
    for (int i = 0; i < resolution; ++i) {
        const double d1 = i * step;
        for (int j = 0; j < resolution; ++j) {
            const double d0 = j * step;
            const double v = designer_expected_payoff({d1, d0}, reward, s);
            if (v > best.payoff) {
                best.payoff = v;
                best.classifier = {d1, d0};
            }
        }
    }
    return best;
}

RewardGridScan grid_median_reward_argmax(Classifier c, const Scenario& s, double reward_lo,
                                         double reward_hi, int resolution) {
    if (resolution < 2 || !(reward_hi > reward_lo)) {
        throw std::invalid_argument("reward grid needs resolution >= 2 and hi > lo");
    }
    const double gamma_mu = s.distribution->median();
    RewardGridScan out;
    out.max_payoff = -std::numeric_limits<double>::infinity();
    out.min_payoff = std::numeric_limits<double>::infinity();
    const double step = (reward_hi - reward_lo) / (resolution - 1);
    for (int i = 0; i < resolution; ++i) {
        const double r = reward_lo + i * step;
        const double v = voter_payoff(r, gamma_mu, c, s);
        if (v > out.max_payoff) {
            out.max_payoff = v;
            out.argmax_reward = r;
        }
        out.min_payoff = std::min(out.min_payoff, v);
    }
    return out;
}

SimulationResult simulate_population(Classifier c, double reward, const Scenario& s,
                                     std::uint64_t n_agents, std::uint64_t seed) {
    if (n_agents == 0) throw std::invalid_argument("simulation needs at least one agent");
    const double threshold = reward * responsiveness(c, s.accuracy);
    const double phi = s.accuracy.phi;
    const auto& dist = *s.distribution;

    unsigned workers = std::thread::hardware_concurrency();
    workers = std::clamp(workers, 1u, 8u);
    if (n_agents < 10000) workers = 1;

    std::vector<Tally> partial(workers);
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = n_agents / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t first = w * chunk;
            const std::uint64_t last = (w + 1 == workers) ? n_agents : first + chunk;
            pool.emplace_back([&, first, last, w] {
                tally_range(seed, first, last, threshold, dist, phi, c, partial[w]);
            });
        }
        for (auto& th : pool) th.join();
    }
    Tally total;
    for (const auto& t : partial) total += t;

    SimulationResult out;
    out.n_agents = n_agents;
    out.seed = seed;
    out.n_comply = total.comply;
    out.n_tp = total.tp;
    out.n_fn = total.fn;
    out.n_fp = total.fp;
    out.n_tn = total.tn;
    out.n_rewarded = total.rewarded;
    const double n = double(n_agents);
    out.empirical_prevalence = double(total.comply) / n;
    out.empirical_confusion = {double(total.tp) / n, double(total.fn) / n, double(total.fp) / n,
                               double(total.tn) / n};
    // each agent nets reward*(d_i - dbar); with dbar the realized mean the sum
    // cancels identically
    const double dbar = double(total.rewarded) / n;
    out.mean_net_transfer = reward * (double(total.rewarded) / n - dbar);
    return out;
}

std::vector<AgentRecord> simulate_population_trace(Classifier c, double reward,
                                                   const Scenario& s, std::uint64_t n_agents,
                                                   std::uint64_t seed) {
    if (n_agents == 0) throw std::invalid_argument("simulation needs at least one agent");
    const double threshold = reward * responsiveness(c, s.accuracy);
    const double phi = s.accuracy.phi;
    std::vector<AgentRecord> records(n_agents);
    std::uint64_t rewarded = 0;
    for (std::uint64_t i = 0; i < n_agents; ++i) {
        const auto a = draw_agent(seed, i, threshold, *s.distribution, phi, c);
        records[i] = {a.cost, a.behavior, a.signal, a.decision, 0.0};
        rewarded += a.decision;
    }
    const double dbar = double(rewarded) / double(n_agents);
    for (auto& rec : records) rec.net_transfer = reward * (rec.decision - dbar);
    return records;
}

CondorcetReport verify_condorcet(Classifier c, const Scenario& s,
                                 std::span<const double> challengers, std::uint64_t n_agents,
                                 std::uint64_t seed) {
    if (n_agents == 0) throw std::invalid_argument("electorate needs at least one agent");
    const auto winner = condorcet_reward(c, s);
    CondorcetReport report;
    report.condorcet = winner.reward;
    report.wins_all = true;
    std::vector<double> costs(n_agents);
    for (std::uint64_t i = 0; i < n_agents; ++i) {
        costs[i] = s.distribution->quantile(rng::agent_draws(seed, i).cost_u);
    }
    for (double challenger : challengers) {
        std::uint64_t support = 0;
        for (double gamma : costs) {
            const double at_winner = voter_payoff(winner.reward, gamma, c, s);
            const double at_challenger = voter_payoff(challenger, gamma, c, s);
            if (at_winner >= at_challenger - 1e-12) ++support;
        }
        CondorcetCheck check;
        check.challenger = challenger;
        check.support_share = double(support) / double(n_agents);
        check.majority = check.support_share >= 0.5;
        report.wins_all = report.wins_all && check.majority;
        report.checks.push_back(check);
    }
    return report;
}

}  // namespace classeq
