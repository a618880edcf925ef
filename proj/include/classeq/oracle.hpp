#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "classeq/model.hpp"

namespace classeq {

// Brute-force counterparts of the analytic solvers. These deliberately avoid
// the closed-form machinery: exhaustive lattice scans and per-agent Monte
// Carlo, used to cross-check every solver output.

struct GridArgmax {
    Classifier classifier;
    double payoff = 0.0;
};

/// Exhaustive scan of the designer payoff on a resolution x resolution lattice
/// over [0,1]^2. Ties keep the lexicographically smallest (delta1, delta0).
GridArgmax grid_designer_argmax(double reward, const Scenario& scenario, int resolution = 401);

struct RewardGridScan {
    double argmax_reward = 0.0;
    double max_payoff = 0.0;
    double min_payoff = 0.0;
};

/// Scan of the median voter's payoff over a reward lattice.
RewardGridScan grid_median_reward_argmax(Classifier c, const Scenario& scenario,
                                         double reward_lo, double reward_hi,
                                         int resolution = 4001);

struct AgentRecord {
    double cost = 0.0;
    int behavior = 0;
    int signal = 0;
    int decision = 0;
    double net_transfer = 0.0;  // reward * (decision - mean decision)
};

struct SimulationResult {
    std::uint64_t n_agents = 0;
    double empirical_prevalence = 0.0;
    ConfusionFractions empirical_confusion;
    double mean_net_transfer = 0.0;
    std::uint64_t seed = 0;
    // raw tallies, for sampling-error bands
    std::uint64_t n_comply = 0;
    std::uint64_t n_tp = 0, n_fn = 0, n_fp = 0, n_tn = 0;
    std::uint64_t n_rewarded = 0;
};

/// Finite-population draw: costs from F, best-response behavior, noisy
/// signals, randomized decisions, budget-balanced transfers. Agents are keyed
/// by index, so the result is bitwise reproducible for a fixed seed and
/// independent of the number of worker threads.
SimulationResult simulate_population(Classifier c, double reward, const Scenario& scenario,
                                     std::uint64_t n_agents, std::uint64_t seed);

/// Per-agent trace of the same process (sequential; intended for CSV dumps).
std::vector<AgentRecord> simulate_population_trace(Classifier c, double reward,
                                                   const Scenario& scenario,
                                                   std::uint64_t n_agents, std::uint64_t seed);

struct CondorcetCheck {
    double challenger = 0.0;
    double support_share = 0.0;  // agents weakly preferring the majority reward
    bool majority = false;
};

struct CondorcetReport {
    double condorcet = 0.0;
    std::vector<CondorcetCheck> checks;
    bool wins_all = false;
};

/// Simulates an electorate and pits the majority reward against each
/// challenger in a pairwise vote; ties count for the majority reward.
CondorcetReport verify_condorcet(Classifier c, const Scenario& scenario,
                                 std::span<const double> challengers,
                                 std::uint64_t n_agents, std::uint64_t seed);

}  // namespace classeq
