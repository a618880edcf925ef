#pragma once

#include <stdexcept>

#include "classeq/model.hpp"

namespace classeq {

class bracket_failure_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class null_classifier_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kRootTolerance = 1e-12;

/// Voter's expected payoff at reward r given her own optimal behavior:
///   comply (gamma <= r*rho):  -gamma + r*rho*(1 - F(r*rho)) + t*F(r*rho)
///   otherwise:                -r*rho*F(r*rho) + t*F(r*rho)
double voter_payoff(double reward, double gamma, Classifier c, const Scenario& scenario);

// Roots of the two implicit threshold equations
//   k0 = t - F(k0)/f(k0)   and   k1 = t + (1 - F(k1))/f(k1).
// Log-concavity makes both defining functions strictly increasing, so each
// root is unique; k0 < t < k1.
struct RewardSolution {
    double k0 = 0.0;
    double k1 = 0.0;
    double residual_k0 = 0.0;
    double residual_k1 = 0.0;
};

RewardSolution solve_k_roots(const Scenario& scenario);

enum class KBranch { K1, K0 };

struct MedianChoice {
    double k_star = 0.0;
    KBranch branch = KBranch::K1;
    double cutpoint_value = 0.0;  // k0*F(k0) + k1*(1-F(k1)) + t*(F(k1)-F(k0))
    double median_cost = 0.0;
};

/// Cost cutpoint splitting supporters of the high reward from the low one.
double kstar_cutpoint(const Scenario& scenario, const RewardSolution& roots);

/// The median voter's threshold choice: k1 iff median cost <= cutpoint.
MedianChoice median_optimal_k(const Scenario& scenario);

struct CondorcetReward {
    double reward = 0.0;
    // Null classifier: every reward is payoff-equivalent; reward 0 is the
    // reporting convention, not a preference.
    bool null_indifference = false;
};

/// Majority-preferred reward k_mu / rho for a non-null classifier.
CondorcetReward condorcet_reward(Classifier c, const Scenario& scenario);

/// t*F(r*rho) minus aggregate compliance cost (the lower partial moment at r*rho).
double social_welfare(double reward, Classifier c, const Scenario& scenario);

/// Welfare-maximizing reward t / rho. Throws null_classifier_error for null
/// classifiers (all rewards welfare-equivalent).
double sw_optimal_reward(Classifier c, const Scenario& scenario);

struct CutpointMonotonicityReport {
    double cutpoint_low_t = 0.0;
    double cutpoint_high_t = 0.0;
    bool increased = false;
};

/// The cutpoint rises with the externality; compares two scenarios sharing a
/// distribution with t_high >= t_low.
CutpointMonotonicityReport cutpoint_monotonicity_check(const Scenario& low_t,
                                                       const Scenario& high_t);

}  // namespace classeq
