#pragma once

#include <string>
#include <vector>

#include "classeq/designer.hpp"
#include "classeq/model.hpp"
#include "classeq/voters.hpp"

namespace classeq {

enum class EquilibriumKind { Null, PositiveResponsive, NegativeResponsive };

std::string to_string(EquilibriumKind k);

struct EquilibriumOutcome {
    EquilibriumKind kind = EquilibriumKind::Null;
    Classifier classifier;
    double reward = 0.0;
    double prevalence = 0.0;
    double median_payoff = 0.0;
    double designer_payoff = 0.0;
    double social_welfare = 0.0;
    bool verified = false;
    std::string notes;
};

// Existence test for an equilibrium with zero reward and/or a null classifier.
// For (mis)aligned payoffs the test is whether sincere prevalence F(0) falls
// outside the open interval
//   ( dB*(1-phi) / (dB*(1-phi) + dA*phi),  dB*phi / (dA*(1-phi) + dB*phi) )
// with dA = a1-a0, dB = b1-b0. A degenerate interval (undefined endpoints or
// empty) means a null equilibrium always exists.
struct NullExistenceReport {
    double interval_low = 0.0;
    double interval_high = 0.0;
    double sincere_prevalence = 0.0;
    bool exists = false;
    bool degenerate = false;
    std::string note;
};

NullExistenceReport null_equilibrium_exists(const Scenario& scenario);

// Payoff slack for accepting a candidate as a designer global optimum.
inline constexpr double kVerifyTolerance = 1e-6;

/// Constructs the candidate non-null equilibria from the closed-form critical
/// points at k = k_mu, fixes r = k_mu / rho, and keeps only candidates that
/// survive a global best-response check. `log`, when given, records excluded
/// and rejected candidates.
std::vector<EquilibriumOutcome> enumerate_non_null(const Scenario& scenario,
                                                   std::vector<std::string>* log = nullptr);

/// All pure-strategy equilibria: the null outcome (when supportable) plus the
/// verified non-null candidates. Empty means no pure-strategy equilibrium.
std::vector<EquilibriumOutcome> find_equilibria(const Scenario& scenario,
                                                std::vector<std::string>* log = nullptr);

struct ExogenousComparison {
    double fixed_reward = 0.0;
    Classifier classifier;  // designer best response at the fixed reward
    double prevalence = 0.0;
    double median_payoff = 0.0;
    double designer_payoff = 0.0;
    double social_welfare = 0.0;
    std::vector<EquilibriumOutcome> equilibria;  // for side-by-side reporting
};

/// Outcome when the reward is fixed externally instead of being chosen by
/// majority vote, paired with the equilibrium list.
ExogenousComparison exogenous_comparison(const Scenario& scenario, double fixed_reward);

}  // namespace classeq
