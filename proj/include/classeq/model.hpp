#pragma once

#include <memory>
#include <string>

#include "classeq/distributions.hpp"

namespace classeq {

// Probability that the rendered decision matches the signal, per signal value.
struct Classifier {
    double delta1 = 1.0;  // Pr[d = s | s = 1]
    double delta0 = 1.0;  // Pr[d = s | s = 0]
};

// Signal accuracy: Pr[s = beta]. Must satisfy 0.5 < phi <= 1.
struct SignalAccuracy {
    double phi = 0.75;
};

// Ex-post payoffs by confusion cell: a1 true positive, a0 false negative,
// b1 true negative, b0 false positive. All nonnegative.
struct DesignerPayoffs {
    double a1 = 0.0;
    double a0 = 0.0;
    double b1 = 0.0;
    double b0 = 0.0;

    static DesignerPayoffs accuracy() { return {1.0, 0.0, 1.0, 0.0}; }
    static DesignerPayoffs compliance() { return {1.0, 1.0, 0.0, 0.0}; }
    static DesignerPayoffs predatory() { return {0.0, 0.0, 1.0, 0.0}; }
    /// Requires 0 < w < 1.
    static DesignerPayoffs moral_hazard(double w);
};

struct Scenario {
    std::shared_ptr<const CostDistribution> distribution;
    double externality_t = 0.0;  // common marginal value of aggregate compliance
    SignalAccuracy accuracy;
    DesignerPayoffs designer;
};

/// Checks every structural invariant; throws std::invalid_argument with a
/// precise message on the first violation.
void validate(const Scenario& scenario);

enum class ResponsivenessKind { Positive, Negative, Null };

// |rho| at or below this classifies as null; keeps floating-point sums
// delta1+delta0-1 near zero deterministic.
inline constexpr double kNullTolerance = 1e-9;

/// rho = (delta1 + delta0 - 1) * (2*phi - 1): the change in reward probability
/// from complying versus not.
double responsiveness(Classifier c, SignalAccuracy acc);

ResponsivenessKind classify_responsiveness(Classifier c, SignalAccuracy acc);

inline bool is_null_classifier(Classifier c, SignalAccuracy acc) {
    return classify_responsiveness(c, acc) == ResponsivenessKind::Null;
}

/// Individual best response: 1 iff gamma <= reward * rho. Ties comply.
int best_response_behavior(double gamma, Classifier c, SignalAccuracy acc, double reward);

/// Equilibrium fraction investing: F(reward * rho).
double prevalence(Classifier c, SignalAccuracy acc, double reward, const CostDistribution& dist);

struct ConfusionFractions {
    double tp = 0.0;  // comply, rewarded
    double fn = 0.0;  // comply, not rewarded
    double fp = 0.0;  // not comply, rewarded
    double tn = 0.0;  // not comply, not rewarded

    double prevalence() const { return tp + fn; }
    double accuracy() const { return tp + tn; }
    double sum() const { return tp + fn + fp + tn; }
};

/// Population split across the four confusion cells at compliance level pi.
ConfusionFractions confusion_fractions(double pi, Classifier c, SignalAccuracy acc);

std::string to_string(ResponsivenessKind k);

}  // namespace classeq
