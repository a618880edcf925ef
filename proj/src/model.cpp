#include "classeq/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace classeq {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << what << " must be finite (got " << x << ")";
        throw std::invalid_argument(os.str());
    }
}

void require_probability(double p, const char* what) {
    require_finite(p, what);
    if (p < 0.0 || p > 1.0) {
        std::ostringstream os;
        os << what << " must lie in [0,1] (got " << p << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

DesignerPayoffs DesignerPayoffs::moral_hazard(double w) {
    if (!(w > 0.0 && w < 1.0)) {
        std::ostringstream os;
        os << "moral-hazard weight w must satisfy 0 < w < 1 (got " << w << ")";
        throw std::invalid_argument(os.str());
    }
    return {1.0, w, w, 0.0};
}

void validate(const Scenario& scenario) {
    if (!scenario.distribution) throw std::invalid_argument("scenario has no cost distribution");
    require_finite(scenario.externality_t, "externality t");
    if (scenario.externality_t < 0.0) {
        std::ostringstream os;
        os << "externality t must be >= 0 (got " << scenario.externality_t << ")";
        throw std::invalid_argument(os.str());
    }
    const double phi = scenario.accuracy.phi;
    require_finite(phi, "phi");
    if (!(phi > 0.5 && phi <= 1.0)) {
        std::ostringstream os;
        os << "signal accuracy phi must satisfy 0.5 < phi <= 1 (got " << phi << ")";
        throw std::invalid_argument(os.str());
    }
    const auto& dp = scenario.designer;
    for (auto [v, name] : {std::pair{dp.a1, "a1"}, {dp.a0, "a0"}, {dp.b1, "b1"}, {dp.b0, "b0"}}) {
        require_finite(v, name);
        if (v < 0.0) {
            std::ostringstream os;
            os << "designer payoff " << name << " must be >= 0 (got " << v << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

double responsiveness(Classifier c, SignalAccuracy acc) {
    require_probability(c.delta1, "delta1");
    require_probability(c.delta0, "delta0");
    require_finite(acc.phi, "phi");
    return (c.delta1 + c.delta0 - 1.0) * (2.0 * acc.phi - 1.0);
}

ResponsivenessKind classify_responsiveness(Classifier c, SignalAccuracy acc) {
    const double rho = responsiveness(c, acc);
    if (std::abs(rho) <= kNullTolerance) return ResponsivenessKind::Null;
    return rho > 0.0 ? ResponsivenessKind::Positive : ResponsivenessKind::Negative;
}

int best_response_behavior(double gamma, Classifier c, SignalAccuracy acc, double reward) {
    require_finite(gamma, "gamma");
    require_finite(reward, "reward");
    return gamma <= reward * responsiveness(c, acc) ? 1 : 0;
}

double prevalence(Classifier c, SignalAccuracy acc, double reward, const CostDistribution& dist) {
    require_finite(reward, "reward");
    return dist.cdf(reward * responsiveness(c, acc));
}

ConfusionFractions confusion_fractions(double pi, Classifier c, SignalAccuracy acc) {
    require_probability(pi, "pi");
    require_probability(c.delta1, "delta1");
    require_probability(c.delta0, "delta0");
    const double phi = acc.phi;
    ConfusionFractions out;
    out.tp = pi * (phi * c.delta1 + (1.0 - phi) * (1.0 - c.delta0));
    out.fn = pi * (phi * (1.0 - c.delta1) + (1.0 - phi) * c.delta0);
    out.tn = (1.0 - pi) * (phi * c.delta0 + (1.0 - phi) * (1.0 - c.delta1));
    out.fp = (1.0 - pi) * (phi * (1.0 - c.delta0) + (1.0 - phi) * c.delta1);
    return out;
}

std::string to_string(ResponsivenessKind k) {
    switch (k) {
        case ResponsivenessKind::Positive: return "positive";
        case ResponsivenessKind::Negative: return "negative";
        case ResponsivenessKind::Null: return "null";
    }
    return "?";
}

}  // namespace classeq
