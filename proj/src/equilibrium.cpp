#include "classeq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace classeq {

namespace {

constexpr double kEndpointTolerance = 1e-9;  // clamp landing on {0,1}
constexpr double kMedianZeroTolerance = 1e-9;

EquilibriumKind kind_of(Classifier c, const Scenario& s, double reward) {
    if (reward == 0.0) return EquilibriumKind::Null;
    switch (classify_responsiveness(c, s.accuracy)) {
        case ResponsivenessKind::Positive: return EquilibriumKind::PositiveResponsive;
        case ResponsivenessKind::Negative: return EquilibriumKind::NegativeResponsive;
        case ResponsivenessKind::Null: return EquilibriumKind::Null;
    }
    return EquilibriumKind::Null;
}

EquilibriumOutcome make_outcome(Classifier c, double reward, const Scenario& s, bool verified,
                                std::string notes) {
    EquilibriumOutcome out;
    out.kind = kind_of(c, s, reward);
    out.classifier = c;
    out.reward = reward;
    out.prevalence = prevalence(c, s.accuracy, reward, *s.distribution);
    out.median_payoff = voter_payoff(reward, s.distribution->median(), c, s);
    out.designer_payoff = designer_expected_payoff(c, reward, s);
    out.social_welfare = social_welfare(reward, c, s);
    out.verified = verified;
    out.notes = std::move(notes);
    return out;
}

void log_to(std::vector<std::string>* log, std::string msg) {
    if (log) log->push_back(std::move(msg));
}

std::string fmt_classifier(Classifier c) {
    std::ostringstream os;
    os << "(" << c.delta1 << ", " << c.delta0 << ")";
    return os.str();
}

// Candidate non-null classifiers when the payoff is mixed-aligned: iterate
// (best-response classifier, majority reward) to a fixed point; a repeating
// pair that is not a fixed point is a best-response cycle, which means no
// non-null equilibrium of this kind exists.
std::vector<EquilibriumOutcome> fixed_point_fallback(const Scenario& s,
                                                     std::vector<std::string>* log) {
    std::vector<EquilibriumOutcome> out;
    const auto start = condorcet_reward({1.0, 1.0}, s);
    double r = start.reward;
    std::vector<std::pair<double, double>> seen;  // (delta1, delta0) trail
    for (int it = 0; it < 100; ++it) {
        const auto br = designer_best_response(r, s);
        const Classifier c = br.classifiers.front();
        if (is_null_classifier(c, s.accuracy)) {
            log_to(log, "mixed alignment: best response collapsed to a null classifier");
            return out;
        }
        const auto next = condorcet_reward(c, s);
        if (std::abs(next.reward - r) <= 1e-10 * std::max(1.0, std::abs(r))) {
            const double payoff = designer_expected_payoff(c, next.reward, s);
            const auto verify = designer_best_response(next.reward, s);
            if (payoff >= verify.payoff - kVerifyTolerance) {
                out.push_back(make_outcome(c, next.reward, s, true,
                                           "found by best-response iteration"));
            }
            return out;
        }
        for (const auto& [d1, d0] : seen) {
            if (std::abs(d1 - c.delta1) < 1e-9 && std::abs(d0 - c.delta0) < 1e-9) {
                log_to(log,
                       "mixed alignment: best-response cycle detected; no non-null equilibrium");
                return out;
            }
        }
        seen.emplace_back(c.delta1, c.delta0);
        r = next.reward;
    }
    log_to(log, "mixed alignment: best-response iteration did not settle");
    return out;
}

}  // namespace

std::string to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Null: return "null";
        case EquilibriumKind::PositiveResponsive: return "positive";
        case EquilibriumKind::NegativeResponsive: return "negative";
    }
    return "?";
}

NullExistenceReport null_equilibrium_exists(const Scenario& s) {
    NullExistenceReport rep;
    const double phi = s.accuracy.phi;
    const double F0 = s.distribution->cdf(0.0);
    rep.sincere_prevalence = F0;
    const auto& dp = s.designer;
    const double da = dp.a1 - dp.a0;
    const double db = dp.b1 - dp.b0;
    rep.interval_low = db * (1.0 - phi) / (db * (1.0 - phi) + da * phi);
    rep.interval_high = db * phi / (da * (1.0 - phi) + db * phi);
    rep.degenerate = !(std::isfinite(rep.interval_low) && std::isfinite(rep.interval_high) &&
                       rep.interval_low < rep.interval_high);

    const auto mc = median_optimal_k(s);
    if (std::abs(mc.k_star) <= kMedianZeroTolerance) {
        rep.exists = true;
        rep.note = "median's preferred threshold is zero: the sincere outcome is trivially "
                   "supportable";
        return rep;
    }
    if (accuracy_alignment(dp) == AccuracyAlignment::Neither) {
        // The interval presumes (mis)aligned payoffs. With mixed alignment,
        // decide by corner dominance of the zero-reward payoff, which is
        // linear in the classifier.
        const double g1 = F0 * phi * da + (1.0 - F0) * (1.0 - phi) * (dp.b0 - dp.b1);
        const double g0 = F0 * (1.0 - phi) * (-da) + (1.0 - F0) * phi * db;
        rep.exists = !((g1 > 0.0 && g0 > 0.0) || (g1 < 0.0 && g0 < 0.0));
        rep.note = "mixed alignment: decided by corner dominance at zero reward";
        return rep;
    }
    if (rep.degenerate) {
        rep.exists = true;
        rep.note = "degenerate interval: the designer weakly prefers a null classifier at zero "
                   "reward";
        return rep;
    }
    rep.exists = !(rep.interval_low < F0 && F0 < rep.interval_high);
    return rep;
}

std::vector<EquilibriumOutcome> enumerate_non_null(const Scenario& s,
                                                   std::vector<std::string>* log) {
    const auto align = accuracy_alignment(s.designer);
    if (align == AccuracyAlignment::Neither) {
        log_to(log, "designer payoffs are not accuracy (mis)aligned; the closed-form candidate "
                    "construction does not apply, falling back to best-response iteration");
        return fixed_point_fallback(s, log);
    }

    const auto mc = median_optimal_k(s);
    const double k = mc.k_star;
    std::vector<EquilibriumOutcome> out;
    if (std::abs(k) <= kMedianZeroTolerance) {
        log_to(log, "median threshold is zero (sincere case); no non-null candidates");
        return out;
    }

    struct Attempt {
        Classifier c;
        std::string desc;
    };
    std::vector<Attempt> attempts;

    // Critical point in delta0 with delta1 pinned; corner fallback when the
    // payoff is linear in delta0. The corner matching the pinned value is the
    // non-null one.
    const auto attempt_delta0_branch = [&](double d1_fixed) {
        std::ostringstream desc;
        try {
            const double d0 = clamped_delta_star(k, Coordinate::Delta1, d1_fixed, s);
            if (d0 <= kEndpointTolerance || d0 >= 1.0 - kEndpointTolerance) {
                std::ostringstream msg;
                msg << "candidate (delta1=" << d1_fixed << ", delta0*=" << d0
                    << ") excluded: critical point clamps to an endpoint (null or corner "
                       "degenerate)";
                log_to(log, msg.str());
                return;
            }
            desc << "interior critical point in delta0 at delta1=" << d1_fixed;
            attempts.push_back({{d1_fixed, d0}, desc.str()});
        } catch (const degenerate_denominator_error&) {
            desc << "corner candidate (payoff linear in delta0) at delta1=" << d1_fixed;
            attempts.push_back({{d1_fixed, d1_fixed}, desc.str()});
        }
    };
    const auto attempt_delta1_branch = [&](double d0_fixed) {
        std::ostringstream desc;
        try {
            const double d1 = clamped_delta_star(k, Coordinate::Delta0, d0_fixed, s);
            if (d1 <= kEndpointTolerance || d1 >= 1.0 - kEndpointTolerance) {
                std::ostringstream msg;
                msg << "candidate (delta1*=" << d1 << ", delta0=" << d0_fixed
                    << ") excluded: critical point clamps to an endpoint (null or corner "
                       "degenerate)";
                log_to(log, msg.str());
                return;
            }
            desc << "interior critical point in delta1 at delta0=" << d0_fixed;
            attempts.push_back({{d1, d0_fixed}, desc.str()});
        } catch (const degenerate_denominator_error&) {
            desc << "corner candidate (payoff linear in delta1) at delta0=" << d0_fixed;
            attempts.push_back({{d0_fixed, d0_fixed}, desc.str()});
        }
    };

    if (k > 0.0) {
        attempt_delta0_branch(1.0);
        attempt_delta1_branch(0.0);
    } else {
        attempt_delta0_branch(0.0);
        attempt_delta1_branch(1.0);
    }

    // dedupe corner candidates that may coincide
    std::sort(attempts.begin(), attempts.end(), [](const Attempt& a, const Attempt& b) {
        if (a.c.delta1 != b.c.delta1) return a.c.delta1 < b.c.delta1;
        return a.c.delta0 < b.c.delta0;
    });
    attempts.erase(std::unique(attempts.begin(), attempts.end(),
                               [](const Attempt& a, const Attempt& b) {
                                   return std::abs(a.c.delta1 - b.c.delta1) < 1e-12 &&
                                          std::abs(a.c.delta0 - b.c.delta0) < 1e-12;
                               }),
                   attempts.end());

    for (const auto& attempt : attempts) {
        const double rho = responsiveness(attempt.c, s.accuracy);
        if (std::abs(rho) <= kNullTolerance) {
            log_to(log, "candidate " + fmt_classifier(attempt.c) + " excluded: null");
            continue;
        }
        const double r_star = k / rho;
        const auto br = designer_best_response(r_star, s);
        const double candidate_payoff = designer_expected_payoff(attempt.c, r_star, s);
        if (candidate_payoff >= br.payoff - kVerifyTolerance) {
            out.push_back(make_outcome(attempt.c, r_star, s, true, attempt.desc));
        } else {
            std::ostringstream msg;
            msg << "candidate " << fmt_classifier(attempt.c) << " with reward " << r_star
                << " rejected: designer deviates (payoff " << candidate_payoff << " vs best "
                << br.payoff << " at " << fmt_classifier(br.classifiers.front()) << ")";
            log_to(log, msg.str());
        }
    }

    std::sort(out.begin(), out.end(), [](const EquilibriumOutcome& a, const EquilibriumOutcome& b) {
        if (a.classifier.delta1 != b.classifier.delta1)
            return a.classifier.delta1 < b.classifier.delta1;
        return a.classifier.delta0 < b.classifier.delta0;
    });
    return out;
}

std::vector<EquilibriumOutcome> find_equilibria(const Scenario& s,
                                                std::vector<std::string>* log) {
    std::vector<EquilibriumOutcome> out;
    const auto nrep = null_equilibrium_exists(s);
    if (nrep.exists) {
        // Canonical representative is (0,1) (classify everyone 0). When the
        // zero-reward payoff slopes the other way along the null segment, the
        // optimal null classifier is (1,0) instead.
        const auto br0 = designer_best_response(0.0, s);
        Classifier c0{0.0, 1.0};
        std::string note = nrep.note;
        if (designer_expected_payoff(c0, 0.0, s) < br0.payoff - kVerifyTolerance) {
            const Classifier c10{1.0, 0.0};
            if (designer_expected_payoff(c10, 0.0, s) >= br0.payoff - kVerifyTolerance) {
                c0 = c10;
                note = "null segment favors classifying everyone 1; reporting (1,0)";
            } else {
                // zero reward is still an equilibrium via the designer's
                // zero-reward best response (sincere-case edge)
                c0 = br0.classifiers.front();
                note = "zero-reward equilibrium supported by a non-null best response";
            }
        }
        out.push_back(make_outcome(c0, 0.0, s, true, note));
        out.back().kind = EquilibriumKind::Null;
    }
    auto non_null = enumerate_non_null(s, log);
    out.insert(out.end(), non_null.begin(), non_null.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const EquilibriumOutcome& a, const EquilibriumOutcome& b) {
                         const bool an = a.kind == EquilibriumKind::Null;
                         const bool bn = b.kind == EquilibriumKind::Null;
                         if (an != bn) return an;
                         if (a.classifier.delta1 != b.classifier.delta1)
                             return a.classifier.delta1 < b.classifier.delta1;
                         return a.classifier.delta0 < b.classifier.delta0;
                     });
    return out;
}

ExogenousComparison exogenous_comparison(const Scenario& s, double fixed_reward) {
    if (!std::isfinite(fixed_reward)) {
        throw std::invalid_argument("fixed reward must be finite");
    }
    ExogenousComparison out;
    out.fixed_reward = fixed_reward;
    const auto br = designer_best_response(fixed_reward, s);
    out.classifier = br.classifiers.front();
    out.designer_payoff = br.payoff;
    out.prevalence = prevalence(out.classifier, s.accuracy, fixed_reward, *s.distribution);
    out.median_payoff = voter_payoff(fixed_reward, s.distribution->median(), out.classifier, s);
    out.social_welfare = social_welfare(fixed_reward, out.classifier, s);
    out.equilibria = find_equilibria(s);
    return out;
}

}  // namespace classeq
