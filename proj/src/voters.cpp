#include "classeq/voters.hpp"

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

// Both threshold equations rearrange to strictly increasing functions of k
// (log-concavity bounds the hazard-ratio derivatives), so a sign change
// brackets the unique root.
template <class G>
double solve_increasing(G&& g, double center, double scale, const char* what) {
    const double g_center = g(center);
    if (g_center == 0.0) return center;
    double width = scale;
    double a, b, fa, fb;
    if (g_center > 0.0) {
        b = center;
        fb = g_center;
        for (;;) {
            a = center - width;
            fa = g(a);
            if (std::isfinite(fa) && fa < 0.0) break;
            width *= 2.0;
            if (width > 1000.0 * scale || !std::isfinite(fa)) {
                std::ostringstream os;
                os << what << ": no sign change within " << 1000.0 * scale
                   << " of " << center << "; distribution looks malformed";
                throw bracket_failure_error(os.str());
            }
        }
    } else {
        a = center;
        fa = g_center;
        for (;;) {
            b = center + width;
            fb = g(b);
            if (std::isfinite(fb) && fb > 0.0) break;
            width *= 2.0;
            if (width > 1000.0 * scale || !std::isfinite(fb)) {
                std::ostringstream os;
                os << what << ": no sign change within " << 1000.0 * scale
                   << " of " << center << "; distribution looks malformed";
                throw bracket_failure_error(os.str());
            }
        }
    }
    // secant steps inside the bracket, falling back to bisection whenever the
    // same endpoint survives twice in a row
    int stale_side = 0;
    const double tol = kRootTolerance * std::max(1.0, scale);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        double m;
        if (std::abs(stale_side) >= 2 || fb == fa) {
            m = 0.5 * (a + b);
        } else {
            m = b - fb * (b - a) / (fb - fa);
            const double guard = 1e-3 * (b - a);
            if (!(m > a + guard && m < b - guard)) m = 0.5 * (a + b);
        }
        const double fm = g(m);
        if (fm == 0.0) return m;
        if (fm < 0.0) {
            a = m;
            fa = fm;
            stale_side = stale_side > 0 ? stale_side + 1 : 1;
        } else {
            b = m;
            fb = fm;
            stale_side = stale_side < 0 ? stale_side - 1 : -1;
        }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace

double voter_payoff(double reward, double gamma, Classifier c, const Scenario& s) {
    require_finite(reward, "reward");
    require_finite(gamma, "gamma");
    const double x = reward * responsiveness(c, s.accuracy);
    const double F = s.distribution->cdf(x);
    const double t = s.externality_t;
    if (gamma <= x) return -gamma + x * (1.0 - F) + t * F;
    return -x * F + t * F;
}

RewardSolution solve_k_roots(const Scenario& s) {
    const auto& dist = *s.distribution;
    const double t = s.externality_t;
    const double scale = dist.scale();
    const auto g0 = [&](double k) { return k - t + dist.cdf(k) / dist.pdf(k); };
    const auto g1 = [&](double k) { return k - t - (1.0 - dist.cdf(k)) / dist.pdf(k); };
    RewardSolution out;
    out.k0 = solve_increasing(g0, t, scale, "k0 root");
    out.k1 = solve_increasing(g1, t, scale, "k1 root");
    out.residual_k0 = g0(out.k0);
    out.residual_k1 = g1(out.k1);
    return out;
}

double kstar_cutpoint(const Scenario& s, const RewardSolution& roots) {
    const auto& dist = *s.distribution;
    const double t = s.externality_t;
    const double F0 = dist.cdf(roots.k0);
    const double F1 = dist.cdf(roots.k1);
    return roots.k0 * F0 + roots.k1 * (1.0 - F1) + t * (F1 - F0);
}

MedianChoice median_optimal_k(const Scenario& s) {
    const auto roots = solve_k_roots(s);
    MedianChoice out;
    out.cutpoint_value = kstar_cutpoint(s, roots);
    out.median_cost = s.distribution->median();
    out.branch = out.median_cost <= out.cutpoint_value ? KBranch::K1 : KBranch::K0;
    out.k_star = out.branch == KBranch::K1 ? roots.k1 : roots.k0;
    return out;
}

CondorcetReward condorcet_reward(Classifier c, const Scenario& s) {
    if (is_null_classifier(c, s.accuracy)) return {0.0, true};
    const auto mc = median_optimal_k(s);
    return {mc.k_star / responsiveness(c, s.accuracy), false};
}

double social_welfare(double reward, Classifier c, const Scenario& s) {
    require_finite(reward, "reward");
    const double x = reward * responsiveness(c, s.accuracy);
    return s.externality_t * s.distribution->cdf(x) - s.distribution->partial_expectation(x);
}

double sw_optimal_reward(Classifier c, const Scenario& s) {
    if (is_null_classifier(c, s.accuracy)) {
        throw null_classifier_error(
            "welfare-optimal reward is undefined for a null classifier: all rewards are "
            "welfare-equivalent");
    }
    return s.externality_t / responsiveness(c, s.accuracy);
}

CutpointMonotonicityReport cutpoint_monotonicity_check(const Scenario& low_t,
                                                       const Scenario& high_t) {
    if (high_t.externality_t < low_t.externality_t) {
        throw std::invalid_argument("cutpoint check expects t_high >= t_low");
    }
    CutpointMonotonicityReport out;
    out.cutpoint_low_t = kstar_cutpoint(low_t, solve_k_roots(low_t));
    out.cutpoint_high_t = kstar_cutpoint(high_t, solve_k_roots(high_t));
    out.increased = out.cutpoint_high_t > out.cutpoint_low_t;
    return out;
}

}  // namespace classeq
