#include "classeq/designer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

// Expected cell payoff conditional on complying (ta) / not complying (tb).
struct ConditionalTerms {
    double ta;
    double tb;
};

ConditionalTerms conditional_terms(Classifier c, SignalAccuracy acc, const DesignerPayoffs& dp) {
    const double phi = acc.phi;
    return {phi * (dp.a1 * c.delta1 + dp.a0 * (1.0 - c.delta1)) +
                (1.0 - phi) * (dp.a0 * c.delta0 + dp.a1 * (1.0 - c.delta0)),
            phi * (dp.b1 * c.delta0 + dp.b0 * (1.0 - c.delta0)) +
                (1.0 - phi) * (dp.b0 * c.delta1 + dp.b1 * (1.0 - c.delta1))};
}

// First and second partial derivatives of the payoff in one classifier
// coordinate at a fixed reward; used for Newton polish after bracketing.
struct SliceDerivatives {
    double first;
    double second;
};

SliceDerivatives slice_derivatives(Classifier c, double reward, const Scenario& s,
                                   Coordinate coord) {
    const auto& dp = s.designer;
    const double phi = s.accuracy.phi;
    const double rr = reward * (2.0 * phi - 1.0);
    const double x = reward * responsiveness(c, s.accuracy);
    const double F = s.distribution->cdf(x);
    const double f = s.distribution->pdf(x);
    const double fp = s.distribution->pdf_prime(x);
    const auto [ta, tb] = conditional_terms(c, s.accuracy, dp);
    const double diff = ta - tb;
    double dterm, ddiff;
    if (coord == Coordinate::Delta0) {
        dterm = F * (1.0 - phi) * (dp.a0 - dp.a1) + (1.0 - F) * phi * (dp.b1 - dp.b0);
        ddiff = (1.0 - phi) * (dp.a0 - dp.a1) - phi * (dp.b1 - dp.b0);
    } else {
        dterm = F * phi * (dp.a1 - dp.a0) + (1.0 - F) * (1.0 - phi) * (dp.b0 - dp.b1);
        ddiff = phi * (dp.a1 - dp.a0) - (1.0 - phi) * (dp.b0 - dp.b1);
    }
    return {rr * f * diff + dterm, rr * rr * fp * diff + 2.0 * rr * f * ddiff};
}

struct SliceResult {
    double x;
    double value;
};

// Maximize a payoff slice over [0,1]: coarse scan to bracket the best point
// (the slice is quasiconcave for strongly (mis)aligned payoffs, but the scan
// also covers the mixed case), golden section to width 1e-6, then Newton
// polish on the analytic derivative when the optimum is interior.
template <class Payoff>
SliceResult maximize_slice(Payoff&& payoff, const Scenario& s, double reward,
                           Coordinate free_coord, double fixed_value) {
    constexpr int kScan = 129;
    double best_x = 0.0, best_v = payoff(0.0);
    int best_i = 0;
    for (int i = 1; i < kScan; ++i) {
        const double x = double(i) / (kScan - 1);
        const double v = payoff(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    double lo = double(std::max(0, best_i - 1)) / (kScan - 1);
    double hi = double(std::min(kScan - 1, best_i + 1)) / (kScan - 1);

    constexpr double kGolden = 0.6180339887498949;
    double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
    double fc = payoff(c), fd = payoff(d);
    while (hi - lo > 1e-6) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGolden * (hi - lo);
            fc = payoff(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGolden * (hi - lo);
            fd = payoff(d);
        }
    }
    double x = fc >= fd ? c : d;
    double v = std::max(fc, fd);
    if (v < best_v) {
        x = best_x;
        v = best_v;
    }

    if (x > 1e-9 && x < 1.0 - 1e-9) {
        double xp = x;
        for (int it = 0; it < 6; ++it) {
            Classifier cl = free_coord == Coordinate::Delta0 ? Classifier{fixed_value, xp}
                                                             : Classifier{xp, fixed_value};
            const auto der = slice_derivatives(cl, reward, s, free_coord);
            if (!std::isfinite(der.first) || !(der.second < 0.0)) break;
            const double xn = std::clamp(xp - der.first / der.second, 0.0, 1.0);
            if (std::abs(xn - xp) < 1e-15) {
                xp = xn;
                break;
            }
            xp = xn;
        }
        const double vp = payoff(xp);
        if (vp >= v) {
            x = xp;
            v = vp;
        }
    }
    return {x, v};
}

struct DeltaParts {
    double numerator;
    double denominator;
};

double payoff_scale(const DesignerPayoffs& dp) {
    return std::max({1.0, std::abs(dp.a1), std::abs(dp.a0), std::abs(dp.b1), std::abs(dp.b0)});
}

DeltaParts delta0_parts(double k, double delta1, const Scenario& s) {
    const auto& dp = s.designer;
    const double phi = s.accuracy.phi;
    const double F = s.distribution->cdf(k);
    const double f = s.distribution->pdf(k);
    const double kf = k * f;
    const double da = dp.a1 - dp.a0;
    const double db = dp.b1 - dp.b0;
    const double num = kf * (phi * (1.0 - delta1) * (da - db) - dp.a1 + delta1 * (dp.b0 - dp.b1) +
                             dp.b1) +
                       (1.0 - delta1) * ((1.0 - phi) * (-da) * F + phi * db * (1.0 - F));
    const double den = (1.0 - phi) * (-da) * (kf + F) + phi * db * (1.0 - kf - F);
    return {num, den};
}

DeltaParts delta1_parts(double k, double delta0, const Scenario& s) {
    const auto& dp = s.designer;
    const double phi = s.accuracy.phi;
    const double F = s.distribution->cdf(k);
    const double f = s.distribution->pdf(k);
    const double kf = k * f;
    const double da = dp.a1 - dp.a0;
    const double db = dp.b1 - dp.b0;
    const double num = kf * (phi * (1.0 - delta0) * (da - db) + delta0 * da - dp.a1 + dp.b1) +
                       (1.0 - delta0) * (phi * da * F + (1.0 - phi) * (-db) * (1.0 - F));
    const double den = phi * da * (kf + F) + (1.0 - phi) * (-db) * (1.0 - kf - F);
    return {num, den};
}

double ratio_or_throw(DeltaParts parts, const Scenario& s, const char* which) {
    if (std::abs(parts.denominator) <= 1e-12 * payoff_scale(s.designer)) {
        std::ostringstream os;
        os << which << ": critical-point denominator is degenerate (" << parts.denominator
           << "); payoff is linear in this coordinate, compare corners instead";
        throw degenerate_denominator_error(os.str());
    }
    return parts.numerator / parts.denominator;
}

}  // namespace

AccuracyAlignment accuracy_alignment(const DesignerPayoffs& dp) {
    const bool ge_a = dp.a1 >= dp.a0, ge_b = dp.b1 >= dp.b0;
    const bool le_a = dp.a1 <= dp.a0, le_b = dp.b1 <= dp.b0;
    if (ge_a && ge_b && le_a && le_b) return AccuracyAlignment::Both;
    if (ge_a && ge_b) return AccuracyAlignment::StronglyAligned;
    if (le_a && le_b) return AccuracyAlignment::StronglyMisaligned;
    return AccuracyAlignment::Neither;
}

std::string to_string(AccuracyAlignment a) {
    switch (a) {
        case AccuracyAlignment::Aligned: return "aligned";
        case AccuracyAlignment::StronglyAligned: return "strongly_aligned";
        case AccuracyAlignment::Misaligned: return "misaligned";
        case AccuracyAlignment::StronglyMisaligned: return "strongly_misaligned";
        case AccuracyAlignment::Both: return "both";
        case AccuracyAlignment::Neither: return "neither";
    }
    return "?";
}

double designer_payoff_at_prevalence(Classifier c, double pi, const Scenario& s) {
    const auto [ta, tb] = conditional_terms(c, s.accuracy, s.designer);
    return pi * ta + (1.0 - pi) * tb;
}

double designer_expected_payoff(Classifier c, double reward, const Scenario& s) {
    require_finite(reward, "reward");
    return designer_payoff_at_prevalence(
        c, prevalence(c, s.accuracy, reward, *s.distribution), s);
}

double delta0_critical(double k, double delta1, const Scenario& s) {
    require_finite(k, "k");
    return ratio_or_throw(delta0_parts(k, delta1, s), s, "delta0_critical");
}

double delta1_critical(double k, double delta0, const Scenario& s) {
    require_finite(k, "k");
    return ratio_or_throw(delta1_parts(k, delta0, s), s, "delta1_critical");
}

double clamped_delta_star(double k, Coordinate held, double held_value, const Scenario& s) {
    if (held_value != 0.0 && held_value != 1.0) {
        std::ostringstream os;
        os << "held coordinate must be pinned at 0 or 1 (got " << held_value << ")";
        throw std::invalid_argument(os.str());
    }
    const double raw = held == Coordinate::Delta1 ? delta0_critical(k, held_value, s)
                                                  : delta1_critical(k, held_value, s);
    return std::clamp(raw, 0.0, 1.0);
}

DesignerBestResponse designer_best_response(double reward, const Scenario& s) {
    require_finite(reward, "reward");
    const auto& dp = s.designer;
    const auto align = accuracy_alignment(dp);

    DesignerBestResponse out;
    auto add = [&](double d1, double d0) {
        const Classifier c{d1, d0};
        out.diagnostics.emplace_back(c, designer_expected_payoff(c, reward, s));
    };

    if (align == AccuracyAlignment::Both) {
        // payoff reduces to pi*abar + (1-pi)*bbar
        const double signum = reward * (dp.a1 - dp.b1);
        if (signum > 0.0) {
            add(1.0, 1.0);
        } else if (signum < 0.0) {
            add(0.0, 0.0);
        } else {
            out.everything_optimal = true;
            add(0.0, 0.0);
            add(0.0, 1.0);
            add(1.0, 0.0);
            add(1.0, 1.0);
        }
    } else {
        const auto slice_d0 = [&](double d1_fixed) {
            auto res = maximize_slice(
                [&](double d0) { return designer_expected_payoff({d1_fixed, d0}, reward, s); },
                s, reward, Coordinate::Delta0, d1_fixed);
            add(d1_fixed, res.x);
        };
        const auto slice_d1 = [&](double d0_fixed) {
            auto res = maximize_slice(
                [&](double d1) { return designer_expected_payoff({d1, d0_fixed}, reward, s); },
                s, reward, Coordinate::Delta1, d0_fixed);
            add(res.x, d0_fixed);
        };

        const bool strong = align == AccuracyAlignment::StronglyAligned ||
                            align == AccuracyAlignment::StronglyMisaligned;
        if (strong && reward != 0.0) {
            // The quasiconvex coordinate sits at a corner; the other slice is
            // strictly quasiconcave. Aligned payoffs with positive rewards
            // (and misaligned with negative) pin delta1.
            const bool corner_is_delta1 =
                (align == AccuracyAlignment::StronglyAligned) == (reward > 0.0);
            if (corner_is_delta1) {
                slice_d0(0.0);
                slice_d0(1.0);
            } else {
                slice_d1(0.0);
                slice_d1(1.0);
            }
        } else {
            // Zero reward (payoff linear in delta) or mixed alignment: no
            // interior maximum exists, so scan all four boundary slices.
            slice_d0(0.0);
            slice_d0(1.0);
            slice_d1(0.0);
            slice_d1(1.0);
            if (align == AccuracyAlignment::Neither && reward != 0.0) {
                // dense-lattice fallback with a short coordinate-Newton polish
                constexpr int kRes = 201;
                std::vector<std::pair<double, Classifier>> cells;
                cells.reserve(16);
                for (int i = 0; i < kRes; ++i) {
                    for (int j = 0; j < kRes; ++j) {
                        const Classifier c{double(i) / (kRes - 1), double(j) / (kRes - 1)};
                        const double v = designer_expected_payoff(c, reward, s);
                        if (cells.size() < 10) {
                            cells.emplace_back(v, c);
                            std::push_heap(cells.begin(), cells.end(),
                                           [](auto& a, auto& b) { return a.first > b.first; });
                        } else if (v > cells.front().first) {
                            std::pop_heap(cells.begin(), cells.end(),
                                          [](auto& a, auto& b) { return a.first > b.first; });
                            cells.back() = {v, c};
                            std::push_heap(cells.begin(), cells.end(),
                                           [](auto& a, auto& b) { return a.first > b.first; });
                        }
                    }
                }
                for (auto& [v0, c0] : cells) {
                    Classifier c = c0;
                    for (int step = 0; step < 3; ++step) {
                        for (Coordinate coord : {Coordinate::Delta0, Coordinate::Delta1}) {
                            const auto der = slice_derivatives(c, reward, s, coord);
                            if (!std::isfinite(der.first) || !(der.second < 0.0)) continue;
                            double* target = coord == Coordinate::Delta0 ? &c.delta0 : &c.delta1;
                            *target = std::clamp(*target - der.first / der.second, 0.0, 1.0);
                        }
                    }
                    // snap essentially-corner coordinates so boundary optima
                    // are reported exactly
                    if (std::abs(c.delta0) < 1e-6) c.delta0 = 0.0;
                    if (std::abs(1.0 - c.delta0) < 1e-6) c.delta0 = 1.0;
                    if (std::abs(c.delta1) < 1e-6) c.delta1 = 0.0;
                    if (std::abs(1.0 - c.delta1) < 1e-6) c.delta1 = 1.0;
                    add(c.delta1, c.delta0);
                }
            }
        }
        add(0.0, 0.0);
        add(0.0, 1.0);
        add(1.0, 0.0);
        add(1.0, 1.0);
    }

    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [c, v] : out.diagnostics) best = std::max(best, v);
    out.payoff = best;
    for (const auto& [c, v] : out.diagnostics) {
        if (v >= best - kArgmaxTolerance) out.classifiers.push_back(c);
    }
    std::sort(out.classifiers.begin(), out.classifiers.end(), [](Classifier a, Classifier b) {
        if (a.delta1 != b.delta1) return a.delta1 < b.delta1;
        return a.delta0 < b.delta0;
    });
    out.classifiers.erase(
        std::unique(out.classifiers.begin(), out.classifiers.end(),
                    [](Classifier a, Classifier b) {
                        return std::abs(a.delta1 - b.delta1) < 1e-9 &&
                               std::abs(a.delta0 - b.delta0) < 1e-9;
                    }),
        out.classifiers.end());
    return out;
}

LimitPayoffReport limit_payoff_check(const Scenario& s, std::span<const double> rewards) {
    LimitPayoffReport report;
    report.rewards.assign(rewards.begin(), rewards.end());
    const double eps = kEpsilonLimit;
    const auto& dp = s.designer;
    report.cells = {LimitCellTrack{"a1", {1.0, eps}, dp.a1, {}, {}},
                    LimitCellTrack{"a0", {eps, 1.0}, dp.a0, {}, {}},
                    LimitCellTrack{"b1", {0.0, 1.0 - eps}, dp.b1, {}, {}},
                    LimitCellTrack{"b0", {1.0 - eps, 0.0}, dp.b0, {}, {}}};
    for (auto& track : report.cells) {
        for (double r : rewards) {
            const double pi = prevalence(track.classifier, s.accuracy, r, *s.distribution);
            const auto cf = confusion_fractions(pi, track.classifier, s.accuracy);
            double frac = 0.0;
            if (track.cell == "a1") frac = cf.tp;
            else if (track.cell == "a0") frac = cf.fn;
            else if (track.cell == "b1") frac = cf.tn;
            else frac = cf.fp;
            track.fractions.push_back(frac);
            track.payoffs.push_back(designer_expected_payoff(track.classifier, r, s));
        }
    }
    return report;
}

}  // namespace classeq
