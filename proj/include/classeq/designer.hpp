#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "classeq/model.hpp"

namespace classeq {

// Alignment of the designer's payoffs with classification accuracy.
// Weak alignment without a strict inequality collapses to Both (a1 == a0 and
// b1 == b0), so Aligned/Misaligned are unreachable under exact comparison and
// kept only to mirror the taxonomy.
enum class AccuracyAlignment {
    Aligned,
    StronglyAligned,
    Misaligned,
    StronglyMisaligned,
    Both,
    Neither,
};

AccuracyAlignment accuracy_alignment(const DesignerPayoffs& dp);
std::string to_string(AccuracyAlignment a);

/// Designer's expected payoff from a classifier at a fixed reward, with
/// prevalence determined endogenously as F(reward * rho).
double designer_expected_payoff(Classifier c, double reward, const Scenario& scenario);

/// Same objective with prevalence pinned externally.
double designer_payoff_at_prevalence(Classifier c, double pi, const Scenario& scenario);

// Raised when the critical-point denominator vanishes: the payoff is linear
// in that coordinate and the caller must compare corners instead.
class degenerate_denominator_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unclamped critical point of the payoff in delta0, holding delta1 and the
/// behavior threshold k = reward * rho fixed.
double delta0_critical(double k, double delta1, const Scenario& scenario);
/// Unclamped critical point in delta1, holding delta0 and k fixed.
double delta1_critical(double k, double delta0, const Scenario& scenario);

enum class Coordinate { Delta1, Delta0 };

/// Critical point of the free coordinate clamped to [0, 1]; `held` names the
/// coordinate pinned at `held_value` (0 or 1).
double clamped_delta_star(double k, Coordinate held, double held_value, const Scenario& scenario);

// Payoff slack within which multiple classifiers are reported as co-optimal.
inline constexpr double kArgmaxTolerance = 1e-9;

struct DesignerBestResponse {
    // All global argmaxes found, lexicographic by (delta1, delta0).
    std::vector<Classifier> classifiers;
    double payoff = 0.0;
    // True when the payoff is constant over the whole square (compliance-type
    // payoffs with zero reward or equal cell values).
    bool everything_optimal = false;
    // Every candidate evaluated during the search.
    std::vector<std::pair<Classifier, double>> diagnostics;
};

/// Global argmax of the designer's payoff over [0,1]^2 at a fixed reward.
/// Strongly (mis)aligned payoffs reduce to two 1-D quasiconcave slices; mixed
/// alignment falls back to boundary scans plus a polished dense grid.
DesignerBestResponse designer_best_response(double reward, const Scenario& scenario);

// Classifier parameter used for the limiting-cell constructions.
inline constexpr double kEpsilonLimit = 1e-3;

struct LimitCellTrack {
    std::string cell;       // "a1", "a0", "b1", "b0"
    Classifier classifier;  // near-degenerate classifier steering mass into the cell
    double cell_value = 0.0;
    std::vector<double> payoffs;    // designer payoff per reward
    std::vector<double> fractions;  // population fraction in the cell per reward
};

struct LimitPayoffReport {
    std::vector<double> rewards;
    std::array<LimitCellTrack, 4> cells;
};

/// Tracks, along an increasing reward sequence, how close the designer payoff
/// gets to each single cell value and how much mass the matching classifier
/// steers into that cell.
LimitPayoffReport limit_payoff_check(const Scenario& scenario, std::span<const double> rewards);

}  // namespace classeq
