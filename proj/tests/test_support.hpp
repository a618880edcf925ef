#pragma once

// Test-side helpers kept independent of the library's closed forms: adaptive
// quadrature, central differences, and a deterministic uniform generator for
// randomized sweeps.

#include <cmath>
#include <cstdint>
#include <functional>

#include "classeq/model.hpp"

namespace testsupport {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, right, tol / 2.0, depth - 1);
}

// Composite panels seed the adaptive pass so narrow features cannot hide
// between the three initial sample points.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    constexpr int kPanels = 32;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + (b - a) * double(i) / kPanels;
        const double hi = a + (b - a) * double(i + 1) / kPanels;
        total += adaptive_simpson(f, lo, hi, simpson(f, lo, hi), tol / kPanels, 44);
    }
    return total;
}

// Quasiconcavity on a sampled profile: weakly increasing to the argmax, then
// weakly decreasing, with slack for floating-point noise in flat tails.
inline bool single_peaked(const std::vector<double>& values, double noise) {
    size_t peak = 0;
    for (size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[peak]) peak = i;
    }
    for (size_t i = 0; i + 1 < values.size(); ++i) {
        if (i < peak && values[i + 1] < values[i] - noise) return false;
        if (i >= peak && values[i + 1] > values[i] + noise) return false;
    }
    return true;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// splitmix64-based uniforms; deterministic across platforms
class SweepRng {
public:
    explicit SweepRng(std::uint64_t seed) : state_(seed) {}

    double uniform() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return (double(z >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

// Wraps a distribution but rescales the density at one grid point; used to
// exercise the log-concavity violation reporting.
class CorruptedPdf final : public classeq::CostDistribution {
public:
    CorruptedPdf(std::shared_ptr<const classeq::CostDistribution> base, double at, double factor)
        : base_(std::move(base)), at_(at), factor_(factor) {}

    double cdf(double x) const override { return base_->cdf(x); }
    double pdf(double x) const override {
        return x == at_ ? factor_ * base_->pdf(x) : base_->pdf(x);
    }
    double pdf_prime(double x) const override { return base_->pdf_prime(x); }
    double median() const override { return base_->median(); }
    double mean() const override { return base_->mean(); }
    double partial_expectation(double x) const override { return base_->partial_expectation(x); }
    double quantile(double p) const override { return base_->quantile(p); }
    double scale() const override { return base_->scale(); }
    std::string name() const override { return "corrupted " + base_->name(); }

private:
    std::shared_ptr<const classeq::CostDistribution> base_;
    double at_;
    double factor_;
};

inline classeq::Scenario scenario(std::shared_ptr<const classeq::CostDistribution> dist,
                                  double t, double phi, classeq::DesignerPayoffs dp) {
    classeq::Scenario s;
    s.distribution = std::move(dist);
    s.externality_t = t;
    s.accuracy = {phi};
    s.designer = dp;
    return s;
}

inline classeq::Scenario normal_scenario(double mean, double sd, double t, double phi,
                                         classeq::DesignerPayoffs dp) {
    return scenario(std::make_shared<classeq::NormalDistribution>(mean, sd), t, phi, dp);
}

}  // namespace testsupport
