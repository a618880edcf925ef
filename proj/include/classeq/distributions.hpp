#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace classeq {

// Cost-type distribution: continuously differentiable CDF with a log-concave,
// full-support density. Everything downstream (behavior thresholds, implicit
// reward roots, welfare integrals) evaluates F, f, f' and the lower partial
// moment, so implementations provide all of them in closed form. Objects are
// immutable after construction and safe to share across threads.
class CostDistribution {
public:
    virtual ~CostDistribution() = default;

    virtual double cdf(double x) const = 0;
    virtual double pdf(double x) const = 0;
    virtual double pdf_prime(double x) const = 0;
    virtual double median() const = 0;
    virtual double mean() const = 0;
    /// Lower partial moment: integral of g dF(g) over (-inf, x].
    virtual double partial_expectation(double x) const = 0;
    /// Inverse CDF, defined on (0, 1).
    virtual double quantile(double p) const = 0;
    /// Characteristic length unit; sizes root-finding brackets.
    virtual double scale() const = 0;
    virtual std::string name() const = 0;
};

class NormalDistribution final : public CostDistribution {
public:
    NormalDistribution(double mean, double std_dev);

    double cdf(double x) const override;
    double pdf(double x) const override;
    double pdf_prime(double x) const override;
    double median() const override { return mean_; }
    double mean() const override { return mean_; }
    double partial_expectation(double x) const override;
    double quantile(double p) const override;
    double scale() const override { return sd_; }
    std::string name() const override;

    double std_dev() const { return sd_; }

private:
    double mean_;
    double sd_;
};

class LogisticDistribution final : public CostDistribution {
public:
    LogisticDistribution(double location, double scale);

    double cdf(double x) const override;
    double pdf(double x) const override;
    double pdf_prime(double x) const override;
    double median() const override { return location_; }
    double mean() const override { return location_; }
    double partial_expectation(double x) const override;
    double quantile(double p) const override;
    double scale() const override { return s_; }
    std::string name() const override;

private:
    double location_;
    double s_;
};

// Point-wise log-concavity diagnostics. Both margins are nonnegative for a
// log-concave density: pdf^2 >= cdf*pdf' and pdf^2 >= -pdf'*(1-cdf).
struct LogConcavityPoint {
    double x = 0.0;
    double cdf_side_margin = 0.0;       // pdf^2 - cdf*pdf'
    double survival_side_margin = 0.0;  // pdf^2 + pdf'*(1-cdf)
    bool cdf_side_ok = true;
    bool survival_side_ok = true;
    bool ok() const { return cdf_side_ok && survival_side_ok; }
};

struct LogConcavityReport {
    std::vector<LogConcavityPoint> points;
    int failures = 0;
    bool all_ok() const { return failures == 0; }
};

/// Evaluates both log-concavity inequalities at every grid point. Reports
/// violations instead of aborting; throws only on an invalid grid.
LogConcavityReport verify_log_concavity(const CostDistribution& dist,
                                        std::span<const double> grid);

/// Standard normal quantile (Acklam rational approximation plus one Halley
/// refinement; absolute error well under 1e-12).
double standard_normal_quantile(double p);

}  // namespace classeq
