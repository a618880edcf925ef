#include "classeq/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace classeq {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2Pi = 2.5066282746310005024;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << what << " must be finite (got " << x << ")";
        throw std::invalid_argument(os.str());
    }
}

double phi_std(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double Phi_std(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

// Stable logistic sigmoid and softplus.
double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) {
    if (z > 36.0) return z + std::exp(-z);
    return std::log1p(std::exp(z));
}

}  // namespace

double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "quantile argument must lie in (0,1) (got " << p << ")";
        throw std::invalid_argument(os.str());
    }
    // Acklam's rational approximation, then one Halley refinement against the
    // erfc-based CDF.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step: e = Phi(x) - p, u = e / phi(x).
    const double e = Phi_std(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

NormalDistribution::NormalDistribution(double mean, double std_dev)
    : mean_(mean), sd_(std_dev) {
    require_finite(mean, "normal mean");
    require_finite(std_dev, "normal std_dev");
    if (!(std_dev > 0.0)) {
        std::ostringstream os;
        os << "normal std_dev must be > 0 (got " << std_dev << ")";
        throw std::invalid_argument(os.str());
    }
}

double NormalDistribution::cdf(double x) const {
    require_finite(x, "x");
    return Phi_std((x - mean_) / sd_);
}

double NormalDistribution::pdf(double x) const {
    require_finite(x, "x");
    return phi_std((x - mean_) / sd_) / sd_;
}

double NormalDistribution::pdf_prime(double x) const {
    require_finite(x, "x");
    const double z = (x - mean_) / sd_;
    return -(z / sd_) * (phi_std(z) / sd_);
}

double NormalDistribution::partial_expectation(double x) const {
    require_finite(x, "x");
    const double z = (x - mean_) / sd_;
    return mean_ * Phi_std(z) - sd_ * phi_std(z);
}

double NormalDistribution::quantile(double p) const {
    return mean_ + sd_ * standard_normal_quantile(p);
}

std::string NormalDistribution::name() const {
    std::ostringstream os;
    os << "normal(" << mean_ << ", " << sd_ << ")";
    return os.str();
}

LogisticDistribution::LogisticDistribution(double location, double scale)
    : location_(location), s_(scale) {
    require_finite(location, "logistic location");
    require_finite(scale, "logistic scale");
    if (!(scale > 0.0)) {
        std::ostringstream os;
        os << "logistic scale must be > 0 (got " << scale << ")";
        throw std::invalid_argument(os.str());
    }
}

double LogisticDistribution::cdf(double x) const {
    require_finite(x, "x");
    return sigmoid((x - location_) / s_);
}

double LogisticDistribution::pdf(double x) const {
    require_finite(x, "x");
    const double p = sigmoid((x - location_) / s_);
    return p * (1.0 - p) / s_;
}

double LogisticDistribution::pdf_prime(double x) const {
    require_finite(x, "x");
    const double p = sigmoid((x - location_) / s_);
    return p * (1.0 - p) * (1.0 - 2.0 * p) / (s_ * s_);
}

double LogisticDistribution::partial_expectation(double x) const {
    require_finite(x, "x");
    const double z = (x - location_) / s_;
    const double p = sigmoid(z);
    // integral of v sigma'(v) dv = z*sigma(z) - softplus(z), vanishing at -inf
    return location_ * p + s_ * (z * p - softplus(z));
}

double LogisticDistribution::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "quantile argument must lie in (0,1) (got " << p << ")";
        throw std::invalid_argument(os.str());
    }
    return location_ + s_ * std::log(p / (1.0 - p));
}

std::string LogisticDistribution::name() const {
    std::ostringstream os;
    os << "logistic(" << location_ << ", " << s_ << ")";
    return os.str();
}

LogConcavityReport verify_log_concavity(const CostDistribution& dist,
                                        std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("log-concavity grid must be nonempty");
    LogConcavityReport report;
    report.points.reserve(grid.size());
    for (double x : grid) {
        require_finite(x, "grid point");
        const double f = dist.pdf(x);
        const double F = dist.cdf(x);
        const double fp = dist.pdf_prime(x);
        LogConcavityPoint pt;
        pt.x = x;
        pt.cdf_side_margin = f * f - F * fp;
        pt.survival_side_margin = f * f + fp * (1.0 - F);
        // allow rounding slack relative to the magnitude of the terms
        const double slack = 1e-9 * std::max({f * f, std::abs(F * fp), 1e-300});
        pt.cdf_side_ok = pt.cdf_side_margin >= -slack;
        pt.survival_side_ok = pt.survival_side_margin >= -slack;
        if (!pt.ok()) ++report.failures;
        report.points.push_back(pt);
    }
    return report;
}

}  // namespace classeq
