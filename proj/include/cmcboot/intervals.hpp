#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmcboot/errors.hpp"

namespace cmcboot {

enum class CiMethod { Percentile, Pivot, Clt };

/// Two-sided confidence interval with its nominal level and construction tag.
struct ConfidenceInterval {
    double lower;
    double upper;
    double level;      // nominal coverage 1 - alpha
    CiMethod method;
    bool degenerate;   // lower == upper from zero replicate spread

    double width() const { return upper - lower; }
};

/**
Empirical alpha-quantile: sort ascending and return the k-th order statistic
with k = clamp(ceil(alpha*B), 1, B). This is the left-continuous inverse CDF
convention, with no interpolation.
*/
inline double empirical_quantile(std::vector<double> samples, double alpha) {
    if (samples.empty()) throw EmptySamplesError("quantile of no samples");
    std::sort(samples.begin(), samples.end());
    const long B = long(samples.size());
    long k = long(std::ceil(alpha * double(B)));
    k = std::clamp(k, 1l, B);
    return samples[k - 1];
}

/// Percentile CI [q*_{alpha/2}, q*_{1-alpha/2}] over bootstrap replicates.
inline ConfidenceInterval percentile_ci(const std::vector<double>& samples,
                                        double alpha) {
    if (samples.empty()) throw EmptySamplesError("percentile CI of no samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("alpha must lie in (0,1)");
    const double lower = empirical_quantile(samples, alpha / 2.0);
    const double upper = empirical_quantile(samples, 1.0 - alpha / 2.0);
    return ConfidenceInterval{lower, upper, 1.0 - alpha, CiMethod::Percentile,
                              lower == upper};
}

/// Pivot CI [2*point - q*_{1-alpha/2}, 2*point - q*_{alpha/2}].
inline ConfidenceInterval pivot_ci(const std::vector<double>& samples,
                                   double point_estimate, double alpha) {
    if (samples.empty()) throw EmptySamplesError("pivot CI of no samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("alpha must lie in (0,1)");
    const double q_low = empirical_quantile(samples, alpha / 2.0);
    const double q_high = empirical_quantile(samples, 1.0 - alpha / 2.0);
    const double lower = 2.0 * point_estimate - q_high;
    const double upper = 2.0 * point_estimate - q_low;
    return ConfidenceInterval{lower, upper, 1.0 - alpha, CiMethod::Pivot,
                              lower == upper};
}

/// Closed-interval coverage indicator.
inline bool covers(const ConfidenceInterval& ci, double truth) {
    return ci.lower <= truth && truth <= ci.upper;
}

}  // namespace cmcboot
