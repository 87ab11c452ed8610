#pragma once

#include <cstddef>
#include <span>

#include "listcombine/errors.hpp"

namespace listcombine {

/// A real number constrained to [0, 1]. Construction rejects NaN and
/// out-of-range values; used for test levels, p-values and power figures.
class Probability {
public:
    Probability() = default;
    explicit Probability(double v);
    double value() const { return value_; }
    operator double() const { return value_; }

private:
    double value_ = 0.0;
};

/// Arithmetic mean. Throws EmptyInputError on an empty sequence.
double mean(std::span<const double> xs);

/// Unbiased sample variance (n-1 denominator). Requires at least two
/// observations; throws InsufficientDataError otherwise. Never negative.
double sample_variance(std::span<const double> xs);

/// Standard normal CDF, absolute error below 1e-10 everywhere.
Probability std_normal_cdf(double x);

/// Standard normal quantile. Defined on the open interval only; q of 0 or 1
/// throws OutOfDomainError. Satisfies cdf(quantile(q)) = q to within 1e-9.
double std_normal_quantile(Probability q);

/// Upper-tail probability of the chi-square distribution with df degrees of
/// freedom, via the regularized incomplete gamma function.
Probability chi_square_sf(double x, int df);

struct TwoPropPowerOptions {
    // Yates continuity correction; off by default.
    bool continuity_correction = false;
};

/// Power of the two-sided level-alpha two-sample proportion test under the
/// normal approximation: pooled variance under the null, unpooled under the
/// alternative, both rejection tails counted.
Probability two_prop_power(Probability p1, Probability p0,
                           std::size_t n1, std::size_t n0,
                           Probability alpha,
                           TwoPropPowerOptions opts = {});

} // namespace listcombine
