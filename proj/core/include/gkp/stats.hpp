#pragma once

#include <cstdint>
#include <span>

namespace gkp {

// Standard normal CDF.
double normal_cdf(double x) noexcept;

// Standard normal density.
double normal_pdf(double x) noexcept;

struct Interval {
    double lo;
    double hi;
};

// Wilson score interval for a binomial proportion at 95% confidence.
Interval wilson_interval(std::int64_t successes, std::int64_t trials) noexcept;

// Two-sample Kolmogorov-Smirnov statistic (sup distance between empirical
// CDFs). Inputs are sorted in place by the caller or here; this copies.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Rejection threshold for the two-sample KS statistic at significance
// level alpha (asymptotic form).
double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha) noexcept;

// One-sided McNemar z statistic for paired designs: positive when the
// second method errs less. b = #(first errs only), c = #(second errs only);
// returns (b - c)/sqrt(b + c), with p_value = 1 - Phi(z).
struct McNemar {
    double z;
    double p_value;
};
McNemar mcnemar_one_sided(std::int64_t first_only, std::int64_t second_only) noexcept;

// Survival function of the chi-squared distribution with df degrees of
// freedom (regularized upper incomplete gamma).
double chi2_sf(double x, int df);

}  // namespace gkp
