#include "gkp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gkp {

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double normal_pdf(double x) noexcept {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials) noexcept {
    if (trials <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // Phi^-1(0.975)
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> xs(a.begin(), a.end());
    std::vector<double> ys(b.begin(), b.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double na = static_cast<double>(xs.size());
    const double nb = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        double x = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] <= x) ++i;
        while (j < ys.size() && ys[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha) noexcept {
    double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    double nn = static_cast<double>(n);
    double mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

McNemar mcnemar_one_sided(std::int64_t first_only, std::int64_t second_only) noexcept {
    double b = static_cast<double>(first_only);
    double c = static_cast<double>(second_only);
    if (b + c <= 0.0) return {0.0, 0.5};
    double z = (b - c) / std::sqrt(b + c);
    return {z, 1.0 - normal_cdf(z)};
}

namespace {

// Regularized incomplete gamma, lower (series) and upper (continued
// fraction) branches; standard Lentz / series forms.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_cfrac(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 500; ++k) {
        double an = -static_cast<double>(k) * (static_cast<double>(k) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double chi2_sf(double x, int df) {
    if (df <= 0) throw std::invalid_argument("chi2_sf: df must be > 0");
    if (!(x > 0.0)) return 1.0;
    double s = 0.5 * df;
    double xx = 0.5 * x;
    if (xx < s + 1.0) return 1.0 - gamma_p_series(s, xx);
    return gamma_q_cfrac(s, xx);
}

}  // namespace gkp
