#include "gkp/analytics.hpp"

#include <cmath>
#include <string>

#include "gkp/constants.hpp"
#include "gkp/quadrature.hpp"
#include "gkp/stats.hpp"

namespace gkp {

namespace {

inline double gauss(double x, double s) noexcept {
    return std::exp(-x * x / (2.0 * s * s)) / (s * 2.5066282746310005024);
}

inline void require_fundamental(double q, const char* what) {
    if (!(q >= -half_cell()) || !(q < half_cell()))
        throw std::invalid_argument(std::string(what) + ": q_cor outside fundamental domain");
}

// Integral of the k-truncated tooth comb over the fundamental domain; the
// per-tooth pieces telescope.
inline double comb_norm(double sigma, int k) noexcept {
    double a = (static_cast<double>(k) + 0.5) * sqrt_pi() / sigma;
    return normal_cdf(a) - normal_cdf(-a);
}

double conditional_success_unchecked(double q, double sigma, int k) noexcept {
    double num = 0.0;
    double den = 0.0;
    for (int n = -k; n <= k; ++n) {
        double t = gauss(q - n * sqrt_pi(), sigma);
        den += t;
        if ((n & 1) == 0) num += t;
    }
    return num / den;
}

}  // namespace

double RatePair::sigma() const noexcept {
    return std::hypot(sigma1, sigma2);
}

double conditional_success(double q_cor, const RatePair& rp) {
    require_fundamental(q_cor, "conditional_success");
    return conditional_success_unchecked(q_cor, rp.sigma(), rp.k);
}

double conditional_error(double q_cor, const RatePair& rp) {
    require_fundamental(q_cor, "conditional_error");
    double num = 0.0;
    double den = 0.0;
    for (int n = -rp.k; n <= rp.k; ++n) {
        double t = gauss(q_cor - n * sqrt_pi(), rp.sigma());
        den += t;
        if ((n & 1) != 0) num += t;
    }
    return num / den;
}

SteaneOutcome with_error_rate(const SteaneObservable& obs, const RatePair& rp) {
    return {obs.q_cor, conditional_error(obs.q_cor, rp)};
}

double average_success(const RatePair& rp) {
    const double s = rp.sigma();
    double num = 0.0;
    for (int n = -rp.k; n <= rp.k; ++n) {
        if ((n & 1) != 0) continue;
        num += normal_cdf((n + 0.5) * sqrt_pi() / s) - normal_cdf((n - 0.5) * sqrt_pi() / s);
    }
    return num / comb_norm(s, rp.k);
}

double outcome_density(double q_cor, const RatePair& rp) {
    require_fundamental(q_cor, "outcome_density");
    const double s = rp.sigma();
    double sum = 0.0;
    for (int n = -rp.k; n <= rp.k; ++n) sum += gauss(q_cor - n * sqrt_pi(), s);
    return sum / comb_norm(s, rp.k);
}

PosteriorParams posterior_params(double q_cor, long n, const RatePair& rp) {
    require_fundamental(q_cor, "posterior_params");
    if (!(rp.sigma2 > 0.0))
        throw std::invalid_argument("posterior_params: needs sigma2 > 0");
    const double v1 = rp.sigma1 * rp.sigma1;
    const double v2 = rp.sigma2 * rp.sigma2;
    const double w = q_cor + static_cast<double>(n) * sqrt_pi();
    return {v1 / (v1 + v2) * w, v2 / (v1 + v2) * w, v1 * v2 / (v1 + v2)};
}

double rate_variance(const RatePair& rp) {
    const double mean = average_success(rp);
    const double s = rp.sigma();
    const int k = rp.k;
    const double nk = comb_norm(s, k);
    double var = integrate(
        [&](double q) {
            double comb = 0.0;
            for (int n = -k; n <= k; ++n) comb += gauss(q - n * sqrt_pi(), s);
            double c = conditional_success_unchecked(q, s, k);
            double d = c - mean;
            return d * d * comb / nk;
        },
        -half_cell(), half_cell());
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

PostselectResult postselect_rate(const RatePair& rp, double q_sel) {
    if (!(q_sel > 0.0) || q_sel > half_cell())
        throw std::invalid_argument("postselect_rate: q_sel must be in (0, sqrt(pi)/2]");
    const double s = rp.sigma();
    double keep = 0.0;
    for (int n = -rp.k; n <= rp.k; ++n) {
        double c = n * sqrt_pi();
        keep += normal_cdf((q_sel - c) / s) - normal_cdf((-q_sel - c) / s);
    }
    return {keep / comb_norm(s, rp.k), conditional_success_unchecked(q_sel, s, rp.k)};
}

ParityDecision double_measurement_decision(double q1, double q2, const RatePair& rp) {
    require_fundamental(q1, "double_measurement_decision");
    require_fundamental(q2, "double_measurement_decision");
    if (!(rp.sigma2 > 0.0))
        throw std::invalid_argument("double_measurement_decision: needs sigma2 > 0");
    const double v1 = rp.sigma1 * rp.sigma1;
    const double v2 = rp.sigma2 * rp.sigma2;
    const double denom = 4.0 * v2 * (2.0 * v2 + 3.0 * v1);
    const int k = rp.k;

    // Collect exponents first and subtract the minimum before
    // exponentiating; class weights can otherwise underflow together.
    double min_e = 1e300;
    double expo[17][17];
    for (int n1 = -k; n1 <= k; ++n1) {
        for (int n2 = -k; n2 <= k; ++n2) {
            double w1 = q1 - n1 * sqrt_pi();
            double w2 = q2 - n2 * sqrt_pi();
            double d = w1 - w2;
            double e = (2.0 * v1 * d * d + 4.0 * v2 * w1 * w1 + 2.0 * v2 * w2 * w2) / denom;
            expo[n1 + k][n2 + k] = e;
            if (e < min_e) min_e = e;
        }
    }
    double p_even = 0.0, p_odd = 0.0;
    for (int n1 = -k; n1 <= k; ++n1) {
        for (int n2 = -k; n2 <= k; ++n2) {
            double w = std::exp(-(expo[n1 + k][n2 + k] - min_e));
            if ((n2 & 1) == 0)
                p_even += w;
            else
                p_odd += w;
        }
    }
    double z = p_even + p_odd;
    return {p_even >= p_odd, p_even / z, p_odd / z};
}

SqueezedMarginal::SqueezedMarginal(SqueezeParams sp) : delta_(sp.delta), norm_(1.0) {
    norm_ = integrate([this](double u) { return unnormalized(u); }, -sqrt_pi(), sqrt_pi());
}

double SqueezedMarginal::unnormalized(double u) const {
    // Joint density of (u, v) is a double sum over tooth indices of the two
    // wavefunction factors and envelope indices; integrating v over one cell
    // kills the off-diagonal tooth terms, leaving a triple sum. s, s' index
    // the envelope, t the surviving tooth offset.
    const double d2 = delta_ * delta_;
    const int env_max = static_cast<int>(std::ceil(std::sqrt(50.0 / (2.0 * 3.14159265358979323846)) / delta_)) + 1;
    double tot = 0.0;
    for (int sa = -env_max; sa <= env_max; ++sa) {
        for (int sb = -env_max; sb <= env_max; ++sb) {
            double env = 2.0 * 3.14159265358979323846 * d2 *
                         (static_cast<double>(sa) * sa + static_cast<double>(sb) * sb);
            if (env > 50.0) continue;
            for (int t = -env_max - 2; t <= env_max + 2; ++t) {
                double a = u + 2.0 * (t - sb) * sqrt_pi();
                double b = u + 2.0 * (t - sa) * sqrt_pi();
                double e = env + (a * a + b * b) / (2.0 * d2);
                if (e > 50.0) continue;
                tot += std::exp(-e);
            }
        }
    }
    return tot;
}

double SqueezedMarginal::density(double u) const {
    return unnormalized(u) / norm_;
}

double squeezed_marginal_density(const SqueezeParams& sp, double u) {
    return SqueezedMarginal(sp).density(u);
}

}  // namespace gkp
