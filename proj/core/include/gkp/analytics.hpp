#pragma once

#include <stdexcept>

#include "gkp/steane.hpp"

namespace gkp {

// Finite-squeezing width of an approximate code state. Teeth have standard
// deviation delta, the envelope 1/delta.
struct SqueezeParams {
    double delta;

    explicit SqueezeParams(double delta_) : delta(delta_) {
        if (!(delta > 0.0) || delta > 0.5)
            throw std::invalid_argument("SqueezeParams: delta must be in (0, 0.5]");
    }
};

// Noise model for one Steane round: data shift ~ N(0, sigma1^2), ancilla
// shift ~ N(0, sigma2^2). All tooth sums are truncated to |n| <= k; k = 1
// (three teeth) is accurate to ~1e-6 in the rates for sigma <= 0.6.
struct RatePair {
    double sigma1;
    double sigma2;
    int k;

    explicit RatePair(double sigma1_, double sigma2_ = 0.0, int k_ = 1)
        : sigma1(sigma1_), sigma2(sigma2_), k(k_) {
        if (!(sigma1 > 0.0))
            throw std::invalid_argument("RatePair: sigma1 must be > 0");
        if (!(sigma2 >= 0.0))
            throw std::invalid_argument("RatePair: sigma2 must be >= 0");
        if (k < 1 || k > 8)
            throw std::invalid_argument("RatePair: k must be in [1, 8]");
    }

    // Combined width of the measured sum u1 + u2.
    double sigma() const noexcept;
};

// A measurement outcome annotated with its conditional error rate; the
// currency the code-level decoders trade in.
struct SteaneOutcome {
    double q_cor;
    double p_err;
};

// P(no logical error | measured q_cor), Bayes over the tooth comb:
// sum of even-tooth Gaussians over the all-tooth sum, widths rp.sigma().
// Requires q_cor in the fundamental domain. Even in q_cor; monotone
// non-increasing on [0, sqrt(pi)/2) for k = 1; -> 1/2 as sigma -> inf.
double conditional_success(double q_cor, const RatePair& rp);
double conditional_error(double q_cor, const RatePair& rp);

SteaneOutcome with_error_rate(const SteaneObservable& obs, const RatePair& rp);

// Round-averaged success probability: the q_cor-integral of
// conditional_success weighted by outcome_density. Evaluated in closed form
// (the integral telescopes into normal CDFs); consistent with the k-tooth
// truncation of the two integrands, so the quadrature cross-check holds to
// tolerance for every k.
double average_success(const RatePair& rp);

// Density of the measured q_cor over the fundamental domain.
double outcome_density(double q_cor, const RatePair& rp);

// Gaussian posterior of the individual shifts given the measured sum
// w = q_cor + n*sqrt(pi). var is the common posterior variance.
struct PosteriorParams {
    double mean_u1;
    double mean_u2;
    double var;
};
PosteriorParams posterior_params(double q_cor, long n, const RatePair& rp);

// Standard deviation of the conditional success rate under the outcome
// density (the spread that makes passing rates to the next layer worth
// anything). Computed by adaptive quadrature.
double rate_variance(const RatePair& rp);

// Postselection on |q_cor| <= q_sel: fraction of rounds kept and the worst
// conditional success among them. q_sel in (0, sqrt(pi)/2].
struct PostselectResult {
    double keep_fraction;
    double min_success;
};
PostselectResult postselect_rate(const RatePair& rp, double q_sel);

// Decision for the repeated q measurement: given the two folded outcomes,
// decide the tooth parity of the second measured sum by comparing summed
// class weights of (n1, n2) pairs. The joint weight of
// (w1, w2) = (q1 - n1*sqrt(pi), q2 - n2*sqrt(pi)) comes from integrating
// the common data shift out of the three-Gaussian model
// u0 ~ N(0, s1^2), w1 - u0 ~ N(0, s2^2), w2 - u0 ~ N(0, 2 s2^2):
//   -log weight = [2 s1^2 (w1-w2)^2 + 4 s2^2 w1^2 + 2 s2^2 w2^2]
//                 / (4 s2^2 (2 s2^2 + 3 s1^2)).
// Ties resolve to even. Requires sigma2 > 0.
struct ParityDecision {
    bool parity_even;
    double p_even;
    double p_odd;
};
ParityDecision double_measurement_decision(double q1, double q2, const RatePair& rp);

// Exact marginal of the u shift of a finitely squeezed code state, from the
// double tooth/envelope sum with the conjugate quadrature integrated over
// one cell. Normalized over [-sqrt(pi), sqrt(pi)]; terms with total
// exponent > 50 are dropped. Tends to N(0, (delta/sqrt(2))^2) for small
// delta.
class SqueezedMarginal {
public:
    explicit SqueezedMarginal(SqueezeParams sp);
    double density(double u) const;
    double delta() const noexcept { return delta_; }

private:
    double unnormalized(double u) const;
    double delta_;
    double norm_;
};

double squeezed_marginal_density(const SqueezeParams& sp, double u);

}  // namespace gkp
