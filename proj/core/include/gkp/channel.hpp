#pragma once

#include <stdexcept>

#include "gkp/qubit.hpp"
#include "gkp/rng.hpp"

namespace gkp {

// Gaussian shift channel: independent N(0, sigma^2) displacements added to
// both quadratures. sigma is the standard deviation.
struct ChannelParams {
    double sigma;

    explicit ChannelParams(double sigma_) : sigma(sigma_) {
        if (!(sigma > 0.0))
            throw std::invalid_argument("ChannelParams: sigma must be > 0");
    }
};

// Draw order is fixed (u first, then v) so call sequences are reproducible.
inline GkpQubit apply_gaussian_channel(const GkpQubit& q, const ChannelParams& ch,
                                       RandomStream& rng) noexcept {
    GkpQubit out = q;
    out.shift.u += ch.sigma * rng.normal();
    out.shift.v += ch.sigma * rng.normal();
    return out;
}

}  // namespace gkp
