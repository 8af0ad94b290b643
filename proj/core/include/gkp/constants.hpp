#pragma once

namespace gkp {

// Lattice spacing of the code: logical shifts are sqrt(pi), stabilizer
// shifts are 2*sqrt(pi). Every module takes the constant from here so the
// fundamental-domain conventions stay consistent.
inline constexpr double sqrt_pi() noexcept {
    return 1.7724538509055160273;
}

// Fundamental domain is the half-open interval [-sqrt(pi)/2, sqrt(pi)/2).
inline constexpr double half_cell() noexcept {
    return sqrt_pi() / 2.0;
}

}  // namespace gkp
