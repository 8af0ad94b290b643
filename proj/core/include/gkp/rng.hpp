#pragma once

#include <cmath>
#include <cstdint>

namespace gkp {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256++ stream seeded by hashing (master_seed, cell_id, trial_index).
// One stream per trial makes every trial's randomness independent of
// scheduling, so sweep results are identical for any thread count.
//
// normal() is an explicit Box-Muller transform (two uniforms per call, no
// cached spare) rather than std::normal_distribution, whose output sequence
// is implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& word : state_) word = detail::splitmix64(x);
    }

    static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t cell_id,
                                  std::uint64_t trial_index) noexcept {
        std::uint64_t x = master_seed;
        std::uint64_t a = detail::splitmix64(x);
        x = a ^ (cell_id * 0xda942042e4dd58b5ull);
        std::uint64_t b = detail::splitmix64(x);
        x = b ^ (trial_index * 0x2545f4914f6cdd1dull);
        return RandomStream(detail::splitmix64(x));
    }

    std::uint64_t next_u64() noexcept {
        std::uint64_t* s = state_;
        const std::uint64_t result = detail::rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = detail::rotl(s[3], 45);
        return result;
    }

    // Uniform on (0, 1]: never returns 0, so log(uniform()) is finite.
    double uniform() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    // Standard normal draw; multiply by sigma at the call site.
    double normal() noexcept {
        double r = std::sqrt(-2.0 * std::log(uniform()));
        double t = 6.283185307179586477 * uniform();
        return r * std::cos(t);
    }

private:
    std::uint64_t state_[4];
};

}  // namespace gkp
