#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gkp/channel.hpp"
#include "gkp/qubit.hpp"
#include "gkp/rng.hpp"
#include "gkp/stats.hpp"

using namespace gkp;

TEST_CASE("streams with the same seed agree, different seeds do not") {
    RandomStream a(42), b(42), c(43);
    bool all_equal = true, any_equal = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t x = a.next_u64();
        all_equal = all_equal && x == b.next_u64();
        any_equal = any_equal || x == c.next_u64();
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal);
}

TEST_CASE("for_trial keys on every component") {
    auto first = [](RandomStream s) { return s.next_u64(); };
    std::uint64_t base = first(RandomStream::for_trial(1, 2, 3));
    CHECK(base == first(RandomStream::for_trial(1, 2, 3)));
    CHECK(base != first(RandomStream::for_trial(2, 2, 3)));
    CHECK(base != first(RandomStream::for_trial(1, 3, 3)));
    CHECK(base != first(RandomStream::for_trial(1, 2, 4)));
}

TEST_CASE("uniform ranges") {
    RandomStream rng(7);
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        double v = rng.uniform(-2.0, 3.0);
        CHECK(v >= -2.0);
        CHECK(v < 3.0);
    }
}

TEST_CASE("normal moments at one million draws") {
    RandomStream rng(2026);
    const int n = 1000000;
    double sum = 0.0, sumsq = 0.0, sumcube = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        sum += x;
        sumsq += x * x;
        sumcube += x * x * x;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    // SE(mean) = 1e-3, SE(var) ~ sqrt(2)e-3, SE(skew proxy) ~ sqrt(15)e-3.
    CHECK(std::abs(mean) < 4e-3);
    CHECK(std::abs(var - 1.0) < 6e-3);
    CHECK(std::abs(sumcube / n) < 1.6e-2);
}

TEST_CASE("normal tail probabilities match the CDF") {
    RandomStream rng(99);
    const int n = 1000000;
    int above1 = 0, above2 = 0, above3 = 0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        above1 += x > 1.0;
        above2 += x > 2.0;
        above3 += x > 3.0;
    }
    auto expect = [&](int count, double z) {
        double p = 1.0 - normal_cdf(z);
        double se = std::sqrt(p * (1.0 - p) * n);
        CHECK(std::abs(count - p * n) < 4.5 * se);
    };
    expect(above1, 1.0);
    expect(above2, 2.0);
    expect(above3, 3.0);
}

TEST_CASE("channel shifts both quadratures independently") {
    RandomStream rng(5);
    ChannelParams ch(0.8);
    const int n = 200000;
    double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
    for (int i = 0; i < n; ++i) {
        GkpQubit q;
        GkpQubit out = apply_gaussian_channel(q, ch, rng);
        su += out.shift.u;
        sv += out.shift.v;
        suu += out.shift.u * out.shift.u;
        svv += out.shift.v * out.shift.v;
        suv += out.shift.u * out.shift.v;
    }
    CHECK(std::abs(su / n) < 4.5 * 0.8 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sv / n) < 4.5 * 0.8 / std::sqrt(static_cast<double>(n)));
    CHECK(suu / n == doctest::Approx(0.64).epsilon(0.02));
    CHECK(svv / n == doctest::Approx(0.64).epsilon(0.02));
    CHECK(std::abs(suv / n) < 4.5 * 0.64 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("channel composition equals a single wider channel") {
    // Two passes at (0.3, 0.4) against one pass at 0.5: same law. Checked
    // with a two-sample KS test at the 1% level.
    RandomStream rng(31);
    const int n = 100000;
    std::vector<double> two, one;
    two.reserve(n);
    one.reserve(n);
    ChannelParams a(0.3), b(0.4), c(0.5);
    for (int i = 0; i < n; ++i) {
        GkpQubit q;
        q = apply_gaussian_channel(q, a, rng);
        q = apply_gaussian_channel(q, b, rng);
        two.push_back(q.shift.u);
        GkpQubit r;
        r = apply_gaussian_channel(r, c, rng);
        one.push_back(r.shift.u);
    }
    double d = ks_two_sample(two, one);
    CHECK(d < ks_two_sample_threshold(two.size(), one.size(), 0.01));
}

TEST_CASE("channel rejects non-positive widths") {
    CHECK_THROWS_AS(ChannelParams(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(-1.0), std::invalid_argument);
}
