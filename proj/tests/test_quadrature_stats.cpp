#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gkp/quadrature.hpp"
#include "gkp/rng.hpp"
#include "gkp/stats.hpp"

using namespace gkp;

TEST_CASE("integrate: polynomials exactly, gaussian to tolerance") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::pow(x, 7) - x; }, -2.0, 2.0) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    double g = integrate([](double x) { return std::exp(-x * x / 2.0); }, -10.0, 10.0, 1e-12);
    CHECK(g == doctest::Approx(std::sqrt(2.0 * 3.14159265358979324)).epsilon(1e-12));
}

TEST_CASE("integrate: narrow spike needs the adaptive splits") {
    // Width-1e-3 gaussian inside a unit interval; a fixed panel would miss it.
    double s = 1e-3;
    double v = integrate([s](double x) { return std::exp(-x * x / (2 * s * s)); }, -0.5, 0.5, 1e-12);
    CHECK(v == doctest::Approx(s * std::sqrt(2.0 * 3.14159265358979324)).epsilon(1e-9));
}

TEST_CASE("normal cdf and pdf") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(normal_cdf(1.477) == doctest::Approx(0.930162181361446).epsilon(1e-12));
    CHECK(normal_cdf(-4.43113462726379) == doctest::Approx(4.68692696446312e-06).epsilon(1e-9));
    CHECK(normal_cdf(8.0) + normal_cdf(-8.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_pdf(0.0) == doctest::Approx(0.398942280401433).epsilon(1e-12));
    // pdf is the derivative of cdf.
    double h = 1e-6;
    CHECK((normal_cdf(0.7 + h) - normal_cdf(0.7 - h)) / (2 * h) ==
          doctest::Approx(normal_pdf(0.7)).epsilon(1e-8));
}

TEST_CASE("wilson interval frozen anchor") {
    Interval iv = wilson_interval(300, 1000);
    CHECK(iv.lo == doctest::Approx(0.272406842477005).epsilon(1e-12));
    CHECK(iv.hi == doctest::Approx(0.329123860917217).epsilon(1e-12));
}

TEST_CASE("wilson interval edge cases") {
    Interval zero = wilson_interval(0, 50);
    CHECK(zero.lo >= 0.0);
    CHECK(zero.lo < 1e-12);
    CHECK(zero.hi > 0.0);
    CHECK(zero.hi < 0.2);
    Interval all = wilson_interval(50, 50);
    CHECK(all.hi == 1.0);
    CHECK(all.lo < 1.0);
    CHECK(all.lo > 0.8);
    Interval none = wilson_interval(0, 0);
    CHECK(none.lo == 0.0);
    CHECK(none.hi == 1.0);
}

TEST_CASE("wilson interval calibration") {
    // 1000 experiments at p = 0.3, n = 500: the 95% interval should cover
    // the truth about 950 times. Binomial(1000, .95) is within [930, 970]
    // except with probability ~2e-3; the seed is pinned.
    RandomStream rng(314);
    int covered = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        int k = 0;
        for (int i = 0; i < 500; ++i) k += rng.uniform() < 0.3;
        Interval iv = wilson_interval(k, 500);
        covered += iv.lo <= 0.3 && 0.3 <= iv.hi;
    }
    CHECK(covered >= 930);
    CHECK(covered <= 970);
}

TEST_CASE("chi-squared survival anchors") {
    CHECK(chi2_sf(55.0, 49) == doctest::Approx(0.257932889496041).epsilon(1e-10));
    CHECK(chi2_sf(30.1, 49) == doctest::Approx(0.984657989170029).epsilon(1e-10));
    CHECK(chi2_sf(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("ks statistic on identical and disjoint samples") {
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    CHECK(ks_two_sample(a, a) == doctest::Approx(0.0));
    std::vector<double> b{10.0, 11.0, 12.0, 13.0};
    CHECK(ks_two_sample(a, b) == doctest::Approx(1.0));
}

TEST_CASE("ks test calibration: same law rarely rejected, shifted law always") {
    RandomStream rng(2718);
    int false_alarms = 0;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> a(2000), b(2000);
        for (auto& x : a) x = rng.normal();
        for (auto& x : b) x = rng.normal();
        double d = ks_two_sample(a, b);
        false_alarms += d > ks_two_sample_threshold(a.size(), b.size(), 0.01);
    }
    CHECK(false_alarms <= 3);   // expect 0.5

    std::vector<double> a(2000), b(2000);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal() + 0.3;
    CHECK(ks_two_sample(a, b) > ks_two_sample_threshold(a.size(), b.size(), 0.01));
}

TEST_CASE("mcnemar one-sided") {
    McNemar m = mcnemar_one_sided(200, 100);
    CHECK(m.z == doctest::Approx((200.0 - 100.0) / std::sqrt(300.0)).epsilon(1e-12));
    CHECK(m.p_value == doctest::Approx(1.0 - normal_cdf(m.z)).epsilon(1e-12));
    // Balanced discordance: no evidence.
    McNemar even = mcnemar_one_sided(50, 50);
    CHECK(even.z == doctest::Approx(0.0));
    CHECK(even.p_value == doctest::Approx(0.5));
    // No discordant pairs at all: no evidence either.
    McNemar none = mcnemar_one_sided(0, 0);
    CHECK(none.p_value >= 0.5);
}
