#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gkp/matching.hpp"
#include "gkp/oracles.hpp"
#include "gkp/rng.hpp"

using namespace gkp;

namespace {

// Frozen instances; optima verified by exhaustive recursion when frozen.
const std::vector<double> kW6{
    0, 4.6295821118198663, 7.3497844066438773, 7.0804050287011524, 3.3547763655187661, 5.9784013695899105,
    4.6295821118198663, 0, 3.9048371990632305, 5.851592213036346, 5.3669094843691711, 7.7749868479588047,
    7.3497844066438773, 3.9048371990632305, 0, 4.8919687199051429, 4.509202051399007, 6.3293830647701732,
    7.0804050287011524, 5.851592213036346, 4.8919687199051429, 0, 2.4243678426029325, 5.9903738482306519,
    3.3547763655187661, 5.3669094843691711, 4.509202051399007, 2.4243678426029325, 0, 7.322640688738117,
    5.9784013695899105, 7.7749868479588047, 6.3293830647701732, 5.9903738482306519, 7.322640688738117, 0,
};

const std::vector<double> kW8{
    0, 6.0139983135192416, 5.6034937408092631, 2.7185774047319646, 6.4867937317114421, 4.6257824900254922, 2.1382247547539128, 8.8786006936204611,
    6.0139983135192416, 0, 2.2541396086744476, 3.3324081530570542, 1.0165069728702261, 3.6351725666268715, 5.82940872549716, 5.2525415848332466,
    5.6034937408092631, 2.2541396086744476, 0, 3.6637719569149292, 5.1111752312310896, 4.2381286477474536, 4.5699861095240042, 4.644897931447856,
    2.7185774047319646, 3.3324081530570542, 3.6637719569149292, 0, 3.3722521363402906, 3.8072894685500382, 5.6144227207485713, 3.1938035621679548,
    6.4867937317114421, 1.0165069728702261, 5.1111752312310896, 3.3722521363402906, 0, 6.2659532194769127, 2.6851896686129493, 5.2273065368411196,
    4.6257824900254922, 3.6351725666268715, 4.2381286477474536, 3.8072894685500382, 6.2659532194769127, 0, 2.2142803584891344, 8.2720891146755129,
    2.1382247547539128, 5.82940872549716, 4.5699861095240042, 5.6144227207485713, 2.6851896686129493, 2.2142803584891344, 0, 1.4278155403857702,
    8.8786006936204611, 5.2525415848332466, 4.644897931447856, 3.1938035621679548, 5.2273065368411196, 8.2720891146755129, 1.4278155403857702, 0,
};

const std::vector<double> kWInt{
    0, 4, 2, 7, 6, 9,
    4, 0, 3, 8, 5, 7,
    2, 3, 0, 6, 9, 4,
    7, 8, 6, 0, 2, 5,
    6, 5, 9, 2, 0, 8,
    9, 7, 4, 5, 8, 0,
};

bool is_perfect(const Matching& m, int n) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (auto [i, j] : m.pairs) {
        if (i >= j || i < 0 || j >= n) return false;
        ++seen[static_cast<std::size_t>(i)];
        ++seen[static_cast<std::size_t>(j)];
    }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

std::vector<std::pair<int, int>> sorted_pairs(const Matching& m) {
    auto pairs = m.pairs;
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<double> random_instance(int n, RandomStream& rng, double lo, double hi) {
    std::vector<double> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = rng.uniform(lo, hi);
            w[static_cast<std::size_t>(i * n + j)] = v;
            w[static_cast<std::size_t>(j * n + i)] = v;
        }
    }
    return w;
}

}  // namespace

TEST_CASE("frozen six-node instance") {
    Matching m = min_weight_perfect_matching(6, kW6);
    CHECK(m.total_weight == doctest::Approx(12.3076064113).epsilon(1e-9));
    CHECK(sorted_pairs(m) == std::vector<std::pair<int, int>>{{0, 5}, {1, 2}, {3, 4}});
}

TEST_CASE("frozen eight-node instance") {
    Matching m = min_weight_perfect_matching(8, kW8);
    CHECK(m.total_weight == doctest::Approx(9.40102856574).epsilon(1e-9));
    CHECK(sorted_pairs(m) == std::vector<std::pair<int, int>>{{0, 3}, {1, 4}, {2, 5}, {6, 7}});
}

TEST_CASE("frozen integer instance") {
    Matching m = min_weight_perfect_matching(6, kWInt);
    CHECK(m.total_weight == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(sorted_pairs(m) == std::vector<std::pair<int, int>>{{0, 1}, {2, 5}, {3, 4}});
}

TEST_CASE("empty input") {
    Matching m = min_weight_perfect_matching(0, {});
    CHECK(m.pairs.empty());
    CHECK(m.total_weight == 0.0);
}

TEST_CASE("two nodes") {
    std::vector<double> w{0, 3.5, 3.5, 0};
    Matching m = min_weight_perfect_matching(2, w);
    CHECK(m.total_weight == doctest::Approx(3.5));
    CHECK(sorted_pairs(m) == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("matches the exhaustive optimum on random instances") {
    RandomStream rng(4242);
    MinWeightMatcher matcher;
    for (int rep = 0; rep < 400; ++rep) {
        int n = 2 * (1 + static_cast<int>(rng.uniform(0.0, 5.0)));   // 2..10
        auto w = random_instance(n, rng, 0.05, 12.0);
        Matching fast = matcher.solve(n, w);
        Matching slow = validation::brute_force_matching(n, w);
        REQUIRE(is_perfect(fast, n));
        CHECK(fast.total_weight == doctest::Approx(slow.total_weight).epsilon(1e-9));
    }
}

TEST_CASE("matches the subset DP on larger instances") {
    RandomStream rng(777);
    MinWeightMatcher matcher;
    for (int n : {12, 14, 16}) {
        auto w = random_instance(n, rng, 0.2, 9.0);
        Matching fast = matcher.solve(n, w);
        REQUIRE(is_perfect(fast, n));
        CHECK(fast.total_weight ==
              doctest::Approx(validation::subset_dp_matching_weight(n, w)).epsilon(1e-9));
    }
}

TEST_CASE("solution is invariant under weight scaling") {
    RandomStream rng(31337);
    MinWeightMatcher matcher;
    auto w = random_instance(10, rng, 0.1, 5.0);
    auto base = sorted_pairs(matcher.solve(10, w));
    for (double scale : {1e-6, 1e-3, 1e3, 1e6}) {
        auto scaled = w;
        for (auto& x : scaled) x *= scale;
        Matching m = matcher.solve(10, scaled);
        CHECK(sorted_pairs(m) == base);
        double expect = 0.0;
        for (auto [i, j] : m.pairs) expect += scaled[static_cast<std::size_t>(i * 10 + j)];
        CHECK(m.total_weight == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("degenerate ties still produce a perfect matching") {
    // All-equal weights: any perfect matching is optimal; the solver must
    // still terminate and return one.
    std::vector<double> w(8 * 8, 1.0);
    for (int i = 0; i < 8; ++i) w[static_cast<std::size_t>(i * 8 + i)] = 0.0;
    Matching m = min_weight_perfect_matching(8, w);
    CHECK(is_perfect(m, 8));
    CHECK(m.total_weight == doctest::Approx(4.0));
}

TEST_CASE("zero weights are handled") {
    std::vector<double> w(6 * 6, 0.0);
    Matching m = min_weight_perfect_matching(6, w);
    CHECK(is_perfect(m, 6));
    CHECK(m.total_weight == doctest::Approx(0.0));
}

TEST_CASE("scratch reuse across many solves is clean") {
    RandomStream rng(606);
    MinWeightMatcher matcher;
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 * (1 + static_cast<int>(rng.uniform(0.0, 4.0)));
        auto w = random_instance(n, rng, 0.5, 2.0);
        Matching m = matcher.solve(n, w);
        REQUIRE(is_perfect(m, n));
        Matching again = matcher.solve(n, w);
        CHECK(sorted_pairs(m) == sorted_pairs(again));
    }
}
