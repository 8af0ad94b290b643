#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gkp/qubit.hpp"
#include "gkp/rng.hpp"
#include "gkp/steane.hpp"

using namespace gkp;

namespace {
const double sp = sqrt_pi();
}

TEST_CASE("q round measures the summed shift and resets the data") {
    GkpQubit data;
    data.shift = {0.21, -0.13};
    ShiftPair anc{0.05, 0.08};
    auto [out, raw] = steane_correct_q(data, anc);

    CHECK(raw.q_cor == doctest::Approx(0.26));
    CHECK(raw.tooth == 0);
    CHECK(raw.success);
    CHECK(out.shift.u == doctest::Approx(-0.05));   // u -> -ancilla.u
    CHECK(out.shift.v == doctest::Approx(-0.21));   // v -> v - ancilla.v
    CHECK_FALSE(out.frame.x);
    CHECK(out.frame.z == data.frame.z);
}

TEST_CASE("q round flips the X frame on an odd tooth") {
    GkpQubit data;
    data.shift = {0.8, 0.0};
    auto [out, raw] = steane_correct_q(data, ShiftPair{0.3, 0.0});
    // 1.1 wraps to 1.1 - sqrt(pi), one tooth.
    CHECK(raw.tooth == 1);
    CHECK_FALSE(raw.success);
    CHECK(raw.q_cor == doctest::Approx(1.1 - sp));
    CHECK(out.frame.x);
}

TEST_CASE("p round measures ancilla minus data and resets v") {
    GkpQubit data;
    data.shift = {0.17, 0.30};
    ShiftPair anc{-0.04, 0.12};
    auto [out, raw] = steane_correct_p(data, anc);

    CHECK(raw.q_cor == doctest::Approx(-0.18));
    CHECK(raw.tooth == 0);
    CHECK(out.shift.u == doctest::Approx(0.13));    // u -> u + ancilla.u
    CHECK(out.shift.v == doctest::Approx(0.12));    // v -> ancilla.v
    CHECK_FALSE(out.frame.z);
}

TEST_CASE("p round flips the Z frame on an odd tooth") {
    GkpQubit data;
    data.shift = {0.0, -0.95};
    auto [out, raw] = steane_correct_p(data, 0.0);
    CHECK(raw.tooth == 1);   // 0.95 wraps down by one tooth
    CHECK(out.frame.z);
    CHECK_FALSE(out.frame.x);
}

TEST_CASE("single-real overloads mean measured-quadrature noise only") {
    GkpQubit data;
    data.shift = {0.2, 0.1};
    auto [q1, r1] = steane_correct_q(data, 0.07);
    auto [q2, r2] = steane_correct_q(data, ShiftPair{0.07, 0.0});
    CHECK(q1.shift.u == q2.shift.u);
    CHECK(q1.shift.v == q2.shift.v);
    CHECK(r1.q_cor == r2.q_cor);

    auto [p1, s1] = steane_correct_p(data, -0.02);
    auto [p2, s2] = steane_correct_p(data, ShiftPair{0.0, -0.02});
    CHECK(p1.shift.u == p2.shift.u);
    CHECK(p1.shift.v == p2.shift.v);
    CHECK(s1.q_cor == s2.q_cor);
}

TEST_CASE("observable exposes the folded value only") {
    SteaneOutcomeRaw raw{0.4, 1, false};
    CHECK(raw.observable().q_cor == 0.4);
}

TEST_CASE("small shifts are corrected exactly, round after round") {
    // Every injected shift below sqrt(pi)/6 keeps residuals below
    // 2 sqrt(pi)/6 and every summed measurement below 3 sqrt(pi)/6, so
    // tooth 0 every round and no frame flips ever. 10k alternating rounds.
    RandomStream rng(17);
    const double lim = sp / 6.0 - 1e-9;
    GkpQubit data;
    data.shift = {rng.uniform(-lim, lim), rng.uniform(-lim, lim)};
    PauliFrame start = data.frame;
    for (int round = 0; round < 10000; ++round) {
        ShiftPair anc{rng.uniform(-lim, lim), rng.uniform(-lim, lim)};
        auto [next, raw] =
            (round % 2 == 0) ? steane_correct_q(data, anc) : steane_correct_p(data, anc);
        REQUIRE(raw.tooth == 0);
        REQUIRE(raw.success);
        data = next;
        REQUIRE(std::abs(data.shift.u) < sp / 3.0);
        REQUIRE(std::abs(data.shift.v) < sp / 3.0);
    }
    CHECK(data.frame == start);
}

TEST_CASE("round composed with cnot keeps frame bookkeeping consistent") {
    // Propagate a logical X through a cnot, then correct; the frame must
    // survive canonicalization untouched when shifts are small.
    GkpQubit control;
    control.frame = {true, false};
    control.shift = {0.05, -0.03};
    GkpQubit target;
    target.shift = {0.02, 0.04};
    auto [c, t] = cnot_propagate(control, target);
    CHECK(t.frame.x);
    auto [tc, raw] = steane_correct_q(t, ShiftPair{0.01, 0.01});
    CHECK(raw.success);
    CHECK(tc.frame.x);   // X frame untouched by a clean q round
    GkpQubit canon = canonicalize(tc);
    CHECK(canon.frame == tc.frame);
}
